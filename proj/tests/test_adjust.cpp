#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "r2f2/adjust.hpp"
#include "support/oracle.hpp"

using namespace r2f2;

TEST_CASE("detect_redundancy two-bit rule") {
    // 8-bit efield 10000111 (2^8 under a 127 bias) is redundant
    const FormatDescriptor wide = make_descriptor(5, 10, 3, 3);
    REQUIRE(wide.exp_bits() == 8);
    const FlexValue v8 = encode(256.0f, wide).value;
    CHECK(v8.efield == 0b10000111);
    CHECK(detect_redundancy(v8));

    // the 5-bit encoding of the same value (10111) is not
    const FormatDescriptor nar = make_descriptor(5, 10, 3, 0);
    const FlexValue v5 = encode(256.0f, nar).value;
    CHECK(v5.efield == 0b10111);
    CHECK(!detect_redundancy(v5));

    // MSB=0 followed by 11
    const FormatDescriptor six = make_descriptor(3, 9, 3, 3);
    REQUIRE(six.exp_bits() == 6);
    const FlexValue v6{false, 0b011110, 0, six};
    CHECK(detect_redundancy(v6));

    CHECK(!detect_redundancy(make_zero(false, six)));
    CHECK(!detect_redundancy(make_sentinel(false, six)));

    // |e| < 3 never reports redundancy
    const FormatDescriptor tiny = make_descriptor(2, 3, 0, 0);
    CHECK(!detect_redundancy(encode(1.0f, tiny).value));
}

TEST_CASE("redundant values re-encode safely one exponent bit lower") {
    const FormatDescriptor d = make_descriptor(3, 9, 3, 2);
    const FormatDescriptor narrower = narrow_exponent(d);
    for (uint32_t e = 1; e < d.exp_sentinel(); ++e) {
        const FlexValue v{false, e, 0x15, d};
        if (!detect_redundancy(v)) continue;
        const EncodeResult r = reencode(v, narrower);
        CHECK(!r.flags.overflowed);
        CHECK(!r.flags.underflowed);
        CHECK(decode(r.value) == decode(v));  // same exponent, same mantissa width or wider
    }
}

TEST_CASE("adjust_after_multiply decisions") {
    const FormatDescriptor d = make_descriptor(3, 9, 3, 0);

    SUBCASE("overflow widens and asks for a retry") {
        AdjustState s(d);
        const FlexValue a = encode(10.0f, d).value;
        const MulResult r = multiply(a, a);  // 100 overflows at k=0
        REQUIRE(r.overflow);
        CHECK(adjust_after_multiply(a, a, r, s) == AdjustDecision::RetryWider);
        CHECK(s.desc.k == 1);
        CHECK(s.overflow_events == 1);
        REQUIRE(s.events.size() == 1);
        CHECK(s.events[0].kind == AdjustKind::OverflowWiden);
        CHECK(s.events[0].old_k == 0);
        CHECK(s.events[0].new_k == 1);
    }

    SUBCASE("saturation at k == fx keeps and counts") {
        AdjustState s(make_descriptor(3, 9, 3, 3));
        const FlexValue a = encode(1.0f, s.desc).value;
        MulResult r = multiply(a, a);
        r.overflow = true;  // forced; range of k=3 is too wide to overflow here
        CHECK(adjust_after_multiply(a, a, r, s) == AdjustDecision::Keep);
        CHECK(s.saturation_count == 1);
        CHECK(s.events.empty());
    }

    SUBCASE("redundancy in all three narrows") {
        const FormatDescriptor dk = make_descriptor(3, 9, 3, 2);
        AdjustState s(dk);
        const FlexValue a = encode(1.0f, dk).value;  // efield 01111: MSB 0, then 1,1
        REQUIRE(detect_redundancy(a));
        const MulResult r = multiply(a, a);
        REQUIRE(detect_redundancy(r.value));
        CHECK(adjust_after_multiply(a, a, r, s) == AdjustDecision::Narrow);
        CHECK(s.desc.k == 1);
        CHECK(s.redundancy_events == 1);
    }

    SUBCASE("operands redundant but result not keeps") {
        const FormatDescriptor dk = make_descriptor(3, 9, 3, 2);
        AdjustState s(dk);
        const FlexValue a = encode(16.0f, dk).value;  // redundant (E=4 under |e|=5)
        REQUIRE(detect_redundancy(a));
        const MulResult r = multiply(a, a);  // 256: E=8, efield 10111, not redundant
        REQUIRE(!detect_redundancy(r.value));
        CHECK(adjust_after_multiply(a, a, r, s) == AdjustDecision::Keep);
        CHECK(s.desc.k == 2);
    }
}

TEST_CASE("multiply_adaptive basics") {
    SUBCASE("1 * 1 produces no events") {
        AdjustState s(make_descriptor(3, 9, 3, 0));
        const AdaptiveMulResult r = multiply_adaptive(1.0, 1.0, s);
        CHECK(r.value == 1.0);
        CHECK(s.events.empty());
        CHECK(s.mult_count == 1);
        CHECK(s.retry_count == 0);
    }

    SUBCASE("300 * 300 widens until 90000 fits") {
        AdjustState s(make_descriptor(3, 9, 3, 0));
        const AdaptiveMulResult r = multiply_adaptive(300.0, 300.0, s);
        // k=0: operand conversion overflows; k=1: still (max ~255.9);
        // k=2: operands fit but 90000 > 65504; k=3: fits
        CHECK(s.desc.k == 3);
        REQUIRE(s.events.size() == 3);
        for (const AdjustmentEvent& e : s.events) CHECK(e.kind == AdjustKind::OverflowWiden);
        CHECK(s.retry_count == 3);
        CHECK(s.mult_count == 1);
        // correct value within the final format's precision (|m| = 9)
        CHECK(std::fabs(r.value - 90000.0) / 90000.0 < std::ldexp(1.0, -9));
        // against the quantization oracle: product of the two re-encoded
        // operands, correctly rounded
        const FormatDescriptor d3 = s.desc;
        const oracle::Value want = oracle::multiply(oracle::quantize_real(300.0, d3),
                                                    oracle::quantize_real(300.0, d3), d3);
        const double want_real =
            std::ldexp(double((uint64_t(1) << d3.man_bits()) | want.mfield),
                       int(want.efield) - int(d3.bias()) - d3.man_bits());
        CHECK(r.value == want_real);
    }

    SUBCASE("a stream of near-1 products after widening narrows back") {
        AdjustState s(make_descriptor(3, 9, 3, 0));
        multiply_adaptive(300.0, 300.0, s);  // force k to 3
        REQUIRE(s.desc.k == 3);
        bool narrowed = false;
        for (int i = 0; i < 50 && !narrowed; ++i) {
            multiply_adaptive(1.0 + 0.001 * i, 1.05, s);
            narrowed = s.redundancy_events > 0;
        }
        CHECK(narrowed);
        CHECK(s.desc.k < 3);
    }

    SUBCASE("tiny operands widen on conversion underflow") {
        AdjustState s(make_descriptor(3, 9, 3, 0));
        // 0.01 is below the k=0 smallest normal (0.25); the stored zero says
        // nothing, the conversion flag must drive the widening
        const AdaptiveMulResult r = multiply_adaptive(0.01, 0.01, s);
        CHECK(s.underflow_events > 0);
        CHECK(r.value == doctest::Approx(1e-4).epsilon(1e-2));
        CHECK(!r.saturated_underflow);
    }

    SUBCASE("exact zero operands stay silent") {
        AdjustState s(make_descriptor(3, 9, 3, 0));
        const AdaptiveMulResult r = multiply_adaptive(0.0, 5.0, s);
        CHECK(r.value == 0.0);
        CHECK(s.events.empty());
    }
}

TEST_CASE("k stays in bounds and every event moves it by one") {
    std::mt19937_64 rng(41);
    AdjustState s(make_descriptor(3, 9, 3, 0));
    for (int i = 0; i < 20000; ++i) {
        const double mag = std::exp2(double(rng() % 360) / 10.0 - 18.0);
        multiply_adaptive(mag, std::exp2(double(rng() % 360) / 10.0 - 18.0), s);
        CHECK(s.desc.k >= 0);
        CHECK(s.desc.k <= s.desc.fx);
    }
    for (const AdjustmentEvent& e : s.events) CHECK(std::abs(e.new_k - e.old_k) == 1);
    CHECK(s.event_count() == s.events.size());
}

TEST_CASE("identical input streams produce identical event logs") {
    auto run = [] {
        std::mt19937_64 rng(43);
        AdjustState s(make_descriptor(3, 9, 3, 0));
        for (int i = 0; i < 5000; ++i) {
            s.current_step = uint64_t(i);
            multiply_adaptive(std::exp2(double(rng() % 300) / 10.0 - 15.0),
                              std::exp2(double(rng() % 300) / 10.0 - 15.0), s);
        }
        return s;
    };
    const AdjustState a = run();
    const AdjustState b = run();
    REQUIRE(a.events.size() == b.events.size());
    for (size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].kind == b.events[i].kind);
        CHECK(a.events[i].step_index == b.events[i].step_index);
        CHECK(a.events[i].old_k == b.events[i].old_k);
        CHECK(a.events[i].new_k == b.events[i].new_k);
    }
    CHECK(a.retry_count == b.retry_count);
}

TEST_CASE("widening strictly increases representable range") {
    FormatDescriptor d = make_descriptor(3, 9, 3, 0);
    while (d.k < d.fx) {
        const FormatDescriptor w = widen_exponent(d);
        CHECK(max_value(w) > max_value(d));
        d = w;
    }
}

TEST_CASE("event CSV export") {
    std::vector<AdjustmentEvent> events = {{AdjustKind::OverflowWiden, 7, 0, 1},
                                           {AdjustKind::RedundancyNarrow, 9, 1, 0}};
    CHECK(events_to_csv(events) ==
          "step_index,kind,old_k,new_k\n7,overflow-widen,0,1\n9,redundancy-narrow,1,0\n");
}
