#include "r2f2/adjust.hpp"

namespace r2f2 {

const char* to_string(AdjustKind k) {
    switch (k) {
        case AdjustKind::OverflowWiden: return "overflow-widen";
        case AdjustKind::UnderflowWiden: return "underflow-widen";
        case AdjustKind::RedundancyNarrow: return "redundancy-narrow";
    }
    return "?";
}

bool detect_redundancy(const FlexValue& v) {
    const int ebits = v.desc.exp_bits();
    if (ebits < 3 || !v.is_normal()) return false;
    const uint32_t msb = (v.efield >> (ebits - 1)) & 1;
    const uint32_t b1 = (v.efield >> (ebits - 2)) & 1;
    const uint32_t b2 = (v.efield >> (ebits - 3)) & 1;
    return b1 == (msb ^ 1u) && b2 == (msb ^ 1u);
}

namespace {

void log_event(AdjustState& s, AdjustKind kind, int old_k, int new_k) {
    s.events.push_back({kind, s.current_step, old_k, new_k});
    switch (kind) {
        case AdjustKind::OverflowWiden: ++s.overflow_events; break;
        case AdjustKind::UnderflowWiden: ++s.underflow_events; break;
        case AdjustKind::RedundancyNarrow: ++s.redundancy_events; break;
    }
}

}  // namespace

AdjustDecision adjust_after_multiply(const FlexValue& a, const FlexValue& b, const MulResult& r,
                                     AdjustState& s) {
    if (r.overflow || r.underflow) {
        if (s.desc.k >= s.desc.fx) {
            ++s.saturation_count;  // no flexible bit left; result stays sentinel/zero
            return AdjustDecision::Keep;
        }
        const int old_k = s.desc.k;
        s.desc = widen_exponent(s.desc);
        log_event(s, r.overflow ? AdjustKind::OverflowWiden : AdjustKind::UnderflowWiden, old_k,
                  s.desc.k);
        return AdjustDecision::RetryWider;
    }
    if (s.desc.k > 0 && detect_redundancy(a) && detect_redundancy(b) &&
        detect_redundancy(r.value)) {
        const int old_k = s.desc.k;
        s.desc = narrow_exponent(s.desc);
        log_event(s, AdjustKind::RedundancyNarrow, old_k, s.desc.k);
        return AdjustDecision::Narrow;  // applies to subsequent operations, no retry
    }
    return AdjustDecision::Keep;
}

AdaptiveMulResult multiply_adaptive(double x, double y, AdjustState& s) {
    ++s.mult_count;
    bool first = true;
    for (;;) {
        if (!first) ++s.retry_count;
        first = false;

        const EncodeResult ea = encode(x, s.desc);
        const EncodeResult eb = encode(y, s.desc);
        MulResult r = multiply(ea.value, eb.value, MulMode::Approx);
        // conversion flags fold into the detection signals; an operand that
        // flushed to zero would otherwise hide its underflow behind the
        // zero short-circuit
        r.overflow |= ea.flags.overflowed || eb.flags.overflowed;
        r.underflow |= ea.flags.underflowed || eb.flags.underflowed;

        const AdjustDecision d = adjust_after_multiply(ea.value, eb.value, r, s);
        if (d == AdjustDecision::RetryWider) continue;

        AdaptiveMulResult out;
        out.value = decode(r.value);
        out.saturated_overflow = r.overflow;
        out.saturated_underflow = r.underflow && !r.overflow;
        return out;
    }
}

std::string events_to_csv(const std::vector<AdjustmentEvent>& events) {
    std::string out = "step_index,kind,old_k,new_k\n";
    for (const AdjustmentEvent& e : events) {
        out += std::to_string(e.step_index);
        out += ',';
        out += to_string(e.kind);
        out += ',';
        out += std::to_string(e.old_k);
        out += ',';
        out += std::to_string(e.new_k);
        out += '\n';
    }
    return out;
}

}  // namespace r2f2
