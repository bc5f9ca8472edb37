#include "r2f2/multiply.hpp"

#include <stdexcept>

namespace r2f2 {

std::string CycleTrace::to_string() const {
    std::string out;
    for (const TraceEntry& e : entries) {
        out += "cycle " + std::to_string(e.cycle) + ": + (";
        for (int i = e.term_bits - 1; i >= 0; --i) out += char('0' + ((e.term >> i) & 1));
        out += ") << " + std::to_string(e.shift) + "\n";
    }
    return out;
}

uint64_t mantissa_mul_approx(uint64_t sig_a, uint64_t sig_b, int sig_bits, int flex_bits,
                             CycleTrace* trace) {
    const int F = flex_bits;
    const uint64_t A = sig_a >> F;
    const uint64_t B = sig_b >> F;
    const uint64_t P = sig_a & ((1ull << F) - 1);
    const uint64_t Q = sig_b & ((1ull << F) - 1);
    const int fixed_bits = sig_bits - F;  // mb + 1

    uint64_t res = (A * B) << F;
    for (int j = 1; j <= F; ++j) {
        const uint64_t pj = (P >> (F - j)) & 1;
        const uint64_t qj = (Q >> (F - j)) & 1;
        const uint64_t term = (qj ? A : 0) + (pj ? B : 0);
        res += term << (F - j);
        if (trace) trace->entries.push_back({j, term, fixed_bits + 1, F - j});
        if (j == 1 && F >= 2) {
            // the single retained P*Q cross term; for F == 1 it would sit at a
            // fractional position and is dropped with the rest
            const uint64_t pq = pj & qj;
            res += pq << (F - 2);
            if (trace) trace->entries.push_back({1, pq, 1, F - 2});
        }
    }
    return res;
}

NormRound normalize_round(uint64_t raw, int raw_width, int m_out) {
    NormRound out;
    out.carry = (raw >> (raw_width - 1)) & 1;
    const int drop = (out.carry ? raw_width - 1 : raw_width - 2) - m_out;
    uint64_t kept = raw;
    if (drop > 0) {
        const uint64_t tail = raw & ((1ull << drop) - 1);
        const uint64_t half = 1ull << (drop - 1);
        kept = raw >> drop;
        if (tail > half || (tail == half && (kept & 1))) ++kept;
    } else if (drop < 0) {
        kept = raw << -drop;
    }
    if (kept >> (m_out + 1)) {  // rounding carried out of the mantissa
        kept >>= 1;
        out.round_up = true;
    }
    out.mfield = kept & ((1ull << m_out) - 1);
    return out;
}

ExpSum exponent_add(uint32_t e1, uint32_t e2, const FormatDescriptor& d, int carry) {
    ExpSum out;
    // two-cycle hardware path: sum first, then subtract 2^(|e|-1) (one borrow
    // at the fixed position) and add back 1
    const int sum = int(e1) + int(e2) + carry;
    out.e_res = sum - (1 << (d.exp_bits() - 1)) + 1;
    out.overflow = out.e_res >= int(d.exp_sentinel());
    out.underflow = out.e_res <= 0;
    return out;
}

namespace {

struct PackedMul {
    FlexValue value;
    bool overflow = false;
    bool underflow = false;
    bool mantissa_carry = false;
};

PackedMul multiply_normals(const FlexValue& a, const FlexValue& b, MulMode mode) {
    const FormatDescriptor& d = a.desc;
    const int m = d.man_bits();
    const int F = d.flex_man_bits();
    const bool sign = a.sign ^ b.sign;

    uint64_t raw;
    int raw_width;
    if (mode == MulMode::Approx) {
        raw = mantissa_mul_approx(a.significand(), b.significand(), m + 1, F);
        raw_width = 2 * (d.mb + 1) + F;
    } else {
        raw = a.significand() * b.significand();
        raw_width = 2 * (m + 1);
    }

    const NormRound nr = normalize_round(raw, raw_width, m);
    ExpSum es = exponent_add(a.efield, b.efield, d, nr.carry ? 1 : 0);
    if (nr.round_up) {
        ++es.e_res;
        es.overflow = es.e_res >= int(d.exp_sentinel());
        es.underflow = es.e_res <= 0;
    }

    PackedMul out;
    out.mantissa_carry = nr.carry;
    if (es.overflow) {
        out.value = make_sentinel(sign, d);
        out.overflow = true;
    } else if (es.underflow) {
        out.value = make_zero(sign, d);
        out.underflow = true;
    } else {
        out.value = FlexValue{sign, uint32_t(es.e_res), nr.mfield, d};
    }
    return out;
}

}  // namespace

MulResult multiply(const FlexValue& a, const FlexValue& b, MulMode mode, CycleTrace* trace) {
    if (!(a.desc == b.desc))
        throw std::invalid_argument("multiply: operands use different descriptors");

    const bool sign = a.sign ^ b.sign;
    MulResult out;
    if (a.is_sentinel() || b.is_sentinel()) {
        out.value = make_sentinel(sign, a.desc);
        out.overflow = true;
        return out;
    }
    if (a.is_zero() || b.is_zero()) {
        out.value = make_zero(sign, a.desc);
        return out;
    }

    if (trace)
        mantissa_mul_approx(a.significand(), b.significand(), a.desc.man_bits() + 1,
                            a.desc.flex_man_bits(), trace);

    const PackedMul p = multiply_normals(a, b, mode);
    out.value = p.value;
    out.overflow = p.overflow;
    out.underflow = p.underflow;
    out.mantissa_carry = p.mantissa_carry;
    if (mode == MulMode::Approx) {
        const PackedMul q = multiply_normals(a, b, MulMode::Exact);
        out.approx_affected = !(q.value.efield == p.value.efield &&
                                q.value.mfield == p.value.mfield && q.overflow == p.overflow &&
                                q.underflow == p.underflow);
    }
    return out;
}

}  // namespace r2f2
