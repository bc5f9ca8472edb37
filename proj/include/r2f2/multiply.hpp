#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "r2f2/format.hpp"

namespace r2f2 {

enum class MulMode { Approx, Exact };

struct MulResult {
    FlexValue value;
    bool overflow = false;
    bool underflow = false;
    bool mantissa_carry = false;   // product in [2,4), bit added into the exponent sum
    bool approx_affected = false;  // approx mode only: truncation changed the result bits
};

// One accumulation into res' during the bit-serial schedule.
struct TraceEntry {
    int cycle = 0;
    uint64_t term = 0;
    int term_bits = 0;
    int shift = 0;
};

struct CycleTrace {
    std::vector<TraceEntry> entries;
    // "cycle j: + (term) << s", term in binary MSB first
    std::string to_string() const;
};

// Truncated bit-serial mantissa multiplication. Significands carry the
// implicit one (sig_bits = |m|+1 wide, top bit set); F = fx - k flexible
// mantissa bits. Splitting sig = A*2^F + P (A = implicit one plus fixed
// mantissa bits, P = the F flexible bits), the returned raw product is
//
//   res = (A*B) << F + sum_{j=1..F} (q_j*A + p_j*B) << (F-j)
//                    + (p_1 & q_1) << (F-2)            [the last term only for F >= 2]
//
// i.e. every P*Q cross term except p1*q1 is dropped; that truncation is the
// approximation. Width 2*(mb+1)+F bits; always <= the full product >> F.
uint64_t mantissa_mul_approx(uint64_t sig_a, uint64_t sig_b, int sig_bits, int flex_bits,
                             CycleTrace* trace = nullptr);

struct NormRound {
    uint64_t mfield = 0;
    bool carry = false;     // top raw bit set: product in [2,4)
    bool round_up = false;  // rounding carry propagated out of the mantissa
};

// Normalize a raw significand product of `raw_width` bits (the value's units
// place sits at bit raw_width-2) and round to m_out fraction bits, RNE.
NormRound normalize_round(uint64_t raw, int raw_width, int m_out);

struct ExpSum {
    int e_res = 0;
    bool overflow = false;
    bool underflow = false;
};

// e_res = e1 + e2 + carry - 2^(|e|-1) + 1, written as the hardware path does
// it: the bias subtraction is a single borrow of the leading one of 2^(|e|-1)
// at a fixed position, followed by +1. Overflow when e_res lands on or above
// the sentinel code, underflow when e_res <= 0.
ExpSum exponent_add(uint32_t e1, uint32_t e2, const FormatDescriptor& d, int carry);

// Full multiplication: sign XOR, mantissa path, exponent path, flags.
// Operands must share one descriptor. Zero operands short-circuit to zero;
// a sentinel operand propagates to a sentinel result with the overflow flag
// (the adaptive retry loop relies on this).
MulResult multiply(const FlexValue& a, const FlexValue& b, MulMode mode = MulMode::Approx,
                   CycleTrace* trace = nullptr);

}  // namespace r2f2
