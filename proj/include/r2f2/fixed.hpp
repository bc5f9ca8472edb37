#pragma once

#include <string>

#include "r2f2/format.hpp"

namespace r2f2 {

// Fixed ExMy baseline format (E5M10 = standard half layout). Shares the
// flexible-format conventions: all-ones exponent reserved, flush-to-zero
// instead of subnormals. That divergence from strict IEEE only affects
// results below min_normal and keeps R2F2-vs-fixed comparisons attributable
// to the format itself.
struct FixedFormat {
    int e = 0;
    int m = 0;

    FormatDescriptor as_descriptor() const { return FormatDescriptor{e, m, 0, 0}; }

    friend bool operator==(const FixedFormat&, const FixedFormat&) = default;
};

// e in [2, 11]; m in [1, 25] so the exact product of two quantized values
// stays representable in binary64.
FixedFormat make_fixed_format(int e, int m);

std::string to_string(const FixedFormat& f);     // "E5M10"
FixedFormat parse_fixed_format(const std::string& text);

// RNE quantization to f; overflow -> +/-inf with flag, underflow -> 0.
struct QuantResult {
    double value = 0.0;
    EncodeFlags flags;
};
QuantResult quantize(double x, const FixedFormat& f);

// Correctly rounded product of two values already representable in f.
QuantResult multiply_fixed(double a, double b, const FixedFormat& f);

}  // namespace r2f2
