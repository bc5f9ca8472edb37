#include "r2f2/fixed.hpp"

#include <cstdio>
#include <stdexcept>

namespace r2f2 {

FixedFormat make_fixed_format(int e, int m) {
    if (e < 2 || e > 11) throw std::invalid_argument("fixed format: e out of [2, 11]");
    if (m < 1 || m > 25) throw std::invalid_argument("fixed format: m out of [1, 25]");
    return FixedFormat{e, m};
}

std::string to_string(const FixedFormat& f) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "E%dM%d", f.e, f.m);
    return buf;
}

FixedFormat parse_fixed_format(const std::string& text) {
    int e = 0, m = 0, n = 0;
    if (std::sscanf(text.c_str(), "E%dM%d%n", &e, &m, &n) == 2 && n == int(text.size()))
        return make_fixed_format(e, m);
    throw std::invalid_argument("cannot parse fixed format '" + text + "'");
}

QuantResult quantize(double x, const FixedFormat& f) {
    const EncodeResult r = encode(x, f.as_descriptor());
    return {decode(r.value), r.flags};
}

QuantResult multiply_fixed(double a, double b, const FixedFormat& f) {
    // m <= 25 makes the significand product at most 52 bits, so the binary64
    // product is exact and one quantization yields the correctly rounded result
    return quantize(a * b, f);
}

}  // namespace r2f2
