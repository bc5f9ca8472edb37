#include "r2f2/format.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace r2f2 {

FormatDescriptor make_descriptor(int eb, int mb, int fx, int k) {
    if (eb < 2) throw std::invalid_argument("descriptor: eb must be >= 2");
    if (mb < 1) throw std::invalid_argument("descriptor: mb must be >= 1");
    if (fx < 0) throw std::invalid_argument("descriptor: fx must be >= 0");
    if (k < 0 || k > fx) throw std::invalid_argument("descriptor: k out of [0, fx]");
    if (eb + fx > 11) throw std::invalid_argument("descriptor: exponent field wider than 11 bits");
    if (mb + fx > 30) throw std::invalid_argument("descriptor: mantissa field wider than 30 bits");
    return FormatDescriptor{eb, mb, fx, k};
}

FormatDescriptor widen_exponent(const FormatDescriptor& d) {
    if (d.k >= d.fx) throw std::out_of_range("widen_exponent: no flexible bit left (k == fx)");
    return FormatDescriptor{d.eb, d.mb, d.fx, d.k + 1};
}

FormatDescriptor narrow_exponent(const FormatDescriptor& d) {
    if (d.k <= 0) throw std::out_of_range("narrow_exponent: k == 0");
    return FormatDescriptor{d.eb, d.mb, d.fx, d.k - 1};
}

std::string to_string(const FormatDescriptor& d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "<%d,%d,%d>@%d", d.eb, d.mb, d.fx, d.k);
    return buf;
}

FormatDescriptor parse_descriptor(const std::string& text) {
    int eb = 0, mb = 0, fx = 0, k = 0, n = 0;
    if (std::sscanf(text.c_str(), "<%d,%d,%d>@%d%n", &eb, &mb, &fx, &k, &n) == 4 &&
        n == int(text.size()))
        return make_descriptor(eb, mb, fx, k);
    k = 0;
    if (std::sscanf(text.c_str(), "<%d,%d,%d>%n", &eb, &mb, &fx, &n) == 3 &&
        n == int(text.size()))
        return make_descriptor(eb, mb, fx, 0);
    throw std::invalid_argument("cannot parse descriptor '" + text + "'");
}

static void append_bits(std::string& out, uint64_t v, int bits) {
    for (int i = bits - 1; i >= 0; --i) out += char('0' + ((v >> i) & 1));
}

std::string FlexValue::to_bit_string() const {
    std::string s;
    s += sign ? '1' : '0';
    s += ' ';
    append_bits(s, efield, desc.exp_bits());
    s += ' ';
    append_bits(s, mfield, desc.man_bits());
    return s;
}

FlexValue make_zero(bool sign, const FormatDescriptor& d) { return FlexValue{sign, 0, 0, d}; }

FlexValue make_sentinel(bool sign, const FormatDescriptor& d) {
    return FlexValue{sign, d.exp_sentinel(), 0, d};
}

// Quantize a significand with its leading one at bit `sig_bits` and unbiased
// exponent E to the descriptor: RNE to |m| fraction bits, then range check.
static EncodeResult quantize_sig(bool sign, int E, uint64_t sig, int sig_bits,
                                 const FormatDescriptor& d) {
    const int m = d.man_bits();
    uint64_t kept;
    bool inexact = false;
    if (m >= sig_bits) {
        kept = sig << (m - sig_bits);
    } else {
        const int drop = sig_bits - m;
        const uint64_t tail = sig & ((1ull << drop) - 1);
        const uint64_t half = 1ull << (drop - 1);
        kept = sig >> drop;
        inexact = tail != 0;
        if (tail > half || (tail == half && (kept & 1))) ++kept;
        if (kept == (1ull << (m + 1))) {  // 1.11..1 rounded up to 10.00..0
            kept >>= 1;
            ++E;
        }
    }
    const long biased = long(E) + long(d.bias());
    if (biased >= long(d.exp_sentinel()))
        return {make_sentinel(sign, d), {true, false, true}};
    if (biased <= 0)
        return {make_zero(sign, d), {false, true, true}};
    return {FlexValue{sign, uint32_t(biased), kept - (1ull << m), d}, {false, false, inexact}};
}

EncodeResult encode(double x, const FormatDescriptor& d) {
    const uint64_t b = std::bit_cast<uint64_t>(x);
    const bool sign = b >> 63;
    const int e11 = int((b >> 52) & 0x7FF);
    const uint64_t f52 = b & ((1ull << 52) - 1);

    if (e11 == 0x7FF)  // inf or nan: out of every finite range
        return {make_sentinel(sign, d), {true, false, false}};
    if (e11 == 0 && f52 == 0) return {make_zero(sign, d), {}};

    int E;
    uint64_t sig;
    if (e11 == 0) {  // binary64 subnormal: normalize first
        const int shift = 52 - (63 - std::countl_zero(f52));
        sig = f52 << shift;
        E = -1022 - shift;
    } else {
        sig = (1ull << 52) | f52;
        E = e11 - 1023;
    }
    return quantize_sig(sign, E, sig, 52, d);
}

EncodeResult encode(float x, const FormatDescriptor& d) { return encode(double(x), d); }

double decode(const FlexValue& v) {
    if (v.is_zero()) return v.sign ? -0.0 : 0.0;
    if (v.is_sentinel())
        return v.sign ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
    const int m = v.desc.man_bits();
    const double mag = std::ldexp(double(v.significand()), v.unbiased_exp() - m);
    return v.sign ? -mag : mag;
}

double max_value(const FormatDescriptor& d) {
    const int emax = int(d.exp_max_normal()) - int(d.bias());
    return std::ldexp(2.0 - std::ldexp(1.0, -d.man_bits()), emax);
}

double min_normal(const FormatDescriptor& d) { return std::ldexp(1.0, 1 - int(d.bias())); }

EncodeResult reencode(const FlexValue& v, const FormatDescriptor& d_new) {
    if (v.desc.total_bits() != d_new.total_bits())
        throw std::invalid_argument("reencode: total width mismatch");
    if (v.is_sentinel()) return {make_sentinel(v.sign, d_new), {true, false, false}};
    return encode(decode(v), d_new);
}

}  // namespace r2f2
