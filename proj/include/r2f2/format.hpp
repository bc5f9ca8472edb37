#pragma once

#include <cstdint>
#include <string>

namespace r2f2 {

// Flexible floating point layout: 1 sign bit, `eb` fixed exponent bits,
// `mb` fixed mantissa bits and `fx` flexible bits. `k` of the flexible bits
// currently extend the exponent at its LSB end, the remaining `fx - k`
// extend the mantissa at its LSB end. The hardware mask register is fully
// determined by k (allocation is contiguous), so only k is stored.
struct FormatDescriptor {
    int eb = 0;
    int mb = 0;
    int fx = 0;
    int k = 0;

    int exp_bits() const { return eb + k; }
    int man_bits() const { return mb + fx - k; }
    int flex_man_bits() const { return fx - k; }
    int total_bits() const { return 1 + eb + mb + fx; }

    uint32_t bias() const { return (1u << (exp_bits() - 1)) - 1; }
    // all-ones exponent code, reserved as the overflow sentinel
    uint32_t exp_sentinel() const { return (1u << exp_bits()) - 1; }
    uint32_t exp_max_normal() const { return exp_sentinel() - 1; }

    // mask of Fig-4a style per-bit flags: bit set = flexible bit assigned
    // to the exponent; materialized only where the hardware view is needed
    uint64_t mask_bits() const { return (k == 0) ? 0 : ((1ull << k) - 1) << (fx - k); }

    friend bool operator==(const FormatDescriptor&, const FormatDescriptor&) = default;
};

// Validates and builds a descriptor. eb >= 2 (a smaller exponent cannot hold
// bias plus the reserved codes), mb >= 1, 0 <= k <= fx. Width caps keep every
// intermediate product inside uint64.
FormatDescriptor make_descriptor(int eb, int mb, int fx, int k = 0);

FormatDescriptor widen_exponent(const FormatDescriptor& d);   // k+1, throws at k == fx
FormatDescriptor narrow_exponent(const FormatDescriptor& d);  // k-1, throws at k == 0

// Textual form "<EB,MB,FX>@k"; "@k" optional on parse, defaults to 0.
std::string to_string(const FormatDescriptor& d);
FormatDescriptor parse_descriptor(const std::string& text);

// One encoded number. efield == 0 encodes exact zero (mfield forced 0 on the
// encode path but patterns with junk mfield decode as zero as well); efield
// all-ones is the overflow sentinel; everything else is a normal with an
// implicit leading one.
struct FlexValue {
    bool sign = false;
    uint32_t efield = 0;
    uint64_t mfield = 0;
    FormatDescriptor desc;

    bool is_zero() const { return efield == 0; }
    bool is_sentinel() const { return efield == desc.exp_sentinel(); }
    bool is_normal() const { return !is_zero() && !is_sentinel(); }
    // significand with the implicit one, |m|+1 bits
    uint64_t significand() const { return (1ull << desc.man_bits()) | mfield; }
    int unbiased_exp() const { return int(efield) - int(d_bias()); }

    // "sign efield mfield", MSB first (the bit-exact dump form)
    std::string to_bit_string() const;

private:
    uint32_t d_bias() const { return desc.bias(); }
};

struct EncodeFlags {
    bool overflowed = false;
    bool underflowed = false;
    bool inexact = false;
};

struct EncodeResult {
    FlexValue value;
    EncodeFlags flags;
};

FlexValue make_zero(bool sign, const FormatDescriptor& d);
FlexValue make_sentinel(bool sign, const FormatDescriptor& d);

// Round-to-nearest-even encoding. Magnitudes that round above the largest
// normal return the sentinel with `overflowed`; nonzero magnitudes that land
// below the smallest normal flush to zero with `underflowed` (no subnormals).
// The double overload is exact for any binary64 input and backs reencode();
// the interface carries binary32-representable values in practice.
EncodeResult encode(double x, const FormatDescriptor& d);
EncodeResult encode(float x, const FormatDescriptor& d);

// Exact real value of v. Zero decodes to (signed) zero, the sentinel decodes
// to +/-infinity so overflow stays distinguishable from any finite value.
double decode(const FlexValue& v);

// 2^(emax - bias) * (2 - 2^-|m|), emax = 2^|e| - 2.
double max_value(const FormatDescriptor& d);
// 2^(1 - bias), the flush-to-zero threshold.
double min_normal(const FormatDescriptor& d);

// Re-quantize under a descriptor of the same total width (decode -> encode).
EncodeResult reencode(const FlexValue& v, const FormatDescriptor& d_new);

}  // namespace r2f2
