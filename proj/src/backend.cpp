#include "r2f2/backend.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace r2f2 {

Backend Backend::binary64() {
    Backend b;
    b.kind_ = BackendKind::Binary64;
    return b;
}

Backend Backend::binary32() {
    Backend b;
    b.kind_ = BackendKind::Binary32;
    return b;
}

Backend Backend::fixed(const FixedFormat& f) {
    Backend b;
    b.kind_ = BackendKind::Fixed;
    b.fixed_ = f;
    return b;
}

Backend Backend::r2f2(const FormatDescriptor& d, bool adaptive) {
    Backend b;
    b.kind_ = adaptive ? BackendKind::R2f2Adaptive : BackendKind::R2f2Static;
    b.desc_ = d;
    if (adaptive) b.adjust_ = std::make_unique<AdjustState>(d);
    return b;
}

Backend Backend::parse(const std::string& text, bool adaptive) {
    if (text == "binary64") return binary64();
    if (text == "binary32") return binary32();
    if (!text.empty() && text[0] == '<') return r2f2(parse_descriptor(text), adaptive);
    if (!text.empty() && text[0] == 'E') return fixed(parse_fixed_format(text));
    throw std::invalid_argument("unknown backend '" + text + "'");
}

Backend::Backend(const Backend& other)
    : kind_(other.kind_), fixed_(other.fixed_), desc_(other.desc_) {
    if (other.adjust_) adjust_ = std::make_unique<AdjustState>(*other.adjust_);
}

Backend& Backend::operator=(const Backend& other) {
    if (this == &other) return *this;
    kind_ = other.kind_;
    fixed_ = other.fixed_;
    desc_ = other.desc_;
    adjust_ = other.adjust_ ? std::make_unique<AdjustState>(*other.adjust_) : nullptr;
    return *this;
}

std::string Backend::name() const {
    switch (kind_) {
        case BackendKind::Binary64: return "binary64";
        case BackendKind::Binary32: return "binary32";
        case BackendKind::Fixed: return to_string(fixed_);
        case BackendKind::R2f2Static: return to_string(desc_);
        case BackendKind::R2f2Adaptive: return to_string(desc_) + ":adaptive";
    }
    return "?";
}

double Backend::saturation_limit() const {
    switch (kind_) {
        case BackendKind::Binary64: return std::numeric_limits<double>::max();
        case BackendKind::Binary32: return double(std::numeric_limits<float>::max());
        case BackendKind::Fixed: return max_value(fixed_.as_descriptor());
        case BackendKind::R2f2Static: return max_value(desc_);
        case BackendKind::R2f2Adaptive: {
            FormatDescriptor widest = desc_;
            widest.k = widest.fx;
            return max_value(widest);
        }
    }
    return 0.0;
}

MulOutcome Backend::multiply(double a, double b) {
    switch (kind_) {
        case BackendKind::Binary64:
            return {a * b, false, false};
        case BackendKind::Binary32: {
            const float p = float(a) * float(b);
            return {double(p), std::isinf(p) && !std::isinf(a) && !std::isinf(b), false};
        }
        case BackendKind::Fixed: {
            const QuantResult qa = quantize(float(a), fixed_);
            const QuantResult qb = quantize(float(b), fixed_);
            if (qa.flags.overflowed || qb.flags.overflowed)
                return {decode(make_sentinel(std::signbit(a) != std::signbit(b),
                                             fixed_.as_descriptor())),
                        true, false};
            const QuantResult qr = multiply_fixed(qa.value, qb.value, fixed_);
            return {qr.value, qr.flags.overflowed,
                    qr.flags.underflowed || qa.flags.underflowed || qb.flags.underflowed};
        }
        case BackendKind::R2f2Static: {
            const EncodeResult ea = encode(float(a), desc_);
            const EncodeResult eb = encode(float(b), desc_);
            const MulResult r = r2f2::multiply(ea.value, eb.value, MulMode::Approx);
            const bool of = r.overflow || ea.flags.overflowed || eb.flags.overflowed;
            const bool uf =
                !of && (r.underflow || ea.flags.underflowed || eb.flags.underflowed);
            return {decode(r.value), of, uf};
        }
        case BackendKind::R2f2Adaptive: {
            const AdaptiveMulResult r = multiply_adaptive(float(a), float(b), *adjust_);
            return {r.value, r.saturated_overflow, r.saturated_underflow};
        }
    }
    return {};
}

}  // namespace r2f2
