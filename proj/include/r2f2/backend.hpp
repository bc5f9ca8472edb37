#pragma once

#include <memory>
#include <optional>
#include <string>

#include "r2f2/adjust.hpp"
#include "r2f2/fixed.hpp"
#include "r2f2/format.hpp"

namespace r2f2 {

enum class BackendKind { Binary64, Binary32, Fixed, R2f2Static, R2f2Adaptive };

struct MulOutcome {
    double value = 0.0;
    bool overflow = false;
    bool underflow = false;
};

// Multiplication provider for sweeps and the PDE solvers. Value type: copying
// a backend clones its adjustment state, which is how per-interval sweep
// streams stay independent. Only the adaptive kind is stateful; stateless
// kinds may be shared across threads.
class Backend {
public:
    static Backend binary64();
    static Backend binary32();
    static Backend fixed(const FixedFormat& f);
    static Backend r2f2(const FormatDescriptor& d, bool adaptive);

    // "binary64" | "binary32" | "E5M10" | "<3,9,3>@0" (+ adaptive flag)
    static Backend parse(const std::string& text, bool adaptive = false);

    BackendKind kind() const { return kind_; }
    bool stateless() const { return kind_ != BackendKind::R2f2Adaptive; }
    std::string name() const;

    // Operands pass through the binary32 conversion pipeline for the reduced
    // formats; overflow reports a sentinel (infinite) value plus flag, callers
    // pick their saturation policy.
    MulOutcome multiply(double a, double b);

    // Largest finite magnitude the backend can produce (at k == fx for the
    // adaptive kind); the PDE solvers clamp overflowed results here.
    double saturation_limit() const;

    AdjustState* state() { return adjust_ ? adjust_.get() : nullptr; }
    const AdjustState* state() const { return adjust_ ? adjust_.get() : nullptr; }
    void set_step(uint64_t step) {
        if (adjust_) adjust_->current_step = step;
    }

    Backend(const Backend& other);
    Backend& operator=(const Backend& other);
    Backend(Backend&&) = default;
    Backend& operator=(Backend&&) = default;

private:
    Backend() = default;
    BackendKind kind_ = BackendKind::Binary64;
    FixedFormat fixed_{};
    FormatDescriptor desc_{};
    std::unique_ptr<AdjustState> adjust_;  // adaptive only
};

}  // namespace r2f2
