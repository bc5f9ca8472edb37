#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "r2f2/format.hpp"
#include "r2f2/multiply.hpp"

namespace r2f2 {

enum class AdjustKind { OverflowWiden, UnderflowWiden, RedundancyNarrow };

const char* to_string(AdjustKind k);  // "overflow-widen" etc.

struct AdjustmentEvent {
    AdjustKind kind = AdjustKind::OverflowWiden;
    uint64_t step_index = 0;
    int old_k = 0;
    int new_k = 0;
};

// Precision state of one arithmetic stream (one solver / one hardware unit).
// Single-owner mutable state; values already stored elsewhere are not
// re-quantized when k changes - they re-encode lazily on their next use,
// since every multiplication converts its operands fresh.
struct AdjustState {
    FormatDescriptor desc;
    uint64_t overflow_events = 0;    // overflow-widen count
    uint64_t underflow_events = 0;   // underflow-widen count
    uint64_t redundancy_events = 0;  // redundancy-narrow count
    uint64_t retry_count = 0;        // re-issued multiplications
    uint64_t mult_count = 0;         // logical multiplications
    uint64_t saturation_count = 0;   // k == fx and still over/underflowing
    uint64_t current_step = 0;       // caller-provided step index for the event log
    std::vector<AdjustmentEvent> events;

    explicit AdjustState(const FormatDescriptor& d) : desc(d) {}
    uint64_t event_count() const {
        return overflow_events + underflow_events + redundancy_events;
    }
};

// Exponent redundancy: the two bits right below the exponent MSB both equal
// the complement of the MSB, meaning one exponent bit can be removed without
// leaving the narrower format's normal range. Requires |e| >= 3; zero and
// sentinel values are never redundant.
bool detect_redundancy(const FlexValue& v);

enum class AdjustDecision { RetryWider, Narrow, Keep };

// The adjustment unit's reaction to one completed multiplication r = a*b.
// Overflow/underflow widens the exponent and asks for a retry (saturating at
// k == fx); otherwise redundancy in a, b and the result narrows it for
// subsequent operations. Logs events and updates counters in s.
AdjustDecision adjust_after_multiply(const FlexValue& a, const FlexValue& b, const MulResult& r,
                                     AdjustState& s);

struct AdaptiveMulResult {
    double value = 0.0;
    bool saturated_overflow = false;
    bool saturated_underflow = false;
};

// One adaptive multiplication: encode both operands under the current
// precision, multiply (approx mode), widen and retry while the conversion or
// the datapath reports overflow/underflow. Conversion underflow counts as a
// detection: the stored zero carries no flag, so the signal is taken from the
// encoder, mirroring the exponent-sum flag of the datapath.
AdaptiveMulResult multiply_adaptive(double x, double y, AdjustState& s);

// CSV with columns step_index,kind,old_k,new_k
std::string events_to_csv(const std::vector<AdjustmentEvent>& events);

}  // namespace r2f2
