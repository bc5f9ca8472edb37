#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "r2f2/backend.hpp"

namespace r2f2 {

// Operand-range sweep: `intervals` log-spaced intervals over (lo, hi), each
// sampled with `pairs` operand pairs drawn uniformly inside the interval
// (both operands share the interval). Seeded per interval, so interval
// results are independent of execution order.
struct SweepSpec {
    double lo = 1e-4;
    double hi = 1e4;
    int intervals = 1000;
    int pairs = 100;
    uint64_t seed = 1;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct IntervalError {
    double lo = 0.0;
    double hi = 0.0;
    double mean_err_pct = 0.0;
    double max_err_pct = 0.0;
    uint64_t overflow_count = 0;
};

struct ErrorReport {
    SweepSpec spec;
    std::string backend;
    std::vector<IntervalError> intervals;
    double aggregate_mean_pct = 0.0;
    double aggregate_max_pct = 0.0;
};

// Per-sample error |backend_product - binary32_product| / |binary32_product|
// in percent; overflowed samples are cast to 100%. OpenMP-parallel across
// intervals; sweep_error_serial is the plain loop kept as the reference
// implementation and produces bit-identical reports.
ErrorReport sweep_error(const SweepSpec& spec, const Backend& backend);
ErrorReport sweep_error_serial(const SweepSpec& spec, const Backend& backend);

struct ReductionStats {
    double mean_pct = 0.0;
    double max_pct = 0.0;
    size_t intervals_used = 0;
    size_t excluded_zero_baseline = 0;
    std::vector<double> per_interval_pct;  // only the used intervals
};

// Per-interval relative reduction (fixed - r2f2)/fixed of the mean errors;
// intervals with a zero baseline error are excluded and counted.
ReductionStats error_reduction(const ErrorReport& r2f2_report, const ErrorReport& fixed_report);

// Exponent-bit estimate from the operand range maximum, base-10 logs:
// vmax >= 1 -> ceil(log10(vmax^2)) + 1, else ceil(log10((1/vmax)^2)) + 1.
int empirical_exponent_bits(double v_max);

struct GridSearchEntry {
    FixedFormat format;
    double mean_err_pct = 0.0;
};

// Every ExMy with e+m+1 == total_bits evaluated on the single interval
// (lo, hi) with `samples` pairs and a shared seed; ascending mean error.
std::vector<GridSearchEntry> config_grid_search(double lo, double hi, int total_bits,
                                                int samples, uint64_t seed = 1);

struct Histogram {
    std::string stage;  // "all", "q1".."qN", "q1-small", "q1-large", ...
    std::vector<double> edges;  // bins+1 ascending
    std::vector<uint64_t> counts;
};

struct TraceSample {
    uint64_t step = 0;
    double value = 0.0;
};

struct DistributionReport {
    Histogram whole;
    std::vector<Histogram> per_stage;
    std::vector<Histogram> small_per_stage;  // |v| < threshold
    std::vector<Histogram> large_per_stage;  // |v| >= threshold
};

// Splits the trace into `stages` equal step-index spans and bins values per
// stage; per-stage histograms share one edge set for comparability.
DistributionReport distribution_histogram(const std::vector<TraceSample>& trace, int stages = 4,
                                          int bins = 50, double split_threshold = 1.0);

// CSV writers (first line is a "# key=value ..." provenance comment)
std::string error_report_to_csv(const ErrorReport& r);
std::string grid_search_to_csv(const std::vector<GridSearchEntry>& entries);
std::string histograms_to_csv(const DistributionReport& r);

}  // namespace r2f2
