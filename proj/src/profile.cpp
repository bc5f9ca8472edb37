#include "r2f2/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "r2f2/threads.hpp"

namespace r2f2 {

namespace {

// splitmix64; portable substream derivation and uniform doubles, so reports
// do not depend on the standard library's distribution internals
uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed, uint64_t stream) {
        s = seed;
        splitmix64(s);
        s ^= 0x9E3779B97F4A7C15ull * (stream + 1);
        splitmix64(s);
    }
    double u01() { return double(splitmix64(s) >> 11) * 0x1.0p-53; }
};

void validate(const SweepSpec& spec) {
    if (!(spec.lo > 0.0) || !(spec.lo < spec.hi))
        throw std::invalid_argument("sweep: need 0 < lo < hi");
    if (spec.intervals < 1 || spec.pairs < 1)
        throw std::invalid_argument("sweep: intervals and pairs must be >= 1");
}

IntervalError run_interval(const SweepSpec& spec, const Backend& proto, int i) {
    const double log_lo = std::log(spec.lo);
    const double log_step = (std::log(spec.hi) - std::log(spec.lo)) / spec.intervals;
    IntervalError out;
    out.lo = std::exp(log_lo + i * log_step);
    out.hi = std::exp(log_lo + (i + 1) * log_step);

    Backend backend = proto;  // fresh adjustment state per interval
    Rng rng(spec.seed, uint64_t(i));
    double sum = 0.0;
    for (int p = 0; p < spec.pairs; ++p) {
        const float x = float(out.lo + rng.u01() * (out.hi - out.lo));
        const float y = float(out.lo + rng.u01() * (out.hi - out.lo));
        const float ref = x * y;
        const MulOutcome mo = backend.multiply(x, y);
        double err;
        if (mo.overflow || !std::isfinite(mo.value)) {
            err = 100.0;
            ++out.overflow_count;
        } else {
            err = 100.0 * std::fabs(mo.value - double(ref)) / double(ref);
        }
        sum += err;
        out.max_err_pct = std::max(out.max_err_pct, err);
    }
    out.mean_err_pct = sum / spec.pairs;
    return out;
}

ErrorReport finish(const SweepSpec& spec, const Backend& backend,
                   std::vector<IntervalError> rows) {
    ErrorReport rep;
    rep.spec = spec;
    rep.backend = backend.name();
    rep.intervals = std::move(rows);
    double sum = 0.0;
    for (const IntervalError& r : rep.intervals) {
        sum += r.mean_err_pct;
        rep.aggregate_max_pct = std::max(rep.aggregate_max_pct, r.max_err_pct);
    }
    rep.aggregate_mean_pct = sum / double(rep.intervals.size());
    return rep;
}

}  // namespace

ErrorReport sweep_error(const SweepSpec& spec, const Backend& backend) {
    validate(spec);
    apply_thread_cap();
    std::vector<IntervalError> rows(spec.intervals);
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < spec.intervals; ++i) rows[i] = run_interval(spec, backend, i);
    return finish(spec, backend, std::move(rows));
}

ErrorReport sweep_error_serial(const SweepSpec& spec, const Backend& backend) {
    validate(spec);
    std::vector<IntervalError> rows(spec.intervals);
    for (int i = 0; i < spec.intervals; ++i) rows[i] = run_interval(spec, backend, i);
    return finish(spec, backend, std::move(rows));
}

ReductionStats error_reduction(const ErrorReport& r2f2_report, const ErrorReport& fixed_report) {
    if (!(r2f2_report.spec == fixed_report.spec))
        throw std::invalid_argument("error_reduction: reports come from different sweeps");
    ReductionStats out;
    out.max_pct = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < fixed_report.intervals.size(); ++i) {
        const double f = fixed_report.intervals[i].mean_err_pct;
        const double r = r2f2_report.intervals[i].mean_err_pct;
        if (f == 0.0) {
            ++out.excluded_zero_baseline;
            continue;
        }
        const double red = 100.0 * (f - r) / f;
        out.per_interval_pct.push_back(red);
        out.mean_pct += red;
        out.max_pct = std::max(out.max_pct, red);
    }
    out.intervals_used = out.per_interval_pct.size();
    if (out.intervals_used) out.mean_pct /= double(out.intervals_used);
    return out;
}

int empirical_exponent_bits(double v_max) {
    if (!(v_max > 0.0)) throw std::invalid_argument("empirical_exponent_bits: v_max must be > 0");
    const double v = v_max >= 1.0 ? v_max : 1.0 / v_max;
    // snap guards against log10 landing a hair above an integer
    return int(std::ceil(2.0 * std::log10(v) - 1e-12)) + 1;
}

std::vector<GridSearchEntry> config_grid_search(double lo, double hi, int total_bits,
                                                int samples, uint64_t seed) {
    if (total_bits < 6) throw std::invalid_argument("grid search: total_bits must be >= 6");
    std::vector<GridSearchEntry> out;
    for (int e = 2; e <= total_bits - 2; ++e) {
        const int m = total_bits - 1 - e;
        if (e > 11 || m > 25 || m < 1) continue;
        const FixedFormat f = make_fixed_format(e, m);
        const SweepSpec spec{lo, hi, 1, samples, seed};
        const ErrorReport rep = sweep_error(spec, Backend::fixed(f));
        out.push_back({f, rep.aggregate_mean_pct});
    }
    std::stable_sort(out.begin(), out.end(), [](const GridSearchEntry& a, const GridSearchEntry& b) {
        return a.mean_err_pct < b.mean_err_pct;
    });
    return out;
}

namespace {

Histogram bin_values(const std::string& stage, const std::vector<double>& values, double lo,
                     double hi, int bins) {
    Histogram h;
    h.stage = stage;
    if (!(lo < hi)) {  // degenerate span (e.g. constant trace): one bin
        h.edges = {lo, hi};
        h.counts = {uint64_t(values.size())};
        return h;
    }
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges[b] = lo + (hi - lo) * b / bins;
    h.counts.assign(bins, 0);
    for (double v : values) {
        int b = int((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[b];
    }
    return h;
}

}  // namespace

DistributionReport distribution_histogram(const std::vector<TraceSample>& trace, int stages,
                                          int bins, double split_threshold) {
    if (trace.empty()) throw std::invalid_argument("distribution: empty trace");
    if (stages < 1 || bins < 1) throw std::invalid_argument("distribution: bad stages/bins");

    uint64_t step_lo = trace.front().step, step_hi = trace.front().step;
    double v_lo = trace.front().value, v_hi = trace.front().value;
    for (const TraceSample& t : trace) {
        step_lo = std::min(step_lo, t.step);
        step_hi = std::max(step_hi, t.step);
        v_lo = std::min(v_lo, t.value);
        v_hi = std::max(v_hi, t.value);
    }
    const uint64_t span = step_hi - step_lo + 1;

    std::vector<std::vector<double>> stage_vals(stages), stage_small(stages), stage_large(stages);
    std::vector<double> all;
    all.reserve(trace.size());
    double large_lo = 0.0, large_hi = 0.0;
    bool any_large = false;
    for (const TraceSample& t : trace) {
        int s = int(uint64_t(stages) * (t.step - step_lo) / span);
        s = std::clamp(s, 0, stages - 1);
        all.push_back(t.value);
        stage_vals[s].push_back(t.value);
        if (std::fabs(t.value) < split_threshold) {
            stage_small[s].push_back(t.value);
        } else {
            stage_large[s].push_back(t.value);
            large_lo = any_large ? std::min(large_lo, t.value) : t.value;
            large_hi = any_large ? std::max(large_hi, t.value) : t.value;
            any_large = true;
        }
    }

    DistributionReport rep;
    rep.whole = bin_values("all", all, v_lo, v_hi, bins);
    for (int s = 0; s < stages; ++s) {
        const std::string q = "q" + std::to_string(s + 1);
        rep.per_stage.push_back(bin_values(q, stage_vals[s], v_lo, v_hi, bins));
        rep.small_per_stage.push_back(
            bin_values(q + "-small", stage_small[s], -split_threshold, split_threshold, bins));
        if (any_large)
            rep.large_per_stage.push_back(
                bin_values(q + "-large", stage_large[s], large_lo, large_hi, bins));
    }
    return rep;
}

std::string error_report_to_csv(const ErrorReport& r) {
    char head[256];
    std::snprintf(head, sizeof head,
                  "# backend=%s lo=%g hi=%g intervals=%d pairs=%d seed=%llu spacing=log\n",
                  r.backend.c_str(), r.spec.lo, r.spec.hi, r.spec.intervals, r.spec.pairs,
                  (unsigned long long)r.spec.seed);
    std::string out = head;
    out += "interval_lo,interval_hi,mean_err_pct,max_err_pct,overflow_count\n";
    char line[192];
    for (const IntervalError& iv : r.intervals) {
        std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g,%.9g,%llu\n", iv.lo, iv.hi,
                      iv.mean_err_pct, iv.max_err_pct, (unsigned long long)iv.overflow_count);
        out += line;
    }
    return out;
}

std::string grid_search_to_csv(const std::vector<GridSearchEntry>& entries) {
    std::string out = "e,m,mean_err_pct\n";
    char line[96];
    for (const GridSearchEntry& g : entries) {
        std::snprintf(line, sizeof line, "%d,%d,%.9g\n", g.format.e, g.format.m, g.mean_err_pct);
        out += line;
    }
    return out;
}

std::string histograms_to_csv(const DistributionReport& r) {
    std::string out = "stage,bin_lo,bin_hi,count\n";
    char line[160];
    auto emit = [&](const Histogram& h) {
        for (size_t b = 0; b + 1 < h.edges.size(); ++b) {
            std::snprintf(line, sizeof line, "%s,%.9g,%.9g,%llu\n", h.stage.c_str(), h.edges[b],
                          h.edges[b + 1], (unsigned long long)h.counts[b]);
            out += line;
        }
    };
    emit(r.whole);
    for (const Histogram& h : r.per_stage) emit(h);
    for (const Histogram& h : r.small_per_stage) emit(h);
    for (const Histogram& h : r.large_per_stage) emit(h);
    return out;
}

}  // namespace r2f2
