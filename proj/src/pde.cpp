#include "r2f2/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "r2f2/threads.hpp"

namespace r2f2 {

namespace {

// overflowed products clamp to the backend's largest finite value; the
// simulation continues and the clamp is counted
inline double backend_mul(Backend& bk, double a, double b, uint64_t& saturations) {
    const MulOutcome o = bk.multiply(a, b);
    if (o.overflow || !std::isfinite(o.value)) {
        ++saturations;
        return std::copysign(bk.saturation_limit(), (a < 0) == (b < 0) ? 1.0 : -1.0);
    }
    return o.value;
}

std::vector<int> resolved_snapshots(const std::vector<int>& requested, int steps) {
    std::vector<int> s = requested.empty() ? std::vector<int>{0, steps} : requested;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s)
        if (v < 0 || v > steps) throw std::invalid_argument("snapshot step out of [0, steps]");
    return s;
}

}  // namespace

// --------------------------------------------------------------------------
// heat
// --------------------------------------------------------------------------

std::vector<float> heat1d_init(HeatInit kind, int n, double amplitude, double exp_width) {
    if (n < 3) throw std::invalid_argument("heat: n must be >= 3");
    std::vector<float> u(n);
    for (int i = 1; i < n - 1; ++i) {
        const double x = double(i) / double(n - 1);
        const double v = kind == HeatInit::Sin
                             ? amplitude * std::sin(2.0 * std::numbers::pi * x)
                             : amplitude * std::exp(-exp_width * (x - 0.5) * (x - 0.5));
        u[i] = float(v);
    }
    u[0] = 0.0f;
    u[n - 1] = 0.0f;
    return u;
}

namespace {

inline float heat_cell(const std::vector<float>& u, int i, float r, Backend& bk,
                       uint64_t& saturations) {
    const float stencil = u[i - 1] - 2.0f * u[i] + u[i + 1];
    const double prod = backend_mul(bk, double(r), double(stencil), saturations);
    return u[i] + float(prod);
}

}  // namespace

std::vector<float> heat1d_step(const std::vector<float>& u, double r, Backend& backend,
                               uint64_t* saturations) {
    const int n = int(u.size());
    std::vector<float> next(n, 0.0f);
    const float rf = float(r);
    uint64_t sat = 0;
    if (backend.stateless()) {
        apply_thread_cap();
#pragma omp parallel for schedule(static) reduction(+ : sat)
        for (int i = 1; i < n - 1; ++i) next[i] = heat_cell(u, i, rf, backend, sat);
    } else {
        for (int i = 1; i < n - 1; ++i) next[i] = heat_cell(u, i, rf, backend, sat);
    }
    if (saturations) *saturations += sat;
    return next;
}

std::vector<float> heat1d_step_serial(const std::vector<float>& u, double r, Backend& backend,
                                      uint64_t* saturations) {
    const int n = int(u.size());
    std::vector<float> next(n, 0.0f);
    const float rf = float(r);
    uint64_t sat = 0;
    for (int i = 1; i < n - 1; ++i) next[i] = heat_cell(u, i, rf, backend, sat);
    if (saturations) *saturations += sat;
    return next;
}

namespace {

template <typename StepFn>
HeatRun heat_run_impl(const HeatConfig& cfg, StepFn step_fn) {
    if (!(cfg.r > 0.0) && cfg.r != 0.0)
        throw std::invalid_argument("heat: r must be non-negative");
    if (cfg.r > 0.5) throw std::invalid_argument("heat: explicit scheme needs r <= 0.5");

    HeatRun run;
    run.config = cfg;
    Backend bk = cfg.backend;
    const std::vector<int> snaps = resolved_snapshots(cfg.snapshot_steps, cfg.steps);

    std::vector<float> u =
        heat1d_init(cfg.init, cfg.n, cfg.resolved_amplitude(), cfg.exp_width);
    size_t next_snap = 0;
    auto maybe_snapshot = [&](int step) {
        if (next_snap < snaps.size() && snaps[next_snap] == step) {
            run.snapshots.push_back({step, u});
            ++next_snap;
        }
    };
    maybe_snapshot(0);
    for (int s = 1; s <= cfg.steps; ++s) {
        bk.set_step(uint64_t(s));
        u = step_fn(u, cfg.r, bk, &run.saturation_count);
        run.mult_count += uint64_t(cfg.n - 2);
        maybe_snapshot(s);
    }
    if (const AdjustState* st = bk.state()) {
        run.events = st->events;
        run.adjust_state = *st;
        run.saturation_count += st->saturation_count;
    }
    return run;
}

}  // namespace

HeatRun heat1d_run(const HeatConfig& cfg) {
    return heat_run_impl(cfg, [](const std::vector<float>& u, double r, Backend& bk,
                                 uint64_t* sat) { return heat1d_step(u, r, bk, sat); });
}

HeatRun heat1d_run_serial(const HeatConfig& cfg) {
    return heat_run_impl(cfg, [](const std::vector<float>& u, double r, Backend& bk,
                                 uint64_t* sat) { return heat1d_step_serial(u, r, bk, sat); });
}

std::vector<TraceSample> heat1d_trace(const HeatConfig& cfg, int sample_every) {
    if (sample_every < 1) throw std::invalid_argument("heat trace: sample_every >= 1");
    Backend bk = Backend::binary64();
    std::vector<float> u =
        heat1d_init(cfg.init, cfg.n, cfg.resolved_amplitude(), cfg.exp_width);
    std::vector<TraceSample> trace;
    trace.reserve(size_t(cfg.n) * (cfg.steps / sample_every + 1));
    auto record = [&](int step) {
        for (int i = 1; i < cfg.n - 1; ++i) trace.push_back({uint64_t(step), double(u[i])});
    };
    record(0);
    for (int s = 1; s <= cfg.steps; ++s) {
        u = heat1d_step(u, cfg.r, bk, nullptr);
        if (s % sample_every == 0) record(s);
    }
    return trace;
}

// --------------------------------------------------------------------------
// shallow water
// --------------------------------------------------------------------------

SweState swe2d_init(const SweConfig& cfg) {
    if (cfg.nx < 3 || cfg.ny < 3) throw std::invalid_argument("swe: grid must be >= 3x3");
    if (!(cfg.depth > 0.0)) throw std::invalid_argument("swe: depth must be positive");
    const double h_max = cfg.depth + std::max(cfg.bump_amplitude, 0.0);
    const double cfl = cfg.dt * std::sqrt(cfg.g * h_max) / std::min(cfg.dx, cfg.dy);
    if (!(cfl < 1.0)) throw std::invalid_argument("swe: CFL violated (dt too large)");

    SweState s;
    s.nx = cfg.nx;
    s.ny = cfg.ny;
    s.h.assign(size_t(cfg.nx) * cfg.ny, 0.0);
    s.hu.assign(s.h.size(), 0.0);
    s.hv.assign(s.h.size(), 0.0);
    const double cx = 0.5 * cfg.nx * cfg.dx;
    const double cy = 0.5 * cfg.ny * cfg.dy;
    for (int j = 0; j < cfg.ny; ++j) {
        for (int i = 0; i < cfg.nx; ++i) {
            const double x = (i + 0.5) * cfg.dx;
            const double y = (j + 0.5) * cfg.dy;
            const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            s.h[size_t(j) * cfg.nx + i] =
                cfg.depth +
                cfg.bump_amplitude * std::exp(-r2 / (2.0 * cfg.bump_sigma * cfg.bump_sigma));
        }
    }
    return s;
}

double swe_total_mass(const SweState& s, const SweConfig& cfg) {
    double sum = 0.0;
    for (double h : s.h) sum += h;
    return sum * cfg.dx * cfg.dy;
}

namespace {

struct SweWork {
    // cell-centered fluxes (stage 1 inputs)
    std::vector<double> f1, f2, f3, g1, g2, g3;
    // midpoint states
    std::vector<double> hmx, humx, hvmx, hmy, humy, hvmy;
    // midpoint fluxes (stage 2)
    std::vector<double> f1m, f2m, f3m, g1m, g2m, g3m;
};

template <bool Parallel>
SweState swe_step_impl(const SweState& s, const SweConfig& cfg, Backend& bk, uint64_t* mults,
                       uint64_t* saturations) {
    const int nx = s.nx, ny = s.ny;
    const size_t cells = size_t(nx) * ny;
    const double half_g = 0.5 * cfg.g;
    const double cxh = cfg.dt / (2.0 * cfg.dx);
    const double cyh = cfg.dt / (2.0 * cfg.dy);
    const double cx = cfg.dt / cfg.dx;
    const double cy = cfg.dt / cfg.dy;

    static thread_local SweWork w;
    for (auto* v : {&w.f1, &w.f2, &w.f3, &w.g1, &w.g2, &w.g3, &w.hmx, &w.humx, &w.hvmx, &w.hmy,
                    &w.humy, &w.hvmy, &w.f1m, &w.f2m, &w.f3m, &w.g1m, &w.g2m, &w.g3m})
        v->assign(cells, 0.0);

    auto idx = [nx](int i, int j) { return size_t(j) * nx + i; };
    auto right = [nx](int i) { return i + 1 == nx ? 0 : i + 1; };
    auto up = [ny](int j) { return j + 1 == ny ? 0 : j + 1; };
    auto left = [nx](int i) { return i == 0 ? nx - 1 : i - 1; };
    auto down = [ny](int j) { return j == 0 ? ny - 1 : j - 1; };

    // cell fluxes
    auto cell_flux = [&](size_t c) {
        const double h = s.h[c], hu = s.hu[c], hv = s.hv[c];
        w.f1[c] = hu;
        w.f2[c] = hu * hu / h + half_g * h * h;
        w.f3[c] = hu * hv / h;
        w.g1[c] = hv;
        w.g2[c] = w.f3[c];
        w.g3[c] = hv * hv / h + half_g * h * h;
    };
    // stage 1: midpoint states between (i,j)-(i+1,j) and (i,j)-(i,j+1)
    auto midpoints = [&](int i, int j) {
        const size_t c = idx(i, j);
        const size_t cr = idx(right(i), j);
        const size_t cu = idx(i, up(j));
        w.hmx[c] = 0.5 * (s.h[cr] + s.h[c]) - cxh * (w.f1[cr] - w.f1[c]);
        w.humx[c] = 0.5 * (s.hu[cr] + s.hu[c]) - cxh * (w.f2[cr] - w.f2[c]);
        w.hvmx[c] = 0.5 * (s.hv[cr] + s.hv[c]) - cxh * (w.f3[cr] - w.f3[c]);
        w.hmy[c] = 0.5 * (s.h[cu] + s.h[c]) - cyh * (w.g1[cu] - w.g1[c]);
        w.humy[c] = 0.5 * (s.hu[cu] + s.hu[c]) - cyh * (w.g2[cu] - w.g2[c]);
        w.hvmy[c] = 0.5 * (s.hv[cu] + s.hv[c]) - cyh * (w.g3[cu] - w.g3[c]);
    };
    // stage 2 midpoint fluxes; f2m is the substituted equation
    auto mid_flux_plain = [&](size_t c) {
        w.f1m[c] = w.humx[c];
        w.f3m[c] = w.humx[c] * w.hvmx[c] / w.hmx[c];
        w.g1m[c] = w.hvmy[c];
        w.g2m[c] = w.humy[c] * w.hvmy[c] / w.hmy[c];
        w.g3m[c] = w.hvmy[c] * w.hvmy[c] / w.hmy[c] + half_g * w.hmy[c] * w.hmy[c];
    };

    if constexpr (Parallel) {
        apply_thread_cap();
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) cell_flux(idx(i, j));
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) midpoints(i, j);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) mid_flux_plain(idx(i, j));
    } else {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) cell_flux(idx(i, j));
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) midpoints(i, j);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) mid_flux_plain(idx(i, j));
    }

    // substituted x-momentum flux: Ux = q1*q1/q3 + (0.5g)*(q3*q3), the three
    // multiplications go through the backend in a fixed sequential order so
    // adaptive event logs are deterministic
    uint64_t sat = 0;
    for (size_t c = 0; c < cells; ++c) {
        const double q1 = w.humx[c], q3 = w.hmx[c];
        const double q1sq = backend_mul(bk, q1, q1, sat);
        const double q3sq = backend_mul(bk, q3, q3, sat);
        const double pressure = backend_mul(bk, half_g, q3sq, sat);
        w.f2m[c] = q1sq / q3 + pressure;
    }
    if (mults) *mults += cells * 3;
    if (saturations) *saturations += sat;

    SweState next;
    next.nx = nx;
    next.ny = ny;
    next.h.resize(cells);
    next.hu.resize(cells);
    next.hv.resize(cells);
    auto update = [&](int i, int j) {
        const size_t c = idx(i, j);
        const size_t cl = idx(left(i), j);
        const size_t cd = idx(i, down(j));
        next.h[c] = s.h[c] - cx * (w.f1m[c] - w.f1m[cl]) - cy * (w.g1m[c] - w.g1m[cd]);
        next.hu[c] = s.hu[c] - cx * (w.f2m[c] - w.f2m[cl]) - cy * (w.g2m[c] - w.g2m[cd]);
        next.hv[c] = s.hv[c] - cx * (w.f3m[c] - w.f3m[cl]) - cy * (w.g3m[c] - w.g3m[cd]);
    };
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) update(i, j);
    } else {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) update(i, j);
    }
    return next;
}

}  // namespace

SweState swe2d_step(const SweState& s, const SweConfig& cfg, Backend& backend, uint64_t* mults,
                    uint64_t* saturations) {
    return swe_step_impl<true>(s, cfg, backend, mults, saturations);
}

SweState swe2d_step_serial(const SweState& s, const SweConfig& cfg, Backend& backend,
                           uint64_t* mults, uint64_t* saturations) {
    return swe_step_impl<false>(s, cfg, backend, mults, saturations);
}

namespace {

template <typename StepFn>
SweRun swe_run_impl(const SweConfig& cfg, StepFn step_fn) {
    SweRun run;
    run.config = cfg;
    Backend bk = cfg.backend;
    const std::vector<int> snaps = resolved_snapshots(cfg.snapshot_steps, cfg.steps);

    SweState s = swe2d_init(cfg);
    size_t next_snap = 0;
    auto maybe_snapshot = [&](int step) {
        if (next_snap < snaps.size() && snaps[next_snap] == step) {
            run.snapshots.push_back({step, s});
            ++next_snap;
        }
    };
    maybe_snapshot(0);
    for (int t = 1; t <= cfg.steps; ++t) {
        bk.set_step(uint64_t(t));
        s = step_fn(s, cfg, bk, &run.mult_count, &run.saturation_count);
        maybe_snapshot(t);
    }
    if (const AdjustState* st = bk.state()) {
        run.events = st->events;
        run.adjust_state = *st;
        run.saturation_count += st->saturation_count;
    }
    return run;
}

}  // namespace

SweRun swe2d_run(const SweConfig& cfg) {
    return swe_run_impl(cfg, [](const SweState& s, const SweConfig& c, Backend& bk,
                                uint64_t* m, uint64_t* sat) {
        return swe2d_step(s, c, bk, m, sat);
    });
}

SweRun swe2d_run_serial(const SweConfig& cfg) {
    return swe_run_impl(cfg, [](const SweState& s, const SweConfig& c, Backend& bk,
                                uint64_t* m, uint64_t* sat) {
        return swe2d_step_serial(s, c, bk, m, sat);
    });
}

// --------------------------------------------------------------------------
// comparison and CSV
// --------------------------------------------------------------------------

SnapshotMetrics field_metrics(int step, const std::vector<double>& a,
                              const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compare: field shapes differ");
    SnapshotMetrics m;
    m.step = step;
    double sq = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
        const double rel = std::fabs(d) / std::max(std::fabs(b[i]), 1e-12);
        m.linf_rel = std::max(m.linf_rel, rel);
    }
    m.rmse = std::sqrt(sq / double(a.size()));
    return m;
}

namespace {

template <typename Run, typename FieldOf>
std::vector<SnapshotMetrics> compare_impl(const Run& a, const Run& b, FieldOf field_of) {
    if (a.snapshots.size() != b.snapshots.size())
        throw std::invalid_argument("compare: snapshot lists differ");
    std::vector<SnapshotMetrics> out;
    for (size_t i = 0; i < a.snapshots.size(); ++i) {
        if (a.snapshots[i].step != b.snapshots[i].step)
            throw std::invalid_argument("compare: snapshot steps differ");
        out.push_back(
            field_metrics(a.snapshots[i].step, field_of(a.snapshots[i]), field_of(b.snapshots[i])));
    }
    return out;
}

}  // namespace

std::vector<SnapshotMetrics> compare_runs(const HeatRun& a, const HeatRun& b) {
    return compare_impl(a, b, [](const HeatSnapshot& s) {
        return std::vector<double>(s.u.begin(), s.u.end());
    });
}

std::vector<SnapshotMetrics> compare_runs(const SweRun& a, const SweRun& b) {
    return compare_impl(a, b, [](const SweSnapshot& s) { return s.state.h; });
}

std::string snapshots_to_csv(const HeatRun& run) {
    std::string out = "step,index,value\n";
    char line[80];
    for (const HeatSnapshot& s : run.snapshots)
        for (size_t i = 0; i < s.u.size(); ++i) {
            std::snprintf(line, sizeof line, "%d,%zu,%.9g\n", s.step, i, double(s.u[i]));
            out += line;
        }
    return out;
}

std::string snapshots_to_csv(const SweRun& run) {
    std::string out = "step,i,j,h,hu,hv\n";
    char line[160];
    for (const SweSnapshot& s : run.snapshots)
        for (int j = 0; j < s.state.ny; ++j)
            for (int i = 0; i < s.state.nx; ++i) {
                const size_t c = size_t(j) * s.state.nx + i;
                std::snprintf(line, sizeof line, "%d,%d,%d,%.17g,%.17g,%.17g\n", s.step, i, j,
                              s.state.h[c], s.state.hu[c], s.state.hv[c]);
                out += line;
            }
    return out;
}

}  // namespace r2f2
