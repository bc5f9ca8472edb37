#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "r2f2/backend.hpp"
#include "r2f2/profile.hpp"

namespace r2f2 {

// ---------------------------------------------------------------------------
// 1D heat equation, explicit finite differences, Dirichlet zero boundaries.
// Field and additions are binary32 (the reduced formats convert to and from
// single precision around each multiplication); only the single product
// r * (u[i-1] - 2 u[i] + u[i+1]) per interior cell routes through the backend.
// ---------------------------------------------------------------------------

enum class HeatInit { Sin, Exp };

struct HeatConfig {
    int n = 512;
    int steps = 2000;
    double r = 0.25;  // alpha*dt/dx^2, explicit scheme needs r <= 0.5
    HeatInit init = HeatInit::Sin;
    double amplitude = 0.0;    // 0 = default: 100 for sin, 500 for exp
    double exp_width = 61.6971;  // c in A*exp(-c*(x-1/2)^2); default spans 1e-4..5e2
    Backend backend = Backend::binary32();
    std::vector<int> snapshot_steps = {};  // empty = {0, steps}
    double resolved_amplitude() const {
        if (amplitude > 0.0) return amplitude;
        return init == HeatInit::Sin ? 100.0 : 500.0;
    }
};

struct HeatSnapshot {
    int step = 0;
    std::vector<float> u;
};

struct HeatRun {
    HeatConfig config;
    std::vector<HeatSnapshot> snapshots;
    std::vector<AdjustmentEvent> events;
    uint64_t mult_count = 0;
    uint64_t saturation_count = 0;  // results clamped at the backend's limit
    std::optional<AdjustState> adjust_state;  // final state, adaptive backends
    const std::vector<float>& final_field() const { return snapshots.back().u; }
};

std::vector<float> heat1d_init(HeatInit kind, int n, double amplitude, double exp_width);

// One explicit step. Parallel across cells for stateless backends; adaptive
// backends walk cells in index order so event logs stay deterministic.
std::vector<float> heat1d_step(const std::vector<float>& u, double r, Backend& backend,
                               uint64_t* saturations = nullptr);
// plain-loop reference, bit-identical to heat1d_step
std::vector<float> heat1d_step_serial(const std::vector<float>& u, double r, Backend& backend,
                                      uint64_t* saturations = nullptr);

HeatRun heat1d_run(const HeatConfig& cfg);
HeatRun heat1d_run_serial(const HeatConfig& cfg);

// (step, value) samples of interior cells from a binary64 run, for the
// data-distribution histograms
std::vector<TraceSample> heat1d_trace(const HeatConfig& cfg, int sample_every = 1);

// ---------------------------------------------------------------------------
// 2D shallow water equations, two-stage Lax-Wendroff on a doubly periodic
// grid, binary64 throughout EXCEPT the x-momentum flux at x-midpoints
//   Ux = q1*q1/q3 + (0.5*g)*(q3*q3),   q1 = hu, q3 = h
// whose three multiplications route through the backend (the division stays
// binary64).
// ---------------------------------------------------------------------------

struct SweConfig {
    int nx = 64;
    int ny = 64;
    int steps = 500;
    double g = 9.81;
    double dx = 1000.0;
    double dy = 1000.0;
    double dt = 10.0;
    double depth = 150.0;           // base water depth
    double bump_amplitude = 15.0;   // Gaussian bump on top of depth
    double bump_sigma = 8000.0;     // Gaussian width in meters
    Backend backend = Backend::binary64();
    std::vector<int> snapshot_steps = {};  // empty = {0, steps}
};

struct SweState {
    int nx = 0, ny = 0;
    std::vector<double> h, hu, hv;  // row-major, j*nx + i
};

struct SweSnapshot {
    int step = 0;
    SweState state;
};

struct SweRun {
    SweConfig config;
    std::vector<SweSnapshot> snapshots;
    std::vector<AdjustmentEvent> events;
    uint64_t mult_count = 0;  // backend multiplications
    uint64_t saturation_count = 0;
    std::optional<AdjustState> adjust_state;
    const SweState& final_state() const { return snapshots.back().state; }
};

// Validates the CFL bound dt*(sqrt(g*h_max)+|u|_max)/min(dx,dy) < 1.
SweState swe2d_init(const SweConfig& cfg);
double swe_total_mass(const SweState& s, const SweConfig& cfg);

SweState swe2d_step(const SweState& s, const SweConfig& cfg, Backend& backend,
                    uint64_t* mults = nullptr, uint64_t* saturations = nullptr);
SweState swe2d_step_serial(const SweState& s, const SweConfig& cfg, Backend& backend,
                           uint64_t* mults = nullptr, uint64_t* saturations = nullptr);

SweRun swe2d_run(const SweConfig& cfg);
SweRun swe2d_run_serial(const SweConfig& cfg);

// ---------------------------------------------------------------------------
// Cross-run comparison over matching snapshot steps. linf_rel is the largest
// per-point |a-b| / max(|b|, 1e-12); rmse is in field units. SWE metrics are
// taken on the h field.
// ---------------------------------------------------------------------------

struct SnapshotMetrics {
    int step = 0;
    double rmse = 0.0;
    double linf_rel = 0.0;
};

std::vector<SnapshotMetrics> compare_runs(const HeatRun& a, const HeatRun& b);
std::vector<SnapshotMetrics> compare_runs(const SweRun& a, const SweRun& b);
SnapshotMetrics field_metrics(int step, const std::vector<double>& a,
                              const std::vector<double>& b);

// CSV forms: heat "step,index,value"; swe "step,i,j,h,hu,hv"
std::string snapshots_to_csv(const HeatRun& run);
std::string snapshots_to_csv(const SweRun& run);

}  // namespace r2f2
