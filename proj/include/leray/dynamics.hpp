#pragma once

#include "leray/kernels.hpp"

#include <optional>
#include <string>
#include <vector>

namespace leray {

struct InitialCondition {
    enum class Kind { taylor_green, random_band_limited };
    Kind kind = Kind::taylor_green;
    int band = 4;              // max |xi| of the random draw
    double target_norm = 1.0;  // prescribed H^{s_norm} norm
    double s_norm = 0.0;
    unsigned long seed = 1;
};

/// Divergence-free, zero-mean, Hermitian-symmetric, dealiased field.
/// random_band_limited: complex Gaussian draw on 0 < |xi| <= band, projected,
/// symmetrised and rescaled to target_norm; deterministic under seed.
SpectralField make_initial_condition(const InitialCondition& ic, const Grid& grid);

struct DtPolicy {
    enum class Kind { fixed, cfl };
    Kind kind = Kind::cfl;
    double value = 0.5;  // fixed: the time step; cfl: safety factor in (0,1]
};

struct SolverConfig {
    Grid grid;
    KernelSpec kernel;  // identity => Euler
    DtPolicy dt_policy;
    double t_end = 1.0;
    InitialCondition ic;
    int record_every = 1;
    std::vector<double> diag_s = {1.0};  // H^s norms logged per record
    double blowup_factor = 50.0;         // abort when ||v||_{H^s} exceeds
    double blowup_s = 1.0;               // factor * ||v0||_{H^s}
};

/// -P[(u.grad)v] with u = K*v, product pseudospectral with 2/3 dealiasing.
SpectralField rhs_leray_alpha(const SpectralField& v, const KernelSpec& k);
/// Same with u = v.
SpectralField rhs_euler(const SpectralField& v);

/// One classical RK4 step of the projected system.
SpectralField step(const SpectralField& state, double dt, const KernelSpec& k);

/// Spectral pressure recovery -lap p = div[(u.grad)v]; diagnostic only, the
/// integrator never uses it. Returns the scalar coefficient vector.
Eigen::VectorXcd pressure_from_velocity(const SpectralField& v, const KernelSpec& k);

struct DiagnosticsRecord {
    double t;
    double l2_energy;  // 0.5 ||v||_{L2}^2
    std::vector<std::pair<double, double>> hs_norms;  // (s, ||v||_{H^s})
    double max_velocity;
    double div_residual;
};

struct Trajectory {
    enum class Status { completed, blowup, cfl_failure };
    Status status = Status::completed;
    std::string message;
    std::vector<double> times;             // one per recorded snapshot
    std::vector<SpectralField> snapshots;  // recorded every record_every steps
    std::vector<DiagnosticsRecord> diagnostics;
    const SpectralField& final_state() const { return snapshots.back(); }
};

/// Advance to t_end. Records diagnostics and snapshots every record_every
/// steps (plus the initial and final states). Aborts with Status::blowup if
/// ||v||_{H^{blowup_s}} exceeds blowup_factor times its initial value or the
/// state turns non-finite; fixed dt beyond the RK4 stability bound aborts
/// with Status::cfl_failure.
Trajectory simulate(const SolverConfig& cfg);
Trajectory simulate(const SolverConfig& cfg, const SpectralField& v0);

/// CSV columns: t, l2_energy, hs_norm_<s>..., max_velocity, div_residual.
void write_diagnostics_csv(const Trajectory& traj, const std::string& path);

}  // namespace leray
