#pragma once

#include "leray/analysis.hpp"
#include "leray/dynamics.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace leray {

/// min(2, s - s'): the proven convergence-rate exponent in H^{s'}.
double predicted_rate(double s, double s_prime);

struct ExperimentConfig {
    SolverConfig base;
    std::vector<double> alpha_list;  // strictly decreasing
    double s = 4.0;                  // regularity of the initial data
    std::vector<double> s_prime_list = {0.0};
    double t_eval = 0.5;
    std::vector<KernelKind> kernel_kinds = {KernelKind::helmholtz};
    bool same_ic_for_all = true;       // v0^alpha = v0
    double ic_perturbation = 0.0;      // scale of an O(alpha^2) IC perturbation
    void validate() const;
};

struct RateFitResult {
    double s_prime;
    std::vector<double> alphas;
    std::vector<double> errors;      // ||v^alpha(t_eval) - v(t_eval)||_{H^{s'}}
    std::vector<bool> below_floor;   // excluded: below 10x the dt self-error
    double floor = 0.0;              // dt-halving self-error in H^{s'}
    double iota_hat = 0.0;
    double iota_predicted = 0.0;
    double residual = 0.0;
    bool monotone = false;  // errors strictly decreasing along decreasing alpha
    bool fit_valid = false;
    bool all_zero = false;  // identity-kernel degenerate case, fit skipped
};

struct RateExperimentOutput {
    std::vector<RateFitResult> fits;
    std::uint64_t reference_hash = 0;  // bit-exact fingerprint of the reference
    double dt = 0.0;
    std::vector<std::string> failures;  // aborted member trajectories
};

/// Theorem-rate harness: one Euler reference, one Leray-alpha trajectory per
/// alpha on the identical grid and fixed dt, error slopes per s'.
RateExperimentOutput run_rate_experiment(const ExperimentConfig& cfg);

struct CorollaryRow {
    KernelKind kind;
    double alpha;
    double s_prime;
    double error;   // ||v^alpha - v||_{H^{s'}}(t_eval)
    double driver;  // ||K^alpha * v^alpha - v^alpha||_{H^{s'}}(t_eval)
    double ratio;   // error / (driver * t_eval + eps)
};

struct CorollaryReport {
    std::vector<CorollaryRow> rows;
    // log-log slope of the driver in alpha, per (kind, s_prime)
    std::map<std::pair<KernelKind, double>, double> driver_slope;
    double ratio_ceiling = 0.0;  // max ratio over all non-degenerate rows
    double ratio_spread = 0.0;   // max/min ratio per (kind, s'), worst case
    bool bounded = false;
    std::vector<std::string> failures;
};

CorollaryReport run_corollary_experiment(const ExperimentConfig& cfg);

struct StructureRow {
    double alpha;
    Eigen::Vector3d y;
    double s2;
    bool excluded;  // |y| < eta(alpha) = alpha
};

struct SurrogateRow {
    double alpha;
    double lhs;    // ||alpha^2 lap u^alpha||_{H^{-1}} at t_eval
    double vnorm;  // ||v^alpha||_{L2} at t_eval
    double ratio;  // lhs / (alpha * vnorm)
};

struct StructureReport {
    std::vector<StructureRow> rows;
    std::vector<std::pair<double, ScalingFit>> per_alpha_fits;
    ScalingFit joint_fit{};
    bool joint_valid = false;
    std::vector<double> y_abs;      // distinct |y| in row order per alpha
    std::vector<double> sup_s2;     // sup over alpha of s2 per |y|
    std::vector<double> sup_ratio;  // sup_s2 / |y|^{2 gamma_joint}
    std::vector<SurrogateRow> surrogate;
    double surrogate_spread = 0.0;
    std::vector<std::string> failures;
};

/// alpha-family structure-function campaign with the eta(alpha) = alpha
/// filter and the weak-limit surrogate bound audit.
StructureReport run_structure_experiment(const ExperimentConfig& cfg,
                                         const std::vector<Eigen::Vector3d>& y_list,
                                         const SubBox& box);

/// CSV tables plus one minimal SVG log-log plot per fit; deterministic.
void emit_report(const RateExperimentOutput& out, const std::string& out_dir);
void emit_report(const CorollaryReport& rep, const std::string& out_dir);
void emit_report(const StructureReport& rep, const std::string& out_dir);

/// FNV-1a over the raw coefficient bytes.
std::uint64_t field_hash(const SpectralField& f);

/// Worker count for alpha sweeps: LERAY_WORKERS, default 1.
int worker_count();

}  // namespace leray
