#pragma once

#include "leray/spectral_field.hpp"

#include <string>
#include <vector>

namespace leray {

/// Sharp frequency cutoff of the initial data with its norm budget: the
/// filtered field keeps modes |xi| <= 1/delta, and the observed values of
///   ||v0_d||_{H^s}     vs ||v0||_{H^s}
///   ||v0_d||_{H^{s+1}} vs ||v0||_{H^s} / delta
///   ||v0_d - v0||_{H^l} vs delta^{s-l} ||v0||_{H^s}   for each requested l
/// are recorded alongside pass flags at 1e-12 relative slack.
struct MollifierResult {
    double delta;
    SpectralField field;
    double s;
    double hs_lhs, hs_rhs;
    double hs1_lhs, hs1_rhs;
    struct DiffRow { double l, lhs, rhs; };
    std::vector<DiffRow> diff_budget;
    bool passed;
};

MollifierResult frequency_cutoff(const SpectralField& v0, double delta, double s,
                                 const std::vector<double>& l_list);

enum class AdvectionEstimate { est1, est0, est2, est4 };

struct ProbeResult {
    double lhs;
    double rhs;  // right-hand side without the existential constant
};

/// Evaluates one of the advection inequalities on the discrete grid:
///   est1: ||(u.grad)v||_{H^s} vs ||u||_{H^s}||v||_{H^s} + ||u||_Linf ||v||_{H^{s+1}}
///   est0: |<(u.grad)v, v>_{H^s}| vs ||grad u||_{H^s} ||v||_{H^s}^2
///   est2: |<(u.grad)v, v>_{H^s}| vs ||u||_{H^s} ||v||_{H^s}^2
///   est4: |<(u.grad)v, v>_{H^s}| vs (||u||_{H^l}||v||_{H^s} + ||v||_{H^l}||u||_{H^s}) ||v||_{H^s}
/// Parameter ranges: est1/est2 need s > d/2+1, est0 needs s > d/2,
/// est4 needs s >= 0 and l > d/2+1. l is ignored except for est4.
ProbeResult advection_inequality_probe(AdvectionEstimate which,
                                       const SpectralField& u,
                                       const SpectralField& v, double s,
                                       double l = 0.0);

/// Axis-aligned sub-box of the torus, coordinates in [0, length).
/// margin is the guaranteed clearance for displacements.
struct SubBox {
    Eigen::Vector3d lo = Eigen::Vector3d::Zero();
    Eigen::Vector3d hi = Eigen::Vector3d::Zero();
    double margin = 0.0;
};

SubBox full_box(const Grid& grid);
/// Centered box leaving `margin` clearance on every side.
SubBox centered_box(const Grid& grid, double margin);

struct StructureFunctionSample {
    Eigen::Vector3d y = Eigen::Vector3d::Zero();
    double s2 = 0.0;     // time-integrated second-order increment
    double t_span = 0.0;
    SubBox box;
};

/// Integral over the box and trapezoid rule in time of
/// |v(x+y,t) - v(x,t)|^2; the shifted field is evaluated by exact spectral
/// phase shifts, so a full-period displacement gives exactly zero.
StructureFunctionSample second_order_structure(
    const std::vector<SpectralField>& snapshots, const std::vector<double>& times,
    const SubBox& box, const Eigen::Vector3d& y);

struct ScalingFit {
    double gamma_hat;
    double E_hat;
    double residual;  // RMS of log-residuals
    double y_min, y_max;
    int n_samples;
};

/// Least-squares line in (log|y|, log s2); slope/2 is the scaling exponent.
ScalingFit fit_scaling_exponent(const std::vector<StructureFunctionSample>& samples,
                                double y_min, double y_max);

/// Radial annulus bump j(z) = c exp(-1/(1-(2|z|-3)^2)) on 1 < |z| < 2, with c
/// fixed by unit integral. Acts through its Fourier transform jhat(r |xi|).
class BandMollifier {
public:
    static BandMollifier make(int dim);
    int dim() const { return dim_; }
    /// Physical-space profile j(|z|).
    double profile(double rho) const;
    /// Radial Fourier transform jhat(k); jhat(0) = 1.
    double fourier(double k) const;
    /// Residual of the unit-integral quadrature check.
    double quadrature_residual() const { return quad_residual_; }

private:
    int dim_ = 2;
    double norm_c_ = 1.0;
    double quad_residual_ = 0.0;
};

/// f_r as the multiplier jhat(r|xi|). Requires 0 < 2r < length/2.
SpectralField band_mollify(const SpectralField& f, const BandMollifier& m, double r);

void write_structure_csv(const std::vector<StructureFunctionSample>& samples,
                         const std::string& path);
void write_fit_csv(const std::vector<ScalingFit>& fits, const std::string& path);

}  // namespace leray
