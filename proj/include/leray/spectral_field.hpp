#pragma once

#include "leray/grid.hpp"

#include <string>

namespace leray {

/// Divergence-capable velocity field stored as Fourier coefficients on the
/// truncated lattice. Value type: every operation returns a new field.
struct SpectralField {
    Grid grid;
    SpectralData coeffs;   // modes x dim
    bool is_divfree = false;

    SpectralField() = default;
    SpectralField(Grid g, SpectralData c, bool divfree = false)
        : grid(std::move(g)), coeffs(std::move(c)), is_divfree(divfree) {}
};

SpectralField zero_field(const Grid& grid);

/// Coefficients -> real-space samples (modes x dim array, FFT point order).
RealData to_physical(const SpectralField& f);
/// Real samples -> coefficients; Hermitian symmetry holds by construction.
SpectralField from_physical(const RealData& samples, const Grid& grid);

/// ( sum_xi (1+|xi|^2)^s |fhat(xi)|^2 )^{1/2}. s = 0 is the L2 (Plancherel)
/// norm in the plain mode-sum normalisation.
double sobolev_norm(const SpectralField& f, double s);
/// Real part of the H^s inner product sum_xi (1+|xi|^2)^s fhat . conj(ghat).
double sobolev_inner(const SpectralField& f, const SpectralField& g, double s);

/// Mode-wise projection onto divergence-free fields; mode 0 untouched.
SpectralField leray_project(const SpectralField& f);
/// Multiplier i xi_axis.
SpectralField derivative(const SpectralField& f, int axis);
/// Multiplier -|xi|^2.
SpectralField laplacian(const SpectralField& f);
/// Apply the grid's 2/3-rule mask.
SpectralField dealias(const SpectralField& f);
/// Shift f(x) -> f(x + y) exactly (multiplier exp(i xi.y)).
SpectralField shift(const SpectralField& f, const Eigen::Vector3d& y);

/// Max over collocation points of the Euclidean vector magnitude.
double linf_norm(const SpectralField& f);
/// max_xi |xi . fhat(xi)|.
double divergence_residual(const SpectralField& f);
/// max_xi |fhat(-xi) - conj(fhat(xi))|.
double hermitian_residual(const SpectralField& f);
/// Average with the reflected conjugate; exact projection onto real fields.
SpectralField hermitian_symmetrize(const SpectralField& f);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double c, const SpectralField& f);

/// Binary checkpoint: header {magic "LASF", version, dim, n, components} as
/// u32 fields, then little-endian float64 (re, im) pairs, component-major.
void save_checkpoint(const SpectralField& f, const std::string& path);
SpectralField load_checkpoint(const std::string& path);

}  // namespace leray
