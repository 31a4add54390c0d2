#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>

namespace leray {

using Complex = std::complex<double>;

/// Fourier coefficients, one column per velocity component, rows in FFT order.
using SpectralData = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
/// Collocation-point samples, one column per component.
using RealData = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Periodic torus [0,length)^dim sampled on n points per axis, together with
/// the wavenumber lattice, the 2/3-rule dealiasing mask and cached FFT plans.
///
/// Grid is a cheap shared-ownership value; copies refer to the same lattice
/// tables and transform plans. All members are immutable after construction.
class Grid {
public:
    Grid() = default;
    static Grid make(int dim, int n, double length = two_pi);

    int dim() const;
    int n() const;
    double length() const;
    double spacing() const;             // length / n
    Eigen::Index modes() const;         // n^dim

    /// Physical wavenumber per mode and axis (modes x dim). With the default
    /// period 2*pi these are the integer lattice frequencies in FFT order.
    const Eigen::ArrayXXd& wavenumbers() const;
    /// |xi|^2 per mode.
    const Eigen::ArrayXd& ksq() const;
    /// 1.0 where |xi_i| <= floor(n/3) on every axis, 0.0 otherwise.
    const Eigen::ArrayXd& dealias_mask() const;
    int dealias_bound() const;
    /// Largest |xi| on an axis after dealiasing, in physical units.
    double max_wavenumber() const;

    /// Flat index of -xi for the mode with flat index idx.
    Eigen::Index conjugate_index(Eigen::Index idx) const;
    /// Flat index of an integer frequency vector (components in [-n/2, n/2)).
    Eigen::Index index_of(const Eigen::Vector3i& freq) const;

    /// Physical samples -> Fourier coefficients (normalised so that
    /// f(x) = sum_xi fhat(xi) exp(i xi.x)). Column-wise over components.
    void forward(const RealData& phys, SpectralData& spec) const;
    /// Fourier coefficients -> physical samples (real part).
    void backward(const SpectralData& spec, RealData& phys) const;

    bool compatible(const Grid& other) const;
    explicit operator bool() const { return impl_ != nullptr; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

}  // namespace leray
