#include "leray/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace leray {

namespace {
// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Grid::Impl {
    int dim = 0;
    int n = 0;
    double length = two_pi;
    Eigen::Index modes = 0;
    int dealias_bound = 0;
    Eigen::ArrayXXd wavenumbers;  // modes x dim
    Eigen::ArrayXd ksq;
    Eigen::ArrayXd mask;
    fftw_plan forward_plan = nullptr;
    fftw_plan backward_plan = nullptr;

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (forward_plan) fftw_destroy_plan(forward_plan);
        if (backward_plan) fftw_destroy_plan(backward_plan);
    }
};

Grid Grid::make(int dim, int n, double length) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("Grid: dim must be 2 or 3");
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("Grid: n must be even and >= 8");
    if (!(length > 0))
        throw std::invalid_argument("Grid: length must be positive");

    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->n = n;
    impl->length = length;
    impl->modes = 1;
    for (int a = 0; a < dim; ++a) impl->modes *= n;
    impl->dealias_bound = n / 3;

    const double scale = two_pi / length;
    impl->wavenumbers.resize(impl->modes, dim);
    impl->ksq.resize(impl->modes);
    impl->mask.resize(impl->modes);

    for (Eigen::Index idx = 0; idx < impl->modes; ++idx) {
        Eigen::Index rest = idx;
        double k2 = 0.0;
        bool keep = true;
        // row-major decomposition, axis 0 slowest (matches FFTW layout below)
        for (int a = dim - 1; a >= 0; --a) {
            const int i = static_cast<int>(rest % n);
            rest /= n;
            const int freq = (i < n / 2) ? i : i - n;
            impl->wavenumbers(idx, a) = freq * scale;
            k2 += double(freq) * freq * scale * scale;
            if (std::abs(freq) > impl->dealias_bound) keep = false;
        }
        impl->ksq(idx) = k2;
        impl->mask(idx) = keep ? 1.0 : 0.0;
    }

    // Plans on a scratch buffer; executions use fftw_execute_dft on caller
    // arrays, hence FFTW_UNALIGNED.
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        std::vector<int> dims(dim, n);
        std::vector<Complex> scratch(impl->modes);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        impl->forward_plan = fftw_plan_dft(dim, dims.data(), buf, buf,
                                           FFTW_FORWARD,
                                           FFTW_ESTIMATE | FFTW_UNALIGNED);
        impl->backward_plan = fftw_plan_dft(dim, dims.data(), buf, buf,
                                            FFTW_BACKWARD,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
    }

    Grid g;
    g.impl_ = std::move(impl);
    return g;
}

int Grid::dim() const { return impl_->dim; }
int Grid::n() const { return impl_->n; }
double Grid::length() const { return impl_->length; }
double Grid::spacing() const { return impl_->length / impl_->n; }
Eigen::Index Grid::modes() const { return impl_->modes; }
const Eigen::ArrayXXd& Grid::wavenumbers() const { return impl_->wavenumbers; }
const Eigen::ArrayXd& Grid::ksq() const { return impl_->ksq; }
const Eigen::ArrayXd& Grid::dealias_mask() const { return impl_->mask; }
int Grid::dealias_bound() const { return impl_->dealias_bound; }

double Grid::max_wavenumber() const {
    return impl_->dealias_bound * two_pi / impl_->length;
}

Eigen::Index Grid::conjugate_index(Eigen::Index idx) const {
    const int n = impl_->n;
    Eigen::Index rest = idx;
    Eigen::Index out = 0;
    Eigen::Index stride = 1;
    for (int a = impl_->dim - 1; a >= 0; --a) {
        const int i = static_cast<int>(rest % n);
        rest /= n;
        out += stride * ((n - i) % n);
        stride *= n;
    }
    return out;
}

Eigen::Index Grid::index_of(const Eigen::Vector3i& freq) const {
    const int n = impl_->n;
    Eigen::Index out = 0;
    for (int a = 0; a < impl_->dim; ++a) {
        int f = freq[a];
        if (f < -n / 2 || f >= n / 2)
            throw std::out_of_range("Grid::index_of: frequency outside lattice");
        out = out * n + ((f + n) % n);
    }
    return out;
}

void Grid::forward(const RealData& phys, SpectralData& spec) const {
    if (phys.rows() != impl_->modes)
        throw std::invalid_argument("Grid::forward: shape mismatch");
    const Eigen::Index nc = phys.cols();
    spec.resize(impl_->modes, nc);
    std::vector<Complex> buf(impl_->modes);
    auto* fbuf = reinterpret_cast<fftw_complex*>(buf.data());
    const double inv = 1.0 / static_cast<double>(impl_->modes);
    for (Eigen::Index c = 0; c < nc; ++c) {
        for (Eigen::Index i = 0; i < impl_->modes; ++i) buf[i] = phys(i, c);
        fftw_execute_dft(impl_->forward_plan, fbuf, fbuf);
        for (Eigen::Index i = 0; i < impl_->modes; ++i) spec(i, c) = buf[i] * inv;
    }
}

void Grid::backward(const SpectralData& spec, RealData& phys) const {
    if (spec.rows() != impl_->modes)
        throw std::invalid_argument("Grid::backward: shape mismatch");
    const Eigen::Index nc = spec.cols();
    phys.resize(impl_->modes, nc);
    std::vector<Complex> buf(impl_->modes);
    auto* fbuf = reinterpret_cast<fftw_complex*>(buf.data());
    for (Eigen::Index c = 0; c < nc; ++c) {
        for (Eigen::Index i = 0; i < impl_->modes; ++i) buf[i] = spec(i, c);
        fftw_execute_dft(impl_->backward_plan, fbuf, fbuf);
        for (Eigen::Index i = 0; i < impl_->modes; ++i) phys(i, c) = buf[i].real();
    }
}

bool Grid::compatible(const Grid& other) const {
    return impl_ && other.impl_ && impl_->dim == other.impl_->dim &&
           impl_->n == other.impl_->n && impl_->length == other.impl_->length;
}

}  // namespace leray
