#include "leray/spectral_field.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace leray {

SpectralField zero_field(const Grid& grid) {
    SpectralField f;
    f.grid = grid;
    f.coeffs = SpectralData::Zero(grid.modes(), grid.dim());
    f.is_divfree = true;
    return f;
}

RealData to_physical(const SpectralField& f) {
    RealData out;
    f.grid.backward(f.coeffs, out);
    return out;
}

SpectralField from_physical(const RealData& samples, const Grid& grid) {
    if (samples.rows() != grid.modes() || samples.cols() != grid.dim())
        throw std::invalid_argument("from_physical: shape mismatch");
    SpectralField f;
    f.grid = grid;
    grid.forward(samples, f.coeffs);
    return f;
}

double sobolev_norm(const SpectralField& f, double s) {
    const Eigen::ArrayXd w = (1.0 + f.grid.ksq()).pow(s);
    double acc = 0.0;
    for (Eigen::Index c = 0; c < f.coeffs.cols(); ++c)
        acc += (w * f.coeffs.col(c).array().abs2()).sum();
    return std::sqrt(acc);
}

double sobolev_inner(const SpectralField& f, const SpectralField& g, double s) {
    if (!f.grid.compatible(g.grid))
        throw std::invalid_argument("sobolev_inner: grid mismatch");
    const Eigen::ArrayXd w = (1.0 + f.grid.ksq()).pow(s);
    double acc = 0.0;
    for (Eigen::Index c = 0; c < f.coeffs.cols(); ++c)
        acc += (w * (f.coeffs.col(c).array() * g.coeffs.col(c).array().conjugate())
                        .real())
                   .sum();
    return acc;
}

SpectralField leray_project(const SpectralField& f) {
    SpectralField out = f;
    const int d = f.grid.dim();
    const auto& kv = f.grid.wavenumbers();
    const auto& k2 = f.grid.ksq();
    for (Eigen::Index i = 0; i < f.grid.modes(); ++i) {
        if (k2(i) == 0.0) continue;
        Complex kdotv = 0.0;
        for (int a = 0; a < d; ++a) kdotv += kv(i, a) * out.coeffs(i, a);
        kdotv /= k2(i);
        for (int a = 0; a < d; ++a) out.coeffs(i, a) -= kv(i, a) * kdotv;
    }
    out.is_divfree = true;
    return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
    if (axis < 0 || axis >= f.grid.dim())
        throw std::out_of_range("derivative: axis out of range");
    SpectralField out = f;
    const Eigen::ArrayXd k = f.grid.wavenumbers().col(axis);
    for (Eigen::Index c = 0; c < out.coeffs.cols(); ++c)
        out.coeffs.col(c).array() *= k.cast<Complex>() * Complex(0.0, 1.0);
    out.is_divfree = false;
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out = f;
    for (Eigen::Index c = 0; c < out.coeffs.cols(); ++c)
        out.coeffs.col(c).array() *= (-f.grid.ksq()).cast<Complex>();
    return out;
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    for (Eigen::Index c = 0; c < out.coeffs.cols(); ++c)
        out.coeffs.col(c).array() *= f.grid.dealias_mask().cast<Complex>();
    return out;
}

SpectralField shift(const SpectralField& f, const Eigen::Vector3d& y) {
    SpectralField out = f;
    const int d = f.grid.dim();
    const auto& kv = f.grid.wavenumbers();
    for (Eigen::Index i = 0; i < f.grid.modes(); ++i) {
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += kv(i, a) * y[a];
        const Complex m(std::cos(phase), std::sin(phase));
        for (int a = 0; a < d; ++a) out.coeffs(i, a) *= m;
    }
    return out;
}

double linf_norm(const SpectralField& f) {
    const RealData phys = to_physical(f);
    return phys.array().square().rowwise().sum().sqrt().maxCoeff();
}

double divergence_residual(const SpectralField& f) {
    const int d = f.grid.dim();
    const auto& kv = f.grid.wavenumbers();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < f.grid.modes(); ++i) {
        Complex kdotv = 0.0;
        for (int a = 0; a < d; ++a) kdotv += kv(i, a) * f.coeffs(i, a);
        worst = std::max(worst, std::abs(kdotv));
    }
    return worst;
}

double hermitian_residual(const SpectralField& f) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < f.grid.modes(); ++i) {
        const Eigen::Index j = f.grid.conjugate_index(i);
        for (int a = 0; a < f.grid.dim(); ++a)
            worst = std::max(worst,
                             std::abs(f.coeffs(j, a) - std::conj(f.coeffs(i, a))));
    }
    return worst;
}

SpectralField hermitian_symmetrize(const SpectralField& f) {
    SpectralField out = f;
    for (Eigen::Index i = 0; i < f.grid.modes(); ++i) {
        const Eigen::Index j = f.grid.conjugate_index(i);
        if (j < i) continue;
        for (int a = 0; a < f.grid.dim(); ++a) {
            const Complex avg =
                0.5 * (f.coeffs(i, a) + std::conj(f.coeffs(j, a)));
            out.coeffs(i, a) = avg;
            out.coeffs(j, a) = std::conj(avg);
        }
    }
    return out;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    if (!a.grid.compatible(b.grid))
        throw std::invalid_argument("SpectralField +: grid mismatch");
    SpectralField out = a;
    out.coeffs += b.coeffs;
    out.is_divfree = a.is_divfree && b.is_divfree;
    return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    if (!a.grid.compatible(b.grid))
        throw std::invalid_argument("SpectralField -: grid mismatch");
    SpectralField out = a;
    out.coeffs -= b.coeffs;
    out.is_divfree = a.is_divfree && b.is_divfree;
    return out;
}

SpectralField operator*(double c, const SpectralField& f) {
    SpectralField out = f;
    out.coeffs *= c;
    return out;
}

namespace {
constexpr char kMagic[4] = {'L', 'A', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
           (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= std::uint64_t(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}
}  // namespace

void save_checkpoint(const SpectralField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_checkpoint: cannot open " + path);
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(f.grid.dim()));
    put_u32(os, static_cast<std::uint32_t>(f.grid.n()));
    put_u32(os, static_cast<std::uint32_t>(f.coeffs.cols()));
    for (Eigen::Index c = 0; c < f.coeffs.cols(); ++c)
        for (Eigen::Index i = 0; i < f.coeffs.rows(); ++i) {
            put_f64(os, f.coeffs(i, c).real());
            put_f64(os, f.coeffs(i, c).imag());
        }
    if (!os) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

SpectralField load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_checkpoint: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_checkpoint: bad magic in " + path);
    const std::uint32_t version = get_u32(is);
    if (version != kVersion)
        throw std::runtime_error("load_checkpoint: unsupported version");
    const std::uint32_t dim = get_u32(is);
    const std::uint32_t n = get_u32(is);
    const std::uint32_t comps = get_u32(is);
    Grid grid = Grid::make(static_cast<int>(dim), static_cast<int>(n));
    SpectralField f;
    f.grid = grid;
    f.coeffs.resize(grid.modes(), comps);
    for (std::uint32_t c = 0; c < comps; ++c)
        for (Eigen::Index i = 0; i < grid.modes(); ++i) {
            const double re = get_f64(is);
            const double im = get_f64(is);
            f.coeffs(i, c) = Complex(re, im);
        }
    if (!is) throw std::runtime_error("load_checkpoint: truncated file " + path);
    return f;
}

}  // namespace leray
