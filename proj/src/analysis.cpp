#include "leray/analysis.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace leray {

MollifierResult frequency_cutoff(const SpectralField& v0, double delta, double s,
                                 const std::vector<double>& l_list) {
    if (!(delta > 0))
        throw std::invalid_argument("frequency_cutoff: delta must be positive");
    const double kcut2 = 1.0 / (delta * delta);

    MollifierResult res;
    res.delta = delta;
    res.s = s;
    res.field = v0;
    const auto& k2 = v0.grid.ksq();
    for (Eigen::Index i = 0; i < v0.grid.modes(); ++i)
        if (k2(i) > kcut2 * (1.0 + 1e-14)) res.field.coeffs.row(i).setZero();

    const double base = sobolev_norm(v0, s);
    res.hs_lhs = sobolev_norm(res.field, s);
    res.hs_rhs = base;
    res.hs1_lhs = sobolev_norm(res.field, s + 1.0);
    res.hs1_rhs = base / delta;
    const SpectralField diff = res.field - v0;
    const double slack = 1e-12;
    res.passed = res.hs_lhs <= res.hs_rhs * (1.0 + slack) &&
                 res.hs1_lhs <= res.hs1_rhs * (1.0 + slack);
    for (double l : l_list) {
        MollifierResult::DiffRow row;
        row.l = l;
        row.lhs = sobolev_norm(diff, l);
        row.rhs = std::pow(delta, s - l) * base;
        res.diff_budget.push_back(row);
        if (row.lhs > row.rhs * (1.0 + slack)) res.passed = false;
    }
    return res;
}

namespace {

// (u.grad)v without dealiasing: exact on the modes a band-limited probe can
// reach as long as the probe band stays within the alias-free range.
SpectralField advection_raw(const SpectralField& u, const SpectralField& v) {
    const Grid& grid = v.grid;
    const int d = grid.dim();
    const RealData u_phys = to_physical(u);
    RealData out = RealData::Zero(grid.modes(), d);
    for (int j = 0; j < d; ++j) {
        const RealData dv = to_physical(derivative(v, j));
        for (int c = 0; c < d; ++c)
            out.col(c).array() += u_phys.col(j).array() * dv.col(c).array();
    }
    return from_physical(out, grid);
}

double grad_sobolev_norm(const SpectralField& u, double s) {
    double acc = 0.0;
    for (int a = 0; a < u.grid.dim(); ++a) {
        const double n = sobolev_norm(derivative(u, a), s);
        acc += n * n;
    }
    return std::sqrt(acc);
}

}  // namespace

ProbeResult advection_inequality_probe(AdvectionEstimate which,
                                       const SpectralField& u,
                                       const SpectralField& v, double s,
                                       double l) {
    const double half_d = 0.5 * v.grid.dim();
    switch (which) {
        case AdvectionEstimate::est1:
        case AdvectionEstimate::est2:
            if (!(s > half_d + 1.0))
                throw std::invalid_argument("probe: needs s > d/2 + 1");
            break;
        case AdvectionEstimate::est0:
            if (!(s > half_d))
                throw std::invalid_argument("probe: needs s > d/2");
            break;
        case AdvectionEstimate::est4:
            if (!(s >= 0.0) || !(l > half_d + 1.0))
                throw std::invalid_argument("probe: needs s >= 0 and l > d/2 + 1");
            break;
    }

    const SpectralField adv = advection_raw(u, v);
    ProbeResult r{};
    switch (which) {
        case AdvectionEstimate::est1:
            r.lhs = sobolev_norm(adv, s);
            r.rhs = sobolev_norm(u, s) * sobolev_norm(v, s) +
                    linf_norm(u) * sobolev_norm(v, s + 1.0);
            break;
        case AdvectionEstimate::est0:
            r.lhs = std::abs(sobolev_inner(adv, v, s));
            r.rhs = grad_sobolev_norm(u, s) * std::pow(sobolev_norm(v, s), 2);
            break;
        case AdvectionEstimate::est2:
            r.lhs = std::abs(sobolev_inner(adv, v, s));
            r.rhs = sobolev_norm(u, s) * std::pow(sobolev_norm(v, s), 2);
            break;
        case AdvectionEstimate::est4: {
            r.lhs = std::abs(sobolev_inner(adv, v, s));
            const double us = sobolev_norm(u, s), vs = sobolev_norm(v, s);
            const double ul = sobolev_norm(u, l), vl = sobolev_norm(v, l);
            r.rhs = (ul * vs + vl * us) * vs;
            break;
        }
    }
    return r;
}

SubBox full_box(const Grid& grid) {
    SubBox b;
    for (int a = 0; a < grid.dim(); ++a) {
        b.lo[a] = 0.0;
        b.hi[a] = grid.length();
    }
    b.margin = grid.length();  // torus: full box wraps, any shift is valid
    return b;
}

SubBox centered_box(const Grid& grid, double margin) {
    if (!(margin >= 0 && 2 * margin < grid.length()))
        throw std::invalid_argument("centered_box: margin out of range");
    SubBox b;
    for (int a = 0; a < grid.dim(); ++a) {
        b.lo[a] = margin;
        b.hi[a] = grid.length() - margin;
    }
    b.margin = margin;
    return b;
}

StructureFunctionSample second_order_structure(
    const std::vector<SpectralField>& snapshots, const std::vector<double>& times,
    const SubBox& box, const Eigen::Vector3d& y) {
    if (snapshots.size() < 2 || snapshots.size() != times.size())
        throw std::invalid_argument(
            "second_order_structure: need >= 2 time-ordered snapshots");
    if (y.norm() > box.margin * (1.0 + 1e-12))
        throw std::invalid_argument(
            "second_order_structure: |y| exceeds the sub-box margin");

    const Grid& grid = snapshots.front().grid;
    const int d = grid.dim();
    const double h = grid.spacing();
    const double cellvol = std::pow(h, d);
    const int n = grid.n();

    // precompute box membership per point
    std::vector<char> inside(grid.modes());
    for (Eigen::Index idx = 0; idx < grid.modes(); ++idx) {
        Eigen::Index rest = idx;
        bool in = true;
        for (int a = d - 1; a >= 0; --a) {
            const double x = static_cast<int>(rest % n) * h;
            rest /= n;
            if (x < box.lo[a] || x >= box.hi[a]) in = false;
        }
        inside[idx] = in ? 1 : 0;
    }

    std::vector<double> integrand(snapshots.size());
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        if (k > 0 && !(times[k] >= times[k - 1]))
            throw std::invalid_argument("second_order_structure: times not ordered");
        const SpectralField diff = shift(snapshots[k], y) - snapshots[k];
        const RealData phys = to_physical(diff);
        double acc = 0.0;
        for (Eigen::Index idx = 0; idx < grid.modes(); ++idx)
            if (inside[idx]) acc += phys.row(idx).squaredNorm();
        integrand[k] = acc * cellvol;
    }

    StructureFunctionSample out;
    out.y = y;
    out.box = box;
    out.t_span = times.back() - times.front();
    double s2 = 0.0;
    for (std::size_t k = 1; k < snapshots.size(); ++k)
        s2 += 0.5 * (integrand[k] + integrand[k - 1]) * (times[k] - times[k - 1]);
    out.s2 = s2;
    return out;
}

ScalingFit fit_scaling_exponent(const std::vector<StructureFunctionSample>& samples,
                                double y_min, double y_max) {
    std::vector<std::pair<double, double>> pts;  // (log|y|, log s2)
    for (const auto& s : samples) {
        const double r = s.y.norm();
        if (r < y_min || r > y_max) continue;
        if (!(s.s2 > 0))
            throw std::invalid_argument(
                "fit_scaling_exponent: nonpositive s2 in fit window");
        pts.emplace_back(std::log(r), std::log(s.s2));
    }
    if (pts.size() < 4)
        throw std::invalid_argument("fit_scaling_exponent: need >= 4 samples");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, yv] : pts) {
        sx += x; sy += yv; sxx += x * x; sxy += x * yv;
    }
    const double m = static_cast<double>(pts.size());
    const double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-14 * m * sxx)
        throw std::invalid_argument("fit_scaling_exponent: degenerate |y| range");
    const double slope = (m * sxy - sx * sy) / det;
    const double intercept = (sy * sxx - sx * sxy) / det;

    double rss = 0.0;
    for (auto [x, yv] : pts) {
        const double r = yv - (slope * x + intercept);
        rss += r * r;
    }
    ScalingFit fit;
    fit.gamma_hat = 0.5 * slope;
    fit.E_hat = std::exp(intercept);
    fit.residual = std::sqrt(rss / m);
    fit.y_min = y_min;
    fit.y_max = y_max;
    fit.n_samples = static_cast<int>(pts.size());
    return fit;
}

namespace {

constexpr int kQuadPoints = 4096;

// composite midpoint over the annulus radius; the integrand is smooth and
// vanishes with all derivatives at both endpoints
template <typename F>
double annulus_quad(F&& f, int npts) {
    const double h = 1.0 / npts;
    double acc = 0.0;
    for (int i = 0; i < npts; ++i) {
        const double rho = 1.0 + (i + 0.5) * h;
        acc += f(rho);
    }
    return acc * h;
}

double bump(double rho) {
    const double t = 2.0 * rho - 3.0;
    const double w = 1.0 - t * t;
    return (w > 0) ? std::exp(-1.0 / w) : 0.0;
}

double solid_angle(int dim) { return dim == 2 ? two_pi : 2.0 * two_pi; }

}  // namespace

BandMollifier BandMollifier::make(int dim) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("BandMollifier: dim must be 2 or 3");
    BandMollifier m;
    m.dim_ = dim;
    const double raw = solid_angle(dim) * annulus_quad(
        [dim](double rho) { return bump(rho) * std::pow(rho, dim - 1); },
        kQuadPoints);
    m.norm_c_ = 1.0 / raw;
    const double check = solid_angle(dim) * m.norm_c_ * annulus_quad(
        [dim](double rho) { return bump(rho) * std::pow(rho, dim - 1); },
        kQuadPoints / 2 + 311);
    m.quad_residual_ = std::abs(check - 1.0);
    return m;
}

double BandMollifier::profile(double rho) const { return norm_c_ * bump(rho); }

double BandMollifier::fourier(double k) const {
    if (dim_ == 2) {
        return solid_angle(2) * norm_c_ * annulus_quad(
            [k](double rho) { return bump(rho) * std::cyl_bessel_j(0.0, k * rho) * rho; },
            kQuadPoints);
    }
    auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
    return solid_angle(3) * norm_c_ * annulus_quad(
        [k, sinc](double rho) { return bump(rho) * sinc(k * rho) * rho * rho; },
        kQuadPoints);
}

SpectralField band_mollify(const SpectralField& f, const BandMollifier& m, double r) {
    if (m.dim() != f.grid.dim())
        throw std::invalid_argument("band_mollify: dimension mismatch");
    if (!(r > 0) || !(2.0 * r < 0.5 * f.grid.length()))
        throw std::invalid_argument("band_mollify: r out of range (need 0 < 2r < "
                                    "half the box width)");
    SpectralField out = f;
    std::unordered_map<double, double> cache;
    const auto& k2 = f.grid.ksq();
    for (Eigen::Index i = 0; i < f.grid.modes(); ++i) {
        auto it = cache.find(k2(i));
        double mult;
        if (it == cache.end()) {
            mult = m.fourier(r * std::sqrt(k2(i)));
            cache.emplace(k2(i), mult);
        } else {
            mult = it->second;
        }
        out.coeffs.row(i) *= mult;
    }
    return out;
}

void write_structure_csv(const std::vector<StructureFunctionSample>& samples,
                         const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_structure_csv: cannot open " + path);
    const int d = samples.empty() ? 3
                                  : (samples.front().box.hi[2] == 0.0 ? 2 : 3);
    os << "|y|,yx,yy";
    if (d == 3) os << ",yz";
    os << ",s2,t_span,K_descriptor\n";
    os.precision(17);
    for (const auto& s : samples) {
        os << s.y.norm() << ',' << s.y[0] << ',' << s.y[1];
        if (d == 3) os << ',' << s.y[2];
        os << ',' << s.s2 << ',' << s.t_span << ",box[";
        for (int a = 0; a < d; ++a)
            os << (a ? ";" : "") << s.box.lo[a] << ":" << s.box.hi[a];
        os << "]margin=" << s.box.margin << '\n';
    }
}

void write_fit_csv(const std::vector<ScalingFit>& fits, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_fit_csv: cannot open " + path);
    os << "gamma_hat,E_hat,residual,y_min,y_max,n_samples\n";
    os.precision(17);
    for (const auto& f : fits)
        os << f.gamma_hat << ',' << f.E_hat << ',' << f.residual << ','
           << f.y_min << ',' << f.y_max << ',' << f.n_samples << '\n';
}

}  // namespace leray
