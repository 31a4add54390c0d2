#include "leray/dynamics.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace leray {

namespace {

// (u.grad)v computed pseudospectrally, dealiased. Inputs are assumed
// dealiased, so the product is alias-free on the retained modes.
SpectralField advection(const SpectralField& u, const SpectralField& v) {
    const Grid& grid = v.grid;
    const int d = grid.dim();
    const RealData u_phys = to_physical(u);
    RealData out = RealData::Zero(grid.modes(), d);
    for (int j = 0; j < d; ++j) {
        const RealData dv = to_physical(derivative(v, j));
        for (int c = 0; c < d; ++c)
            out.col(c).array() += u_phys.col(j).array() * dv.col(c).array();
    }
    return dealias(from_physical(out, grid));
}

void require_divfree(const SpectralField& v, const char* who) {
    if (v.is_divfree) return;
    const double scale = sobolev_norm(v, 0.0);
    if (divergence_residual(v) > 1e-10 * std::max(scale, 1.0))
        throw std::invalid_argument(std::string(who) +
                                    ": input field is not divergence-free");
}

}  // namespace

SpectralField rhs_leray_alpha(const SpectralField& v, const KernelSpec& k) {
    require_divfree(v, "rhs_leray_alpha");
    const SpectralField u = apply_kernel(k, v);
    SpectralField out = leray_project(advection(u, v));
    out.coeffs *= -1.0;
    return out;
}

SpectralField rhs_euler(const SpectralField& v) {
    return rhs_leray_alpha(v, KernelSpec{KernelKind::identity, 0.0});
}

SpectralField step(const SpectralField& state, double dt, const KernelSpec& k) {
    if (dt < 0) throw std::invalid_argument("step: dt must be nonnegative");
    if (dt == 0.0) return state;
    const SpectralField k1 = rhs_leray_alpha(state, k);
    const SpectralField k2 = rhs_leray_alpha(state + (0.5 * dt) * k1, k);
    const SpectralField k3 = rhs_leray_alpha(state + (0.5 * dt) * k2, k);
    const SpectralField k4 = rhs_leray_alpha(state + dt * k3, k);
    SpectralField out = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.is_divfree = true;
    return out;
}

Eigen::VectorXcd pressure_from_velocity(const SpectralField& v,
                                        const KernelSpec& k) {
    const SpectralField u = apply_kernel(k, v);
    const SpectralField w = advection(u, v);
    const Grid& grid = v.grid;
    const int d = grid.dim();
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(grid.modes());
    for (Eigen::Index i = 0; i < grid.modes(); ++i) {
        if (grid.ksq()(i) == 0.0) continue;
        Complex div = 0.0;
        for (int a = 0; a < d; ++a)
            div += Complex(0.0, grid.wavenumbers()(i, a)) * w.coeffs(i, a);
        p(i) = div / grid.ksq()(i);
    }
    return p;
}

SpectralField make_initial_condition(const InitialCondition& ic, const Grid& grid) {
    const int d = grid.dim();
    SpectralField f;
    if (ic.kind == InitialCondition::Kind::taylor_green) {
        RealData phys(grid.modes(), d);
        const int n = grid.n();
        const double h = grid.spacing() * two_pi / grid.length();  // unit lattice
        for (Eigen::Index idx = 0; idx < grid.modes(); ++idx) {
            Eigen::Index rest = idx;
            int coord[3] = {0, 0, 0};
            for (int a = d - 1; a >= 0; --a) {
                coord[a] = static_cast<int>(rest % n);
                rest /= n;
            }
            const double x = coord[0] * h, y = coord[1] * h;
            if (d == 2) {
                phys(idx, 0) = std::sin(x) * std::cos(y);
                phys(idx, 1) = -std::cos(x) * std::sin(y);
            } else {
                const double z = coord[2] * h;
                phys(idx, 0) = std::sin(x) * std::cos(y) * std::cos(z);
                phys(idx, 1) = -std::cos(x) * std::sin(y) * std::cos(z);
                phys(idx, 2) = 0.0;
            }
        }
        f = from_physical(phys, grid);
        f = dealias(f);
        f.is_divfree = true;
    } else {
        if (ic.band < 1 || ic.band > grid.dealias_bound())
            throw std::invalid_argument(
                "make_initial_condition: band must lie in [1, n/3]");
        std::mt19937_64 rng(ic.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        f = zero_field(grid);
        const double kband = ic.band * two_pi / grid.length();
        const double kband2 = kband * kband * (1.0 + 1e-12);
        for (Eigen::Index i = 0; i < grid.modes(); ++i) {
            const double k2 = grid.ksq()(i);
            if (k2 == 0.0 || k2 > kband2) continue;
            for (int a = 0; a < d; ++a)
                f.coeffs(i, a) = Complex(gauss(rng), gauss(rng));
        }
        f = dealias(leray_project(hermitian_symmetrize(f)));
        f.coeffs.row(0).setZero();
        f.is_divfree = true;
    }
    if (ic.target_norm > 0.0) {
        const double norm = sobolev_norm(f, ic.s_norm);
        if (norm == 0.0)
            throw std::runtime_error("make_initial_condition: zero field cannot "
                                     "be rescaled to a nonzero norm");
        f.coeffs *= ic.target_norm / norm;
    }
    return f;
}

namespace {

DiagnosticsRecord diagnose(const SpectralField& v, double t,
                           const std::vector<double>& diag_s, double max_u) {
    DiagnosticsRecord rec;
    rec.t = t;
    const double l2 = sobolev_norm(v, 0.0);
    rec.l2_energy = 0.5 * l2 * l2;
    for (double s : diag_s) rec.hs_norms.emplace_back(s, sobolev_norm(v, s));
    rec.max_velocity = max_u;
    rec.div_residual = divergence_residual(v);
    return rec;
}

}  // namespace

Trajectory simulate(const SolverConfig& cfg, const SpectralField& v0) {
    if (!(cfg.t_end >= 0))
        throw std::invalid_argument("simulate: t_end must be nonnegative");
    if (cfg.dt_policy.kind == DtPolicy::Kind::fixed && !(cfg.dt_policy.value > 0))
        throw std::invalid_argument("simulate: fixed dt must be positive");
    if (cfg.dt_policy.kind == DtPolicy::Kind::cfl &&
        !(cfg.dt_policy.value > 0 && cfg.dt_policy.value <= 1.0))
        throw std::invalid_argument("simulate: cfl safety factor must be in (0,1]");

    Trajectory traj;
    SpectralField v = v0;
    const double blowup_limit =
        cfg.blowup_factor * sobolev_norm(v, cfg.blowup_s);
    const double dx = cfg.grid.spacing();
    const double kmax = cfg.grid.max_wavenumber();

    double t = 0.0;
    long step_count = 0;
    double max_u = linf_norm(apply_kernel(cfg.kernel, v));
    traj.times.push_back(t);
    traj.snapshots.push_back(v);
    traj.diagnostics.push_back(diagnose(v, t, cfg.diag_s, max_u));

    const double t_eps = 1e-12 * std::max(cfg.t_end, 1.0);
    while (t < cfg.t_end - t_eps) {
        max_u = linf_norm(apply_kernel(cfg.kernel, v));
        double dt;
        if (cfg.dt_policy.kind == DtPolicy::Kind::fixed) {
            dt = cfg.dt_policy.value;
            // RK4 imaginary-axis stability limit ~2.83
            if (max_u > 0 && dt * kmax * max_u > 2.8) {
                traj.status = Trajectory::Status::cfl_failure;
                std::ostringstream msg;
                msg << "fixed dt " << dt << " violates stability at t=" << t
                    << " (k_max*|u|_max=" << kmax * max_u << ")";
                traj.message = msg.str();
                return traj;
            }
        } else {
            dt = (max_u > 0) ? cfg.dt_policy.value * dx / max_u
                             : cfg.t_end - t;
        }
        dt = std::min(dt, cfg.t_end - t);

        v = step(v, dt, cfg.kernel);
        t += dt;
        ++step_count;

        if (!v.coeffs.allFinite()) {
            traj.status = Trajectory::Status::blowup;
            std::ostringstream msg;
            msg << "non-finite state at t=" << t;
            traj.message = msg.str();
            return traj;
        }
        const double hs = sobolev_norm(v, cfg.blowup_s);
        if (blowup_limit > 0 && hs > blowup_limit) {
            traj.status = Trajectory::Status::blowup;
            std::ostringstream msg;
            msg << "H^" << cfg.blowup_s << " norm " << hs
                << " exceeded blow-up threshold " << blowup_limit
                << " at t=" << t;
            traj.message = msg.str();
            return traj;
        }

        const bool last = !(t < cfg.t_end - t_eps);
        if (last || (cfg.record_every > 0 && step_count % cfg.record_every == 0)) {
            traj.times.push_back(t);
            traj.snapshots.push_back(v);
            traj.diagnostics.push_back(diagnose(v, t, cfg.diag_s, max_u));
        }
    }
    traj.status = Trajectory::Status::completed;
    return traj;
}

Trajectory simulate(const SolverConfig& cfg) {
    return simulate(cfg, make_initial_condition(cfg.ic, cfg.grid));
}

void write_diagnostics_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_diagnostics_csv: cannot open " + path);
    os << "t,l2_energy";
    if (!traj.diagnostics.empty())
        for (const auto& [s, _] : traj.diagnostics.front().hs_norms)
            os << ",hs_norm_" << s;
    os << ",max_velocity,div_residual\n";
    os.precision(17);
    for (const auto& rec : traj.diagnostics) {
        os << rec.t << ',' << rec.l2_energy;
        for (const auto& [_, n] : rec.hs_norms) os << ',' << n;
        os << ',' << rec.max_velocity << ',' << rec.div_residual << '\n';
    }
}

}  // namespace leray
