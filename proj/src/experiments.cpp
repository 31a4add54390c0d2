#include "leray/experiments.hpp"

#include "leray/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace leray {

double predicted_rate(double s, double s_prime) {
    return std::min(2.0, s - s_prime);
}

void ExperimentConfig::validate() const {
    if (!base.grid) throw std::invalid_argument("experiment: grid not set");
    if (alpha_list.empty())
        throw std::invalid_argument("experiment: alpha_list empty");
    for (std::size_t i = 1; i < alpha_list.size(); ++i)
        if (!(alpha_list[i] < alpha_list[i - 1]))
            throw std::invalid_argument(
                "experiment: alpha_list must be strictly decreasing");
    if (!(t_eval > 0) || t_eval > base.t_end + 1e-12)
        throw std::invalid_argument("experiment: need 0 < t_eval <= t_end");
    if (!(s > 0.5 * base.grid.dim() + 1.0))
        throw std::invalid_argument("experiment: theorem needs s > d/2 + 1");
    for (double sp : s_prime_list)
        if (!(sp < s))
            throw std::invalid_argument("experiment: need s' < s for a rate");
}

int worker_count() {
    if (const char* env = std::getenv("LERAY_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return 1;
}

std::uint64_t field_hash(const SpectralField& f) {
    std::uint64_t h = 14695981039346656037ull;
    const auto* bytes = reinterpret_cast<const unsigned char*>(f.coeffs.data());
    const std::size_t nbytes = sizeof(Complex) * f.coeffs.size();
    for (std::size_t i = 0; i < nbytes; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

namespace fs = std::filesystem;

// shared fixed step for the whole sweep, rounded to hit t_eval exactly
double shared_dt(const ExperimentConfig& cfg, const SpectralField& v0) {
    double dt0;
    if (cfg.base.dt_policy.kind == DtPolicy::Kind::fixed) {
        dt0 = cfg.base.dt_policy.value;
    } else {
        const double max_u = linf_norm(v0);
        dt0 = (max_u > 0)
                  ? cfg.base.dt_policy.value * cfg.base.grid.spacing() / max_u
                  : cfg.t_eval;
    }
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(cfg.t_eval / dt0 - 1e-12)));
    return cfg.t_eval / static_cast<double>(steps);
}

SpectralField advance(const ExperimentConfig& cfg, const KernelSpec& kernel,
                      const SpectralField& v0, double dt, std::string* error) {
    SolverConfig run = cfg.base;
    run.kernel = kernel;
    run.dt_policy = {DtPolicy::Kind::fixed, dt};
    run.t_end = cfg.t_eval;
    run.record_every = 0;  // initial + final only
    const Trajectory traj = simulate(run, v0);
    if (traj.status != Trajectory::Status::completed) {
        if (error) *error = traj.message;
        return zero_field(cfg.base.grid);
    }
    return traj.final_state();
}

SpectralField perturbed_ic(const ExperimentConfig& cfg, const SpectralField& v0,
                           double alpha) {
    if (cfg.same_ic_for_all || cfg.ic_perturbation == 0.0) return v0;
    InitialCondition pic = cfg.base.ic;
    pic.kind = InitialCondition::Kind::random_band_limited;
    pic.seed = cfg.base.ic.seed + 1;
    pic.target_norm = 1.0;
    pic.s_norm = cfg.s;
    const SpectralField p = make_initial_condition(pic, cfg.base.grid);
    return v0 + (cfg.ic_perturbation * alpha * alpha) * p;
}

void parallel_over(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const int nthreads = std::min<std::size_t>(workers, count);
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += nthreads) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct LineFit {
    double slope, intercept, rms;
};

LineFit fit_line(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) { sx += x; sy += y; sxx += x * x; sxy += x * y; }
    const double m = static_cast<double>(pts.size());
    const double det = m * sxx - sx * sx;
    LineFit f{};
    f.slope = (m * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    double rss = 0;
    for (auto [x, y] : pts) {
        const double r = y - (f.slope * x + f.intercept);
        rss += r * r;
    }
    f.rms = std::sqrt(rss / m);
    return f;
}

}  // namespace

RateExperimentOutput run_rate_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const SpectralField v0 = make_initial_condition(cfg.base.ic, cfg.base.grid);
    const double dt = shared_dt(cfg, v0);
    const KernelSpec euler{KernelKind::identity, 0.0};

    RateExperimentOutput out;
    out.dt = dt;

    std::string ref_err;
    const SpectralField ref = advance(cfg, euler, v0, dt, &ref_err);
    if (!ref_err.empty())
        throw std::runtime_error("rate experiment: reference aborted: " + ref_err);
    out.reference_hash = field_hash(ref);

    // dt self-error fixes the discretisation floor per s'
    std::string half_err;
    const SpectralField ref_half = advance(cfg, euler, v0, 0.5 * dt, &half_err);
    if (!half_err.empty())
        throw std::runtime_error("rate experiment: floor run aborted: " + half_err);

    const std::size_t na = cfg.alpha_list.size();
    std::vector<SpectralField> finals(na);
    std::vector<std::string> errors(na);
    const bool all_identity =
        std::all_of(cfg.kernel_kinds.begin(), cfg.kernel_kinds.end(),
                    [](KernelKind k) { return k == KernelKind::identity; });
    const KernelKind kind =
        cfg.kernel_kinds.empty() ? KernelKind::helmholtz : cfg.kernel_kinds.front();
    parallel_over(na, [&](std::size_t i) {
        const KernelSpec k{kind, cfg.alpha_list[i]};
        finals[i] = advance(cfg, k, perturbed_ic(cfg, v0, cfg.alpha_list[i]), dt,
                            &errors[i]);
    });
    for (std::size_t i = 0; i < na; ++i)
        if (!errors[i].empty())
            out.failures.push_back("alpha=" + std::to_string(cfg.alpha_list[i]) +
                                   ": " + errors[i]);

    for (double sp : cfg.s_prime_list) {
        RateFitResult fit;
        fit.s_prime = sp;
        fit.iota_predicted = predicted_rate(cfg.s, sp);
        fit.floor = sobolev_norm(ref - ref_half, sp);
        fit.alphas = cfg.alpha_list;
        for (std::size_t i = 0; i < na; ++i) {
            const double err =
                errors[i].empty() ? sobolev_norm(finals[i] - ref, sp) : 0.0;
            fit.errors.push_back(err);
            fit.below_floor.push_back(err < 10.0 * fit.floor);
        }

        if (all_identity) {
            fit.all_zero = true;
            out.fits.push_back(std::move(fit));
            continue;
        }

        fit.monotone = true;
        for (std::size_t i = 1; i < na; ++i)
            if (!(fit.errors[i] < fit.errors[i - 1])) fit.monotone = false;

        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < na; ++i)
            if (!fit.below_floor[i] && fit.errors[i] > 0 && errors[i].empty())
                pts.emplace_back(std::log(cfg.alpha_list[i]),
                                 std::log(fit.errors[i]));
        if (pts.size() >= 2) {
            const LineFit line = fit_line(pts);
            fit.iota_hat = line.slope;
            fit.residual = line.rms;
            fit.fit_valid = true;
        }
        out.fits.push_back(std::move(fit));
    }
    return out;
}

CorollaryReport run_corollary_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.kernel_kinds.empty())
        throw std::invalid_argument("corollary experiment: kernel_kinds empty");
    const SpectralField v0 = make_initial_condition(cfg.base.ic, cfg.base.grid);
    const double dt = shared_dt(cfg, v0);
    const KernelSpec euler{KernelKind::identity, 0.0};
    std::string ref_err;
    const SpectralField ref = advance(cfg, euler, v0, dt, &ref_err);
    if (!ref_err.empty())
        throw std::runtime_error("corollary experiment: reference aborted: " +
                                 ref_err);

    CorollaryReport rep;
    constexpr double eps = 1e-30;
    for (KernelKind kind : cfg.kernel_kinds) {
        const std::size_t na = cfg.alpha_list.size();
        std::vector<SpectralField> finals(na);
        std::vector<std::string> errors(na);
        parallel_over(na, [&](std::size_t i) {
            const KernelSpec k{kind, cfg.alpha_list[i]};
            finals[i] = advance(cfg, k, v0, dt, &errors[i]);
        });
        for (std::size_t i = 0; i < na; ++i) {
            if (!errors[i].empty()) {
                rep.failures.push_back(to_string(kind) + " alpha=" +
                                       std::to_string(cfg.alpha_list[i]) + ": " +
                                       errors[i]);
                continue;
            }
            for (double sp : cfg.s_prime_list) {
                CorollaryRow row;
                row.kind = kind;
                row.alpha = cfg.alpha_list[i];
                row.s_prime = sp;
                row.error = sobolev_norm(finals[i] - ref, sp);
                const KernelSpec k{kind, cfg.alpha_list[i]};
                row.driver =
                    sobolev_norm(apply_kernel(k, finals[i]) - finals[i], sp);
                row.ratio = row.error / (row.driver * cfg.t_eval + eps);
                rep.rows.push_back(row);
            }
        }
        for (double sp : cfg.s_prime_list) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& row : rep.rows)
                if (row.kind == kind && row.s_prime == sp && row.driver > 0)
                    pts.emplace_back(std::log(row.alpha), std::log(row.driver));
            if (pts.size() >= 2)
                rep.driver_slope[{kind, sp}] = fit_line(pts).slope;
        }
    }

    rep.bounded = true;
    for (KernelKind kind : cfg.kernel_kinds) {
        if (kind == KernelKind::identity) continue;
        for (double sp : cfg.s_prime_list) {
            double lo = 1e300, hi = 0.0;
            for (const auto& row : rep.rows)
                if (row.kind == kind && row.s_prime == sp && row.driver > 0) {
                    lo = std::min(lo, row.ratio);
                    hi = std::max(hi, row.ratio);
                }
            if (hi > 0) {
                rep.ratio_ceiling = std::max(rep.ratio_ceiling, hi);
                if (lo > 0)
                    rep.ratio_spread = std::max(rep.ratio_spread, hi / lo);
            }
        }
    }
    if (rep.ratio_spread > 10.0) rep.bounded = false;
    return rep;
}

StructureReport run_structure_experiment(const ExperimentConfig& cfg,
                                         const std::vector<Eigen::Vector3d>& y_list,
                                         const SubBox& box) {
    cfg.validate();
    if (y_list.empty())
        throw std::invalid_argument("structure experiment: empty displacement list");
    for (const auto& y : y_list)
        if (y.norm() > box.margin * (1.0 + 1e-12))
            throw std::invalid_argument(
                "structure experiment: displacement exceeds the box margin");

    const SpectralField v0 = make_initial_condition(cfg.base.ic, cfg.base.grid);
    const KernelKind kind =
        cfg.kernel_kinds.empty() ? KernelKind::helmholtz : cfg.kernel_kinds.front();

    StructureReport rep;
    const std::size_t na = cfg.alpha_list.size();
    std::vector<Trajectory> trajs(na);
    parallel_over(na, [&](std::size_t i) {
        SolverConfig run = cfg.base;
        run.kernel = {kind, cfg.alpha_list[i]};
        trajs[i] = simulate(run, v0);
    });

    for (const auto& y : y_list) rep.y_abs.push_back(y.norm());
    rep.sup_s2.assign(y_list.size(), 0.0);

    for (std::size_t i = 0; i < na; ++i) {
        const double alpha = cfg.alpha_list[i];
        if (trajs[i].status != Trajectory::Status::completed) {
            rep.failures.push_back("alpha=" + std::to_string(alpha) + ": " +
                                   trajs[i].message);
            continue;
        }
        std::vector<StructureFunctionSample> samples;
        for (std::size_t yi = 0; yi < y_list.size(); ++yi) {
            const auto sample = second_order_structure(
                trajs[i].snapshots, trajs[i].times, box, y_list[yi]);
            StructureRow row;
            row.alpha = alpha;
            row.y = y_list[yi];
            row.s2 = sample.s2;
            row.excluded = y_list[yi].norm() < alpha;  // eta(alpha) = alpha
            rep.rows.push_back(row);
            if (!row.excluded) {
                samples.push_back(sample);
                rep.sup_s2[yi] = std::max(rep.sup_s2[yi], sample.s2);
            }
        }
        if (samples.size() >= 4) {
            double ymin = 1e300, ymax = 0.0;
            bool positive = true;
            for (const auto& s : samples) {
                ymin = std::min(ymin, s.y.norm());
                ymax = std::max(ymax, s.y.norm());
                if (!(s.s2 > 0)) positive = false;
            }
            if (positive)
                rep.per_alpha_fits.emplace_back(
                    alpha, fit_scaling_exponent(samples, ymin, ymax));
        }

        // weak-limit surrogate at the final time
        const SpectralField& vf = trajs[i].final_state();
        const KernelSpec k{kind, alpha};
        const SpectralField u = apply_kernel(k, vf);
        SurrogateRow sr;
        sr.alpha = alpha;
        sr.lhs = alpha * alpha * sobolev_norm(laplacian(u), -1.0);
        sr.vnorm = sobolev_norm(vf, 0.0);
        sr.ratio = sr.lhs / (alpha * sr.vnorm);
        rep.surrogate.push_back(sr);
    }

    // joint fit over the sup envelope, restricted to |y| every alpha retains
    {
        const double alpha_max = cfg.alpha_list.front();
        std::vector<StructureFunctionSample> env;
        for (std::size_t yi = 0; yi < y_list.size(); ++yi) {
            if (rep.y_abs[yi] < alpha_max || !(rep.sup_s2[yi] > 0)) continue;
            StructureFunctionSample s;
            s.y = y_list[yi];
            s.s2 = rep.sup_s2[yi];
            env.push_back(s);
        }
        if (env.size() >= 4) {
            double ymin = 1e300, ymax = 0.0;
            for (const auto& s : env) {
                ymin = std::min(ymin, s.y.norm());
                ymax = std::max(ymax, s.y.norm());
            }
            rep.joint_fit = fit_scaling_exponent(env, ymin, ymax);
            rep.joint_valid = true;
        }
    }
    if (rep.joint_valid) {
        for (std::size_t yi = 0; yi < y_list.size(); ++yi)
            rep.sup_ratio.push_back(
                rep.sup_s2[yi] /
                std::pow(rep.y_abs[yi], 2.0 * rep.joint_fit.gamma_hat));
    }
    double lo = 1e300, hi = 0.0;
    for (const auto& sr : rep.surrogate) {
        lo = std::min(lo, sr.ratio);
        hi = std::max(hi, sr.ratio);
    }
    rep.surrogate_spread = (lo > 0 && hi > 0) ? hi / lo : 0.0;
    return rep;
}

void emit_report(const RateExperimentOutput& out, const std::string& out_dir) {
    if (out.fits.empty()) throw std::invalid_argument("emit_report: empty results");
    fs::create_directories(out_dir);
    std::ofstream os(out_dir + "/rate.csv");
    if (!os) throw std::runtime_error("emit_report: cannot write to " + out_dir);
    os << "s_prime,alpha,error,iota_hat,iota_predicted,residual\n";
    os.precision(17);
    for (const auto& fit : out.fits)
        for (std::size_t i = 0; i < fit.alphas.size(); ++i)
            os << fit.s_prime << ',' << fit.alphas[i] << ',' << fit.errors[i]
               << ',' << fit.iota_hat << ',' << fit.iota_predicted << ','
               << fit.residual << '\n';

    std::ofstream meta(out_dir + "/rate_meta.csv");
    meta << "dt,reference_hash,failures\n";
    meta.precision(17);
    meta << out.dt << ',' << out.reference_hash << ',' << out.failures.size()
         << '\n';

    for (const auto& fit : out.fits) {
        if (fit.all_zero) continue;
        LogLogPlot plot;
        std::ostringstream title;
        title << "H^" << fit.s_prime << " error vs alpha (predicted "
              << fit.iota_predicted << ")";
        plot.title = title.str();
        for (std::size_t i = 0; i < fit.alphas.size(); ++i)
            if (fit.errors[i] > 0)
                plot.points.emplace_back(fit.alphas[i], fit.errors[i]);
        if (plot.points.empty()) continue;
        if (fit.fit_valid) {
            plot.has_fit = true;
            plot.fit_slope = fit.iota_hat;
            plot.fit_intercept = std::log(plot.points.front().second) -
                                 fit.iota_hat * std::log(plot.points.front().first);
        }
        plot.has_guide = true;
        plot.guide_slope = fit.iota_predicted;
        std::ostringstream name;
        name << out_dir << "/rate_sprime_" << fit.s_prime << ".svg";
        write_loglog_svg(plot, name.str());
    }
}

void emit_report(const CorollaryReport& rep, const std::string& out_dir) {
    if (rep.rows.empty()) throw std::invalid_argument("emit_report: empty results");
    fs::create_directories(out_dir);
    std::ofstream os(out_dir + "/corollary.csv");
    os << "kind,alpha,s_prime,error,driver,ratio\n";
    os.precision(17);
    for (const auto& r : rep.rows)
        os << to_string(r.kind) << ',' << r.alpha << ',' << r.s_prime << ','
           << r.error << ',' << r.driver << ',' << r.ratio << '\n';
    std::ofstream sl(out_dir + "/corollary_slopes.csv");
    sl << "kind,s_prime,driver_slope\n";
    sl.precision(17);
    for (const auto& [key, slope] : rep.driver_slope)
        sl << to_string(key.first) << ',' << key.second << ',' << slope << '\n';

    for (const auto& [key, slope] : rep.driver_slope) {
        LogLogPlot plot;
        std::ostringstream title;
        title << to_string(key.first) << " driver vs alpha, s'=" << key.second;
        plot.title = title.str();
        for (const auto& r : rep.rows)
            if (r.kind == key.first && r.s_prime == key.second && r.driver > 0)
                plot.points.emplace_back(r.alpha, r.driver);
        if (plot.points.empty()) continue;
        plot.has_fit = true;
        plot.fit_slope = slope;
        plot.fit_intercept = std::log(plot.points.front().second) -
                             slope * std::log(plot.points.front().first);
        std::ostringstream name;
        name << out_dir << "/corollary_" << to_string(key.first) << "_sprime_"
             << key.second << ".svg";
        write_loglog_svg(plot, name.str());
    }
}

void emit_report(const StructureReport& rep, const std::string& out_dir) {
    if (rep.rows.empty()) throw std::invalid_argument("emit_report: empty results");
    fs::create_directories(out_dir);
    std::ofstream os(out_dir + "/structure.csv");
    os << "alpha,|y|,yx,yy,yz,s2,excluded\n";
    os.precision(17);
    for (const auto& r : rep.rows)
        os << r.alpha << ',' << r.y.norm() << ',' << r.y[0] << ',' << r.y[1]
           << ',' << r.y[2] << ',' << r.s2 << ',' << (r.excluded ? 1 : 0)
           << '\n';

    std::ofstream fit(out_dir + "/structure_fits.csv");
    fit << "label,gamma_hat,E_hat,residual,y_min,y_max,n_samples\n";
    fit.precision(17);
    for (const auto& [alpha, f] : rep.per_alpha_fits)
        fit << "alpha_" << alpha << ',' << f.gamma_hat << ',' << f.E_hat << ','
            << f.residual << ',' << f.y_min << ',' << f.y_max << ','
            << f.n_samples << '\n';
    if (rep.joint_valid)
        fit << "joint," << rep.joint_fit.gamma_hat << ',' << rep.joint_fit.E_hat
            << ',' << rep.joint_fit.residual << ',' << rep.joint_fit.y_min << ','
            << rep.joint_fit.y_max << ',' << rep.joint_fit.n_samples << '\n';

    std::ofstream sur(out_dir + "/structure_surrogate.csv");
    sur << "alpha,lhs_hminus1,vnorm_l2,ratio\n";
    sur.precision(17);
    for (const auto& r : rep.surrogate)
        sur << r.alpha << ',' << r.lhs << ',' << r.vnorm << ',' << r.ratio << '\n';

    if (rep.joint_valid) {
        LogLogPlot plot;
        plot.title = "sup_alpha s2 vs |y| (joint fit)";
        for (std::size_t yi = 0; yi < rep.y_abs.size(); ++yi)
            if (rep.sup_s2[yi] > 0)
                plot.points.emplace_back(rep.y_abs[yi], rep.sup_s2[yi]);
        if (!plot.points.empty()) {
            plot.has_fit = true;
            plot.fit_slope = 2.0 * rep.joint_fit.gamma_hat;
            plot.fit_intercept = std::log(rep.joint_fit.E_hat);
            write_loglog_svg(plot, out_dir + "/structure_joint.svg");
        }
    }
}

}  // namespace leray
