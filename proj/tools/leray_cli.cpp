// Command-line front end: simulation, mollification, Littlewood-Paley
// diagnostics and the convergence / corollary / structure experiment
// harnesses. Exit code 0 iff every enabled assertion passed.

#include "leray/config.hpp"
#include "leray/littlewood_paley.hpp"
#include "leray/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace leray;

namespace {

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const SolverConfig cfg = solver_config_from(parse_config_file(config_path));
    const Trajectory traj = simulate(cfg);
    fs::create_directories(out_dir);
    write_diagnostics_csv(traj, out_dir + "/diagnostics.csv");
    save_checkpoint(traj.snapshots.front(), out_dir + "/initial.lasf");
    save_checkpoint(traj.snapshots.back(), out_dir + "/final.lasf");
    if (traj.status != Trajectory::Status::completed) {
        std::cerr << "simulate: aborted: " << traj.message << "\n";
        return 1;
    }
    std::cout << "simulate: completed, " << traj.diagnostics.size()
              << " records written to " << out_dir << "\n";
    return 0;
}

int cmd_converge(const std::string& config_path, const std::string& out_dir,
                 double slope_tol) {
    const ExperimentConfig cfg = experiment_config_from(parse_config_file(config_path));
    const RateExperimentOutput out = run_rate_experiment(cfg);
    emit_report(out, out_dir);
    bool ok = out.failures.empty();
    for (const auto& fit : out.fits) {
        if (fit.all_zero) {
            std::cout << "s'=" << fit.s_prime << ": all errors zero, fit skipped\n";
            continue;
        }
        const bool pass = fit.fit_valid && fit.monotone &&
                          fit.iota_hat >= fit.iota_predicted - slope_tol;
        std::cout << "s'=" << fit.s_prime << ": iota_hat=" << fit.iota_hat
                  << " predicted=" << fit.iota_predicted
                  << (fit.monotone ? "" : " [not monotone]")
                  << (pass ? " PASS" : " FAIL") << "\n";
        ok = ok && pass;
    }
    return ok ? 0 : 1;
}

int cmd_corollary(const std::string& config_path, const std::string& out_dir) {
    const ExperimentConfig cfg = experiment_config_from(parse_config_file(config_path));
    const CorollaryReport rep = run_corollary_experiment(cfg);
    emit_report(rep, out_dir);
    std::cout << "corollary: ratio ceiling " << rep.ratio_ceiling << ", spread "
              << rep.ratio_spread << (rep.bounded ? " PASS" : " FAIL") << "\n";
    return rep.bounded && rep.failures.empty() ? 0 : 1;
}

int cmd_structure(const std::string& config_path, const std::string& out_dir) {
    const ConfigMap raw = parse_config_file(config_path);
    const ExperimentConfig cfg = experiment_config_from(raw);
    const auto y_list = displacement_list_from(raw);
    const SubBox box = sub_box_from(raw, cfg.base.grid);
    const StructureReport rep = run_structure_experiment(cfg, y_list, box);
    emit_report(rep, out_dir);
    if (rep.joint_valid)
        std::cout << "structure: joint gamma_hat=" << rep.joint_fit.gamma_hat
                  << " residual=" << rep.joint_fit.residual << "\n";
    std::cout << "structure: surrogate ratio spread=" << rep.surrogate_spread
              << "\n";
    return rep.failures.empty() ? 0 : 1;
}

int cmd_mollify(const std::string& in_path, double delta, double s,
                const std::vector<double>& l_list, const std::string& out_dir) {
    const SpectralField v0 = load_checkpoint(in_path);
    const MollifierResult res = frequency_cutoff(v0, delta, s, l_list);
    fs::create_directories(out_dir);
    save_checkpoint(res.field, out_dir + "/mollified.lasf");
    std::ofstream os(out_dir + "/mollify.csv");
    os << "quantity,lhs,rhs\n";
    os.precision(17);
    os << "hs," << res.hs_lhs << ',' << res.hs_rhs << '\n';
    os << "hs_plus_1," << res.hs1_lhs << ',' << res.hs1_rhs << '\n';
    for (const auto& row : res.diff_budget)
        os << "diff_l_" << row.l << ',' << row.lhs << ',' << row.rhs << '\n';
    std::cout << "mollify: budget " << (res.passed ? "PASS" : "FAIL") << "\n";
    return res.passed ? 0 : 1;
}

int cmd_lp_analyze(const std::string& in_path, double sigma,
                   const std::string& out_path) {
    const SpectralField f = load_checkpoint(in_path);
    write_block_csv(decompose(f), sigma, out_path);
    std::cout << "lp-analyze: B^sigma_{2,1}=" << besov_norm(f, sigma, 1)
              << " B^sigma_{2,2}=" << besov_norm(f, sigma, 2)
              << " B^sigma_{2,inf}=" << besov_norm(f, sigma, besov_inf) << "\n";
    return 0;
}

int cmd_certify(const std::string& config_path, const std::string& out_path) {
    const ConfigMap raw = parse_config_file(config_path);
    const ExperimentConfig cfg = experiment_config_from(raw);
    std::vector<SpectralField> probes;
    for (int i = 0; i < 8; ++i) {
        InitialCondition ic = cfg.base.ic;
        ic.kind = InitialCondition::Kind::random_band_limited;
        ic.seed = cfg.base.ic.seed + i;
        probes.push_back(make_initial_condition(ic, cfg.base.grid));
    }
    bool ok = true;
    std::ofstream os(out_path);
    os << "kind,alpha,l,bound_constant,approx_error_s\n";
    os.precision(17);
    for (KernelKind kind : cfg.kernel_kinds) {
        if (kind == KernelKind::identity) continue;
        const KernelCertificate cert = certify_kernel(
            kind, probes, cfg.s_prime_list, cfg.alpha_list, cfg.s);
        for (const auto& r : cert.rows)
            os << to_string(kind) << ',' << r.alpha << ',' << r.l << ','
               << r.bound_constant << ',' << r.approx_error_s << '\n';
        std::cout << "certify " << to_string(kind) << ": "
                  << (cert.passed ? "PASS" : "FAIL") << "\n";
        ok = ok && cert.passed;
    }
    return ok ? 0 : 1;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir) {
    const std::string rate_csv = in_dir + "/rate.csv";
    std::ifstream is(rate_csv);
    if (!is) {
        std::cerr << "report: no rate.csv under " << in_dir << "\n";
        return 1;
    }
    fs::create_directories(out_dir);
    std::string line;
    std::getline(is, line);  // header
    struct Row { double sp, alpha, err, iota, pred; };
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() >= 6)
            rows.push_back({vals[0], vals[1], vals[2], vals[3], vals[4]});
    }
    std::vector<double> sprimes;
    for (const auto& r : rows)
        if (std::find(sprimes.begin(), sprimes.end(), r.sp) == sprimes.end())
            sprimes.push_back(r.sp);
    for (double sp : sprimes) {
        LogLogPlot plot;
        std::ostringstream title;
        double iota = 0, pred = 0;
        for (const auto& r : rows)
            if (r.sp == sp && r.err > 0) {
                plot.points.emplace_back(r.alpha, r.err);
                iota = r.iota;
                pred = r.pred;
            }
        if (plot.points.empty()) continue;
        title << "H^" << sp << " error vs alpha (predicted " << pred << ")";
        plot.title = title.str();
        plot.has_fit = true;
        plot.fit_slope = iota;
        plot.fit_intercept = std::log(plot.points.front().second) -
                             iota * std::log(plot.points.front().first);
        plot.has_guide = true;
        plot.guide_slope = pred;
        std::ostringstream name;
        name << out_dir << "/rate_sprime_" << sp << ".svg";
        write_loglog_svg(plot, name.str());
    }
    std::cout << "report: wrote " << sprimes.size() << " plots to " << out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inviscid Leray-alpha pseudospectral solver and verification harness"};
    app.require_subcommand(1);

    std::string config_path, in_path, out = "out";
    double slope_tol = 0.4, delta = 0.5, s = 3.0, sigma = 0.0;
    std::vector<double> l_list = {0.0, 1.0, 2.0};

    auto* sim = app.add_subcommand("simulate", "Run one trajectory");
    sim->add_option("--config", config_path, "config file")->required();
    sim->add_option("--out", out, "output directory");

    auto* conv = app.add_subcommand("converge", "Theorem-rate harness");
    conv->add_option("--config", config_path)->required();
    conv->add_option("--out", out);
    conv->add_option("--slope-tol", slope_tol, "allowed slope deficit");

    auto* cor = app.add_subcommand("corollary", "General-kernel error/driver table");
    cor->add_option("--config", config_path)->required();
    cor->add_option("--out", out);

    auto* str = app.add_subcommand("structure", "Structure-function campaign");
    str->add_option("--config", config_path)->required();
    str->add_option("--out", out);

    auto* mol = app.add_subcommand("mollify", "Frequency-cutoff norm budget");
    mol->add_option("--in", in_path, "input checkpoint (.lasf)")->required();
    mol->add_option("--delta", delta)->required();
    mol->add_option("--s", s, "regularity of the budget");
    mol->add_option("--l", l_list, "difference-norm indices");
    mol->add_option("--out", out);

    auto* lp = app.add_subcommand("lp-analyze", "Dyadic block energies");
    lp->add_option("--in", in_path, "input checkpoint (.lasf)")->required();
    lp->add_option("--sigma", sigma);
    std::string lp_out = "blocks.csv";
    lp->add_option("--out", lp_out);

    auto* cert = app.add_subcommand("certify", "Kernel hypothesis audit");
    cert->add_option("--config", config_path)->required();
    std::string cert_out = "certificates.csv";
    cert->add_option("--out", cert_out);

    auto* rep = app.add_subcommand("report", "Re-plot stored fit tables");
    std::string rep_in;
    rep->add_option("--in", rep_in, "directory with rate.csv")->required();
    rep->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out);
        if (conv->parsed()) return cmd_converge(config_path, out, slope_tol);
        if (cor->parsed()) return cmd_corollary(config_path, out);
        if (str->parsed()) return cmd_structure(config_path, out);
        if (mol->parsed()) return cmd_mollify(in_path, delta, s, l_list, out);
        if (lp->parsed()) return cmd_lp_analyze(in_path, sigma, lp_out);
        if (cert->parsed()) return cmd_certify(config_path, cert_out);
        if (rep->parsed()) return cmd_report(rep_in, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
