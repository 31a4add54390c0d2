#include "leray/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leray {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string get(const ConfigMap& cfg, const std::string& key,
                const std::string& fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

std::string require(const ConfigMap& cfg, const std::string& key) {
    const auto it = cfg.find(key);
    if (it == cfg.end())
        throw std::invalid_argument("config: missing required key '" + key + "'");
    return it->second;
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::invalid_argument("config: bad number for '" + key + "': " + v);
    }
}

std::vector<double> to_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, key));
    }
    if (out.empty())
        throw std::invalid_argument("config: empty list for '" + key + "'");
    return out;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: empty key or value on line " +
                                        std::to_string(lineno));
        out[key] = value;
    }
    return out;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

SolverConfig solver_config_from(const ConfigMap& cfg) {
    SolverConfig sc;
    const int dim = static_cast<int>(to_double(require(cfg, "dim"), "dim"));
    const int n = static_cast<int>(to_double(require(cfg, "n"), "n"));
    const double length = to_double(get(cfg, "length", "6.283185307179586476925286766559"), "length");
    sc.grid = Grid::make(dim, n, length);

    sc.kernel.kind = kernel_kind_from_string(get(cfg, "kernel", "identity"));
    sc.kernel.alpha = to_double(get(cfg, "alpha", "1.0"), "alpha");

    if (cfg.count("dt") && cfg.count("cfl"))
        throw std::invalid_argument("config: set either 'dt' or 'cfl', not both");
    if (cfg.count("dt"))
        sc.dt_policy = {DtPolicy::Kind::fixed, to_double(cfg.at("dt"), "dt")};
    else
        sc.dt_policy = {DtPolicy::Kind::cfl, to_double(get(cfg, "cfl", "0.5"), "cfl")};

    sc.t_end = to_double(get(cfg, "t_end", "1.0"), "t_end");

    const std::string ic = get(cfg, "ic", "taylor_green");
    if (ic == "taylor_green")
        sc.ic.kind = InitialCondition::Kind::taylor_green;
    else if (ic == "random_band_limited")
        sc.ic.kind = InitialCondition::Kind::random_band_limited;
    else
        throw std::invalid_argument("config: unknown ic '" + ic + "'");
    sc.ic.band = static_cast<int>(to_double(get(cfg, "band", "4"), "band"));
    sc.ic.target_norm = to_double(get(cfg, "target_norm", "0"), "target_norm");
    sc.ic.s_norm = to_double(get(cfg, "s_norm", "0"), "s_norm");
    sc.ic.seed = static_cast<unsigned long>(to_double(get(cfg, "seed", "1"), "seed"));

    sc.record_every =
        static_cast<int>(to_double(get(cfg, "record_every", "1"), "record_every"));
    if (cfg.count("diag_s")) sc.diag_s = to_list(cfg.at("diag_s"), "diag_s");
    sc.blowup_factor = to_double(get(cfg, "blowup_factor", "50"), "blowup_factor");
    sc.blowup_s = to_double(get(cfg, "blowup_s", "1"), "blowup_s");
    return sc;
}

ExperimentConfig experiment_config_from(const ConfigMap& cfg) {
    ExperimentConfig ec;
    ec.base = solver_config_from(cfg);
    ec.alpha_list = to_list(require(cfg, "alpha_list"), "alpha_list");
    ec.s = to_double(require(cfg, "s"), "s");
    if (cfg.count("s_prime_list"))
        ec.s_prime_list = to_list(cfg.at("s_prime_list"), "s_prime_list");
    ec.t_eval = to_double(get(cfg, "t_eval", std::to_string(ec.base.t_end)), "t_eval");
    if (cfg.count("kernel_kinds")) {
        ec.kernel_kinds.clear();
        std::stringstream ss(cfg.at("kernel_kinds"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) ec.kernel_kinds.push_back(kernel_kind_from_string(item));
        }
    }
    ec.same_ic_for_all = get(cfg, "same_ic_for_all", "true") != "false";
    ec.ic_perturbation =
        to_double(get(cfg, "ic_perturbation", "0"), "ic_perturbation");
    return ec;
}

std::vector<Eigen::Vector3d> displacement_list_from(const ConfigMap& cfg) {
    const int count = static_cast<int>(to_double(get(cfg, "y_count", "8"), "y_count"));
    const double y_min = to_double(require(cfg, "y_min"), "y_min");
    const double y_max = to_double(require(cfg, "y_max"), "y_max");
    if (count < 2 || !(y_min > 0) || !(y_max > y_min))
        throw std::invalid_argument("config: need y_count >= 2, 0 < y_min < y_max");
    std::vector<Eigen::Vector3d> out;
    for (int i = 0; i < count; ++i) {
        const double r =
            y_min * std::pow(y_max / y_min, double(i) / double(count - 1));
        out.push_back(Eigen::Vector3d(r, 0.0, 0.0));
    }
    return out;
}

SubBox sub_box_from(const ConfigMap& cfg, const Grid& grid) {
    if (cfg.count("box_margin")) {
        const double margin = to_double(cfg.at("box_margin"), "box_margin");
        if (margin == 0.0) return full_box(grid);
        return centered_box(grid, margin);
    }
    return full_box(grid);
}

}  // namespace leray
