#include "leray/kernels.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace leray {

std::string to_string(KernelKind k) {
    switch (k) {
        case KernelKind::helmholtz: return "helmholtz";
        case KernelKind::gaussian: return "gaussian";
        case KernelKind::sharp_cutoff: return "sharp_cutoff";
        case KernelKind::identity: return "identity";
    }
    return "unknown";
}

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "helmholtz") return KernelKind::helmholtz;
    if (name == "gaussian") return KernelKind::gaussian;
    if (name == "sharp_cutoff") return KernelKind::sharp_cutoff;
    if (name == "identity") return KernelKind::identity;
    throw std::invalid_argument("unknown kernel kind: " + name);
}

double kernel_multiplier(const KernelSpec& k, double ksq) {
    switch (k.kind) {
        case KernelKind::helmholtz:
            return 1.0 / (1.0 + k.alpha * k.alpha * ksq);
        case KernelKind::gaussian:
            return std::exp(-0.5 * k.alpha * k.alpha * ksq);
        case KernelKind::sharp_cutoff:
            return (ksq <= 1.0 / (k.alpha * k.alpha)) ? 1.0 : 0.0;
        case KernelKind::identity:
            return 1.0;
    }
    return 1.0;
}

Eigen::ArrayXd kernel_multipliers(const KernelSpec& k, const Grid& grid) {
    Eigen::ArrayXd m(grid.modes());
    const auto& k2 = grid.ksq();
    for (Eigen::Index i = 0; i < grid.modes(); ++i)
        m(i) = kernel_multiplier(k, k2(i));
    return m;
}

SpectralField apply_kernel(const KernelSpec& k, const SpectralField& v) {
    if (k.kind == KernelKind::identity) return v;
    if (!(k.alpha > 0))
        throw std::invalid_argument("apply_kernel: alpha must be positive");
    SpectralField out = v;
    const Eigen::ArrayXd m = kernel_multipliers(k, v.grid);
    for (Eigen::Index c = 0; c < out.coeffs.cols(); ++c)
        out.coeffs.col(c).array() *= m.cast<Complex>();
    return out;
}

LemmaNormCheck check_lemma_norms(const KernelSpec& k, const SpectralField& v,
                                 double s) {
    if (k.kind != KernelKind::helmholtz)
        throw std::invalid_argument("check_lemma_norms: helmholtz kernel required");
    if (!(k.alpha > 0 && k.alpha <= 1.0))
        throw std::invalid_argument("check_lemma_norms: alpha must be in (0,1]");
    const SpectralField u = apply_kernel(k, v);
    const double nv = sobolev_norm(v, s);
    LemmaNormCheck c;
    c.lhs_s = sobolev_norm(u, s);
    c.lhs_s1 = sobolev_norm(u, s + 1.0);
    c.lhs_s2 = sobolev_norm(u, s + 2.0);
    c.rhs_s = nv;
    c.rhs_s1 = nv / k.alpha;
    c.rhs_s2 = nv / (k.alpha * k.alpha);
    const double slack = 1e-12;
    auto holds = [slack](double lhs, double rhs) {
        return lhs <= rhs * (1.0 + slack) + std::numeric_limits<double>::min();
    };
    c.pass_s = holds(c.lhs_s, c.rhs_s);
    c.pass_s1 = holds(c.lhs_s1, c.rhs_s1);
    c.pass_s2 = holds(c.lhs_s2, c.rhs_s2);
    return c;
}

KernelCertificate certify_kernel(KernelKind kind,
                                 const std::vector<SpectralField>& probes,
                                 const std::vector<double>& l_list,
                                 const std::vector<double>& alpha_seq,
                                 double s) {
    if (probes.empty())
        throw std::invalid_argument("certify_kernel: empty probe set");
    for (std::size_t i = 1; i < alpha_seq.size(); ++i)
        if (!(alpha_seq[i] < alpha_seq[i - 1]))
            throw std::invalid_argument(
                "certify_kernel: alpha_seq must be strictly decreasing");

    KernelCertificate cert;
    cert.kind = kind;
    cert.s = s;
    cert.passed = true;

    std::vector<double> prev_errors;
    for (double alpha : alpha_seq) {
        const KernelSpec spec{kind, alpha};
        double approx_err = 0.0;
        for (const auto& phi : probes)
            approx_err = std::max(approx_err,
                                  sobolev_norm(apply_kernel(spec, phi) - phi, s));
        for (double l : l_list) {
            double bound = 0.0;
            for (const auto& phi : probes) {
                const double denom = sobolev_norm(phi, l);
                if (denom > 0)
                    bound = std::max(bound,
                                     sobolev_norm(apply_kernel(spec, phi), l) / denom);
            }
            cert.rows.push_back({alpha, l, bound, approx_err});
            if (bound > 1.0 + 1e-12) cert.passed = false;
        }
        if (!prev_errors.empty() && approx_err > prev_errors.back() * (1.0 + 1e-12))
            cert.passed = false;
        prev_errors.push_back(approx_err);
    }
    return cert;
}

void write_certificate_csv(const KernelCertificate& cert,
                           const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_certificate_csv: cannot open " + path);
    os << "kind,alpha,l,bound_constant,approx_error_s\n";
    os.precision(17);
    for (const auto& r : cert.rows)
        os << to_string(cert.kind) << ',' << r.alpha << ',' << r.l << ','
           << r.bound_constant << ',' << r.approx_error_s << '\n';
}

}  // namespace leray
