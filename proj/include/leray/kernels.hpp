#pragma once

#include "leray/spectral_field.hpp"

#include <string>
#include <vector>

namespace leray {

enum class KernelKind { helmholtz, gaussian, sharp_cutoff, identity };

std::string to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& name);

/// A regularising kernel as a radial Fourier multiplier family m_alpha(xi).
/// helmholtz: 1/(1+alpha^2|xi|^2); gaussian: exp(-alpha^2|xi|^2/2);
/// sharp_cutoff: indicator of |xi| <= 1/alpha; identity: 1.
struct KernelSpec {
    KernelKind kind = KernelKind::identity;
    double alpha = 1.0;
};

double kernel_multiplier(const KernelSpec& k, double ksq);
Eigen::ArrayXd kernel_multipliers(const KernelSpec& k, const Grid& grid);

/// uhat(xi) = m_alpha(xi) vhat(xi). Preserves divergence-free flag and
/// Hermitian symmetry (the multiplier is real and even).
SpectralField apply_kernel(const KernelSpec& k, const SpectralField& v);

/// Observed values of the three Helmholtz-filter norm inequalities
/// ||u||_{H^s} <= ||v||_{H^s}, ||u||_{H^{s+1}} <= ||v||_{H^s}/alpha,
/// ||u||_{H^{s+2}} <= ||v||_{H^s}/alpha^2, with u the filtered field.
struct LemmaNormCheck {
    double lhs_s, lhs_s1, lhs_s2;
    double rhs_s, rhs_s1, rhs_s2;
    bool pass_s, pass_s1, pass_s2;
    bool all() const { return pass_s && pass_s1 && pass_s2; }
};

/// Requires kind == helmholtz and alpha in (0,1]. Pass means the inequality
/// holds with relative slack >= -1e-12.
LemmaNormCheck check_lemma_norms(const KernelSpec& k, const SpectralField& v,
                                 double s);

struct KernelCertificateRow {
    double alpha;
    double l;               // Sobolev index of the boundedness check
    double bound_constant;  // ||K*phi||_{H^l} / ||phi||_{H^l}, sup over probes
    double approx_error_s;  // ||K*phi - phi||_{H^s}, sup over probes
};

/// Numerical audit of the general-kernel hypotheses: uniform H^l boundedness
/// and approximation of the identity in H^s along a decreasing alpha sequence.
struct KernelCertificate {
    KernelKind kind;
    double s;
    std::vector<KernelCertificateRow> rows;
    bool passed;
};

KernelCertificate certify_kernel(KernelKind kind,
                                 const std::vector<SpectralField>& probes,
                                 const std::vector<double>& l_list,
                                 const std::vector<double>& alpha_seq,
                                 double s);

/// CSV columns: kind, alpha, l, bound_constant, approx_error_s.
void write_certificate_csv(const KernelCertificate& cert,
                           const std::string& path);

}  // namespace leray
