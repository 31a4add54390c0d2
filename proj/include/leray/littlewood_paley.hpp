#pragma once

#include "leray/spectral_field.hpp"

#include <string>
#include <vector>

namespace leray {

/// Nonhomogeneous dyadic blocks. Block j = -1 is the low-frequency cap
/// (support |xi| <= 1); block j >= 0 lives in the annulus
/// 2^{j-1} < |xi| < 2^{j+1}. The smooth radial windows sum to 1 at every
/// lattice mode, so the blocks sum back to the field exactly.
struct DyadicDecomposition {
    int j_min = -1;
    std::vector<SpectralField> blocks;  // index 0 is block j = -1
    Eigen::ArrayXXd windows;            // modes x blocks

    int j_of(std::size_t block_index) const {
        return j_min + static_cast<int>(block_index);
    }
};

DyadicDecomposition decompose(const SpectralField& f);

inline constexpr int besov_inf = -1;

/// l^r norm over j of 2^{j sigma} ||Delta_j f||_{L2}; r in {1, 2, besov_inf}.
double besov_norm(const SpectralField& f, double sigma, int r);

/// CSV columns: j, block_l2, weighted (2^{j sigma} block_l2).
void write_block_csv(const DyadicDecomposition& dec, double sigma,
                     const std::string& path);

}  // namespace leray
