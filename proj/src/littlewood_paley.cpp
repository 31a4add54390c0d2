#include "leray/littlewood_paley.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace leray {

namespace {

double cinf_step(double t) {  // 0 for t<=0, 1 for t>=1, C-infinity
    auto f = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
    const double a = f(t), b = f(1.0 - t);
    return a / (a + b);
}

// radial cap: 1 on |xi| <= 1/2, 0 on |xi| >= 1
double chi(double rho) { return 1.0 - cinf_step(2.0 * rho - 1.0); }

}  // namespace

DyadicDecomposition decompose(const SpectralField& f) {
    const Grid& grid = f.grid;
    const double kmax = std::sqrt(grid.ksq().maxCoeff());

    // enough blocks that the telescoping sum reaches chi == 1 at every mode
    int j_top = 0;
    while (std::ldexp(0.5, j_top + 1) < kmax) ++j_top;
    ++j_top;

    const int nblocks = j_top + 2;  // j = -1 .. j_top
    DyadicDecomposition dec;
    dec.j_min = -1;
    dec.windows.resize(grid.modes(), nblocks);

    for (Eigen::Index i = 0; i < grid.modes(); ++i) {
        const double rho = std::sqrt(grid.ksq()(i));
        dec.windows(i, 0) = chi(rho);
        for (int j = 0; j <= j_top; ++j)
            dec.windows(i, j + 1) =
                chi(rho / std::ldexp(1.0, j + 1)) - chi(rho / std::ldexp(1.0, j));
    }

    dec.blocks.reserve(nblocks);
    for (int b = 0; b < nblocks; ++b) {
        SpectralField blk = f;
        for (Eigen::Index c = 0; c < blk.coeffs.cols(); ++c)
            blk.coeffs.col(c).array() *= dec.windows.col(b).cast<Complex>();
        dec.blocks.push_back(std::move(blk));
    }
    return dec;
}

double besov_norm(const SpectralField& f, double sigma, int r) {
    if (r != 1 && r != 2 && r != besov_inf)
        throw std::invalid_argument("besov_norm: r must be 1, 2 or besov_inf");
    const DyadicDecomposition dec = decompose(f);
    double acc = 0.0;
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        const double term =
            std::pow(2.0, dec.j_of(b) * sigma) * sobolev_norm(dec.blocks[b], 0.0);
        if (r == 1)
            acc += term;
        else if (r == 2)
            acc += term * term;
        else
            acc = std::max(acc, term);
    }
    return r == 2 ? std::sqrt(acc) : acc;
}

void write_block_csv(const DyadicDecomposition& dec, double sigma,
                     const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_block_csv: cannot open " + path);
    os << "j,block_l2,weighted\n";
    os.precision(17);
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
        const double l2 = sobolev_norm(dec.blocks[b], 0.0);
        os << dec.j_of(b) << ',' << l2 << ','
           << std::pow(2.0, dec.j_of(b) * sigma) * l2 << '\n';
    }
}

}  // namespace leray
