#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "leray/littlewood_paley.hpp"

#include "test_helpers.hpp"

#include <cstdio>
#include <fstream>

using namespace leray;
using namespace leray::test;

TEST_CASE("window partition of unity") {
    const Grid g = Grid::make(2, 32);
    const SpectralField f = random_field(g, 10, 1);
    const DyadicDecomposition dec = decompose(f);

    SUBCASE("windows sum to one at every mode") {
        const Eigen::ArrayXd sums = dec.windows.rowwise().sum();
        CHECK((sums - 1.0).abs().maxCoeff() < 1e-12);
    }

    SUBCASE("supports are confined to the dyadic annuli") {
        for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
            const int j = dec.j_of(b);
            for (Eigen::Index i = 0; i < g.modes(); ++i) {
                if (dec.windows(i, b) == 0.0) continue;
                const double k = std::sqrt(g.ksq()(i));
                if (j == -1) {
                    CHECK(k <= 1.0 * (1 + 1e-12));
                } else {
                    CHECK(k > std::pow(2.0, j - 1) * (1 - 1e-12));
                    CHECK(k < std::pow(2.0, j + 1) * (1 + 1e-12));
                }
            }
        }
    }

    SUBCASE("blocks reassemble the field exactly") {
        SpectralField sum = zero_field(g);
        for (const auto& b : dec.blocks) sum = sum + b;
        CHECK(rel_l2_diff(f, sum) < 1e-13);
    }

    SUBCASE("mode |xi| = 3 appears in blocks 1 and 2 only") {
        SpectralField probe = zero_field(g);
        probe.coeffs(g.index_of({3, 0, 0}), 0) = 1.0;
        const DyadicDecomposition pd = decompose(probe);
        for (std::size_t b = 0; b < pd.blocks.size(); ++b) {
            const double mass = sobolev_norm(pd.blocks[b], 0.0);
            const int j = pd.j_of(b);
            if (j == 1 || j == 2)
                CHECK(mass > 1e-6);
            else
                CHECK(mass == 0.0);
        }
    }

    SUBCASE("non-adjacent blocks are orthogonal") {
        for (std::size_t a = 0; a < dec.blocks.size(); ++a)
            for (std::size_t b = a + 2; b < dec.blocks.size(); ++b) {
                const double inner = std::abs(
                    (dec.blocks[a].coeffs.conjugate() * dec.blocks[b].coeffs)
                        .sum()
                        .real());
                CHECK(inner == 0.0);
            }
    }
}

TEST_CASE("besov_norm") {
    const Grid g = Grid::make(2, 32);
    const SpectralField f = random_field(g, 10, 3);

    SUBCASE("l^r nesting: B_{2,1} >= B_{2,2} >= B_{2,inf}") {
        for (double sigma : {-1.0, 0.0, 1.5}) {
            const double b1 = besov_norm(f, sigma, 1);
            const double b2 = besov_norm(f, sigma, 2);
            const double binf = besov_norm(f, sigma, besov_inf);
            CHECK(b1 >= b2 * (1 - 1e-14));
            CHECK(b2 >= binf * (1 - 1e-14));
        }
    }

    SUBCASE("sigma = 0, r = 2 comparable to the L2 norm") {
        // almost-orthogonality of the smooth blocks: ratio within [1/3, 3]
        for (unsigned long seed = 0; seed < 20; ++seed) {
            const SpectralField v = random_field(g, 10, 50 + seed);
            const double ratio = besov_norm(v, 0.0, 2) / sobolev_norm(v, 0.0);
            CHECK(ratio > 1.0 / 3.0);
            CHECK(ratio < 3.0);
        }
    }

    SUBCASE("B^sigma_{2,2} comparable to H^sigma") {
        for (double sigma : {0.5, 1.0, 2.0}) {
            const double b = besov_norm(f, sigma, 2);
            const double h = sobolev_norm(f, sigma);
            const double ratio = b / h;
            // (1+|xi|^2)^{sigma/2} vs 2^{j sigma} on the annulus: bounded both ways
            CHECK(ratio > 0.05);
            CHECK(ratio < 20.0);
        }
    }

    SUBCASE("single mode recovers its dyadic weight") {
        SpectralField probe = zero_field(g);
        probe.coeffs(g.index_of({0, 1, 0}), 0) = 1.0;  // |xi| = 1: cap + block 0
        const double b1 = besov_norm(probe, 0.0, 1);
        const double binf = besov_norm(probe, 0.0, besov_inf);
        CHECK(b1 >= binf);
        CHECK(binf <= 1.0 + 1e-12);
        // r = 2 norm equals the root sum of squared window weights at the mode
        const DyadicDecomposition pd = decompose(probe);
        const Eigen::Index idx = g.index_of({0, 1, 0});
        const double expected = std::sqrt(pd.windows.row(idx).square().sum());
        CHECK(besov_norm(probe, 0.0, 2) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("invalid r rejected") {
        CHECK_THROWS_AS(besov_norm(f, 0.0, 3), std::invalid_argument);
        CHECK_THROWS_AS(besov_norm(f, 0.0, 0), std::invalid_argument);
    }
}

TEST_CASE("block CSV") {
    const Grid g = Grid::make(2, 32);
    const SpectralField f = random_field(g, 10, 4);
    const DyadicDecomposition dec = decompose(f);
    const std::string path = "blocks_test.csv";
    write_block_csv(dec, 1.0, path);
    std::ifstream is(path);
    std::string header;
    std::getline(is, header);
    CHECK(header == "j,block_l2,weighted");
    std::size_t lines = 0;
    std::string line;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == dec.blocks.size());
    std::remove(path.c_str());
}
