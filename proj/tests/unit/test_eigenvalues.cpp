#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fastpoisson/eigenvalues.hpp"
#include "fastpoisson/verify.hpp"

using namespace fastpoisson;

namespace {

const double pi = std::numbers::pi;
constexpr auto P = BoundaryCondition::Periodic;
constexpr auto D = BoundaryCondition::Dirichlet;
constexpr auto N = BoundaryCondition::Neumann;
constexpr auto R = GridKind::Regular;
constexpr auto S = GridKind::Staggered;

constexpr std::pair<BoundaryCondition, GridKind> kRows[] = {{P, R}, {D, R}, {D, S}, {N, R}, {N, S}};

}  // namespace

TEST_CASE("spectral eigenvalue examples") {
    CHECK(spectral_eigenvalues({8, 1.0, N, R}).values[0] == 0.0);
    CHECK(spectral_eigenvalues({8, 1.0, N, S}).values[0] == 0.0);
    CHECK(spectral_eigenvalues({8, 1.0, D, R}).values[0] == doctest::Approx(-pi * pi));
    CHECK(spectral_eigenvalues({8, 1.0, P, R}).values[7] == doctest::Approx(-4.0 * pi * pi));
    // Nyquist keeps its own wavenumber
    CHECK(spectral_eigenvalues({8, 1.0, P, R}).values[4] == doctest::Approx(-64.0 * pi * pi));
}

TEST_CASE("aliased periodic mode has the folded second derivative") {
    // e^{2 pi i 7 j / 8} sampled at x_j = j/8 equals e^{-2 pi i x}, whose second
    // derivative is -(2 pi)^2 times itself.
    const std::size_t n = 8;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) / 8.0;
        const auto sampled = std::polar(1.0, 2.0 * pi * 7.0 * static_cast<double>(j) / 8.0);
        const auto low = std::polar(1.0, -2.0 * pi * x);
        CHECK(std::abs(sampled - low) <= 1e-14);
    }
    CHECK(folded_wavenumber(7, 8) == 1);
    CHECK(folded_wavenumber(4, 8) == 4);
    CHECK(folded_wavenumber(3, 7) == 3);
    CHECK(folded_wavenumber(4, 7) == 3);
}

TEST_CASE("fd2 eigenvalue examples") {
    CHECK(fd2_eigenvalues({1, 2.0, D, R}).values[0] == doctest::Approx(-2.0));
    CHECK(fd2_eigenvalues({6, 1.0, N, S}).values[0] == 0.0);
    CHECK(fd2_eigenvalues({4, 4.0, P, R}).values[2] == doctest::Approx(-4.0));
}

TEST_CASE("fd2 tables match dense matrix spectra") {
    for (auto [bc, kind] : kRows) {
        for (std::size_t n = (bc == N && kind == R) ? 2 : 1; n <= 12; ++n) {
            const GridSpec g{n, 1.9, bc, kind};
            const Eigen::MatrixXd m = verify::fd2_matrix_1d(g);
            Eigen::EigenSolver<Eigen::MatrixXd> es(m);
            std::vector<double> dense(n), table = fd2_eigenvalues(g).values;
            for (std::size_t i = 0; i < n; ++i) dense[i] = es.eigenvalues()(static_cast<Eigen::Index>(i)).real();
            std::sort(dense.begin(), dense.end());
            std::sort(table.begin(), table.end());
            const double scale = 4.0 / (grid_dx(g) * grid_dx(g));
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(dense[i] - table[i]) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("tables are nonpositive with the expected null indices") {
    for (auto approx : {Approximation::PseudoSpectral, Approximation::FiniteDifference2}) {
        for (auto [bc, kind] : kRows) {
            const auto t = eigenvalues_for({9, 2.0, bc, kind}, approx);
            for (double v : t.values) CHECK(v <= 0.0);
            if (bc == D) {
                CHECK(t.null_indices.empty());
                for (double v : t.values) CHECK(v < 0.0);
            } else {
                CHECK(t.null_indices == std::vector<std::size_t>{0});
                CHECK(t.is_null(0));
                for (std::size_t k = 1; k < 9; ++k) CHECK(t.values[k] < 0.0);
            }
        }
    }
}

TEST_CASE("magnitude is nondecreasing in wavenumber") {
    for (auto approx : {Approximation::PseudoSpectral, Approximation::FiniteDifference2}) {
        for (auto [bc, kind] : kRows) {
            const std::size_t n = 33;
            const auto t = eigenvalues_for({n, 1.0, bc, kind}, approx);
            auto wave = [&](std::size_t k) { return bc == P ? folded_wavenumber(k, n) : k; };
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (wave(a) < wave(b)) CHECK(std::abs(t.values[a]) <= std::abs(t.values[b]));
        }
    }
}

TEST_CASE("fd2 approaches spectral for small k dx") {
    for (auto [bc, kind] : kRows) {
        const GridSpec g{512, 1.0, bc, kind};
        const auto fd = fd2_eigenvalues(g), sp = spectral_eigenvalues(g);
        const std::size_t k = bc == D ? 0 : 1;  // first nonzero wavenumber
        const double ratio = fd.values[k] / sp.values[k];
        CHECK(ratio >= 0.99);
        CHECK(ratio <= 1.0);
    }
}

TEST_CASE("combined eigenvalues") {
    const std::vector<EigenvalueTable> periodic(2, fd2_eigenvalues({4, 4.0, P, R}));
    const auto c2 = combine_eigenvalues(periodic);
    CHECK(c2.values(2, 2) == doctest::Approx(-8.0));
    CHECK(c2.null_modes == std::vector<Index3>{{0, 0, 0}});

    const std::vector<EigenvalueTable> neumann{fd2_eigenvalues({3, 1.0, N, S}), fd2_eigenvalues({4, 1.0, N, S}),
                                               fd2_eigenvalues({5, 1.0, N, S})};
    const auto c3 = combine_eigenvalues(neumann);
    CHECK(c3.values(0, 0, 0) == 0.0);
    CHECK(c3.null_modes.size() == 1);
    for_each_index(c3.values.extents(), [&](std::size_t i, std::size_t j, std::size_t k) {
        if (i + j + k > 0) CHECK(c3.values(i, j, k) < 0.0);
        CHECK(c3.values(i, j, k) ==
              doctest::Approx(neumann[0].values[i] + neumann[1].values[j] + neumann[2].values[k]));
    });

    const std::vector<EigenvalueTable> mixed{fd2_eigenvalues({4, 1.0, P, R}), fd2_eigenvalues({4, 1.0, D, S})};
    CHECK(combine_eigenvalues(mixed).null_modes.empty());
}
