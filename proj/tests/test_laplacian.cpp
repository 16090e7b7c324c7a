#include "support.hpp"

#include "pltk/laplacian.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace pltk;
using namespace pltk::test;

namespace {

double max_diff(const MatrixXd& x, const MatrixXd& y) {
    REQUIRE(x.rows() == y.rows());
    REQUIRE(x.cols() == y.cols());
    return x.size() == 0 ? 0.0 : (x - y).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("square complex Laplacians match the printed matrices") {
    const auto fc = square_complex();
    CHECK(persistent_laplacian(fc, 0, 3, 3) == square_delta0());
    CHECK(persistent_laplacian(fc, 1, 3, 3) == square_delta1());

    const MatrixXd d1 = dense(fc.boundary(1));
    const MatrixXd d2 = dense(fc.boundary(2));
    CHECK(down_laplacian(fc, 1, 3) == d1.transpose() * d1);
    CHECK(up_laplacian_schur(fc, 1, 3, 3) == d2 * d2.transpose());
    CHECK(down_laplacian(fc, 0, 3).isZero(0.0));
    CHECK(up_laplacian_schur(fc, 2, 3, 3).isZero(0.0));
    CHECK(persistent_laplacian(fc, 2, 3, 3) == d2.transpose() * d2);
}

TEST_CASE("filled triangle persistent Laplacians by hand") {
    const auto fc = filled_triangle();
    MatrixXd down(3, 3);
    down << 2, 1, -1, 1, 2, 1, -1, 1, 2;
    CHECK(persistent_laplacian(fc, 1, 0.2, 0.2) == down);
    CHECK(persistent_laplacian(fc, 1, 0.2, 1.4) == 3.0 * MatrixXd::Identity(3, 3));

    // Only [0,1] exists at 0.1; no 2-chain of the full complex has its
    // boundary there, so the up part vanishes.
    CHECK(persistent_laplacian(fc, 1, 0.1, 1.4) == (MatrixXd(1, 1) << 2).finished());

    MatrixXd up0(3, 3);
    up0 << 1, -1, 0, -1, 1, 0, 0, 0, 0;
    CHECK(persistent_laplacian(fc, 0, 0.0, 0.1) == up0);
    CHECK(persistent_laplacian(fc, 0, -1.0, 1.4).size() == 0);
}

TEST_CASE("a must not exceed b") {
    const auto fc = square_complex();
    CHECK_THROWS_AS((void)persistent_laplacian(fc, 1, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)up_laplacian_schur(fc, 1, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)up_laplacian_oracle(fc, 1, 2, 1), std::invalid_argument);
}

TEST_CASE("Schur complement agrees with the projection oracle") {
    const auto corpus = rips_corpus(12);
    for (const auto& sample : corpus) {
        const auto& fc = sample.complex;
        const auto grid = fc.filtration_grid();
        for (int n = 0; n < fc.max_dim(); ++n) {
            for (std::size_t i = 0; i < grid.size(); i += 4) {
                for (std::size_t j = i; j < grid.size(); j += 5) {
                    CHECK(max_diff(up_laplacian_schur(fc, n, grid[i], grid[j]),
                                   up_laplacian_oracle(fc, n, grid[i], grid[j])) <= 1e-8);
                }
            }
        }
    }
}

TEST_CASE("persistent Laplacian at a = b is the combinatorial Laplacian") {
    for (const auto& sample : rips_corpus(10)) {
        const auto& fc = sample.complex;
        for (int n = 0; n <= fc.max_dim(); ++n) {
            for (const double a : fc.filtration_grid()) {
                CHECK(max_diff(persistent_laplacian(fc, n, a, a), sample.reference.laplacian_at(n, a)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("single precision follows double precision") {
    const auto sample = rips_corpus(9).back();
    const auto& fc = sample.complex;
    const auto grid = fc.filtration_grid();
    const double a = grid[grid.size() / 3], b = grid[2 * grid.size() / 3];
    for (int n = 0; n <= fc.max_dim(); ++n) {
        const MatrixXd x = persistent_laplacian<float>(fc, n, a, b).cast<double>();
        CHECK(max_diff(x, persistent_laplacian(fc, n, a, b)) <= 1e-3);
    }
}

TEST_CASE("up-Laplacian plug-in replaces the Schur complement") {
    const auto fc = square_complex();
    int calls = 0;
    UpLaplacianFn<double> projection = [&](const Eigen::SparseMatrix<double>& bb, Index rows_a) {
        ++calls;
        return schur_up_laplacian<double>(bb, rows_a);
    };
    CHECK(persistent_laplacian(fc, 1, 2, 3, projection) == persistent_laplacian(fc, 1, 2, 3));
    CHECK(calls == 1);

    UpLaplacianFn<double> wrong = [](const Eigen::SparseMatrix<double>&, Index) { return MatrixXd(1, 1); };
    CHECK_THROWS_AS((void)persistent_laplacian(fc, 1, 3, 3, wrong), std::logic_error);
}

TEST_CASE("Gram spectra through the smaller side") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const MatrixXd b = random_sign_matrix(rng, 3 + t, 25 - t, 0.3);
        const auto s = flipped_gram_spectrum<double>(b);
        CHECK(s.source_size == b.cols());
        CHECK(max_abs_diff(s.eigenvalues, sorted_eigenvalues(b.transpose() * b)) <= 1e-9);
    }
}

TEST_CASE("top-dimension flip semantics") {
    const auto fc = square_complex();
    const auto s = top_dim_spectrum_flipped(fc, 2, 3, 3);
    CHECK(s.eigenvalues == std::vector<double>{3});
    CHECK_THROWS_AS((void)top_dim_spectrum_flipped(fc, 1, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)top_dim_spectrum_flipped(fc, 2, 2, 2), std::domain_error);

    // At scale 2 the edges are the top cells of the subcomplex.
    const auto edges = top_dim_spectrum_flipped(fc, 1, 2, 2);
    CHECK(edges.eigenvalues.size() == 5);
    CHECK(max_abs_diff(edges.eigenvalues, sorted_eigenvalues(down_laplacian(fc, 1, 2))) <= 1e-12);

    const auto points = top_dim_spectrum_flipped(filled_triangle(), 0, 0, 0);
    CHECK(points.eigenvalues == std::vector<double>{0, 0, 0});
}

TEST_CASE("harmonic reduction on the square complex") {
    const MatrixXd a = harmonic_reduction<double>(square_delta1(), square_harmonic_vector());
    CHECK(a.rows() == 4);
    CHECK(a == a.transpose());
    CHECK(max_abs_diff(sorted_eigenvalues(a), {2, 3, 4, 4}) <= 1e-10);

    // A cycle that is not harmonic is not in the kernel.
    CHECK_THROWS_AS((void)harmonic_reduction<double>(square_delta1(), square_homology_cycle()),
                    std::invalid_argument);
    MatrixXd twice(5, 2);
    twice << square_harmonic_vector(), 2 * square_harmonic_vector();
    CHECK_THROWS_AS((void)harmonic_reduction<double>(square_delta1(), twice), std::invalid_argument);
    CHECK_THROWS_AS((void)harmonic_reduction<double>(square_delta1(), MatrixXd::Ones(4, 1)),
                    std::invalid_argument);

    const MatrixXd none = harmonic_reduction<double>(square_delta0(), MatrixXd(4, 0));
    CHECK(max_abs_diff(sorted_eigenvalues(none), sorted_eigenvalues(square_delta0())) <= 1e-12);
}

TEST_CASE("harmonic reduction of random semidefinite matrices") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 10; ++t) {
        const auto sample = random_psd(rng, 12 + t, 1 + t % 4);
        const MatrixXd a = harmonic_reduction<double>(sample.matrix, sample.kernel);
        const auto full = sorted_eigenvalues(sample.matrix);
        const std::vector<double> tail(full.begin() + sample.nullity, full.end());
        CHECK(max_abs_diff(sorted_eigenvalues(a), tail) <= 1e-8);

        const Eigen::MatrixXf af = harmonic_reduction<float>(sample.matrix.cast<float>(), sample.kernel.cast<float>());
        CHECK(max_abs_diff(sorted_eigenvalues(af.cast<double>()), tail) <= 1e-2 * (1 + tail.back()));
    }
}

TEST_CASE("kernel oracle finds the harmonic vector") {
    const MatrixXd k = kernel_basis_oracle<double>(square_delta1());
    REQUIRE(k.cols() == 1);
    const VectorXd h = square_harmonic_vector().normalized();
    CHECK(std::abs(std::abs(k.col(0).dot(h)) - 1.0) <= 1e-10);
    CHECK(kernel_basis_oracle<double>(square_delta0()).cols() == 1);
    CHECK(kernel_basis_oracle<double>(MatrixXd::Identity(3, 3)).cols() == 0);
}
