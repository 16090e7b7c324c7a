#include "pltk/laplacian.hpp"

#include "svd.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pltk {

namespace {

template <class S>
DenseMatrix<S> symmetric(const DenseMatrix<S>& m) {
    return m.template selfadjointView<Eigen::Lower>();
}

void check_order(Filtration a, Filtration b) {
    if (a > b) {
        throw std::invalid_argument("persistent Laplacian requires a <= b (got a=" +
                                    std::to_string(a) + ", b=" + std::to_string(b) + ")");
    }
}

template <class S, class E>
Eigen::SparseMatrix<S> boundary_as(const BasicFilteredComplex<E>& fc, int n, Filtration a) {
    Eigen::SparseMatrix<S> b = fc.boundary_at(n, a).template cast<S>();
    b.makeCompressed();
    return b;
}

// Z with D Z = C for a symmetric PSD D. Pivots that are zero up to
// rounding drop out, which matches D^+ C whenever range(C) lies in range(D).
template <class S>
DenseMatrix<S> semidefinite_solve(const DenseMatrix<S>& D, const DenseMatrix<S>& C) {
    Eigen::LDLT<DenseMatrix<S>> ldlt(D);
    const auto& piv = ldlt.vectorD();
    const S top = piv.cwiseAbs().maxCoeff();
    if (top == S(0)) return DenseMatrix<S>::Zero(D.rows(), C.cols());
    const S cut = std::sqrt(std::numeric_limits<S>::epsilon()) * top;

    DenseMatrix<S> Z = ldlt.transpositionsP() * C;
    ldlt.matrixL().solveInPlace(Z);
    for (Index i = 0; i < Z.rows(); ++i) {
        if (std::abs(piv(i)) > cut) {
            Z.row(i) /= piv(i);
        } else {
            Z.row(i).setZero();
        }
    }
    ldlt.matrixU().solveInPlace(Z);
    Z = ldlt.transpositionsP().transpose() * Z;
    if (!Z.allFinite()) {
        Eigen::CompleteOrthogonalDecomposition<DenseMatrix<S>> cod(D);
        Z = cod.solve(C);
    }
    return Z;
}

}  // namespace

template <class S>
DenseMatrix<S> schur_up_laplacian(const Eigen::SparseMatrix<S>& boundary_b, Index rows_a) {
    const Index nb = boundary_b.rows();
    if (rows_a > nb) throw std::invalid_argument("rows_a exceeds the rows of B_{n+1}^b");
    const Eigen::SparseMatrix<S> product = boundary_b * boundary_b.transpose();
    const DenseMatrix<S> up(product);
    if (rows_a == nb) return symmetric(up);

    const Index tail = nb - rows_a;
    const DenseMatrix<S> Z = semidefinite_solve<S>(up.bottomRightCorner(tail, tail),
                                                   up.bottomLeftCorner(tail, rows_a));
    const DenseMatrix<S> result = up.topLeftCorner(rows_a, rows_a) - up.topRightCorner(rows_a, tail) * Z;
    return symmetric(result);
}

template <class S, class E>
DenseMatrix<S> down_laplacian(const BasicFilteredComplex<E>& fc, int n, Filtration a) {
    const Index na = fc.count_at(n, a);
    if (n == 0) return DenseMatrix<S>::Zero(na, na);
    const auto b = boundary_as<S>(fc, n, a);
    const Eigen::SparseMatrix<S> product = b.transpose() * b;
    return symmetric(DenseMatrix<S>(product));
}

template <class S, class E>
DenseMatrix<S> up_laplacian_schur(const BasicFilteredComplex<E>& fc, int n, Filtration a, Filtration b) {
    check_order(a, b);
    const Index na = fc.count_at(n, a);
    if (n == fc.max_dim()) return DenseMatrix<S>::Zero(na, na);
    return schur_up_laplacian<S>(boundary_as<S>(fc, n + 1, b), na);
}

template <class E>
DenseMatrix<double> up_laplacian_oracle(const BasicFilteredComplex<E>& fc, int n, Filtration a,
                                        Filtration b) {
    check_order(a, b);
    const Index na = fc.count_at(n, a);
    if (n == fc.max_dim()) return DenseMatrix<double>::Zero(na, na);

    const Eigen::MatrixXd bb(fc.boundary_at(n + 1, b).template cast<double>());
    const Index cols = bb.cols();
    if (cols == 0) return DenseMatrix<double>::Zero(na, na);

    const Eigen::MatrixXd q = detail::null_space(bb.bottomRows(bb.rows() - na), 1e-9);
    const Eigen::MatrixXd p = bb.topRows(na) * q;
    return symmetric<double>(p * p.transpose());
}

template <class S, class E>
DenseMatrix<S> persistent_laplacian(const BasicFilteredComplex<E>& fc, int n, Filtration a,
                                    Filtration b, const UpLaplacianFn<S>& up) {
    check_order(a, b);
    DenseMatrix<S> lap = down_laplacian<S>(fc, n, a);
    if (n == fc.max_dim()) return lap;

    const Index na = lap.rows();
    const auto bb = boundary_as<S>(fc, n + 1, b);
    const DenseMatrix<S> u = up ? up(bb, na) : schur_up_laplacian<S>(bb, na);
    if (u.rows() != na || u.cols() != na) {
        throw std::logic_error("up-Laplacian plug-in returned a matrix of the wrong size");
    }
    lap += u;
    return symmetric(lap);
}

template <class S>
Spectrum flipped_gram_spectrum(const DenseMatrix<S>& B) {
    const Index r = B.rows();
    const Index c = B.cols();
    if (c <= r) {
        const DenseMatrix<S> g = B.transpose() * B;
        return eig_full_symmetric<S>(symmetric(g));
    }
    const DenseMatrix<S> g = B * B.transpose();
    Spectrum s = eig_full_symmetric<S>(symmetric(g));
    s.eigenvalues.insert(s.eigenvalues.begin(), static_cast<std::size_t>(c - r), 0.0);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    s.source_size = c;
    return s;
}

template <class S, class E>
Spectrum top_dim_spectrum_flipped(const BasicFilteredComplex<E>& fc, int n, Filtration a,
                                  Filtration b) {
    check_order(a, b);
    const Index na = fc.count_at(n, a);
    if (n < fc.max_dim() && fc.count_at(n + 1, b) > 0) {
        throw std::invalid_argument("dimension " + std::to_string(n) +
                                    " is not the top dimension at b");
    }
    if (na == 0) throw std::domain_error("no " + std::to_string(n) + "-cells at a");
    if (n == 0) {
        Spectrum s;
        s.eigenvalues.assign(static_cast<std::size_t>(na), 0.0);
        s.source_size = na;
        return s;
    }
    const DenseMatrix<S> bd(boundary_as<S>(fc, n, a));
    return flipped_gram_spectrum<S>(bd);
}

template <class S>
DenseMatrix<S> harmonic_reduction(const DenseMatrix<S>& L, const DenseMatrix<S>& kernel) {
    const Index d = L.rows();
    if (L.cols() != d) throw std::invalid_argument("Laplacian is not square");
    const Index beta = kernel.cols();
    if (beta > 0 && kernel.rows() != d) {
        throw std::invalid_argument("kernel basis has " + std::to_string(kernel.rows()) +
                                    " rows, expected " + std::to_string(d));
    }
    if (beta > d) throw std::invalid_argument("kernel basis has more columns than rows");

    DenseMatrix<S> x = DenseMatrix<S>::Identity(d, d);
    DenseMatrix<S> n(d, 0);
    if (beta > 0) {
        Eigen::ColPivHouseholderQR<DenseMatrix<S>> qr(kernel);
        qr.setThreshold(std::sqrt(std::numeric_limits<S>::epsilon()));
        if (qr.rank() < beta) throw std::invalid_argument("kernel basis is rank deficient");
        const DenseMatrix<S> q = qr.householderQ();
        n = q.leftCols(beta);
        x = q.rightCols(d - beta);

        const S norm_l = L.cwiseAbs().rowwise().sum().maxCoeff();
        const S residual = (L * n).cwiseAbs().rowwise().sum().maxCoeff();
        if (residual > S(1e-6) * (S(1) + norm_l)) {
            throw std::invalid_argument("kernel basis is not in the null space of the Laplacian");
        }
    }

    DenseMatrix<S> s(d, d);
    s << x, n;
    const DenseMatrix<S> m = s.partialPivLu().solve(L * x);
    const DenseMatrix<S> a = m.topRows(d - beta);
    return S(0.5) * (a + a.transpose());
}

template <class S>
DenseMatrix<S> kernel_basis_oracle(const DenseMatrix<S>& L, double tol) {
    const Index d = L.rows();
    if (d == 0) return DenseMatrix<S>(0, 0);
    return detail::null_space(L.template cast<double>(), tol).template cast<S>();
}

#define PLTK_LAPLACIAN(S, E)                                                                      \
    template DenseMatrix<S> down_laplacian<S, E>(const BasicFilteredComplex<E>&, int, Filtration); \
    template DenseMatrix<S> up_laplacian_schur<S, E>(const BasicFilteredComplex<E>&, int,         \
                                                     Filtration, Filtration);                      \
    template DenseMatrix<S> persistent_laplacian<S, E>(const BasicFilteredComplex<E>&, int,       \
                                                       Filtration, Filtration,                     \
                                                       const UpLaplacianFn<S>&);                   \
    template Spectrum top_dim_spectrum_flipped<S, E>(const BasicFilteredComplex<E>&, int,         \
                                                     Filtration, Filtration);

PLTK_LAPLACIAN(double, int)
PLTK_LAPLACIAN(double, double)
PLTK_LAPLACIAN(float, int)
PLTK_LAPLACIAN(float, double)
#undef PLTK_LAPLACIAN

template DenseMatrix<double> up_laplacian_oracle<int>(const FilteredComplex&, int, Filtration, Filtration);
template DenseMatrix<double> up_laplacian_oracle<double>(const RealFilteredComplex&, int, Filtration,
                                                         Filtration);

template DenseMatrix<double> schur_up_laplacian<double>(const Eigen::SparseMatrix<double>&, Index);
template DenseMatrix<float> schur_up_laplacian<float>(const Eigen::SparseMatrix<float>&, Index);
template Spectrum flipped_gram_spectrum<double>(const DenseMatrix<double>&);
template Spectrum flipped_gram_spectrum<float>(const DenseMatrix<float>&);
template DenseMatrix<double> harmonic_reduction<double>(const DenseMatrix<double>&, const DenseMatrix<double>&);
template DenseMatrix<float> harmonic_reduction<float>(const DenseMatrix<float>&, const DenseMatrix<float>&);
template DenseMatrix<double> kernel_basis_oracle<double>(const DenseMatrix<double>&, double);
template DenseMatrix<float> kernel_basis_oracle<float>(const DenseMatrix<float>&, double);

}  // namespace pltk
