#pragma once

// Down, up and persistent Laplacians of a filtered complex.
//
// Conventions: B_n has rows indexed by (n-1)-cells and columns by n-cells.
// On n-chains, down = B_n^T B_n and up = B_{n+1} B_{n+1}^T. All returned
// matrices are stored exactly symmetric.

#include "pltk/complex.hpp"
#include "pltk/spectra.hpp"

#include <functional>

namespace pltk {

/// Replaceable persistent up-Laplacian: given B_{n+1} at scale b and the
/// number of n-cells present at scale a, return the count_at(n,a)-square
/// up-Laplacian. The default is schur_up_laplacian.
template <class S>
using UpLaplacianFn =
    std::function<DenseMatrix<S>(const Eigen::SparseMatrix<S>& boundary_b, Index rows_a)>;

/// A - B D^+ C for the partition of B_{n+1}^b (B_{n+1}^b)^T at rows_a.
/// D^+ C comes from a diagonally pivoted LDL^T solve in which pivots below
/// sqrt(eps) * max pivot are treated as zero.
template <class S>
DenseMatrix<S> schur_up_laplacian(const Eigen::SparseMatrix<S>& boundary_b, Index rows_a);

/// (B_n^a)^T B_n^a; the zero matrix for n = 0.
template <class S = double, class E>
DenseMatrix<S> down_laplacian(const BasicFilteredComplex<E>& fc, int n, Filtration a);

/// Persistent up-Laplacian by the Schur complement. Zero when no
/// (n+1)-cells exist. Throws std::invalid_argument if a > b.
template <class S = double, class E>
DenseMatrix<S> up_laplacian_schur(const BasicFilteredComplex<E>& fc, int n, Filtration a, Filtration b);

/// Independent reference: with Q an orthonormal basis of the chains of
/// K^b whose boundary lies in K^a, returns (B_upper Q)(B_upper Q)^T.
template <class E>
DenseMatrix<double> up_laplacian_oracle(const BasicFilteredComplex<E>& fc, int n, Filtration a,
                                        Filtration b);

/// up + down. `up` defaults to schur_up_laplacian.
template <class S = double, class E>
DenseMatrix<S> persistent_laplacian(const BasicFilteredComplex<E>& fc, int n, Filtration a,
                                    Filtration b, const UpLaplacianFn<S>& up = {});

/// Spectrum of B^T B with c = cols(B) values, computed by the full solver
/// from whichever of B^T B and B B^T is smaller and padded with zeros.
template <class S>
Spectrum flipped_gram_spectrum(const DenseMatrix<S>& B);

/// Spectrum of the down-Laplacian at the top dimension through the smaller
/// Gram matrix. Throws std::invalid_argument if (n+1)-cells exist at b and
/// std::domain_error if there are no n-cells at a.
template <class S = double, class E>
Spectrum top_dim_spectrum_flipped(const BasicFilteredComplex<E>& fc, int n, Filtration a,
                                  Filtration b);

/// Restriction of L to the orthogonal complement of span(kernel). The
/// result is (d - beta) square and positive definite. Throws
/// std::invalid_argument if L * kernel is not small or kernel is rank
/// deficient.
template <class S>
DenseMatrix<S> harmonic_reduction(const DenseMatrix<S>& L, const DenseMatrix<S>& kernel);

/// Null-space basis of a symmetric PSD matrix from a singular value
/// decomposition, keeping directions with singular value <= tol * ||L||_2.
template <class S>
DenseMatrix<S> kernel_basis_oracle(const DenseMatrix<S>& L, double tol = 1e-9);

}  // namespace pltk
