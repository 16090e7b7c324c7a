#pragma once

// Symmetric eigensolvers, the zero threshold and spectral summaries.

#include "pltk/complex.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pltk {

template <class S>
using DenseMatrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

enum class Precision { f32, f64 };

enum class SpectrumKind { full, k_smallest, k_largest };

/// Ascending eigenvalues of a d x d symmetric matrix. Extremal solves hold
/// k <= d values; `fell_back` records that they came from the full solver.
struct Spectrum {
    std::vector<double> eigenvalues;
    Index source_size = 0;
    SpectrumKind kind = SpectrumKind::full;
    bool fell_back = false;
    std::string note;

    [[nodiscard]] bool complete() const noexcept {
        return static_cast<Index>(eigenvalues.size()) == source_size;
    }
};

enum class EigMode { full, k_smallest, k_largest };

struct EigOptions {
    EigMode mode = EigMode::full;
    int k = 10;
    double tol = 1e-6;
    /// Krylov basis size; 0 picks max(2k+1, 6k), capped below d.
    int subspace_dim = 0;
    int max_iter = 1000;
    std::uint64_t seed = 0x5eed;
};

struct ZeroPolicy {
    double abs_tol = 1e-8;
    double rel_tol = 1e-10;

    static ZeroPolicy for_precision(Precision p) {
        return p == Precision::f64 ? ZeroPolicy{} : ZeroPolicy{1e-4, 1e-6};
    }
};

/// All eigenvalues, ascending. A matrix whose off-diagonal entries are all
/// exactly zero returns its sorted diagonal. Throws std::invalid_argument
/// unless M equals its transpose exactly.
template <class S>
Spectrum eig_full_symmetric(const DenseMatrix<S>& M);

/// k smallest (shift-invert) or k largest eigenvalues of a symmetric PSD
/// matrix. Every result is checked by a Sylvester inertia count; anything
/// unconverged or uncertified is recomputed with the full solver and
/// flagged through Spectrum::fell_back.
template <class S>
Spectrum eig_extremal(const DenseMatrix<S>& M, const EigOptions& opts, const ZeroPolicy& zero = {});

/// Dispatches on opts.mode.
template <class S>
Spectrum eig(const DenseMatrix<S>& M, const EigOptions& opts, const ZeroPolicy& zero = {});

/// abs_tol + rel_tol * max(0, largest eigenvalue).
double zero_threshold(const Spectrum& s, const ZeroPolicy& p);

/// Number of eigenvalues below tau. Throws std::invalid_argument for a
/// partial spectrum that might hide further near-zero values.
Index persistent_betti(const Spectrum& s, double tau);

/// Smallest eigenvalue >= tau, if any.
std::optional<double> spectral_gap(const Spectrum& s, double tau);

/// Persistent Betti number from boundary ranks alone:
///   nullity(B_n^a) - [rank(B_{n+1}^b) - rank(rows of B_{n+1}^b outside K^a)].
/// Integer complexes use exact arithmetic modulo a large prime.
Index persistent_betti_rank_oracle(const FilteredComplex& fc, int n, Filtration a, Filtration b);
Index persistent_betti_rank_oracle(const RealFilteredComplex& fc, int n, Filtration a, Filtration b);

enum class Stat { min_nonzero, max, mean_nonzero, betti, count };

/// Throws std::invalid_argument for an unknown name.
Stat parse_stat(std::string_view name);
std::string_view stat_name(Stat s);

/// Throws std::domain_error when the statistic is undefined (no nonzero
/// eigenvalues for min_nonzero/mean_nonzero, empty spectrum for max).
double summarize(const Spectrum& s, Stat stat, double tau);

/// Exact rank of an integer matrix (computed modulo 2^61 - 1).
Index exact_rank(const SignMatrix& m);

/// Numerical rank with singular values above rel_tol * largest.
Index numeric_rank(const RealSparse& m, double rel_tol = 1e-9);

}  // namespace pltk
