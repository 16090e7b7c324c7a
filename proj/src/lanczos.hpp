#pragma once

#include "pltk/spectra.hpp"

#include <string>
#include <vector>

namespace pltk::detail {

struct ExtremalOutcome {
    /// Ascending Rayleigh quotients of M at the accepted Ritz vectors.
    std::vector<double> values;
    bool ok = false;
    int restarts = 0;
    std::string reason;
};

/// Thick-restart (Krylov-Schur) Lanczos with full reorthogonalization and
/// locking. Smallest mode iterates with (M + shift I)^{-1}; after k values
/// are locked one more deflated run checks for missed copies.
ExtremalOutcome lanczos_extremal(const Eigen::MatrixXd& M, int k, bool smallest, int subspace_dim,
                                 int max_iter, double tol, double shift, std::uint64_t seed);

}  // namespace pltk::detail
