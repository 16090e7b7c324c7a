#pragma once

#include <Eigen/Dense>

namespace pltk::detail {

/// Number of eigenvalues of the symmetric matrix M strictly below x, from
/// the inertia of a Bunch-Kaufman factorization of M - xI.
Eigen::Index count_below(const Eigen::MatrixXd& M, double x);

}  // namespace pltk::detail
