#pragma once

// Singular value decompositions through LAPACK's QR-iteration driver.
// Eigen 3.4.0's divide-and-conquer SVD can mis-deflate the heavily
// repeated singular values of boundary matrices, so nothing here uses it.

#include <Eigen/Dense>

namespace pltk::detail {

/// Descending singular values.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

/// Orthonormal basis of the null space of m, treating singular values at
/// or below rel_tol * largest as zero.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol);

}  // namespace pltk::detail
