#include "inertia.hpp"

#include "pltk/errors.hpp"

#include <lapacke.h>

#include <vector>

namespace pltk::detail {

Eigen::Index count_below(const Eigen::MatrixXd& M, double x) {
    const Eigen::Index d = M.rows();
    if (d == 0) return 0;
    Eigen::MatrixXd a = M;
    a.diagonal().array() -= x;
    std::vector<lapack_int> ipiv(static_cast<std::size_t>(d));
    const lapack_int n = static_cast<lapack_int>(d);
    const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n, ipiv.data());
    if (info < 0) throw NumericalError("dsytrf rejected argument " + std::to_string(-info));

    // By Sylvester's law M - xI and the block diagonal D share their inertia.
    Eigen::Index negative = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (ipiv[static_cast<std::size_t>(i)] > 0) {
            if (a(i, i) < 0.0) ++negative;
            continue;
        }
        const double p = a(i, i);
        const double q = a(i + 1, i);
        const double r = a(i + 1, i + 1);
        const double det = p * r - q * q;
        if (det < 0.0) {
            ++negative;
        } else if (p + r < 0.0) {
            negative += 2;
        }
        ++i;
    }
    return negative;
}

}  // namespace pltk::detail
