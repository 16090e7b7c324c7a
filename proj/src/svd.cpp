#include "svd.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pltk::detail {

namespace {

struct Decomposition {
    Eigen::VectorXd s;
    Eigen::MatrixXd vt;
};

Decomposition gesvd(Eigen::MatrixXd a, bool want_v) {
    const lapack_int rows = static_cast<lapack_int>(a.rows());
    const lapack_int cols = static_cast<lapack_int>(a.cols());
    Decomposition d;
    d.s.resize(std::min(rows, cols));
    if (want_v) d.vt.resize(cols, cols);
    Eigen::VectorXd superb(std::max<Eigen::Index>(1, d.s.size()));
    double dummy = 0.0;
    const lapack_int info =
        LAPACKE_dgesvd(LAPACK_COL_MAJOR, 'N', want_v ? 'A' : 'N', rows, cols, a.data(), std::max(1, rows),
                       d.s.data(), &dummy, 1, want_v ? d.vt.data() : &dummy, want_v ? cols : 1,
                       superb.data());
    if (info != 0) throw std::runtime_error("dgesvd failed (info " + std::to_string(info) + ")");
    return d;
}

}  // namespace

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return {};
    return gesvd(m, false).s;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol) {
    const Eigen::Index cols = m.cols();
    if (m.rows() == 0 || cols == 0) return Eigen::MatrixXd::Identity(cols, cols);
    const auto d = gesvd(m, true);
    Eigen::Index rank = 0;
    while (rank < d.s.size() && d.s(rank) > rel_tol * d.s(0)) ++rank;
    return d.vt.bottomRows(cols - rank).transpose();
}

}  // namespace pltk::detail
