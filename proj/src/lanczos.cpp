#include "lanczos.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace pltk::detail {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Operator = std::function<VectorXd(const VectorXd&)>;

struct RitzPairs {
    VectorXd theta;
    MatrixXd vectors;
    bool converged = false;
};

// Removes the components along `locked` and the first `cols` columns of V,
// two passes of classical Gram-Schmidt. Returns the remaining norm.
double orthogonalize(VectorXd& w, const MatrixXd& locked, const MatrixXd& V, Index cols) {
    for (int pass = 0; pass < 2; ++pass) {
        if (locked.cols() > 0) w -= locked * (locked.transpose() * w);
        if (cols > 0) w -= V.leftCols(cols) * (V.leftCols(cols).transpose() * w);
    }
    return w.norm();
}

// Unit vector orthogonal to everything seen so far, or an empty vector
// once the space is exhausted.
VectorXd random_direction(Index d, const MatrixXd& locked, const MatrixXd& V, Index cols,
                          std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    for (int attempt = 0; attempt < 4; ++attempt) {
        VectorXd w(d);
        for (Index i = 0; i < d; ++i) w(i) = normal(rng);
        const double before = w.norm();
        const double after = orthogonalize(w, locked, V, cols);
        if (after > 1e-8 * before) return w / after;
    }
    return {};
}

class KrylovSchur {
public:
    KrylovSchur(const Operator& op, Index d, int want, Index m, const MatrixXd& locked, double tol,
                std::mt19937_64& rng)
        : op_(op), d_(d), want_(want), m_(m), locked_(locked), tol_(tol), rng_(rng),
          V_(d, m), W_(d, m) {}

    RitzPairs run(int& restart_budget, int& restarts) {
        VectorXd next = random_direction(d_, locked_, V_, 0, rng_);
        if (next.size() == 0) return {};
        Index j = 0;
        while (true) {
            bool exhausted = false;
            while (j < m_) {
                V_.col(j) = next;
                W_.col(j) = apply(next);
                ++j;
                if (j == m_) break;
                VectorXd w = W_.col(j - 1);
                const double scale = w.norm();
                const double rest = orthogonalize(w, locked_, V_, j);
                if (rest > 1e-10 * std::max(scale, 1e-300)) {
                    next = w / rest;
                } else {
                    // Invariant subspace reached; continue with a fresh direction.
                    next = random_direction(d_, locked_, V_, j, rng_);
                    if (next.size() == 0) {
                        exhausted = true;
                        break;
                    }
                }
            }

            MatrixXd H = V_.leftCols(j).transpose() * W_.leftCols(j);
            H = (0.5 * (H + H.transpose())).eval();
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
            const VectorXd& theta = es.eigenvalues();
            const MatrixXd& S = es.eigenvectors();

            const int w = std::min<int>(want_, static_cast<int>(j));
            const MatrixXd Sw = S.rightCols(w);
            const VectorXd tw = theta.tail(w);
            const MatrixXd U = V_.leftCols(j) * Sw;
            const MatrixXd R = W_.leftCols(j) * Sw - U * tw.asDiagonal();
            const double floor = 1e-14 * theta.cwiseAbs().maxCoeff();
            bool done = true;
            for (int i = 0; i < w; ++i) {
                if (R.col(i).norm() > tol_ * std::abs(tw(i)) + floor) done = false;
            }
            if (done || exhausted) {
                return {tw, U, done || w == want_};
            }
            if (restart_budget-- <= 0) return {tw, U, false};
            ++restarts;

            VectorXd cont = W_.col(j - 1);
            const double scale = cont.norm();
            const double rest = orthogonalize(cont, locked_, V_, j);

            const Index keep = std::min<Index>(j - 1, want_ + (m_ - want_) / 2);
            const MatrixXd Sk = S.rightCols(keep);
            const MatrixXd Vk = V_.leftCols(j) * Sk;
            const MatrixXd Wk = W_.leftCols(j) * Sk;
            V_.leftCols(keep) = Vk;
            W_.leftCols(keep) = Wk;
            j = keep;
            if (rest > 1e-10 * std::max(scale, 1e-300)) {
                next = cont / rest;
            } else {
                next = random_direction(d_, locked_, V_, j, rng_);
                if (next.size() == 0) return {tw, U, false};
            }
        }
    }

private:
    VectorXd apply(const VectorXd& x) {
        VectorXd y = op_(x);
        if (locked_.cols() > 0) y -= locked_ * (locked_.transpose() * y);
        return y;
    }

    const Operator& op_;
    Index d_;
    int want_;
    Index m_;
    const MatrixXd& locked_;
    double tol_;
    std::mt19937_64& rng_;
    MatrixXd V_;
    MatrixXd W_;
};

}  // namespace

ExtremalOutcome lanczos_extremal(const MatrixXd& M, int k, bool smallest, int subspace_dim,
                                 int max_iter, double tol, double shift, std::uint64_t seed) {
    ExtremalOutcome out;
    const Index d = M.rows();
    std::mt19937_64 rng(seed);

    Operator op;
    Eigen::LLT<MatrixXd> llt;
    Eigen::LDLT<MatrixXd> ldlt;
    if (smallest) {
        MatrixXd shifted = M;
        shifted.diagonal().array() += shift;
        llt.compute(shifted);
        if (llt.info() == Eigen::Success) {
            op = [&llt](const VectorXd& x) { return VectorXd(llt.solve(x)); };
        } else {
            ldlt.compute(shifted);
            if (ldlt.info() != Eigen::Success) {
                out.reason = "shifted matrix could not be factored";
                return out;
            }
            op = [&ldlt](const VectorXd& x) { return VectorXd(ldlt.solve(x)); };
        }
    } else {
        op = [&M](const VectorXd& x) { return VectorXd(M * x); };
    }

    MatrixXd locked(d, 0);
    std::vector<double> theta;
    int budget = max_iter;
    bool confirmed = false;

    for (int run = 0; run < 2 * k + 8 && !confirmed; ++run) {
        const auto have = static_cast<int>(theta.size());
        const int want = have < k ? k - have : 1;
        const Index room = d - locked.cols();
        if (room == 0) {
            confirmed = true;
            break;
        }
        const Index m = std::min<Index>(subspace_dim, room);
        if (m <= want && m < room) break;

        KrylovSchur ks(op, d, want, m, locked, tol, rng);
        const RitzPairs res = ks.run(budget, out.restarts);
        if (!res.converged) {
            out.reason = budget < 0 ? "no convergence within max_iter restarts"
                                    : "Krylov run stopped before convergence";
            return out;
        }

        if (have >= k) {
            std::vector<double> sorted = theta;
            std::sort(sorted.rbegin(), sorted.rend());
            const double kth = sorted[static_cast<std::size_t>(k - 1)];
            if (res.theta.maxCoeff() <= kth + tol * std::abs(kth)) {
                confirmed = true;
                break;
            }
        }
        const Index old = locked.cols();
        locked.conservativeResize(d, old + res.vectors.cols());
        for (Index c = 0; c < res.vectors.cols(); ++c) {
            VectorXd v = res.vectors.col(c);
            const double n = orthogonalize(v, locked.leftCols(old + c), MatrixXd(d, 0), 0);
            locked.col(old + c) = v / n;
            theta.push_back(res.theta(c));
        }
    }
    if (!confirmed) {
        out.reason = "deflated runs kept finding new values";
        return out;
    }

    std::vector<Index> order(theta.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index x, Index y) {
        return theta[static_cast<std::size_t>(x)] > theta[static_cast<std::size_t>(y)];
    });
    for (int i = 0; i < k && i < static_cast<int>(order.size()); ++i) {
        const VectorXd u = locked.col(order[static_cast<std::size_t>(i)]);
        out.values.push_back(u.dot(M * u));
    }
    std::sort(out.values.begin(), out.values.end());
    out.ok = static_cast<int>(out.values.size()) == k;
    if (!out.ok) out.reason = "fewer than k eigenpairs were found";
    return out;
}

}  // namespace pltk::detail
