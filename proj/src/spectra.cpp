#include "pltk/spectra.hpp"

#include "inertia.hpp"
#include "lanczos.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pltk {

namespace {

template <class S>
void require_symmetric(const DenseMatrix<S>& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("matrix is not square");
    if (!M.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
    if ((M.array() != M.transpose().array()).any()) {
        throw std::invalid_argument("matrix is not exactly symmetric");
    }
}

Spectrum truncate(Spectrum full, int k, bool smallest) {
    const auto keep = static_cast<std::size_t>(std::min<Index>(k, full.source_size));
    auto& v = full.eigenvalues;
    if (smallest) {
        v.resize(keep);
    } else {
        v.erase(v.begin(), v.end() - static_cast<std::ptrdiff_t>(keep));
    }
    full.kind = smallest ? SpectrumKind::k_smallest : SpectrumKind::k_largest;
    return full;
}

// Accepts the k smallest candidates only if the inertia of M - xI agrees:
// every cluster of candidates holds that many eigenvalues and nothing lies
// between clusters or below the first one. The last cluster may hold more.
bool certify_smallest(const Eigen::MatrixXd& M, const std::vector<double>& vals, double tol) {
    double span = 1.0;
    for (const double v : vals) span = std::max(span, std::abs(v));
    const double delta = 0.5 * tol * span;

    std::size_t i = 0;
    Index below = 0;
    while (i < vals.size()) {
        std::size_t end = i + 1;
        while (end < vals.size() && vals[end] - vals[end - 1] <= 2.0 * delta) ++end;
        const Index lo = detail::count_below(M, vals[i] - delta);
        const Index hi = detail::count_below(M, vals[end - 1] + delta);
        const auto c = static_cast<Index>(end - i);
        if (lo != below) return false;
        if (end < vals.size() ? hi - lo != c : hi - lo < c) return false;
        below = hi;
        i = end;
    }
    return true;
}

}  // namespace

template <class S>
Spectrum eig_full_symmetric(const DenseMatrix<S>& M) {
    require_symmetric(M);
    Spectrum s;
    s.source_size = M.rows();
    s.eigenvalues.reserve(static_cast<std::size_t>(M.rows()));

    DenseMatrix<S> off = M;
    off.diagonal().setZero();
    if ((off.array() == S(0)).all()) {
        for (Index i = 0; i < M.rows(); ++i) s.eigenvalues.push_back(static_cast<double>(M(i, i)));
        std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
        return s;
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix<S>> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver failed");
    for (Index i = 0; i < M.rows(); ++i) {
        s.eigenvalues.push_back(static_cast<double>(es.eigenvalues()(i)));
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    return s;
}

template <class S>
Spectrum eig_extremal(const DenseMatrix<S>& M, const EigOptions& opts, const ZeroPolicy& zero) {
    if (opts.mode == EigMode::full) return eig_full_symmetric(M);
    require_symmetric(M);
    if (opts.k <= 0) throw std::invalid_argument("k must be positive");
    const bool smallest = opts.mode == EigMode::k_smallest;
    const Index d = M.rows();
    const int k = opts.k;

    auto fallback = [&](std::string reason) {
        Spectrum s = truncate(eig_full_symmetric(M), k, smallest);
        s.fell_back = true;
        s.note = std::move(reason);
        return s;
    };

    int m = opts.subspace_dim > 0 ? opts.subspace_dim : std::max(2 * k + 1, 6 * k);
    if (m >= d) m = static_cast<int>(d) - 1;
    if (!(k < m && m < d)) return fallback("matrix too small for k and subspace_dim");

    const Eigen::MatrixXd Md = M.template cast<double>();
    const double norm = Md.cwiseAbs().rowwise().sum().maxCoeff();
    const double shift = zero.abs_tol + zero.rel_tol * norm;
    const auto outcome = detail::lanczos_extremal(Md, k, smallest, m, opts.max_iter, opts.tol,
                                                  shift, opts.seed);
    if (!outcome.ok) return fallback(outcome.reason);

    bool certified = false;
    if (smallest) {
        certified = certify_smallest(Md, outcome.values, opts.tol);
    } else {
        std::vector<double> negated(outcome.values.rbegin(), outcome.values.rend());
        for (auto& v : negated) v = -v;
        certified = certify_smallest(-Md, negated, opts.tol);
    }
    if (!certified) return fallback("inertia count disagreed with the Krylov result");

    Spectrum s;
    s.eigenvalues = outcome.values;
    s.source_size = d;
    s.kind = smallest ? SpectrumKind::k_smallest : SpectrumKind::k_largest;
    s.note = std::to_string(outcome.restarts) + " restarts";
    return s;
}

template <class S>
Spectrum eig(const DenseMatrix<S>& M, const EigOptions& opts, const ZeroPolicy& zero) {
    return opts.mode == EigMode::full ? eig_full_symmetric(M) : eig_extremal(M, opts, zero);
}

template Spectrum eig_full_symmetric<double>(const DenseMatrix<double>&);
template Spectrum eig_full_symmetric<float>(const DenseMatrix<float>&);
template Spectrum eig_extremal<double>(const DenseMatrix<double>&, const EigOptions&, const ZeroPolicy&);
template Spectrum eig_extremal<float>(const DenseMatrix<float>&, const EigOptions&, const ZeroPolicy&);
template Spectrum eig<double>(const DenseMatrix<double>&, const EigOptions&, const ZeroPolicy&);
template Spectrum eig<float>(const DenseMatrix<float>&, const EigOptions&, const ZeroPolicy&);

double zero_threshold(const Spectrum& s, const ZeroPolicy& p) {
    double top = 0.0;
    for (const double v : s.eigenvalues) top = std::max(top, v);
    return p.abs_tol + p.rel_tol * top;
}

Index persistent_betti(const Spectrum& s, double tau) {
    const auto count = static_cast<Index>(
        std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [tau](double v) { return v < tau; }));
    if (s.complete()) return count;
    const bool covered = s.kind == SpectrumKind::k_smallest && !s.eigenvalues.empty() &&
                         s.eigenvalues.back() >= tau;
    if (!covered) {
        throw std::invalid_argument(
            "partial spectrum does not cover every eigenvalue below the zero threshold");
    }
    return count;
}

std::optional<double> spectral_gap(const Spectrum& s, double tau) {
    for (const double v : s.eigenvalues) {
        if (v >= tau) return v;
    }
    return std::nullopt;
}

Stat parse_stat(std::string_view name) {
    if (name == "min_nonzero") return Stat::min_nonzero;
    if (name == "max") return Stat::max;
    if (name == "mean_nonzero") return Stat::mean_nonzero;
    if (name == "betti") return Stat::betti;
    if (name == "count") return Stat::count;
    throw std::invalid_argument("unknown statistic \"" + std::string(name) + "\"");
}

std::string_view stat_name(Stat s) {
    switch (s) {
        case Stat::min_nonzero: return "min_nonzero";
        case Stat::max: return "max";
        case Stat::mean_nonzero: return "mean_nonzero";
        case Stat::betti: return "betti";
        case Stat::count: return "count";
    }
    return "?";
}

double summarize(const Spectrum& s, Stat stat, double tau) {
    const auto& v = s.eigenvalues;
    switch (stat) {
        case Stat::count:
            return static_cast<double>(v.size());
        case Stat::betti:
            return static_cast<double>(persistent_betti(s, tau));
        case Stat::max:
            if (v.empty()) throw std::domain_error("empty spectrum has no maximum");
            return *std::max_element(v.begin(), v.end());
        case Stat::min_nonzero: {
            const auto gap = spectral_gap(s, tau);
            if (!gap) throw std::domain_error("no nonzero eigenvalues");
            return *gap;
        }
        case Stat::mean_nonzero: {
            double sum = 0.0;
            std::size_t n = 0;
            for (const double x : v) {
                if (x >= tau) {
                    sum += x;
                    ++n;
                }
            }
            if (n == 0) throw std::domain_error("no nonzero eigenvalues");
            return sum / static_cast<double>(n);
        }
    }
    throw std::invalid_argument("unknown statistic");
}

}  // namespace pltk
