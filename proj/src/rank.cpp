#include "pltk/spectra.hpp"

#include "svd.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pltk {

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t x, std::uint64_t y) {
    const unsigned __int128 p = static_cast<unsigned __int128>(x) * y;
    std::uint64_t r = static_cast<std::uint64_t>(p & kPrime) + static_cast<std::uint64_t>(p >> 61);
    if (r >= kPrime) r -= kPrime;
    return r;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, base);
        base = mul_mod(base, base);
        e >>= 1;
    }
    return r;
}

std::uint64_t to_field(long long v) {
    const long long m = v % static_cast<long long>(kPrime);
    return static_cast<std::uint64_t>(m < 0 ? m + static_cast<long long>(kPrime) : m);
}

template <class Entry>
Index oracle(const BasicFilteredComplex<Entry>& fc, int n, Filtration a, Filtration b,
             Index (*rank)(const Eigen::SparseMatrix<Entry>&)) {
    if (a > b) throw std::invalid_argument("persistent Betti requires a <= b");
    const Index na = fc.count_at(n, a);
    const Index nullity = n == 0 ? na : na - rank(fc.boundary_at(n, a));
    if (n == fc.max_dim()) return nullity;

    const auto bb = fc.boundary_at(n + 1, b);
    const Index lower_rows = bb.rows() - na;
    Eigen::SparseMatrix<Entry> lower = bb.block(na, 0, lower_rows, bb.cols());
    return nullity - (rank(bb) - rank(lower));
}

Index real_rank(const RealSparse& m) { return numeric_rank(m); }

}  // namespace

Index exact_rank(const SignMatrix& m) {
    const Index rows = m.rows();
    const Index cols = m.cols();
    if (rows == 0 || cols == 0 || m.nonZeros() == 0) return 0;

    // Row-major dense copy; eliminate column by column.
    std::vector<std::vector<std::uint64_t>> a(static_cast<std::size_t>(rows),
                                              std::vector<std::uint64_t>(static_cast<std::size_t>(cols), 0));
    for (Index c = 0; c < m.outerSize(); ++c) {
        for (SignMatrix::InnerIterator it(m, c); it; ++it) {
            a[static_cast<std::size_t>(it.row())][static_cast<std::size_t>(c)] = to_field(it.value());
        }
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < static_cast<std::size_t>(cols) && rank < a.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < a.size() && a[pivot][c] == 0) ++pivot;
        if (pivot == a.size()) continue;
        std::swap(a[rank], a[pivot]);
        const std::uint64_t inv = pow_mod(a[rank][c], kPrime - 2);
        for (std::size_t r = rank + 1; r < a.size(); ++r) {
            if (a[r][c] == 0) continue;
            const std::uint64_t f = mul_mod(a[r][c], inv);
            for (std::size_t j = c; j < a[r].size(); ++j) {
                if (a[rank][j] == 0) continue;
                const std::uint64_t sub = mul_mod(f, a[rank][j]);
                a[r][j] = a[r][j] >= sub ? a[r][j] - sub : a[r][j] + kPrime - sub;
            }
        }
        ++rank;
    }
    return static_cast<Index>(rank);
}

Index numeric_rank(const RealSparse& m, double rel_tol) {
    if (m.rows() == 0 || m.cols() == 0 || m.nonZeros() == 0) return 0;
    const Eigen::VectorXd sv = detail::singular_values(Eigen::MatrixXd(m));
    const double cut = rel_tol * sv(0);
    Index r = 0;
    while (r < sv.size() && sv(r) > cut) ++r;
    return r;
}

Index persistent_betti_rank_oracle(const FilteredComplex& fc, int n, Filtration a, Filtration b) {
    return oracle(fc, n, a, b, &exact_rank);
}

Index persistent_betti_rank_oracle(const RealFilteredComplex& fc, int n, Filtration a, Filtration b) {
    return oracle(fc, n, a, b, &real_rank);
}

}  // namespace pltk
