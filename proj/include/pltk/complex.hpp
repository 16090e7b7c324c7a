#pragma once

// Filtered chain complexes stored as boundary matrices of the final
// filtration step plus one filtration value per cell.

#include <Eigen/SparseCore>

#include <optional>
#include <string>
#include <vector>

namespace pltk {

using Index = Eigen::Index;
using Filtration = double;

/// Integer boundary matrix. Simplicial input only uses {-1, 0, +1}; wider
/// integers are allowed for imported non-simplicial chain complexes.
using SignMatrix = Eigen::SparseMatrix<int>;
using RealSparse = Eigen::SparseMatrix<double>;

struct Violation {
    std::string rule;
    std::string location;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
    void add(std::string rule, std::string location, std::string message) {
        violations.push_back({std::move(rule), std::move(location), std::move(message)});
    }
};

/**
 * Ordered boundary matrices [B_1, ..., B_N] and filtrations [F_0, ..., F_N].
 *
 * B_n has one row per (n-1)-cell and one column per n-cell. Cells are
 * indexed in filtration order, so the complex at scale a is the leading
 * prefix of every dimension and B_n at scale a is a top-left block of B_n.
 * The object is immutable after construction.
 */
template <class Entry>
class BasicFilteredComplex {
public:
    using Matrix = Eigen::SparseMatrix<Entry>;

    BasicFilteredComplex() : filtrations_(1) {}

    /// Throws std::invalid_argument when the shapes are inconsistent. The
    /// ordering, closure and chain invariants are checked by validate().
    BasicFilteredComplex(std::vector<Matrix> boundaries,
                         std::vector<std::vector<Filtration>> filtrations);

    [[nodiscard]] int max_dim() const noexcept { return static_cast<int>(boundaries_.size()); }
    [[nodiscard]] Index cell_count(int n) const;

    /// Full boundary B_n for 1 <= n <= max_dim().
    [[nodiscard]] const Matrix& boundary(int n) const;
    [[nodiscard]] const std::vector<Filtration>& filtration(int n) const;
    [[nodiscard]] const std::vector<Matrix>& boundaries() const noexcept { return boundaries_; }
    [[nodiscard]] const std::vector<std::vector<Filtration>>& filtrations() const noexcept {
        return filtrations_;
    }

    /// Number of n-cells with filtration <= a.
    [[nodiscard]] Index count_at(int n, Filtration a) const;

    /// Top-left count_at(n-1, a) x count_at(n, a) block of B_n.
    [[nodiscard]] Matrix boundary_at(int n, Filtration a) const;

    /// Sorted distinct filtration values of dimension n, or of every
    /// dimension when n is empty.
    [[nodiscard]] std::vector<Filtration> filtration_grid(std::optional<int> n = std::nullopt) const;

private:
    void check_dim(int n) const;

    std::vector<Matrix> boundaries_;
    std::vector<std::vector<Filtration>> filtrations_;
};

using FilteredComplex = BasicFilteredComplex<int>;
using RealFilteredComplex = BasicFilteredComplex<double>;

extern template class BasicFilteredComplex<int>;
extern template class BasicFilteredComplex<double>;

/// Checks filtration ordering, finiteness, face closure, B_n * B_{n+1} = 0
/// and, in strict mode, that B_n columns have exactly n+1 entries of +-1.
ValidationReport validate(const FilteredComplex& fc, bool strict_simplicial);

/// Real-valued variant; the chain condition is checked up to
/// chain_tol * (1 + largest |entry| product).
ValidationReport validate(const RealFilteredComplex& fc, double chain_tol = 1e-9);

}  // namespace pltk
