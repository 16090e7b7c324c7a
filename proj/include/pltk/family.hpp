#pragma once

// One- and two-parameter families of persistent Laplacian spectra over a
// filtration grid, optionally reduced to a summary statistic per cell.

#include "pltk/pipeline.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pltk {

enum class FamilyMode { fixed_delta, consecutive, diagonal, all_pairs };

struct GridCell {
    Filtration a = 0.0;
    Filtration b = 0.0;
    /// Grid coordinates: positions of a and b in the label list (for
    /// fixed_delta both are the position of a).
    Index i = 0;
    Index j = 0;
    std::optional<Spectrum> spectrum;
    std::optional<double> value;
    /// Non-empty when the cell is undefined or was skipped.
    std::string missing;

    [[nodiscard]] bool is_missing() const noexcept { return !missing.empty(); }
};

struct SpectralGrid {
    int dim = 0;
    FamilyMode mode = FamilyMode::diagonal;
    std::vector<Filtration> labels;
    std::optional<Stat> stat;
    std::vector<GridCell> cells;
};

struct FamilyOptions {
    SpectrumOptions spectrum;
    /// Summary per cell; without it cells carry raw spectra only.
    std::optional<Stat> stat;
    /// Worker count; 0 means the available hardware parallelism.
    unsigned jobs = 1;
    /// Skip cells whose rank-oracle Betti number exceeds this bound.
    std::optional<Index> max_betti;
};

/// Cells (b_i, b_i + delta). Throws std::invalid_argument if delta <= 0 or
/// B is empty or unsorted.
template <class E>
SpectralGrid family_fixed_delta(const BasicFilteredComplex<E>& fc, int n, std::vector<Filtration> B,
                                double delta, const FamilyOptions& opts = {});

/// Cells (a_i, a_{i+1}) over the distinct filtration values of every
/// dimension. Throws std::invalid_argument with fewer than two values.
template <class E>
SpectralGrid family_consecutive(const BasicFilteredComplex<E>& fc, int n, const FamilyOptions& opts = {});

/// Cells (b_i, b_i).
template <class E>
SpectralGrid family_diagonal(const BasicFilteredComplex<E>& fc, int n, std::vector<Filtration> B,
                             const FamilyOptions& opts = {});

/// Cells (b_i, b_j) for i <= j in row-major order.
template <class E>
SpectralGrid all_pairs_grid(const BasicFilteredComplex<E>& fc, int n, std::vector<Filtration> B,
                            const FamilyOptions& opts = {});

/// "a,b,value" with missing cells omitted.
void write_grid_csv(std::ostream& out, const SpectralGrid& grid);

/// "dim,a,b,index,eigenvalue", one row per eigenvalue.
void write_spectra_csv(std::ostream& out, const SpectralGrid& grid);

/// JSON with labels, (i, j) indices and explicit nulls for missing cells.
std::string grid_to_json(const SpectralGrid& grid);

std::string_view mode_name(FamilyMode m);

}  // namespace pltk
