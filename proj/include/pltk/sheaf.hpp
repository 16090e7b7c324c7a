#pragma once

// Cellular sheaves with one-dimensional stalks over a filtered simplicial
// complex. Restriction maps are scalars r(face, coface) for codimension-one
// incidences; the identity on each cell is implicit.

#include "pltk/complex.hpp"
#include "pltk/spectra.hpp"

#include <functional>
#include <map>
#include <string_view>
#include <tuple>
#include <vector>

namespace pltk {

/// r(face, coface) where `dim` is the dimension of the face.
using RestrictionFn = std::function<double(int dim, Index face, Index coface)>;

/// (face dimension, face index, coface index) -> scalar.
using RestrictionTable = std::map<std::tuple<int, Index, Index>, double>;

class CellularSheaf {
public:
    /// Every restriction equals 1.
    static CellularSheaf constant(FilteredComplex base);

    /// r(face, coface) = payload(coface) / payload(face); payload[n][i] is
    /// the scalar carried by the i-th n-cell and must be nonzero.
    static CellularSheaf from_payload(FilteredComplex base, std::vector<std::vector<double>> payload);

    /// Explicit table; a missing incidence is an error at assembly time.
    static CellularSheaf from_table(FilteredComplex base, RestrictionTable table);

    /// Arbitrary library-level rule. A callback that is not safe to call
    /// concurrently must set `serial`.
    static CellularSheaf from_callback(FilteredComplex base, RestrictionFn fn, bool serial = false);

    [[nodiscard]] const FilteredComplex& base() const noexcept { return base_; }
    [[nodiscard]] bool serial() const noexcept { return serial_; }

    /// Throws std::invalid_argument if the value is undefined.
    [[nodiscard]] double restriction(int dim, Index face, Index coface) const;

private:
    CellularSheaf(FilteredComplex base, RestrictionFn fn, bool serial);

    FilteredComplex base_;
    RestrictionFn fn_;
    bool serial_ = false;
};

/// Coboundary d^n: rows are (n+1)-cells, columns n-cells, entry (tau, sigma)
/// = [sigma : tau] * r(sigma, tau) with the incidence sign taken from B_{n+1}.
RealSparse sheaf_coboundary(const CellularSheaf& sheaf, int n);

/// For every codimension-two pair rho < tau, the products of restrictions
/// along each intermediate sigma must agree (relative tolerance rel_tol).
ValidationReport check_composition(const CellularSheaf& sheaf, double rel_tol = 1e-9);

/// Chain-convention real complex with boundaries (d^{n-1})^T and the base
/// filtrations, ready for the ordinary Laplacian pipeline.
RealFilteredComplex sheaf_chain_complex(const CellularSheaf& sheaf);

/// Persistent Laplacian of the sheaf. Throws ValidationError when the
/// composition check fails, unless allow_inconsistent is set.
template <class S = double>
DenseMatrix<S> persistent_sheaf_laplacian(const CellularSheaf& sheaf, int n, Filtration a,
                                          Filtration b, bool allow_inconsistent = false);

/// Complex JSON extended with "restrictions": [[dim, face, coface, value]]
/// and/or "payload": [[...], ...]; "sheaf_rule" ("constant", "payload" or
/// "table") selects between them when both are present.
CellularSheaf sheaf_from_json(std::string_view text);

}  // namespace pltk
