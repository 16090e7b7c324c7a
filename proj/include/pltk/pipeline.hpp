#pragma once

// One-call spectrum of a persistent Laplacian with solver, precision and
// reduction options.

#include "pltk/complex.hpp"
#include "pltk/spectra.hpp"

#include <functional>
#include <optional>

namespace pltk {

/// Supplies a kernel basis (d x beta) for the Laplacian at (n, a, b) of
/// size d, or nothing to skip the harmonic reduction for that matrix.
using HarmonicBasisFn =
    std::function<std::optional<Eigen::MatrixXd>(int n, Filtration a, Filtration b, Index d)>;

struct SpectrumOptions {
    EigOptions eig;
    /// Defaults to ZeroPolicy::for_precision(precision).
    std::optional<ZeroPolicy> zero;
    Precision precision = Precision::f64;
    /// Use the smaller Gram matrix at the top dimension.
    bool flip = false;
    HarmonicBasisFn harmonic_basis;
    /// Switch extremal solves to the full solver whenever the partial
    /// spectrum could not determine the persistent Betti number.
    bool guard_betti = false;

    [[nodiscard]] ZeroPolicy zero_policy() const {
        return zero ? *zero : ZeroPolicy::for_precision(precision);
    }
};

Spectrum spectra(const FilteredComplex& fc, int n, Filtration a, Filtration b,
                 const SpectrumOptions& opts = {});
Spectrum spectra(const RealFilteredComplex& fc, int n, Filtration a, Filtration b,
                 const SpectrumOptions& opts = {});

}  // namespace pltk
