#include "pltk/pipeline.hpp"

#include "pltk/laplacian.hpp"

#include <algorithm>

namespace pltk {

namespace {

// Spectrum of L from the reduced matrix A: the kernel contributes beta zeros.
Spectrum merge_harmonic(Spectrum reduced, Index beta, Index d, const EigOptions& eig) {
    std::vector<double> values(static_cast<std::size_t>(beta), 0.0);
    values.insert(values.end(), reduced.eigenvalues.begin(), reduced.eigenvalues.end());
    const auto k = static_cast<std::size_t>(std::min<Index>(eig.k, d));
    if (eig.mode == EigMode::k_smallest && values.size() > k) values.resize(k);
    if (eig.mode == EigMode::k_largest && values.size() > k) {
        values.erase(values.begin(), values.end() - static_cast<std::ptrdiff_t>(k));
    }
    reduced.eigenvalues = std::move(values);
    reduced.source_size = d;
    return reduced;
}

template <class S, class E>
Spectrum compute(const BasicFilteredComplex<E>& fc, int n, Filtration a, Filtration b,
                 const SpectrumOptions& opts) {
    if (opts.flip) return top_dim_spectrum_flipped<S>(fc, n, a, b);

    EigOptions solver = opts.eig;
    if (opts.guard_betti && solver.mode != EigMode::full) {
        if (solver.mode == EigMode::k_largest ||
            solver.k <= persistent_betti_rank_oracle(fc, n, a, b)) {
            solver.mode = EigMode::full;
        }
    }
    const ZeroPolicy zero = opts.zero_policy();
    const DenseMatrix<S> lap = persistent_laplacian<S>(fc, n, a, b);

    if (opts.harmonic_basis) {
        if (auto basis = opts.harmonic_basis(n, a, b, lap.rows())) {
            const DenseMatrix<S> kernel = basis->template cast<S>();
            const DenseMatrix<S> reduced = harmonic_reduction<S>(lap, kernel);
            return merge_harmonic(eig<S>(reduced, solver, zero), kernel.cols(), lap.rows(), solver);
        }
    }
    return eig<S>(lap, solver, zero);
}

template <class E>
Spectrum dispatch(const BasicFilteredComplex<E>& fc, int n, Filtration a, Filtration b,
                  const SpectrumOptions& opts) {
    return opts.precision == Precision::f32 ? compute<float>(fc, n, a, b, opts)
                                            : compute<double>(fc, n, a, b, opts);
}

}  // namespace

Spectrum spectra(const FilteredComplex& fc, int n, Filtration a, Filtration b,
                 const SpectrumOptions& opts) {
    return dispatch(fc, n, a, b, opts);
}

Spectrum spectra(const RealFilteredComplex& fc, int n, Filtration a, Filtration b,
                 const SpectrumOptions& opts) {
    return dispatch(fc, n, a, b, opts);
}

}  // namespace pltk
