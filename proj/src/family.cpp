#include "pltk/family.hpp"

#include "pltk/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace pltk {

namespace {

void check_grid(const std::vector<Filtration>& B) {
    if (B.empty()) throw std::invalid_argument("grid values must be nonempty");
    if (!std::is_sorted(B.begin(), B.end())) throw std::invalid_argument("grid values must be sorted");
}

unsigned worker_count(unsigned jobs, std::size_t items) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(items, 1)));
}

template <class E>
void evaluate(const BasicFilteredComplex<E>& fc, int n, GridCell& cell, const FamilyOptions& opts) {
    if (opts.max_betti) {
        const Index beta = persistent_betti_rank_oracle(fc, n, cell.a, cell.b);
        if (beta > *opts.max_betti) {
            cell.missing = "skipped: persistent Betti number " + std::to_string(beta) +
                           " exceeds the pre-screen bound";
            return;
        }
    }
    try {
        Spectrum s = spectra(fc, n, cell.a, cell.b, opts.spectrum);
        if (opts.stat) {
            const double tau = zero_threshold(s, opts.spectrum.zero_policy());
            cell.value = summarize(s, *opts.stat, tau);
        }
        cell.spectrum = std::move(s);
    } catch (const std::domain_error& e) {
        cell.missing = e.what();
    }
}

// Cells are independent; workers pull indices from a shared counter and
// write into their own slot, so the output order never depends on timing.
template <class E>
void run_cells(const BasicFilteredComplex<E>& fc, int n, std::vector<GridCell>& cells,
               const FamilyOptions& opts) {
    const unsigned workers = worker_count(opts.jobs, cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                evaluate(fc, n, cells[i], opts);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

template <class E>
SpectralGrid make_grid(const BasicFilteredComplex<E>& fc, int n, FamilyMode mode,
                       std::vector<Filtration> labels, const FamilyOptions& opts) {
    // Fails early on a bad dimension rather than once per cell.
    (void)fc.cell_count(n);
    SpectralGrid g;
    g.dim = n;
    g.mode = mode;
    g.labels = std::move(labels);
    g.stat = opts.stat;
    return g;
}

}  // namespace

template <class E>
SpectralGrid family_fixed_delta(const BasicFilteredComplex<E>& fc, int n, std::vector<Filtration> B,
                                double delta, const FamilyOptions& opts) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    check_grid(B);
    auto g = make_grid(fc, n, FamilyMode::fixed_delta, std::move(B), opts);
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
        GridCell c;
        c.a = g.labels[i];
        c.b = g.labels[i] + delta;
        c.i = c.j = static_cast<Index>(i);
        g.cells.push_back(c);
    }
    run_cells(fc, n, g.cells, opts);
    return g;
}

template <class E>
SpectralGrid family_consecutive(const BasicFilteredComplex<E>& fc, int n, const FamilyOptions& opts) {
    auto values = fc.filtration_grid();
    if (values.size() < 2) {
        throw std::invalid_argument("consecutive family needs at least two filtration values");
    }
    auto g = make_grid(fc, n, FamilyMode::consecutive, std::move(values), opts);
    for (std::size_t i = 0; i + 1 < g.labels.size(); ++i) {
        GridCell c;
        c.a = g.labels[i];
        c.b = g.labels[i + 1];
        c.i = static_cast<Index>(i);
        c.j = static_cast<Index>(i + 1);
        g.cells.push_back(c);
    }
    run_cells(fc, n, g.cells, opts);
    return g;
}

template <class E>
SpectralGrid family_diagonal(const BasicFilteredComplex<E>& fc, int n, std::vector<Filtration> B,
                             const FamilyOptions& opts) {
    check_grid(B);
    auto g = make_grid(fc, n, FamilyMode::diagonal, std::move(B), opts);
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
        GridCell c;
        c.a = c.b = g.labels[i];
        c.i = c.j = static_cast<Index>(i);
        g.cells.push_back(c);
    }
    run_cells(fc, n, g.cells, opts);
    return g;
}

template <class E>
SpectralGrid all_pairs_grid(const BasicFilteredComplex<E>& fc, int n, std::vector<Filtration> B,
                            const FamilyOptions& opts) {
    check_grid(B);
    auto g = make_grid(fc, n, FamilyMode::all_pairs, std::move(B), opts);
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
        for (std::size_t j = i; j < g.labels.size(); ++j) {
            GridCell c;
            c.a = g.labels[i];
            c.b = g.labels[j];
            c.i = static_cast<Index>(i);
            c.j = static_cast<Index>(j);
            g.cells.push_back(c);
        }
    }
    run_cells(fc, n, g.cells, opts);
    return g;
}

#define PLTK_FAMILY(E)                                                                            \
    template SpectralGrid family_fixed_delta<E>(const BasicFilteredComplex<E>&, int,              \
                                                std::vector<Filtration>, double,                  \
                                                const FamilyOptions&);                            \
    template SpectralGrid family_consecutive<E>(const BasicFilteredComplex<E>&, int,              \
                                                const FamilyOptions&);                            \
    template SpectralGrid family_diagonal<E>(const BasicFilteredComplex<E>&, int,                 \
                                             std::vector<Filtration>, const FamilyOptions&);      \
    template SpectralGrid all_pairs_grid<E>(const BasicFilteredComplex<E>&, int,                  \
                                            std::vector<Filtration>, const FamilyOptions&);

PLTK_FAMILY(int)
PLTK_FAMILY(double)
#undef PLTK_FAMILY

void write_grid_csv(std::ostream& out, const SpectralGrid& grid) {
    out << "a,b,value\n";
    for (const auto& c : grid.cells) {
        if (c.is_missing() || !c.value) continue;
        out << format_double(c.a) << ',' << format_double(c.b) << ',' << format_double(*c.value)
            << '\n';
    }
}

void write_spectra_csv(std::ostream& out, const SpectralGrid& grid) {
    out << "dim,a,b,index,eigenvalue\n";
    for (const auto& c : grid.cells) {
        if (!c.spectrum) continue;
        const auto& v = c.spectrum->eigenvalues;
        for (std::size_t k = 0; k < v.size(); ++k) {
            out << grid.dim << ',' << format_double(c.a) << ',' << format_double(c.b) << ',' << k
                << ',' << format_double(v[k]) << '\n';
        }
    }
}

std::string_view mode_name(FamilyMode m) {
    switch (m) {
        case FamilyMode::fixed_delta: return "fixed-delta";
        case FamilyMode::consecutive: return "consecutive";
        case FamilyMode::diagonal: return "diagonal";
        case FamilyMode::all_pairs: return "all-pairs";
    }
    return "?";
}

std::string grid_to_json(const SpectralGrid& grid) {
    using nlohmann::json;
    json doc;
    doc["dim"] = grid.dim;
    doc["mode"] = mode_name(grid.mode);
    doc["stat"] = grid.stat ? json(stat_name(*grid.stat)) : json(nullptr);
    doc["labels"] = grid.labels;
    doc["cells"] = json::array();
    for (const auto& c : grid.cells) {
        json cell;
        cell["i"] = c.i;
        cell["j"] = c.j;
        cell["a"] = c.a;
        cell["b"] = c.b;
        if (grid.stat) cell["value"] = c.value ? json(*c.value) : json(nullptr);
        cell["eigenvalues"] = c.spectrum ? json(c.spectrum->eigenvalues) : json(nullptr);
        if (c.spectrum && c.spectrum->fell_back) cell["fallback"] = c.spectrum->note;
        cell["missing"] = c.is_missing() ? json(c.missing) : json(nullptr);
        doc["cells"].push_back(std::move(cell));
    }
    return doc.dump(2) + "\n";
}

}  // namespace pltk
