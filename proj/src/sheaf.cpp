#include "pltk/sheaf.hpp"

#include "json_util.hpp"
#include "pltk/errors.hpp"
#include "pltk/laplacian.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace pltk {

namespace {

std::string cell_name(int n, Index i) { return std::to_string(n) + "-cell " + std::to_string(i); }

}  // namespace

CellularSheaf::CellularSheaf(FilteredComplex base, RestrictionFn fn, bool serial)
    : base_(std::move(base)), fn_(std::move(fn)), serial_(serial) {
    auto report = validate(base_, true);
    if (!report.ok()) throw ValidationError(std::move(report));
}

CellularSheaf CellularSheaf::constant(FilteredComplex base) {
    return CellularSheaf(std::move(base), [](int, Index, Index) { return 1.0; }, false);
}

CellularSheaf CellularSheaf::from_payload(FilteredComplex base, std::vector<std::vector<double>> payload) {
    if (payload.size() != static_cast<std::size_t>(base.max_dim()) + 1) {
        throw std::invalid_argument("payload needs one list per dimension");
    }
    for (int n = 0; n <= base.max_dim(); ++n) {
        const auto& p = payload[static_cast<std::size_t>(n)];
        if (static_cast<Index>(p.size()) != base.cell_count(n)) {
            throw std::invalid_argument("payload for dimension " + std::to_string(n) + " has " +
                                        std::to_string(p.size()) + " values, expected " +
                                        std::to_string(base.cell_count(n)));
        }
        for (const double v : p) {
            if (v == 0.0 || !std::isfinite(v)) {
                throw std::invalid_argument("payload values must be finite and nonzero");
            }
        }
    }
    auto fn = [p = std::move(payload)](int n, Index face, Index coface) {
        return p[static_cast<std::size_t>(n) + 1][static_cast<std::size_t>(coface)] /
               p[static_cast<std::size_t>(n)][static_cast<std::size_t>(face)];
    };
    return CellularSheaf(std::move(base), std::move(fn), false);
}

CellularSheaf CellularSheaf::from_table(FilteredComplex base, RestrictionTable table) {
    auto fn = [t = std::move(table)](int n, Index face, Index coface) {
        const auto it = t.find({n, face, coface});
        if (it == t.end()) {
            throw std::invalid_argument("no restriction for " + cell_name(n, face) + " <= " +
                                        cell_name(n + 1, coface));
        }
        return it->second;
    };
    return CellularSheaf(std::move(base), std::move(fn), false);
}

CellularSheaf CellularSheaf::from_callback(FilteredComplex base, RestrictionFn fn, bool serial) {
    if (!fn) throw std::invalid_argument("restriction callback is empty");
    return CellularSheaf(std::move(base), std::move(fn), serial);
}

double CellularSheaf::restriction(int dim, Index face, Index coface) const {
    return fn_(dim, face, coface);
}

RealSparse sheaf_coboundary(const CellularSheaf& sheaf, int n) {
    const auto& base = sheaf.base();
    const Index cols = base.cell_count(n);
    if (n == base.max_dim()) return RealSparse(0, cols);

    const auto& b = base.boundary(n + 1);
    std::vector<Eigen::Triplet<double>> triplets;
    for (Index tau = 0; tau < b.outerSize(); ++tau) {
        for (SignMatrix::InnerIterator it(b, tau); it; ++it) {
            if (it.value() == 0) continue;
            const double r = sheaf.restriction(n, it.row(), tau);
            triplets.emplace_back(tau, it.row(), it.value() * r);
        }
    }
    RealSparse d(b.cols(), cols);
    d.setFromTriplets(triplets.begin(), triplets.end());
    return d;
}

ValidationReport check_composition(const CellularSheaf& sheaf, double rel_tol) {
    ValidationReport report;
    const auto& base = sheaf.base();
    for (int n = 0; n + 2 <= base.max_dim(); ++n) {
        const auto& upper = base.boundary(n + 2);
        const auto& lower = base.boundary(n + 1);
        for (Index tau = 0; tau < upper.outerSize(); ++tau) {
            // First path seen for each rho: (sigma, product).
            std::map<Index, std::pair<Index, double>> first;
            for (SignMatrix::InnerIterator s(upper, tau); s; ++s) {
                if (s.value() == 0) continue;
                const Index sigma = s.row();
                const double outer = sheaf.restriction(n + 1, sigma, tau);
                for (SignMatrix::InnerIterator r(lower, sigma); r; ++r) {
                    if (r.value() == 0) continue;
                    const Index rho = r.row();
                    const double product = sheaf.restriction(n, rho, sigma) * outer;
                    const auto [it, fresh] = first.emplace(rho, std::make_pair(sigma, product));
                    if (fresh) continue;
                    const double ref = it->second.second;
                    if (std::abs(product - ref) > rel_tol * std::max(1.0, std::abs(ref))) {
                        report.add("composition",
                                   "(" + cell_name(n, rho) + ", " + cell_name(n + 1, sigma) +
                                       ", " + cell_name(n + 2, tau) + ")",
                                   "path through " + cell_name(n + 1, sigma) + " gives " +
                                       std::to_string(product) + ", path through " +
                                       cell_name(n + 1, it->second.first) + " gives " +
                                       std::to_string(ref));
                    }
                }
            }
        }
    }
    return report;
}

RealFilteredComplex sheaf_chain_complex(const CellularSheaf& sheaf) {
    const auto& base = sheaf.base();
    std::vector<RealSparse> boundaries;
    for (int n = 1; n <= base.max_dim(); ++n) {
        RealSparse b = sheaf_coboundary(sheaf, n - 1).transpose();
        boundaries.push_back(std::move(b));
    }
    return RealFilteredComplex(std::move(boundaries), base.filtrations());
}

template <class S>
DenseMatrix<S> persistent_sheaf_laplacian(const CellularSheaf& sheaf, int n, Filtration a,
                                          Filtration b, bool allow_inconsistent) {
    if (!allow_inconsistent) {
        auto report = check_composition(sheaf);
        if (!report.ok()) throw ValidationError(std::move(report));
    }
    return persistent_laplacian<S>(sheaf_chain_complex(sheaf), n, a, b);
}

template DenseMatrix<double> persistent_sheaf_laplacian<double>(const CellularSheaf&, int, Filtration,
                                                                Filtration, bool);
template DenseMatrix<float> persistent_sheaf_laplacian<float>(const CellularSheaf&, int, Filtration,
                                                              Filtration, bool);

CellularSheaf sheaf_from_json(std::string_view text) {
    using namespace detail;
    const Json doc = parse(text);
    FilteredComplex base = complex_from_json(doc, true);

    std::string rule;
    if (doc.contains("sheaf_rule")) {
        if (!doc["sheaf_rule"].is_string()) throw SchemaError("$.sheaf_rule", "expected a string");
        rule = doc["sheaf_rule"].get<std::string>();
    } else if (doc.contains("restrictions")) {
        rule = "table";
    } else if (doc.contains("payload")) {
        rule = "payload";
    } else {
        rule = "constant";
    }

    if (rule == "constant") return CellularSheaf::constant(std::move(base));

    if (rule == "payload") {
        const auto& list = array(field(doc, "payload", "$"), "$.payload");
        std::vector<std::vector<double>> payload;
        for (std::size_t n = 0; n < list.size(); ++n) {
            const std::string at = "$.payload[" + std::to_string(n) + "]";
            payload.emplace_back();
            for (std::size_t i = 0; i < array(list[n], at).size(); ++i) {
                payload.back().push_back(number(list[n][i], at + "[" + std::to_string(i) + "]"));
            }
        }
        try {
            return CellularSheaf::from_payload(std::move(base), std::move(payload));
        } catch (const std::invalid_argument& e) {
            throw SchemaError("$.payload", e.what());
        }
    }

    if (rule != "table") throw SchemaError("$.sheaf_rule", "unknown rule \"" + rule + "\"");
    const auto& list = array(field(doc, "restrictions", "$"), "$.restrictions");
    RestrictionTable table;
    for (std::size_t t = 0; t < list.size(); ++t) {
        const std::string at = "$.restrictions[" + std::to_string(t) + "]";
        const auto& entry = array(list[t], at);
        if (entry.size() != 4) throw SchemaError(at, "expected [dim, face, coface, value]");
        const Index dim = index_value(entry[0], at + "[0]");
        const Index face = index_value(entry[1], at + "[1]");
        const Index coface = index_value(entry[2], at + "[2]");
        const double value = number(entry[3], at + "[3]");
        if (dim >= base.max_dim()) throw SchemaError(at, "face dimension has no cofaces");
        const int n = static_cast<int>(dim);
        if (face >= base.cell_count(n) || coface >= base.cell_count(n + 1)) {
            throw SchemaError(at, "cell index out of range");
        }
        if (base.boundary(n + 1).coeff(face, coface) == 0) {
            throw SchemaError(at, "cells are not incident");
        }
        if (!table.emplace(std::make_tuple(n, face, coface), value).second) {
            throw SchemaError(at, "duplicate restriction");
        }
    }
    return CellularSheaf::from_table(std::move(base), std::move(table));
}

}  // namespace pltk
