#include "pltk/builders.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace pltk {

namespace {

using Tuple = std::vector<Index>;

void check_max_dim(int max_dim) {
    if (max_dim < 0) throw std::invalid_argument("max_dim must be nonnegative");
}

OrderedSimplices empty_simplices(int max_dim) {
    OrderedSimplices s;
    s.cells.resize(static_cast<std::size_t>(max_dim) + 1);
    s.values.resize(static_cast<std::size_t>(max_dim) + 1);
    return s;
}

void add_cell(OrderedSimplices& s, const Tuple& t, Filtration f) {
    const std::size_t n = t.size() - 1;
    s.cells[n].push_back(t);
    s.values[n].push_back(f);
}

// Dense weight table with +inf for absent pairs, oriented so that
// table[x][x'] is the weight used when x' acts as the witness of x.
std::vector<std::vector<double>> witness_table(const WeightedDigraph& g, bool sink) {
    g.check();
    const auto k = static_cast<std::size_t>(g.vertex_count);
    std::vector<std::vector<double>> w(k, std::vector<double>(k, kInfinity));
    for (const auto& e : g.weights) {
        const auto u = static_cast<std::size_t>(e.from);
        const auto v = static_cast<std::size_t>(e.to);
        if (sink) {
            w[u][v] = std::min(w[u][v], e.weight);
        } else {
            w[v][u] = std::min(w[v][u], e.weight);
        }
    }
    return w;
}

FilteredComplex dowker_filtration(const std::vector<std::vector<double>>& w, int max_dim,
                                  Filtration threshold) {
    check_max_dim(max_dim);
    auto out = empty_simplices(max_dim);
    const auto k = static_cast<Index>(w.size());
    const auto max_size = static_cast<std::size_t>(max_dim) + 1;

    // reach[x'] = max over the simplex of w(x_i, x'); the simplex value is the minimum.
    Tuple simplex;
    auto extend = [&](auto&& self, const std::vector<double>& reach) -> void {
        if (simplex.size() == max_size) return;
        const Index start = simplex.empty() ? 0 : simplex.back() + 1;
        std::vector<double> next(reach.size());
        for (Index v = start; v < k; ++v) {
            for (std::size_t x = 0; x < next.size(); ++x) {
                next[x] = std::max(reach[x], w[static_cast<std::size_t>(v)][x]);
            }
            const double value = *std::min_element(next.begin(), next.end());
            if (!std::isfinite(value) || value > threshold) continue;
            simplex.push_back(v);
            add_cell(out, simplex, value);
            self(self, next);
            simplex.pop_back();
        }
    };
    if (k > 0) extend(extend, std::vector<double>(static_cast<std::size_t>(k), -kInfinity));
    return assemble_ordered_complex(std::move(out));
}

// Simplices over the rows of `rel` witnessed by a common column.
FilteredComplex dowker_side(const std::vector<std::vector<bool>>& rel, int max_dim) {
    auto out = empty_simplices(max_dim);
    const auto rows = static_cast<Index>(rel.size());
    const std::size_t cols = rel.empty() ? 0 : rel.front().size();
    const auto max_size = static_cast<std::size_t>(max_dim) + 1;

    Tuple simplex;
    auto extend = [&](auto&& self, const std::vector<bool>& witnesses) -> void {
        if (simplex.size() == max_size) return;
        const Index start = simplex.empty() ? 0 : simplex.back() + 1;
        for (Index v = start; v < rows; ++v) {
            std::vector<bool> next(cols);
            bool any = false;
            for (std::size_t y = 0; y < cols; ++y) {
                next[y] = witnesses[y] && rel[static_cast<std::size_t>(v)][y];
                any = any || next[y];
            }
            if (!any) continue;
            simplex.push_back(v);
            add_cell(out, simplex, 0.0);
            self(self, next);
            simplex.pop_back();
        }
    };
    extend(extend, std::vector<bool>(cols, true));
    return assemble_ordered_complex(std::move(out));
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::vector<std::vector<double>> entries) : d_(std::move(entries)) {
    const std::size_t k = d_.size();
    for (std::size_t i = 0; i < k; ++i) {
        if (d_[i].size() != k) {
            throw std::invalid_argument("distance matrix row " + std::to_string(i) + " has " +
                                        std::to_string(d_[i].size()) + " entries, expected " +
                                        std::to_string(k));
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (d_[i][i] != 0.0) {
            throw std::invalid_argument("distance matrix diagonal entry " + std::to_string(i) +
                                        " is nonzero");
        }
        for (std::size_t j = 0; j < k; ++j) {
            const double v = d_[i][j];
            if (!std::isfinite(v)) {
                throw std::invalid_argument("distance (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") is not finite");
            }
            if (v < 0.0) {
                throw std::invalid_argument("distance (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") is negative");
            }
            if (std::abs(v - d_[j][i]) > 1e-12 * std::max(1.0, std::abs(v))) {
                throw std::invalid_argument("distance matrix is not symmetric at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
}

DistanceMatrix DistanceMatrix::from_points(const std::vector<std::vector<double>>& points) {
    const std::size_t k = points.size();
    std::vector<std::vector<double>> d(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        if (points[i].size() != points.front().size()) {
            throw std::invalid_argument("point " + std::to_string(i) + " has dimension " +
                                        std::to_string(points[i].size()) + ", expected " +
                                        std::to_string(points.front().size()));
        }
        for (std::size_t j = 0; j < i; ++j) {
            double sq = 0.0;
            for (std::size_t c = 0; c < points[i].size(); ++c) {
                const double diff = points[i][c] - points[j][c];
                sq += diff * diff;
            }
            d[i][j] = d[j][i] = std::sqrt(sq);
        }
    }
    return DistanceMatrix(std::move(d));
}

void FilteredDigraph::check() const {
    const auto k = static_cast<Index>(vertex_filtrations.size());
    std::set<std::pair<Index, Index>> seen;
    for (const auto& e : edges) {
        const std::string name = std::to_string(e.from) + "->" + std::to_string(e.to);
        if (e.from < 0 || e.from >= k || e.to < 0 || e.to >= k) {
            throw std::invalid_argument("edge " + name + " references a missing vertex");
        }
        if (e.from == e.to) throw std::invalid_argument("self-loop " + name);
        if (!seen.insert({e.from, e.to}).second) {
            throw std::invalid_argument("duplicate edge " + name);
        }
        if (!std::isfinite(e.filtration)) {
            throw std::invalid_argument("edge " + name + " has a non-finite filtration");
        }
        if (e.filtration < vertex_filtrations[static_cast<std::size_t>(e.from)] ||
            e.filtration < vertex_filtrations[static_cast<std::size_t>(e.to)]) {
            throw std::invalid_argument("edge " + name + " enters before one of its endpoints");
        }
    }
}

void WeightedDigraph::check() const {
    if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
    for (const auto& e : weights) {
        if (e.from < 0 || e.from >= vertex_count || e.to < 0 || e.to >= vertex_count) {
            throw std::invalid_argument("weight " + std::to_string(e.from) + "->" +
                                        std::to_string(e.to) + " references a missing vertex");
        }
        if (!std::isfinite(e.weight)) {
            throw std::invalid_argument("weight " + std::to_string(e.from) + "->" +
                                        std::to_string(e.to) + " is not finite");
        }
    }
}

FilteredComplex assemble_ordered_complex(OrderedSimplices simplices) {
    if (simplices.cells.empty()) simplices = empty_simplices(0);
    if (simplices.cells.size() != simplices.values.size()) {
        throw std::invalid_argument("cell and filtration lists differ in dimension count");
    }
    const std::size_t dims = simplices.cells.size();

    std::vector<std::vector<Filtration>> filtrations(dims);
    std::vector<SignMatrix> boundaries;
    std::map<Tuple, Index> previous;

    for (std::size_t n = 0; n < dims; ++n) {
        auto& cells = simplices.cells[n];
        auto& values = simplices.values[n];
        if (cells.size() != values.size()) {
            throw std::invalid_argument("dimension " + std::to_string(n) +
                                        " has mismatched cell and filtration counts");
        }
        std::vector<std::size_t> order(cells.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (values[x] != values[y]) return values[x] < values[y];
            return cells[x] < cells[y];
        });

        std::map<Tuple, Index> current;
        std::vector<Eigen::Triplet<int>> triplets;
        auto& f = filtrations[n];
        f.reserve(order.size());
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            const Tuple& cell = cells[order[pos]];
            if (cell.size() != n + 1) {
                throw std::invalid_argument("cell in dimension " + std::to_string(n) + " has " +
                                            std::to_string(cell.size()) + " vertices");
            }
            f.push_back(values[order[pos]]);
            const auto col = static_cast<Index>(pos);
            if (!current.emplace(cell, col).second) {
                throw std::invalid_argument("duplicate cell in dimension " + std::to_string(n));
            }
            if (n == 0) continue;
            for (std::size_t i = 0; i <= n; ++i) {
                Tuple face;
                face.reserve(n);
                for (std::size_t v = 0; v <= n; ++v) {
                    if (v != i) face.push_back(cell[v]);
                }
                const auto it = previous.find(face);
                if (it == previous.end()) {
                    throw std::invalid_argument("face of a dimension " + std::to_string(n) +
                                                " cell is missing");
                }
                triplets.emplace_back(static_cast<int>(it->second), static_cast<int>(col),
                                      i % 2 == 0 ? 1 : -1);
            }
        }
        if (n > 0) {
            SignMatrix b(static_cast<Index>(filtrations[n - 1].size()),
                         static_cast<Index>(f.size()));
            b.setFromTriplets(triplets.begin(), triplets.end());
            boundaries.push_back(std::move(b));
        }
        previous = std::move(current);
    }
    return FilteredComplex(std::move(boundaries), std::move(filtrations));
}

FilteredComplex rips(const DistanceMatrix& d, int max_dim, Filtration threshold) {
    check_max_dim(max_dim);
    auto out = empty_simplices(max_dim);
    const Index k = d.size();
    const auto max_size = static_cast<std::size_t>(max_dim) + 1;

    Tuple simplex;
    auto extend = [&](auto&& self, double diameter) -> void {
        if (simplex.size() == max_size) return;
        const Index start = simplex.empty() ? 0 : simplex.back() + 1;
        for (Index v = start; v < k; ++v) {
            double diam = diameter;
            for (const Index u : simplex) diam = std::max(diam, d(u, v));
            if (diam > threshold) continue;
            simplex.push_back(v);
            add_cell(out, simplex, diam);
            self(self, diam);
            simplex.pop_back();
        }
    };
    extend(extend, 0.0);
    return assemble_ordered_complex(std::move(out));
}

FilteredComplex directed_flag(const FilteredDigraph& g, int max_dim) {
    check_max_dim(max_dim);
    g.check();
    const auto k = static_cast<Index>(g.vertex_filtrations.size());
    const auto ku = static_cast<std::size_t>(k);
    std::vector<std::vector<double>> edge(ku, std::vector<double>(ku, kInfinity));
    for (const auto& e : g.edges) {
        edge[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.to)] = e.filtration;
    }

    auto out = empty_simplices(max_dim);
    const auto max_size = static_cast<std::size_t>(max_dim) + 1;
    Tuple simplex;
    auto extend = [&](auto&& self, double value) -> void {
        if (simplex.size() == max_size) return;
        for (Index v = 0; v < k; ++v) {
            double next = std::max(value, g.vertex_filtrations[static_cast<std::size_t>(v)]);
            bool clique = true;
            for (const Index u : simplex) {
                const double f = edge[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
                if (!std::isfinite(f)) {
                    clique = false;
                    break;
                }
                next = std::max(next, f);
            }
            if (!clique) continue;
            simplex.push_back(v);
            add_cell(out, simplex, next);
            self(self, next);
            simplex.pop_back();
        }
    };
    extend(extend, -kInfinity);
    return assemble_ordered_complex(std::move(out));
}

FilteredComplex dowker_sink(const WeightedDigraph& g, int max_dim, Filtration threshold) {
    return dowker_filtration(witness_table(g, true), max_dim, threshold);
}

FilteredComplex dowker_source(const WeightedDigraph& g, int max_dim, Filtration threshold) {
    return dowker_filtration(witness_table(g, false), max_dim, threshold);
}

std::pair<FilteredComplex, FilteredComplex> dowker_pair(const Relation& r, int max_dim) {
    check_max_dim(max_dim);
    bool any = false;
    for (const auto& row : r.entries) {
        if (row.size() != static_cast<std::size_t>(r.cols())) {
            throw std::invalid_argument("relation rows have different lengths");
        }
        any = any || std::find(row.begin(), row.end(), true) != row.end();
    }
    if (!any) throw std::invalid_argument("relation is empty");

    std::vector<std::vector<bool>> transposed(static_cast<std::size_t>(r.cols()),
                                              std::vector<bool>(static_cast<std::size_t>(r.rows())));
    for (std::size_t x = 0; x < r.entries.size(); ++x) {
        for (std::size_t y = 0; y < r.entries[x].size(); ++y) transposed[y][x] = r.entries[x][y];
    }
    return {dowker_side(r.entries, max_dim), dowker_side(transposed, max_dim)};
}

}  // namespace pltk
