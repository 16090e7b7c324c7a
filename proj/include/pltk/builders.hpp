#pragma once

// Constructors that turn point clouds, digraphs and relations into
// FilteredComplex instances. Every builder sorts cells by filtration and
// breaks ties lexicographically on the vertex tuple.

#include "pltk/complex.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace pltk {

inline constexpr Filtration kInfinity = std::numeric_limits<Filtration>::infinity();

/// Symmetric, zero-diagonal, nonnegative k x k matrix.
class DistanceMatrix {
public:
    /// Throws std::invalid_argument on a non-square, asymmetric, negative or
    /// non-finite input, or a nonzero diagonal.
    explicit DistanceMatrix(std::vector<std::vector<double>> entries);

    /// Euclidean distances between the given points (all of equal length).
    static DistanceMatrix from_points(const std::vector<std::vector<double>>& points);

    [[nodiscard]] Index size() const noexcept { return static_cast<Index>(d_.size()); }
    [[nodiscard]] double operator()(Index i, Index j) const { return d_[i][j]; }

private:
    std::vector<std::vector<double>> d_;
};

struct DirectedEdge {
    Index from = 0;
    Index to = 0;
    Filtration filtration = 0.0;
};

/// Directed graph with vertex and edge filtrations.
struct FilteredDigraph {
    std::vector<Filtration> vertex_filtrations;
    std::vector<DirectedEdge> edges;

    /// Throws std::invalid_argument on self-loops, out-of-range endpoints,
    /// duplicate u->v edges or an edge entering before one of its endpoints.
    void check() const;
};

struct WeightedEdge {
    Index from = 0;
    Index to = 0;
    double weight = 0.0;
};

/// Weighted directed graph (X, w); pairs without an entry have no weight.
struct WeightedDigraph {
    Index vertex_count = 0;
    std::vector<WeightedEdge> weights;

    void check() const;
};

/// Boolean relation between a row set X and a column set Y.
struct Relation {
    std::vector<std::vector<bool>> entries;

    [[nodiscard]] Index rows() const noexcept { return static_cast<Index>(entries.size()); }
    [[nodiscard]] Index cols() const noexcept {
        return entries.empty() ? 0 : static_cast<Index>(entries.front().size());
    }
};

/// Cells of an ordered simplicial complex, listed per dimension as vertex
/// tuples with filtration values. Faces drop one vertex and keep the order.
struct OrderedSimplices {
    std::vector<std::vector<std::vector<Index>>> cells;
    std::vector<std::vector<Filtration>> values;
};

/// Sorts each dimension by (filtration, vertex tuple) and assembles the
/// alternating-sign boundary matrices. Throws if a face is missing.
FilteredComplex assemble_ordered_complex(OrderedSimplices simplices);

/// Vietoris-Rips filtration: every vertex set of size <= max_dim + 1 with
/// diameter <= threshold, entering at its diameter.
FilteredComplex rips(const DistanceMatrix& d, int max_dim, Filtration threshold = kInfinity);

/// Directed flag complex: ordered cliques [v_0..v_k] with v_i -> v_j for
/// all i < j, entering at the largest vertex or edge filtration involved.
FilteredComplex directed_flag(const FilteredDigraph& g, int max_dim);

/// Dowker sink filtration: a simplex enters at min over sinks x' of
/// max_i w(x_i, x'), and is kept when that value is <= threshold.
FilteredComplex dowker_sink(const WeightedDigraph& g, int max_dim, Filtration threshold = kInfinity);

/// Dowker source filtration, using w(x', x_i) instead.
FilteredComplex dowker_source(const WeightedDigraph& g, int max_dim, Filtration threshold = kInfinity);

/// The two Dowker complexes (E_R over rows, F_R over columns) of a
/// nonempty relation, all cells at filtration 0.
std::pair<FilteredComplex, FilteredComplex> dowker_pair(const Relation& r, int max_dim);

}  // namespace pltk
