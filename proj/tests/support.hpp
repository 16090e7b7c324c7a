#pragma once

// Fixtures and independent reference computations shared by the unit tests
// and the acceptance binary. Nothing here calls into the Laplacian or
// eigensolver code under test.

#include "pltk/builders.hpp"
#include "pltk/complex.hpp"
#include "pltk/sheaf.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pltk::test {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline SignMatrix sign_matrix(const Eigen::MatrixXi& m) { return m.sparseView(); }

inline MatrixXd dense(const SignMatrix& m) { return MatrixXd(m.cast<double>()); }

inline std::vector<double> sorted_eigenvalues(const MatrixXd& m) {
    if (m.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const VectorXd v = es.eigenvalues();
    std::vector<double> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end());
    return out;
}

inline double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

// Square complex with vertices 1..4, edges [12] [13] [14] [24] [34] and the
// triangle [134], stored with the printed boundary matrices. The filtration
// grows it in four steps without changing the cell order.
inline FilteredComplex square_complex() {
    Eigen::MatrixXi d1(4, 5);
    d1 << -1, -1, -1, 0, 0,
           1, 0, 0, -1, 0,
           0, 1, 0, 0, -1,
           0, 0, 1, 1, 1;
    Eigen::MatrixXi d2(5, 1);
    d2 << 0, 1, -1, 0, 1;
    return FilteredComplex({sign_matrix(d1), sign_matrix(d2)},
                           {{0, 0, 0, 1}, {0, 0, 1, 2, 2}, {3}});
}

inline MatrixXd square_delta0() {
    MatrixXd m(4, 4);
    m << 3, -1, -1, -1,
        -1, 2, 0, -1,
        -1, 0, 2, -1,
        -1, -1, -1, 3;
    return m;
}

inline MatrixXd square_delta1() {
    MatrixXd m(5, 5);
    m << 2, 1, 1, -1, 0,
         1, 3, 0, 0, 0,
         1, 0, 3, 1, 0,
        -1, 0, 1, 2, 1,
         0, 0, 0, 1, 3;
    return m;
}

// [12] - [14] + [24] in the edge order above: a cycle that is not a
// boundary, but not orthogonal to the boundary of [134].
inline VectorXd square_homology_cycle() {
    VectorXd v(5);
    v << 1, 0, -1, 1, 0;
    return v;
}

// The same class projected off [13] - [14] + [34], scaled to integers.
inline VectorXd square_harmonic_vector() {
    VectorXd v(5);
    v << 3, -1, -2, 3, -1;
    return v;
}

// A filled triangle whose edges appear at 0.1 and 0.2 and whose 2-cell
// appears at 1.4.
inline FilteredComplex filled_triangle() {
    Eigen::MatrixXi d1(3, 3);
    d1 << -1, -1, 0,
           1, 0, -1,
           0, 1, 1;
    Eigen::MatrixXi d2(3, 1);
    d2 << 1, -1, 1;
    return FilteredComplex({sign_matrix(d1), sign_matrix(d2)}, {{0, 0, 0}, {0.1, 0.2, 0.2}, {1.4}});
}

// Triangles [1,3,4] and [1,2,4] glued along [1,4]; the second one enters at 1.
inline FilteredComplex two_triangles() {
    OrderedSimplices s;
    s.cells = {{{1}, {2}, {3}, {4}},
               {{1, 2}, {1, 3}, {1, 4}, {2, 4}, {3, 4}},
               {{1, 3, 4}, {1, 2, 4}}};
    s.values = {{0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 1}};
    return assemble_ordered_complex(std::move(s));
}

inline std::vector<std::vector<double>> right_triangle_points() {
    return {{0.0, 0.0}, {3.0, 0.0}, {0.0, 4.0}};
}

// Rows a, b, c; columns i, j, k.
inline Relation dowker_relation() {
    return Relation{{{true, true, true}, {true, true, false}, {false, false, true}}};
}

// Scalar sheaf on a single 2-simplex [0,1,2] with payloads
// p(v) = 1, p(01) = 1, p(02) = p(12) = 2, p(012) = 6.
inline CellularSheaf payload_triangle_sheaf() {
    OrderedSimplices s;
    s.cells = {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}};
    s.values = {{0, 0, 0}, {0, 0, 0}, {0}};
    return CellularSheaf::from_payload(assemble_ordered_complex(std::move(s)),
                                       {{1, 1, 1}, {1, 2, 2}, {6}});
}

inline FilteredComplex payload_triangle_base() { return payload_triangle_sheaf().base(); }

// Every incidence of the payload sheaf written out, with r(0 <= 02) moved
// from 2 to 3 so that the two paths from [0] to [012] disagree (9 vs 6).
inline CellularSheaf perturbed_triangle_sheaf() {
    const auto good = payload_triangle_sheaf();
    const auto& base = good.base();
    RestrictionTable table;
    for (int n = 0; n < base.max_dim(); ++n) {
        const auto& b = base.boundary(n + 1);
        for (Index c = 0; c < b.outerSize(); ++c) {
            for (SignMatrix::InnerIterator it(b, c); it; ++it) {
                table[{n, it.row(), c}] = good.restriction(n, it.row(), c);
            }
        }
    }
    table[{0, 0, 1}] = 3.0;
    return CellularSheaf::from_table(base, std::move(table));
}

// Independent Rips construction: every vertex subset up to max_dim + 1
// vertices by bitmask, sorted by (diameter, vertex tuple), with dense
// alternating-sign boundaries.
struct DenseFiltered {
    std::vector<std::vector<std::vector<int>>> cells;
    std::vector<std::vector<double>> values;
    std::vector<MatrixXd> boundary;  // boundary[n] for n >= 1; boundary[0] unused

    [[nodiscard]] Index count_at(int n, double a) const {
        const auto& v = values[static_cast<std::size_t>(n)];
        return std::upper_bound(v.begin(), v.end(), a) - v.begin();
    }

    // Combinatorial Laplacian of the subcomplex at scale a.
    [[nodiscard]] MatrixXd laplacian_at(int n, double a) const {
        const Index c = count_at(n, a);
        MatrixXd lap = MatrixXd::Zero(c, c);
        if (n >= 1) {
            const MatrixXd b = boundary[static_cast<std::size_t>(n)].topLeftCorner(count_at(n - 1, a), c);
            lap += b.transpose() * b;
        }
        if (n + 1 < static_cast<int>(cells.size())) {
            const MatrixXd b = boundary[static_cast<std::size_t>(n) + 1].topLeftCorner(c, count_at(n + 1, a));
            lap += b * b.transpose();
        }
        return lap;
    }
};

inline DenseFiltered brute_force_rips(const DistanceMatrix& d, int max_dim) {
    const int k = static_cast<int>(d.size());
    DenseFiltered out;
    out.cells.resize(static_cast<std::size_t>(max_dim) + 1);
    out.values.resize(out.cells.size());
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size > max_dim + 1) continue;
        std::vector<int> verts;
        for (int v = 0; v < k; ++v) {
            if (mask & (1u << v)) verts.push_back(v);
        }
        out.cells[static_cast<std::size_t>(size) - 1].push_back(verts);
    }
    auto diameter = [&](const std::vector<int>& s) {
        double m = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = i + 1; j < s.size(); ++j) m = std::max(m, d(s[i], s[j]));
        }
        return m;
    };
    for (std::size_t n = 0; n < out.cells.size(); ++n) {
        auto& list = out.cells[n];
        std::sort(list.begin(), list.end(), [&](const auto& x, const auto& y) {
            const double dx = diameter(x), dy = diameter(y);
            return dx != dy ? dx < dy : x < y;
        });
        for (const auto& s : list) out.values[n].push_back(diameter(s));
    }
    out.boundary.resize(out.cells.size());
    for (std::size_t n = 1; n < out.cells.size(); ++n) {
        const auto& faces = out.cells[n - 1];
        const auto& cols = out.cells[n];
        MatrixXd b = MatrixXd::Zero(static_cast<Index>(faces.size()), static_cast<Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            for (std::size_t drop = 0; drop < cols[c].size(); ++drop) {
                auto face = cols[c];
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
                const auto row = std::find(faces.begin(), faces.end(), face) - faces.begin();
                b(row, static_cast<Index>(c)) = (drop % 2 == 0) ? 1.0 : -1.0;
            }
        }
        out.boundary[n] = std::move(b);
    }
    return out;
}

struct RipsSample {
    DistanceMatrix distances;
    FilteredComplex complex;
    DenseFiltered reference;
};

// Seeded random point clouds of 4 to 12 points in the unit cube.
inline std::vector<RipsSample> rips_corpus(int count, int max_dim = 3, std::uint64_t seed = 20240917) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<RipsSample> out;
    for (int i = 0; i < count; ++i) {
        const int k = 4 + i % 9;
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(k), std::vector<double>(3));
        for (auto& p : pts) {
            for (auto& x : p) x = unit(rng);
        }
        auto d = DistanceMatrix::from_points(pts);
        auto fc = rips(d, max_dim);
        auto ref = brute_force_rips(d, max_dim);
        out.push_back({std::move(d), std::move(fc), std::move(ref)});
    }
    return out;
}

struct PsdSample {
    MatrixXd matrix;
    MatrixXd kernel;  // columns span the null space
    Index nullity = 0;
};

// G^T G for a random Gaussian G with fewer rows than columns, so the
// nullity is exactly cols - rows.
inline PsdSample random_psd(std::mt19937_64& rng, Index d, Index nullity) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd g(d - nullity, d);
    for (Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
    MatrixXd m = g.transpose() * g;
    m = (0.5 * (m + m.transpose())).eval();
    Eigen::FullPivLU<MatrixXd> lu(g);
    return {m, lu.kernel(), nullity};
}

// Entries 0 or +-1 with the given fill ratio.
inline MatrixXd random_sign_matrix(std::mt19937_64& rng, Index rows, Index cols, double fill) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MatrixXd b = MatrixXd::Zero(rows, cols);
    for (Index i = 0; i < b.size(); ++i) {
        const double u = unit(rng);
        if (u < fill) b.data()[i] = (u < fill / 2) ? 1.0 : -1.0;
    }
    return b;
}

// Eigenvalues above tau, ascending.
inline std::vector<double> nonzero(const std::vector<double>& v, double tau) {
    std::vector<double> out;
    for (const double x : v) {
        if (x > tau) out.push_back(x);
    }
    return out;
}

}  // namespace pltk::test
