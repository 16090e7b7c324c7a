#pragma once

// File formats: complex JSON, CSV point clouds and distance matrices,
// digraph edge lists, relation matrices and kernel-basis JSON.

#include "pltk/builders.hpp"
#include "pltk/complex.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pltk {

/// Parses the complex JSON schema and validates the result. Throws
/// SchemaError on shape problems and ValidationError on invariant failures.
FilteredComplex import_json(std::string_view text, bool strict_simplicial = false);

/// Serializes with sparse triplets; values round-trip exactly.
std::string export_json(const FilteredComplex& fc);

/// Comma-separated rows of reals. Blank lines and lines starting with '#'
/// are skipped. Throws ParseError.
std::vector<std::vector<double>> read_csv_rows(std::istream& in);

/// Header "vertices N", then N vertex filtration values (one per line),
/// then edge lines "u v filtration".
FilteredDigraph read_digraph(std::istream& in);

/// Header "vertices N", then lines "u v weight".
WeightedDigraph read_weighted_digraph(std::istream& in);

/// Rows of 0/1 entries separated by spaces or commas.
Relation read_relation(std::istream& in);

/// One externally supplied kernel basis for the Laplacian at (dim, a, b).
/// Columns of `vectors` span the kernel.
struct KernelBasisEntry {
    int dim = 0;
    Filtration a = 0.0;
    Filtration b = 0.0;
    Eigen::MatrixXd vectors;
};

/// {"bases": [{"dim": n, "a": a, "b": b, "vectors": [[...], ...]}, ...]},
/// each inner list being one basis vector.
std::vector<KernelBasisEntry> read_kernel_bases(std::string_view text);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace pltk
