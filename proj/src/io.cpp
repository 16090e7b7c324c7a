#include "pltk/io.hpp"

#include "json_util.hpp"
#include "pltk/errors.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <sstream>

namespace pltk {

namespace detail {

const Json& field(const Json& obj, const char* key, const std::string& loc) {
    if (!obj.is_object()) throw SchemaError(loc, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(loc, std::string("missing field \"") + key + "\"");
    return *it;
}

double number(const Json& v, const std::string& loc) {
    if (!v.is_number()) throw SchemaError(loc, "expected a number");
    return v.get<double>();
}

Index index_value(const Json& v, const std::string& loc) {
    if (!v.is_number_integer()) throw SchemaError(loc, "expected an integer");
    const auto i = v.get<long long>();
    if (i < 0) throw SchemaError(loc, "expected a nonnegative integer");
    return static_cast<Index>(i);
}

const Json& array(const Json& v, const std::string& loc) {
    if (!v.is_array()) throw SchemaError(loc, "expected an array");
    return v;
}

Json parse(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw SchemaError("$", e.what());
    }
}

namespace {

int entry_value(const Json& v, const std::string& loc) {
    if (!v.is_number_integer()) throw SchemaError(loc, "boundary entries must be integers");
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw SchemaError(loc, "boundary entry out of range");
    }
    return static_cast<int>(x);
}

SignMatrix boundary_from_json(const Json& obj, Index rows, Index cols, const std::string& loc) {
    if (!obj.is_object()) throw SchemaError(loc, "expected an object");
    if (obj.contains("rows") && index_value(obj["rows"], loc + ".rows") != rows) {
        throw SchemaError(loc + ".rows", "expected " + std::to_string(rows) +
                                             " rows to match the filtration list");
    }
    if (obj.contains("cols") && index_value(obj["cols"], loc + ".cols") != cols) {
        throw SchemaError(loc + ".cols", "expected " + std::to_string(cols) +
                                             " columns to match the filtration list");
    }

    std::vector<Eigen::Triplet<int>> triplets;
    if (obj.contains("triplets")) {
        const auto& list = array(obj["triplets"], loc + ".triplets");
        std::set<std::pair<Index, Index>> seen;
        for (std::size_t t = 0; t < list.size(); ++t) {
            const std::string at = loc + ".triplets[" + std::to_string(t) + "]";
            const auto& trip = array(list[t], at);
            if (trip.size() != 3) throw SchemaError(at, "expected [row, col, value]");
            const Index r = index_value(trip[0], at + "[0]");
            const Index c = index_value(trip[1], at + "[1]");
            const int v = entry_value(trip[2], at + "[2]");
            if (r >= rows || c >= cols) throw SchemaError(at, "index outside the matrix shape");
            if (!seen.insert({r, c}).second) throw SchemaError(at, "duplicate (row, col) entry");
            if (v != 0) {
                triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
            }
        }
    } else if (obj.contains("dense")) {
        const auto& dense = array(obj["dense"], loc + ".dense");
        if (static_cast<Index>(dense.size()) != rows && !(rows == 0 && dense.empty())) {
            throw SchemaError(loc + ".dense", "expected " + std::to_string(rows) + " rows");
        }
        for (std::size_t r = 0; r < dense.size(); ++r) {
            const std::string at = loc + ".dense[" + std::to_string(r) + "]";
            const auto& row = array(dense[r], at);
            if (static_cast<Index>(row.size()) != cols) {
                throw SchemaError(at, "expected " + std::to_string(cols) + " columns");
            }
            for (std::size_t c = 0; c < row.size(); ++c) {
                const int v = entry_value(row[c], at + "[" + std::to_string(c) + "]");
                if (v != 0) {
                    triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
                }
            }
        }
    } else {
        throw SchemaError(loc, "expected \"triplets\" or \"dense\"");
    }
    SignMatrix b(rows, cols);
    b.setFromTriplets(triplets.begin(), triplets.end());
    return b;
}

}  // namespace

FilteredComplex complex_from_json(const Json& doc, bool strict_simplicial) {
    const auto& filt = array(field(doc, "filtrations", "$"), "$.filtrations");
    if (filt.empty()) throw SchemaError("$.filtrations", "at least one filtration list is required");
    const auto& bounds = array(field(doc, "boundaries", "$"), "$.boundaries");
    if (doc.contains("max_dim")) {
        const Index n = index_value(doc["max_dim"], "$.max_dim");
        if (static_cast<std::size_t>(n) != bounds.size()) {
            throw SchemaError("$.max_dim", "max_dim is " + std::to_string(n) + " but " +
                                               std::to_string(bounds.size()) +
                                               " boundary matrices were given");
        }
    }
    if (filt.size() != bounds.size() + 1) {
        throw SchemaError("$.filtrations", "expected " + std::to_string(bounds.size() + 1) +
                                               " filtration lists");
    }

    std::vector<std::vector<Filtration>> filtrations(filt.size());
    for (std::size_t n = 0; n < filt.size(); ++n) {
        const std::string at = "$.filtrations[" + std::to_string(n) + "]";
        for (std::size_t i = 0; i < array(filt[n], at).size(); ++i) {
            filtrations[n].push_back(number(filt[n][i], at + "[" + std::to_string(i) + "]"));
        }
    }
    std::vector<SignMatrix> boundaries;
    for (std::size_t n = 0; n < bounds.size(); ++n) {
        boundaries.push_back(boundary_from_json(bounds[n],
                                                static_cast<Index>(filtrations[n].size()),
                                                static_cast<Index>(filtrations[n + 1].size()),
                                                "$.boundaries[" + std::to_string(n) + "]"));
    }

    FilteredComplex fc(std::move(boundaries), std::move(filtrations));
    auto report = validate(fc, strict_simplicial);
    if (!report.ok()) throw ValidationError(std::move(report));
    return fc;
}

Json complex_to_json(const FilteredComplex& fc) {
    Json doc;
    doc["max_dim"] = fc.max_dim();
    doc["boundaries"] = Json::array();
    for (int n = 1; n <= fc.max_dim(); ++n) {
        const auto& b = fc.boundary(n);
        Json trip = Json::array();
        for (Index c = 0; c < b.outerSize(); ++c) {
            for (SignMatrix::InnerIterator it(b, c); it; ++it) {
                if (it.value() != 0) trip.push_back({it.row(), it.col(), it.value()});
            }
        }
        doc["boundaries"].push_back({{"rows", b.rows()}, {"cols", b.cols()}, {"triplets", trip}});
    }
    doc["filtrations"] = fc.filtrations();
    return doc;
}

}  // namespace detail

FilteredComplex import_json(std::string_view text, bool strict_simplicial) {
    return detail::complex_from_json(detail::parse(text), strict_simplicial);
}

std::string export_json(const FilteredComplex& fc) {
    return detail::complex_to_json(fc).dump() + "\n";
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool skippable(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

double parse_real(std::string_view token, std::size_t line) {
    token = trim(token);
    double v = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || token.empty()) {
        throw ParseError(line, "cannot parse \"" + std::string(token) + "\" as a number");
    }
    return v;
}

Index parse_index(std::string_view token, std::size_t line) {
    token = trim(token);
    long long v = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || token.empty() || v < 0) {
        throw ParseError(line, "cannot parse \"" + std::string(token) + "\" as an index");
    }
    return static_cast<Index>(v);
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

// Reads the "vertices N" header; returns N and advances past it.
Index read_vertex_header(std::istream& in, std::size_t& line_no) {
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto t = tokens(line);
        if (t.size() != 2 || t[0] != "vertices") {
            throw ParseError(line_no, "expected header \"vertices N\"");
        }
        return parse_index(t[1], line_no);
    }
    throw ParseError(line_no, "missing header \"vertices N\"");
}

}  // namespace

std::vector<std::vector<double>> read_csv_rows(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::vector<double> row;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            row.push_back(parse_real(rest.substr(0, comma), line_no));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(line_no, "expected " + std::to_string(rows.front().size()) +
                                          " columns, found " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

FilteredDigraph read_digraph(std::istream& in) {
    std::size_t line_no = 0;
    const Index k = read_vertex_header(in, line_no);
    FilteredDigraph g;
    std::string line;
    while (static_cast<Index>(g.vertex_filtrations.size()) < k && std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto t = tokens(line);
        if (t.size() != 1) throw ParseError(line_no, "expected one vertex filtration value");
        g.vertex_filtrations.push_back(parse_real(t[0], line_no));
    }
    if (static_cast<Index>(g.vertex_filtrations.size()) < k) {
        throw ParseError(line_no, "expected " + std::to_string(k) + " vertex filtration values");
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto t = tokens(line);
        if (t.size() != 3) throw ParseError(line_no, "expected \"u v filtration\"");
        DirectedEdge e{parse_index(t[0], line_no), parse_index(t[1], line_no),
                       parse_real(t[2], line_no)};
        if (e.from >= k || e.to >= k) throw ParseError(line_no, "vertex index out of range");
        g.edges.push_back(e);
    }
    return g;
}

WeightedDigraph read_weighted_digraph(std::istream& in) {
    std::size_t line_no = 0;
    WeightedDigraph g;
    g.vertex_count = read_vertex_header(in, line_no);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto t = tokens(line);
        if (t.size() != 3) throw ParseError(line_no, "expected \"u v weight\"");
        WeightedEdge e{parse_index(t[0], line_no), parse_index(t[1], line_no),
                       parse_real(t[2], line_no)};
        if (e.from >= g.vertex_count || e.to >= g.vertex_count) {
            throw ParseError(line_no, "vertex index out of range");
        }
        g.weights.push_back(e);
    }
    return g;
}

Relation read_relation(std::istream& in) {
    Relation r;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        for (auto& ch : line) {
            if (ch == ',') ch = ' ';
        }
        std::vector<bool> row;
        for (const auto& t : tokens(line)) {
            if (t != "0" && t != "1") throw ParseError(line_no, "relation entries must be 0 or 1");
            row.push_back(t == "1");
        }
        if (!r.entries.empty() && row.size() != r.entries.front().size()) {
            throw ParseError(line_no, "expected " + std::to_string(r.entries.front().size()) +
                                          " columns, found " + std::to_string(row.size()));
        }
        r.entries.push_back(std::move(row));
    }
    return r;
}

std::vector<KernelBasisEntry> read_kernel_bases(std::string_view text) {
    using detail::array;
    using detail::field;
    using detail::number;
    const auto doc = detail::parse(text);
    const auto& list = array(field(doc, "bases", "$"), "$.bases");
    std::vector<KernelBasisEntry> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = "$.bases[" + std::to_string(i) + "]";
        KernelBasisEntry e;
        e.dim = static_cast<int>(detail::index_value(field(list[i], "dim", at), at + ".dim"));
        e.a = number(field(list[i], "a", at), at + ".a");
        e.b = number(field(list[i], "b", at), at + ".b");
        const auto& vecs = array(field(list[i], "vectors", at), at + ".vectors");
        Index d = -1;
        for (std::size_t v = 0; v < vecs.size(); ++v) {
            const std::string vat = at + ".vectors[" + std::to_string(v) + "]";
            const auto& vec = array(vecs[v], vat);
            if (d < 0) {
                d = static_cast<Index>(vec.size());
                e.vectors.resize(d, static_cast<Index>(vecs.size()));
            } else if (static_cast<Index>(vec.size()) != d) {
                throw SchemaError(vat, "basis vectors have different lengths");
            }
            for (Index r = 0; r < d; ++r) {
                e.vectors(r, static_cast<Index>(v)) =
                    number(vec[static_cast<std::size_t>(r)], vat + "[" + std::to_string(r) + "]");
            }
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace pltk
