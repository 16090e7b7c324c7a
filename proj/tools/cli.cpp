#include "cli.hpp"

#include "pltk/builders.hpp"
#include "pltk/errors.hpp"
#include "pltk/family.hpp"
#include "pltk/io.hpp"
#include "pltk/laplacian.hpp"
#include "pltk/pipeline.hpp"
#include "pltk/sheaf.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pltk {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return in;
}

// Writes to a file when a path is given, otherwise to the fallback stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw InputError("cannot write " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

std::vector<Filtration> parse_grid(const std::string& text) {
    std::vector<Filtration> values;
    std::string_view rest(text);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto token = rest.substr(0, comma);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
            throw UsageError("cannot parse grid value \"" + std::string(token) + "\"");
        }
        values.push_back(v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (!std::is_sorted(values.begin(), values.end())) throw UsageError("--grid must be sorted");
    return values;
}

struct SolverFlags {
    std::string solver = "full";
    int k = 10;
    std::string which = "smallest";
    double tol = 1e-6;
    int subspace = 0;
    int max_iter = 1000;
    std::string precision = "f64";
    unsigned jobs = 0;
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    CLI::Option* abs_opt = nullptr;
    CLI::Option* rel_opt = nullptr;

    void add_to(CLI::App* app) {
        app->add_option("--solver", solver, "Eigensolver")
            ->check(CLI::IsMember({"full", "extremal"}))
            ->capture_default_str();
        app->add_option("--k", k, "Eigenvalues wanted by the extremal solver")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--which", which, "Extremal end")
            ->check(CLI::IsMember({"smallest", "largest"}))
            ->capture_default_str();
        app->add_option("--tol", tol, "Relative convergence tolerance")->capture_default_str();
        app->add_option("--subspace", subspace, "Krylov basis size (0 = automatic)")
            ->capture_default_str();
        app->add_option("--max-iter", max_iter, "Restart limit before falling back")
            ->capture_default_str();
        app->add_option("--precision", precision, "Floating point width")
            ->check(CLI::IsMember({"f32", "f64"}))
            ->capture_default_str();
        app->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->envname("PLTK_JOBS");
        abs_opt = app->add_option("--abs-tol", abs_tol, "Absolute zero threshold");
        rel_opt = app->add_option("--rel-tol", rel_tol, "Relative zero threshold");
    }

    [[nodiscard]] SpectrumOptions options() const {
        SpectrumOptions o;
        o.precision = precision == "f32" ? Precision::f32 : Precision::f64;
        o.eig.k = k;
        o.eig.tol = tol;
        o.eig.subspace_dim = subspace;
        o.eig.max_iter = max_iter;
        if (solver == "extremal") {
            o.eig.mode = which == "largest" ? EigMode::k_largest : EigMode::k_smallest;
        }
        if (abs_opt->count() > 0 || rel_opt->count() > 0) {
            ZeroPolicy z = ZeroPolicy::for_precision(o.precision);
            if (abs_opt->count() > 0) z.abs_tol = abs_tol;
            if (rel_opt->count() > 0) z.rel_tol = rel_tol;
            o.zero = z;
        }
        return o;
    }
};

struct InputFlags {
    std::string path;
    bool sheaf = false;
    bool allow_inconsistent = false;
    std::string basis_path;

    void add_to(CLI::App* app) {
        app->add_option("complex", path, "Complex JSON (or sheaf JSON with --sheaf)")->required();
        app->add_flag("--sheaf", sheaf, "Input is a sheaf file");
        app->add_flag("--allow-inconsistent", allow_inconsistent,
                      "Proceed when the sheaf fails the composition check");
        app->add_option("--reduce-harmonic", basis_path,
                        "Kernel-basis JSON; spectra are computed on the harmonic complement");
    }
};

HarmonicBasisFn basis_provider(const std::string& path) {
    if (path.empty()) return {};
    auto bases = read_kernel_bases(read_file(path));
    return [bases = std::move(bases)](int n, Filtration a, Filtration b,
                                      Index d) -> std::optional<Eigen::MatrixXd> {
        for (const auto& e : bases) {
            if (e.dim != n || e.a != a || e.b != b) continue;
            if (e.vectors.cols() == 0) return Eigen::MatrixXd(d, 0);
            if (e.vectors.rows() != d) {
                throw std::invalid_argument("kernel basis for dim " + std::to_string(n) +
                                            " has vectors of length " +
                                            std::to_string(e.vectors.rows()) + ", expected " +
                                            std::to_string(d));
            }
            return e.vectors;
        }
        throw std::invalid_argument("no kernel basis for dim " + std::to_string(n) + ", a=" +
                                    format_double(a) + ", b=" + format_double(b));
    };
}

template <class Fn>
void with_complex(const InputFlags& in, std::ostream& err, Fn&& fn) {
    const std::string text = read_file(in.path);
    if (!in.sheaf) {
        fn(import_json(text));
        return;
    }
    const CellularSheaf sheaf = sheaf_from_json(text);
    auto report = check_composition(sheaf);
    if (!report.ok()) {
        if (!in.allow_inconsistent) throw ValidationError(std::move(report));
        err << "warning: sheaf restrictions do not compose consistently ("
            << report.violations.size() << " violation(s)); continuing\n";
    }
    fn(sheaf_chain_complex(sheaf));
}

void print_counts(std::ostream& os, const std::string& label, const FilteredComplex& fc) {
    os << label;
    for (int n = 0; n <= fc.max_dim(); ++n) os << ' ' << fc.cell_count(n);
    os << '\n';
}

void note_fallback(std::ostream& err, const Spectrum& s, int n, Filtration a, Filtration b) {
    if (s.fell_back) {
        err << "note: dim " << n << " (" << format_double(a) << ", " << format_double(b)
            << "): extremal solver fell back to the full solver: " << s.note << '\n';
    }
}

// ---- build -------------------------------------------------------------

struct BuildFlags {
    std::string builder;
    std::string input;
    std::string output;
    std::string output_f;
    int max_dim = 2;
    double threshold = kInfinity;
    bool distances = false;
    bool strict = false;
};

int cmd_build(const BuildFlags& f, std::ostream& out, std::ostream& err) {
    if (f.max_dim < 0) throw UsageError("--max-dim must be nonnegative");

    auto emit = [&](const FilteredComplex& fc, const std::string& path, const std::string& label) {
        if (path.empty()) {
            out << export_json(fc);
            print_counts(err, label, fc);
        } else {
            Sink sink(path, out);
            sink.stream() << export_json(fc);
            print_counts(out, label, fc);
        }
    };

    if (f.builder == "dowker-pair") {
        if (f.output.empty() || f.output_f.empty()) {
            throw UsageError("dowker-pair needs both --output and --output-f");
        }
        auto in = open_input(f.input);
        const auto [e, fr] = dowker_pair(read_relation(in), f.max_dim);
        emit(e, f.output, "E_R cells:");
        emit(fr, f.output_f, "F_R cells:");
        return 0;
    }

    FilteredComplex fc;
    if (f.builder == "rips") {
        auto in = open_input(f.input);
        const auto rows = read_csv_rows(in);
        const DistanceMatrix d = f.distances ? DistanceMatrix(rows) : DistanceMatrix::from_points(rows);
        fc = rips(d, f.max_dim, f.threshold);
    } else if (f.builder == "dflag") {
        auto in = open_input(f.input);
        fc = directed_flag(read_digraph(in), f.max_dim);
    } else if (f.builder == "dowker-sink" || f.builder == "dowker-source") {
        auto in = open_input(f.input);
        const auto g = read_weighted_digraph(in);
        fc = f.builder == "dowker-sink" ? dowker_sink(g, f.max_dim, f.threshold)
                                        : dowker_source(g, f.max_dim, f.threshold);
    } else {
        fc = import_json(read_file(f.input), f.strict);
    }
    emit(fc, f.output, "cells:");
    return 0;
}

// ---- spectra -----------------------------------------------------------

struct SpectraFlags {
    InputFlags input;
    SolverFlags solver;
    int dim = 0;
    double a = 0.0;
    double b = 0.0;
    CLI::Option* b_opt = nullptr;
    bool flip = false;
    std::string format = "csv";
    std::string output;
};

int cmd_spectra(const SpectraFlags& f, std::ostream& out, std::ostream& err) {
    const double b = f.b_opt->count() > 0 ? f.b : f.a;
    if (f.a > b) throw UsageError("--a must not exceed --b");
    SpectrumOptions opts = f.solver.options();
    opts.flip = f.flip;
    opts.harmonic_basis = basis_provider(f.input.basis_path);

    with_complex(f.input, err, [&](const auto& fc) {
        const Spectrum s = spectra(fc, f.dim, f.a, b, opts);
        note_fallback(err, s, f.dim, f.a, b);
        Sink sink(f.output, out);
        auto& os = sink.stream();
        if (f.format == "json") {
            nlohmann::json doc;
            doc["dim"] = f.dim;
            doc["a"] = f.a;
            doc["b"] = b;
            doc["size"] = s.source_size;
            doc["eigenvalues"] = s.eigenvalues;
            doc["fallback"] = s.fell_back;
            os << doc.dump(2) << '\n';
            return;
        }
        os << "dim,a,b,index,eigenvalue\n";
        for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
            os << f.dim << ',' << format_double(f.a) << ',' << format_double(b) << ',' << i << ','
               << format_double(s.eigenvalues[i]) << '\n';
        }
    });
    return 0;
}

// ---- family ------------------------------------------------------------

struct FamilyFlags {
    InputFlags input;
    SolverFlags solver;
    int dim = 0;
    std::string mode = "all-pairs";
    std::string grid;
    double delta = 0.0;
    CLI::Option* delta_opt = nullptr;
    std::string stat;
    long long max_betti = -1;
    bool flip = false;
    std::string format = "csv";
    std::string output;
};

int cmd_family(const FamilyFlags& f, std::ostream& out, std::ostream& err) {
    FamilyOptions opts;
    opts.spectrum = f.solver.options();
    opts.spectrum.flip = f.flip;
    opts.spectrum.harmonic_basis = basis_provider(f.input.basis_path);
    opts.jobs = f.solver.jobs;
    if (!f.stat.empty()) opts.stat = parse_stat(f.stat);
    if (f.max_betti >= 0) opts.max_betti = static_cast<Index>(f.max_betti);
    // A partial spectrum cannot be trusted for Betti numbers on its own.
    if (opts.stat == Stat::betti) opts.spectrum.guard_betti = true;
    if (f.mode == "fixed-delta" && f.delta_opt->count() == 0) {
        throw UsageError("--mode fixed-delta needs --delta");
    }

    with_complex(f.input, err, [&](const auto& fc) {
        const std::vector<Filtration> grid = f.grid.empty() ? fc.filtration_grid() : parse_grid(f.grid);
        if (f.flip && f.dim < fc.max_dim() && !grid.empty() &&
            fc.count_at(f.dim + 1, grid.back() + (f.mode == "fixed-delta" ? f.delta : 0.0)) > 0) {
            throw std::invalid_argument("--flip needs the top dimension; dimension " +
                                        std::to_string(f.dim) + " has cofaces");
        }
        SpectralGrid g;
        if (f.mode == "fixed-delta") {
            g = family_fixed_delta(fc, f.dim, grid, f.delta, opts);
        } else if (f.mode == "consecutive") {
            g = family_consecutive(fc, f.dim, opts);
        } else if (f.mode == "diagonal") {
            g = family_diagonal(fc, f.dim, grid, opts);
        } else {
            g = all_pairs_grid(fc, f.dim, grid, opts);
        }
        for (const auto& c : g.cells) {
            if (c.spectrum) note_fallback(err, *c.spectrum, f.dim, c.a, c.b);
        }
        Sink sink(f.output, out);
        if (f.format == "json") {
            sink.stream() << grid_to_json(g);
        } else if (g.stat) {
            write_grid_csv(sink.stream(), g);
        } else {
            write_spectra_csv(sink.stream(), g);
        }
    });
    return 0;
}

// ---- bench -------------------------------------------------------------

struct BenchFlags {
    InputFlags input;
    SolverFlags solver;
    int dim = 0;
    std::string mode = "diagonal";
    std::string grid;
    int repeat = 1;
    std::string output;
};

template <class S, class Complex>
void bench_cell(const Complex& fc, const BenchFlags& f, const SpectrumOptions& opts, Filtration a,
                Filtration b, std::ostream& os) {
    using Clock = std::chrono::steady_clock;
    double best_matrix = 1e300;
    double best_eig = 1e300;
    Index size = 0;
    for (int r = 0; r < std::max(1, f.repeat); ++r) {
        const auto t0 = Clock::now();
        const DenseMatrix<S> lap = persistent_laplacian<S>(fc, f.dim, a, b);
        const auto t1 = Clock::now();
        const Spectrum s = eig<S>(lap, opts.eig, opts.zero_policy());
        const auto t2 = Clock::now();
        size = lap.rows();
        best_matrix = std::min(best_matrix, std::chrono::duration<double>(t1 - t0).count());
        best_eig = std::min(best_eig, std::chrono::duration<double>(t2 - t1).count());
    }
    os << f.dim << ',' << format_double(a) << ',' << format_double(b) << ',' << size << ','
       << format_double(best_matrix) << ',' << format_double(best_eig) << '\n';
}

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
    const SpectrumOptions opts = f.solver.options();
    with_complex(f.input, err, [&](const auto& fc) {
        const std::vector<Filtration> grid = f.grid.empty() ? fc.filtration_grid() : parse_grid(f.grid);
        Sink sink(f.output, out);
        auto& os = sink.stream();
        os << "dim,a,b,size,matrix_seconds,eigen_seconds\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const std::size_t last = f.mode == "all-pairs" ? grid.size() : i + 1;
            for (std::size_t j = i; j < last; ++j) {
                if (opts.precision == Precision::f32) {
                    bench_cell<float>(fc, f, opts, grid[i], grid[j], os);
                } else {
                    bench_cell<double>(fc, f, opts, grid[i], grid[j], os);
                }
            }
        }
    });
    return 0;
}

// ---- laplacian dump ----------------------------------------------------

struct DumpFlags {
    InputFlags input;
    int dim = 0;
    double a = 0.0;
    double b = 0.0;
    CLI::Option* b_opt = nullptr;
    std::string part = "full";
    std::string output;
};

int cmd_laplacian(const DumpFlags& f, std::ostream& out, std::ostream& err) {
    const double b = f.b_opt->count() > 0 ? f.b : f.a;
    if (f.a > b) throw UsageError("--a must not exceed --b");
    with_complex(f.input, err, [&](const auto& fc) {
        DenseMatrix<double> m;
        if (f.part == "up") {
            m = up_laplacian_schur<double>(fc, f.dim, f.a, b);
        } else if (f.part == "down") {
            m = down_laplacian<double>(fc, f.dim, f.a);
        } else {
            m = persistent_laplacian<double>(fc, f.dim, f.a, b);
        }
        Sink sink(f.output, out);
        auto& os = sink.stream();
        for (Index r = 0; r < m.rows(); ++r) {
            for (Index c = 0; c < m.cols(); ++c) {
                if (c > 0) os << ',';
                os << format_double(m(r, c));
            }
            os << '\n';
        }
    });
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Persistent topological Laplacians of filtered complexes", "pltk"};
    app.require_subcommand(1);

    BuildFlags build;
    auto* build_cmd = app.add_subcommand("build", "Build or import a filtered complex");
    build_cmd
        ->add_option("builder", build.builder, "Construction")
        ->required()
        ->check(CLI::IsMember({"rips", "dflag", "dowker-sink", "dowker-source", "dowker-pair", "import"}));
    build_cmd->add_option("-i,--input", build.input, "Source file")->required();
    build_cmd->add_option("-o,--output", build.output, "Complex JSON output");
    build_cmd->add_option("--output-f", build.output_f, "Second output for dowker-pair");
    build_cmd->add_option("--max-dim", build.max_dim, "Largest cell dimension")->capture_default_str();
    build_cmd->add_option("--threshold", build.threshold, "Largest filtration value kept");
    build_cmd->add_flag("--distances", build.distances, "rips input is a distance matrix");
    build_cmd->add_flag("--strict", build.strict, "import requires simplicial boundaries");

    SpectraFlags spec;
    auto* spec_cmd = app.add_subcommand("spectra", "Spectrum of one persistent Laplacian");
    spec.input.add_to(spec_cmd);
    spec.solver.add_to(spec_cmd);
    spec_cmd->add_option("--dim", spec.dim, "Chain dimension")->required();
    spec_cmd->add_option("--a", spec.a, "Lower filtration value")->required();
    spec.b_opt = spec_cmd->add_option("--b", spec.b, "Upper filtration value (default: a)");
    spec_cmd->add_flag("--flip", spec.flip, "Top-dimension spectrum via the smaller Gram matrix");
    spec_cmd->add_option("--format", spec.format)->check(CLI::IsMember({"csv", "json"}));
    spec_cmd->add_option("-o,--output", spec.output, "Output file");

    FamilyFlags fam;
    auto* fam_cmd = app.add_subcommand("family", "Family of persistent Laplacian spectra");
    fam.input.add_to(fam_cmd);
    fam.solver.add_to(fam_cmd);
    fam_cmd->add_option("--dim", fam.dim, "Chain dimension")->required();
    fam_cmd->add_option("--mode", fam.mode, "Family shape")
        ->check(CLI::IsMember({"fixed-delta", "consecutive", "diagonal", "all-pairs"}))
        ->capture_default_str();
    fam_cmd->add_option("--grid", fam.grid, "Comma-separated sorted filtration values");
    fam.delta_opt = fam_cmd->add_option("--delta", fam.delta, "Offset for fixed-delta")
                        ->check(CLI::PositiveNumber);
    fam_cmd->add_option("--stat", fam.stat, "Summary per cell")
        ->check(CLI::IsMember({"min_nonzero", "max", "mean_nonzero", "betti", "count"}));
    fam_cmd->add_option("--max-betti", fam.max_betti, "Skip cells with larger persistent Betti number");
    fam_cmd->add_flag("--flip", fam.flip, "Top-dimension spectra via the smaller Gram matrix");
    fam_cmd->add_option("--format", fam.format)->check(CLI::IsMember({"csv", "json"}));
    fam_cmd->add_option("-o,--output", fam.output, "Output file");

    BenchFlags bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time matrix and eigenvalue phases");
    bench.input.add_to(bench_cmd);
    bench.solver.add_to(bench_cmd);
    bench_cmd->add_option("--dim", bench.dim, "Chain dimension")->required();
    bench_cmd->add_option("--mode", bench.mode)->check(CLI::IsMember({"diagonal", "all-pairs"}));
    bench_cmd->add_option("--grid", bench.grid, "Comma-separated sorted filtration values");
    bench_cmd->add_option("--repeat", bench.repeat, "Runs per cell; the fastest is reported");
    bench_cmd->add_option("-o,--output", bench.output, "Output file");

    DumpFlags dump;
    auto* dump_cmd = app.add_subcommand("laplacian", "Write one Laplacian as a dense CSV grid");
    dump.input.add_to(dump_cmd);
    dump_cmd->add_option("--dim", dump.dim, "Chain dimension")->required();
    dump_cmd->add_option("--a", dump.a, "Lower filtration value")->required();
    dump.b_opt = dump_cmd->add_option("--b", dump.b, "Upper filtration value (default: a)");
    dump_cmd->add_option("--part", dump.part)->check(CLI::IsMember({"full", "up", "down"}));
    dump_cmd->add_option("-o,--output", dump.output, "Output file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (*build_cmd) return cmd_build(build, out, err);
        if (*spec_cmd) return cmd_spectra(spec, out, err);
        if (*fam_cmd) return cmd_family(fam, out, err);
        if (*bench_cmd) return cmd_bench(bench, out, err);
        if (*dump_cmd) return cmd_laplacian(dump, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ValidationError& e) {
        err << "error: invalid input: " << e.what() << '\n';
        for (const auto& v : e.report().violations) {
            err << "  [" << v.rule << "] " << v.location << ": " << v.message << '\n';
        }
        return 2;
    } catch (const NumericalError& e) {
        err << "error: numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::logic_error& e) {
        // invalid_argument, out_of_range and domain_error all describe bad input.
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        // SchemaError, ParseError and InputError.
        const bool input = dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
                           dynamic_cast<const InputError*>(&e);
        err << "error: " << e.what() << '\n';
        return input ? 2 : 3;
    }
    return 1;
}

}  // namespace pltk
