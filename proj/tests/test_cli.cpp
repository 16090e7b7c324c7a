#include "support.hpp"

#include "cli.hpp"
#include "pltk/io.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pltk;
using namespace pltk::test;

namespace {

namespace fs = std::filesystem;

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class Scratch {
public:
    Scratch() {
        dir_ = fs::temp_directory_path() / ("pltk-cli-" + std::to_string(std::rand()) + "-" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

std::vector<double> eigen_column(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<double> v;
    while (std::getline(in, line)) v.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    return v;
}

}  // namespace

TEST_CASE("build rips from points") {
    Scratch s;
    const auto pts = s.write("pts.csv", "0,0\n3,0\n0,4\n");
    const auto r = run({"build", "rips", "-i", pts});
    CHECK(r.code == 0);
    CHECK(r.err == "cells: 3 3 1\n");
    CHECK(import_json(r.out).filtration(2) == std::vector<double>{5});

    const auto to_file = run({"build", "rips", "-i", pts, "--threshold", "4.5", "-o", s.path("c.json")});
    CHECK(to_file.code == 0);
    CHECK(to_file.out == "cells: 3 2 0\n");

    const auto dist = s.write("d.csv", "0,1\n1,0\n");
    CHECK(run({"build", "rips", "--distances", "-i", dist, "--max-dim", "1"}).err == "cells: 2 1\n");
}

TEST_CASE("build other constructions") {
    Scratch s;
    const auto dg = s.write("g.txt", "vertices 3\n0\n0\n0\n0 1 0\n1 2 0\n0 2 0\n");
    CHECK(run({"build", "dflag", "-i", dg}).err == "cells: 3 3 1\n");

    const auto wg = s.write("w.txt", "vertices 2\n0 0 0\n1 1 0\n0 1 1\n1 0 2\n");
    CHECK(run({"build", "dowker-sink", "-i", wg, "--max-dim", "1"}).err == "cells: 2 1\n");
    CHECK(run({"build", "dowker-source", "-i", wg, "--max-dim", "1"}).err == "cells: 2 1\n");

    const auto rel = s.write("r.txt", "1 1 1\n1 1 0\n0 0 1\n");
    const auto pair = run({"build", "dowker-pair", "-i", rel, "-o", s.path("e.json"), "--output-f", s.path("f.json")});
    CHECK(pair.code == 0);
    CHECK(pair.out == "E_R cells: 3 2 0\nF_R cells: 3 3 1\n");
    CHECK(run({"build", "dowker-pair", "-i", rel}).code == 1);

    const auto square = s.write("sq.json", export_json(square_complex()));
    CHECK(run({"build", "import", "-i", square, "--strict"}).err == "cells: 4 5 1\n");
}

TEST_CASE("spectra of the two-triangle filtration") {
    Scratch s;
    const auto c = s.write("fig.json", export_json(two_triangles()));
    const auto r = run({"spectra", c, "--dim", "1", "--a", "0", "--b", "1"});
    CHECK(r.code == 0);
    CHECK(max_abs_diff(eigen_column(r.out), {2, 2, 4, 4, 4}) <= 1e-9);
    CHECK(r.out.rfind("dim,a,b,index,eigenvalue\n1,0,1,0,", 0) == 0);

    const auto j = run({"spectra", c, "--dim", "1", "--a", "0", "--b", "1", "--format", "json"});
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["size"] == 5);
    CHECK(doc["fallback"] == false);

    const auto part = run({"spectra", c, "--dim", "1", "--a", "1", "--solver", "extremal", "--k", "2",
                           "--which", "largest"});
    CHECK(part.code == 0);
    CHECK(eigen_column(part.out).size() == 2);

    CHECK(run({"spectra", c, "--dim", "1", "--a", "1", "--b", "0"}).code == 1);
    const auto below = run({"spectra", c, "--dim", "1", "--a", "-1", "--b", "0"});
    CHECK(below.code == 0);
    CHECK(below.out == "dim,a,b,index,eigenvalue\n");
    CHECK(run({"spectra", c, "--dim", "1", "--a", "0", "--flip"}).code == 2);
    CHECK(run({"spectra", c, "--dim", "2", "--a", "1", "--flip"}).code == 0);
}

TEST_CASE("spectra with a kernel basis and with a sheaf") {
    Scratch s;
    const auto c = s.write("sq.json", export_json(square_complex()));
    const auto basis = s.write("k.json", R"({"bases": [{"dim": 1, "a": 3, "b": 3, "vectors": [[3, -1, -2, 3, -1]]}]})");
    const auto r = run({"spectra", c, "--dim", "1", "--a", "3", "--reduce-harmonic", basis});
    CHECK(r.code == 0);
    CHECK(max_abs_diff(eigen_column(r.out), {0, 2, 3, 4, 4}) <= 1e-10);
    CHECK(run({"spectra", c, "--dim", "1", "--a", "2", "--reduce-harmonic", basis}).code == 2);

    const std::string base = R"("boundaries": [
        {"dense": [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]}, {"dense": [[1], [-1], [1]]}],
      "filtrations": [[0, 0, 0], [0, 0, 0], [0]])";
    const auto good = s.write("good.json", "{" + base + R"(, "payload": [[1, 1, 1], [1, 2, 2], [6]]})");
    const auto sheaf = run({"spectra", good, "--sheaf", "--dim", "0", "--a", "0"});
    CHECK(sheaf.code == 0);
    CHECK(max_abs_diff(eigen_column(sheaf.out), {0, 6, 12}) <= 1e-10);

    const auto bad = s.write("bad.json", "{" + base + R"(, "restrictions": [
        [0, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 3], [0, 2, 1, 2], [0, 1, 2, 2], [0, 2, 2, 2],
        [1, 0, 0, 6], [1, 1, 0, 3], [1, 2, 0, 3]]})");
    const auto rejected = run({"spectra", bad, "--sheaf", "--dim", "0", "--a", "0"});
    CHECK(rejected.code == 2);
    CHECK(rejected.err.find("[composition]") != std::string::npos);
    const auto allowed = run({"spectra", bad, "--sheaf", "--allow-inconsistent", "--dim", "0", "--a", "0"});
    CHECK(allowed.code == 0);
    CHECK(allowed.err.find("warning") != std::string::npos);
}

TEST_CASE("family output") {
    Scratch s;
    const auto c = s.write("tri.json", export_json(filled_triangle()));
    const auto cons = run({"family", c, "--dim", "1", "--mode", "consecutive", "--stat", "max"});
    CHECK(cons.code == 0);
    CHECK(cons.out == "a,b,value\n0.1,0.2,2\n0.2,1.4,3\n");

    const auto pairs = run({"family", c, "--dim", "1", "--grid", "0.1,0.2,1.4", "--stat", "betti", "--jobs", "2"});
    CHECK(pairs.out == "a,b,value\n0.1,0.1,0\n0.1,0.2,0\n0.1,1.4,0\n0.2,0.2,1\n0.2,1.4,0\n1.4,1.4,0\n");

    const auto json = run({"family", c, "--dim", "0", "--mode", "diagonal", "--format", "json"});
    CHECK(nlohmann::json::parse(json.out)["cells"].size() == 4);

    CHECK(run({"family", c, "--dim", "1", "--mode", "fixed-delta"}).code == 1);
    CHECK(run({"family", c, "--dim", "1", "--mode", "fixed-delta", "--delta", "0.1", "--grid", "0.1"}).code == 0);
    CHECK(run({"family", c, "--dim", "1", "--grid", "0.2,0.1"}).code == 1);
    CHECK(run({"family", c, "--dim", "1", "--stat", "median"}).code == 1);

    const auto spectra_out = s.path("spectra.csv");
    CHECK(run({"family", c, "--dim", "1", "--mode", "diagonal", "-o", spectra_out}).code == 0);
    std::ifstream in(spectra_out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "dim,a,b,index,eigenvalue");

    setenv("PLTK_JOBS", "3", 1);
    CHECK(run({"family", c, "--dim", "1", "--grid", "0.1,0.2,1.4", "--stat", "betti"}).out == pairs.out);
    unsetenv("PLTK_JOBS");
}

TEST_CASE("bench and laplacian dump") {
    Scratch s;
    const auto c = s.write("sq.json", export_json(square_complex()));
    const auto bench = run({"bench", c, "--dim", "1", "--grid", "2,3"});
    CHECK(bench.code == 0);
    CHECK(bench.out.rfind("dim,a,b,size,matrix_seconds,eigen_seconds\n1,2,2,5,", 0) == 0);

    const auto lap = run({"laplacian", c, "--dim", "0", "--a", "3"});
    CHECK(lap.out == "3,-1,-1,-1\n-1,2,0,-1\n-1,0,2,-1\n-1,-1,-1,3\n");
    const auto up = run({"laplacian", c, "--dim", "2", "--a", "3", "--part", "down"});
    CHECK(up.out == "3\n");
}

TEST_CASE("usage and input errors") {
    Scratch s;
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"spectra", "x.json"}).code == 1);
    CHECK(run({"spectra", s.path("missing.json"), "--dim", "0", "--a", "0"}).code == 2);
    const auto broken = s.write("broken.json", "{\"boundaries\": 3}");
    const auto r = run({"spectra", broken, "--dim", "0", "--a", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("error: $") != std::string::npos);
    const auto csv = s.write("bad.csv", "0,0\n1,q\n");
    const auto p = run({"build", "rips", "-i", csv});
    CHECK(p.code == 2);
    CHECK(p.err.find("line 2") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}
