#include "cli.hpp"

#include "sqkit/element_json.hpp"
#include "sqkit/structure.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sqkit;
namespace fs = std::filesystem;

namespace {

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch()
{
    static const fs::path dir = [] {
        auto p = fs::temp_directory_path() / "sqkit_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write(const std::string& name, const std::string& text)
{
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> csv_rows(const std::string& text)
{
    std::vector<std::string> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        rows.push_back(line);
    return rows;
}

std::string field(const std::string& row, int index)
{
    std::istringstream in(row);
    std::string f;
    for (int i = 0; i <= index; ++i)
        std::getline(in, f, ',');
    return f;
}

}  // namespace

TEST_CASE("basis command")
{
    CHECK(run({"basis", "--kind", "gamma", "--s", "2", "--d", "3"}).out == "[1,2] [2,1]\n");
    CHECK(run({"basis", "--kind", "gamma", "--s", "5", "--d", "9", "--count"}).out == "70\n");
    CHECK(run({"basis", "--kind", "gamma-sym", "--s", "2", "--d", "4"}).out == "⟨2,2⟩ ⟨3,1⟩\n");
    CHECK(run({"basis", "--kind", "gamma", "--s", "2", "--d", "3", "--json"}).out ==
          "{\"kind\":\"gamma\",\"s\":2,\"d\":3,\"monomials\":[[1,2],[2,1]]}\n");
    CHECK(run({"basis", "--kind", "nabla", "--s", "2", "--d", "0", "--lo", "-1", "--hi", "1"}).out == "[-1,1] [0,0] [1,-1]\n");

    const Run bad = run({"basis", "--kind", "delta", "--s", "2", "--d", "3"});
    CHECK(bad.code == cli::kBadInput);
    CHECK_FALSE(bad.err.empty());
    CHECK(run({"basis", "--s", "2"}).code == cli::kBadInput);
    CHECK(run({"basis", "--s", "x", "--d", "3"}).code == cli::kBadInput);
    CHECK(run({}).code == cli::kBadInput);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("sq command")
{
    const std::string w = write("w.json", to_json(structure::counterexample_w()));
    const std::string z = write("z.json", to_json(structure::counterexample_z()));
    const Run a = run({"sq", "--in", w, "--l", "2"});
    CHECK(a.code == 0);
    CHECK(a.out == "{\"kind\":\"gamma\",\"s\":4,\"d\":6,\"monomials\":[]}\n");
    const Run b = run({"sq", "--in", z, "--l", "1"});
    CHECK(b.code == 0);
    CHECK(element_from_json(b.out).is_zero());
    const Run c = run({"sq", "--in", z, "--l", "0"});
    CHECK(c.out == slurp(z) + "\n");

    // round trip through a file is bit exact
    const std::string out = (scratch() / "zsq3.json").string();
    CHECK(run({"sq", "--in", z, "--l", "3", "--out", out}).code == 0);
    CHECK(element_from_json(slurp(out)) == sq(structure::counterexample_z(), 3));
    CHECK(to_json(element_from_json(slurp(out))) + "\n" == slurp(out));

    CHECK(run({"sq", "--in", write("bad.json", "{\"kind\":\"gamma\""), "--l", "1"}).code == cli::kBadInput);
    CHECK(run({"sq", "--in", write("deg.json", R"({"kind":"gamma","s":1,"d":3,"monomials":[[2]]})"), "--l", "1"}).code == cli::kBadInput);
    CHECK(run({"sq", "--in", (scratch() / "missing.json").string(), "--l", "1"}).code == cli::kBadInput);
}

TEST_CASE("report command")
{
    const Run k0 = run({"report", "--kind", "gamma", "--k", "0", "--s-min", "0", "--s-max", "3", "--d-min", "0", "--d-max", "10"});
    REQUIRE(k0.code == 0);
    const auto rows = csv_rows(k0.out);
    CHECK(rows.front() == "kind,s,d,k,dim_delta,dim_image,dim_unhit,degenerate");
    CHECK(rows.size() == 1 + 4 * 11);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const bool origin = field(rows[i], 1) == "0" && field(rows[i], 2) == "0";
        CHECK(field(rows[i], 6) == (origin ? "1" : "0"));
    }
    CHECK(rows[1] == "gamma,0,0,0,1,0,1,true");
    CHECK(rows[2].rfind("gamma,0,1,", 0) == 0);

    const Run k1 = run({"report", "--k", "1", "--s-min", "1", "--s-max", "1", "--d-min", "4", "--d-max", "32"});
    for (const auto& row : csv_rows(k1.out))
        if (row.rfind("gamma", 0) == 0)
            CHECK(field(row, 6) == "0");

    const Run r59 = run({"report", "--k", "1", "--s-min", "5", "--s-max", "5", "--d-min", "9", "--d-max", "9"});
    CHECK(csv_rows(r59.out).at(1) == "gamma,5,9,1,32,31,1,false");

    const Run j = run({"--format", "json", "report", "--k", "1", "--s-min", "5", "--s-max", "5", "--d-min", "9", "--d-max", "9"});
    CHECK(j.out == "[{\"kind\":\"gamma\",\"s\":5,\"d\":9,\"k\":1,\"dim_delta\":32,\"dim_image\":31,\"dim_unhit\":1,\"degenerate\":false}]\n");

    CHECK(run({"report", "--k", "5"}).code == cli::kGuardrail);
    CHECK(run({"--max-dim", "10", "report", "--k", "1", "--s-min", "5", "--s-max", "5", "--d-min", "9", "--d-max", "9"}).code == cli::kGuardrail);
    // identical invocations give identical bytes
    CHECK(run({"report", "--k", "1", "--s-max", "3"}).out == run({"report", "--k", "1", "--s-max", "3"}).out);
}

TEST_CASE("delta, image and unhit commands")
{
    const Run d = run({"delta", "--s", "1", "--d", "3", "--k", "0"});
    CHECK(d.code == 0);
    CHECK(d.out.find("dim 1") != std::string::npos);
    CHECK(d.out.find("[3]") != std::string::npos);
    CHECK(run({"image", "--s", "1", "--d", "4", "--k", "0"}).out.find("dim 0") != std::string::npos);
    const Run u = run({"--format", "json", "unhit", "--s", "5", "--d", "9", "--k", "1", "--witnesses"});
    CHECK(u.code == 0);
    CHECK(u.out.find("\"dim_unhit\":1") != std::string::npos);
    CHECK(u.out.find("\"witnesses\":[{") != std::string::npos);
    CHECK(run({"unhit", "--s", "1", "--d", "4", "--k", "-1"}).code == cli::kBadInput);
    CHECK(run({"--max-k", "0", "unhit", "--s", "1", "--d", "4", "--k", "1"}).code == cli::kGuardrail);
    CHECK(run({"unhit", "--kind", "nabla", "--s", "2", "--d", "0", "--k", "1", "--lo", "-3", "--hi", "3"}).code == 0);
    CHECK(run({"unhit", "--s", "2", "--d", "3", "--k", "1", "--lo", "-3"}).code == cli::kBadInput);
}

TEST_CASE("verify command")
{
    const Run c = run({"verify", "--suite", "counterexample"});
    CHECK(c.code == 0);
    CHECK(c.out.find("\"passed\":true") != std::string::npos);
    const Run a = run({"verify", "--suite", "adem", "--seed", "7"});
    CHECK(a.code == 0);
    CHECK(a.out.find("\"seed\":7") != std::string::npos);
    CHECK(a.out == run({"verify", "--suite", "adem", "--seed", "7"}).out);
    CHECK(run({"verify", "--suite", "homotopy", "--seed", "7"}).code == 0);
    const Run u = run({"verify", "--suite", "nope"});
    CHECK(u.code == cli::kBadInput);
    CHECK(u.err.find("nope") != std::string::npos);
}

TEST_CASE("preimage command")
{
    const std::string x3 = write("x3.json", R"({"kind":"gamma","s":1,"d":3,"monomials":[[3]]})");
    const std::string prefix = (scratch() / "p").string();
    const Run r = run({"preimage", "--in", x3, "--k", "0", "--out-prefix", prefix});
    CHECK(r.code == 0);
    CHECK(slurp(prefix + "_y0.json") == "{\"kind\":\"gamma\",\"s\":1,\"d\":4,\"monomials\":[[4]]}\n");

    const std::string zero = write("zero.json", R"({"kind":"gamma","s":2,"d":5,"monomials":[]})");
    const std::string zp = (scratch() / "zero").string();
    CHECK(run({"preimage", "--in", zero, "--k", "1", "--out-prefix", zp}).code == 0);
    CHECK(element_from_json(slurp(zp + "_y0.json")).is_zero());
    CHECK(element_from_json(slurp(zp + "_y1.json")).is_zero());

    const std::string z = write("z.json", to_json(structure::counterexample_z()));
    const Run rz = run({"preimage", "--in", z, "--k", "1", "--kind", "gamma", "--position", "1", "--out-prefix", (scratch() / "zz").string()});
    CHECK(rz.code == cli::kPreimageRejected);
    CHECK(rz.err.find("[1,") != std::string::npos);

    const std::string x2 = write("x2.json", R"({"kind":"gamma","s":1,"d":2,"monomials":[[2]]})");
    const Run r2 = run({"preimage", "--in", x2, "--k", "0", "--out-prefix", (scratch() / "x2").string()});
    CHECK(r2.code == cli::kPreimageRejected);
    CHECK(r2.err.find("i = 0") != std::string::npos);

    CHECK(run({"preimage", "--in", x3, "--k", "0", "--kind", "nabla"}).code == cli::kBadInput);
    CHECK(run({"preimage", "--in", x3, "--k", "9"}).code == cli::kGuardrail);
}

TEST_CASE("explore-ker-im command")
{
    const Run r = run({"explore-ker-im", "--l", "2", "--s-min", "1", "--s-max", "1", "--d-min", "2", "--d-max", "12"});
    const auto rows = csv_rows(r.out);
    CHECK(rows.front() == "kind,s,d,l,dim_ker,dim_im,dim_meet,ker_in_im,im_in_ker");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(field(rows[i], 7) == "true");
    const Run w = run({"--format", "json", "explore-ker-im", "--l", "2", "--s-min", "4", "--s-max", "4", "--d-min", "8", "--d-max", "8"});
    CHECK(w.out.find("\"ker_in_im\":false") != std::string::npos);
    CHECK(run({"explore-ker-im", "--l", "2", "--s-min", "3", "--s-max", "2"}).out == "kind,s,d,l,dim_ker,dim_im,dim_meet,ker_in_im,im_in_ker\n");
}

TEST_CASE("config file and cache directory")
{
    const std::string cfg = write("sqkit.ini", "max-k=0\nformat=json\n");
    CHECK(run({"--config", cfg, "unhit", "--s", "1", "--d", "4", "--k", "1"}).code == cli::kGuardrail);
    const Run j = run({"--config", cfg, "unhit", "--s", "1", "--d", "4", "--k", "0"});
    CHECK(j.out.rfind("{\"kind\"", 0) == 0);
    CHECK(run({"--config", write("typo.ini", "max_k=0\n"), "unhit", "--s", "1", "--d", "4", "--k", "1"}).code == cli::kBadInput);

    const fs::path dir = scratch() / "cache";
    fs::create_directories(dir);
    CHECK(run({"--cache-dir", dir.string(), "unhit", "--s", "4", "--d", "8", "--k", "1"}).code == 0);
    const Run stat = run({"--cache-dir", dir.string(), "cache", "stat"});
    CHECK(stat.code == 0);
    CHECK(stat.out.find("files 0") == std::string::npos);
    CHECK(run({"--cache-dir", dir.string(), "cache", "clear"}).code == 0);
    CHECK(run({"--cache-dir", dir.string(), "cache", "stat"}).out.find("files 0") != std::string::npos);

    ::setenv("SQKIT_CACHE_DIR", dir.string().c_str(), 1);
    CHECK(run({"cache", "stat"}).code == 0);
    ::unsetenv("SQKIT_CACHE_DIR");
    CHECK(run({"cache", "stat"}).code == cli::kBadInput);
    CHECK(run({"cache"}).code == cli::kBadInput);
}
