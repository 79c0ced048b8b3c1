#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "momenta/io.hpp"
#include "momenta/rational.hpp"

using namespace momenta;
namespace fs = std::filesystem;

namespace {

const char* kCli = MOMENTA_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("momenta_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    std::string cmd = std::string(kCli) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

const char* kHarmonicSystem = R"json({
    "name": "harmonic",
    "lambda": 1,
    "lhs": ["1-x"],
    "matrix": ["1"],
    "rhs": [{"kind": "constant", "value": "1", "window": [0, 0]}]
})json";

const char* kHarmonicInit = R"json({
    "initial-values": [{"component": 1, "eps-order": 0, "values": ["0"]}]
})json";

} // namespace

TEST_CASE("pipeline subcommand writes moment files and a manifest") {
    TempDir tmp;
    write_file(tmp.path / "sys.json", kHarmonicSystem);
    write_file(tmp.path / "iv.json", kHarmonicInit);
    int rc = run("pipeline " + (tmp.path / "sys.json").string() + " --init " +
                 (tmp.path / "iv.json").string() + " --mu 8 --window 0:0 --out " +
                 (tmp.path / "out").string() + " --oracle-check --verify-window");
    CHECK(rc == 0);
    MomentFileData data = read_moment_file((tmp.path / "out" / "harmonic_f1_e0.mom").string());
    REQUIRE(data.values.size() == 9);
    CHECK(data.values[8] == make_rational(761, 280));
    std::ifstream manifest(tmp.path / "out" / "manifest.json");
    std::stringstream ss;
    ss << manifest.rdbuf();
    CHECK(ss.str().find("\"oracle\": \"match\"") != std::string::npos);
    CHECK(ss.str().find("\"window-verify\": \"match\"") != std::string::npos);
}

TEST_CASE("manifests are byte-identical across runs") {
    TempDir tmp;
    write_file(tmp.path / "sys.json", kHarmonicSystem);
    write_file(tmp.path / "iv.json", kHarmonicInit);
    std::string base = "pipeline " + (tmp.path / "sys.json").string() + " --init " +
                       (tmp.path / "iv.json").string() + " --mu 12 --window 0:0 --out ";
    CHECK(run(base + (tmp.path / "a").string()) == 0);
    CHECK(run(base + (tmp.path / "b").string()) == 0);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    CHECK(slurp(tmp.path / "a" / "manifest.json") == slurp(tmp.path / "b" / "manifest.json"));
    CHECK(slurp(tmp.path / "a" / "harmonic_f1_e0.mom") ==
          slurp(tmp.path / "b" / "harmonic_f1_e0.mom"));
}

TEST_CASE("missing initial values exit with the init-shortfall code") {
    TempDir tmp;
    write_file(tmp.path / "sys.json", kHarmonicSystem);
    write_file(tmp.path / "iv.json", R"json({"initial-values": []})json");
    int rc = run("pipeline " + (tmp.path / "sys.json").string() + " --init " +
                 (tmp.path / "iv.json").string() + " --mu 5 --window 0:0 --out " +
                 (tmp.path / "out").string());
    CHECK(rc == 3);
}

TEST_CASE("guess subcommand recovers the Catalan recurrence") {
    TempDir tmp;
    MomentFileData data;
    data.component = 1;
    data.eps_order = 0;
    data.values = {Rational(1)};
    for (int n = 0; n < 19; ++n)
        data.values.push_back(data.values.back() * Rational(2 * (2 * n + 1)) / Rational(n + 2));
    write_moment_file((tmp.path / "catalan.mom").string(), data);
    int rc = run("guess " + (tmp.path / "catalan.mom").string() +
                 " --max-order 3 --max-degree 2 --holdout 5 --out " +
                 (tmp.path / "rec.txt").string());
    CHECK(rc == 0);
    RecurrenceFileData rec = read_recurrence_file((tmp.path / "rec.txt").string());
    REQUIRE(rec.coeffs.size() == 2);
    CHECK(rec.coeffs[0].str() == "-4*n - 2");
    CHECK(rec.coeffs[1].str() == "n + 2");
}

TEST_CASE("guess with too few rows exits with the insufficient-moments code") {
    TempDir tmp;
    MomentFileData data;
    data.component = 1;
    data.eps_order = 0;
    for (int n = 0; n < 5; ++n)
        data.values.emplace_back(n);
    write_moment_file((tmp.path / "short.mom").string(), data);
    int rc = run("guess " + (tmp.path / "short.mom").string() +
                 " --max-order 3 --max-degree 3 --out " + (tmp.path / "rec.txt").string());
    CHECK(rc == 7);
}

TEST_CASE("moments subcommand extends a checkpoint only with a matching hash") {
    TempDir tmp;
    write_file(tmp.path / "rec.txt", "order 2\na_0: -1\na_1: -1\na_2: 1\nrhs: none\n");
    int rc = run("moments " + (tmp.path / "rec.txt").string() + " --init 0,1 --mu 10 --out " +
                 (tmp.path / "fib.mom").string());
    CHECK(rc == 0);
    MomentFileData fib = read_moment_file((tmp.path / "fib.mom").string());
    CHECK(fib.values[10] == 55);

    rc = run("moments " + (tmp.path / "rec.txt").string() + " --mu 20 --extend " +
             (tmp.path / "fib.mom").string() + " --out " + (tmp.path / "fib20.mom").string());
    CHECK(rc == 0);
    MomentFileData ext = read_moment_file((tmp.path / "fib20.mom").string());
    CHECK(ext.values.size() == 21);
    CHECK(ext.values[20] == 6765);

    // a different recurrence must refuse the checkpoint
    write_file(tmp.path / "other.txt", "order 1\na_0: -2\na_1: 1\nrhs: none\n");
    rc = run("moments " + (tmp.path / "other.txt").string() + " --mu 20 --extend " +
             (tmp.path / "fib.mom").string() + " --out " + (tmp.path / "bad.mom").string());
    CHECK(rc == 11);
}

TEST_CASE("solve subcommand reports closed forms and fallbacks") {
    TempDir tmp;
    // F(n+1) - F(n) = ep n: layer 1 rhs as a moment stream
    MomentFileData rhs;
    rhs.component = 1;
    rhs.eps_order = 1;
    for (long n = 0; n < 400; ++n)
        rhs.values.emplace_back(n);
    write_moment_file((tmp.path / "rhs.mom").string(), rhs);
    write_file(tmp.path / "rec.txt",
               "order 1\na_0: -1\na_1: 1\nrhs: " + (tmp.path / "rhs.mom").string() + "\n");
    write_file(tmp.path / "iv.json", R"json({
        "initial-values": [
            {"component": 1, "eps-order": 0, "values": ["0"]},
            {"component": 1, "eps-order": 1, "values": ["0"]}
        ]
    })json");
    int rc = run("solve " + (tmp.path / "rec.txt").string() + " --init " +
                 (tmp.path / "iv.json").string() + " --window 0:1 --mu 6 --out " +
                 (tmp.path / "sol.txt").string());
    CHECK(rc == 0);
    std::ifstream in(tmp.path / "sol.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    // layer 0 closed form 0, layer 1 falls back (stream-only rhs)
    CHECK(ss.str().find("lambda-max 0") != std::string::npos);
    CHECK(ss.str().find("layer 1: moments:") != std::string::npos);
    MomentFileData fb = read_moment_file((tmp.path / "sol_e1.mom").string());
    CHECK(fb.values == std::vector<Rational>{Rational(0), Rational(0), Rational(1), Rational(3),
                                             Rational(6), Rational(10), Rational(15)});
}

TEST_CASE("uncouple subcommand prints stages") {
    TempDir tmp;
    write_file(tmp.path / "sys.json", R"json({
        "lambda": 2,
        "matrix": ["0", "1", "1", "0"],
        "rhs": [{"kind": "zero"}, {"kind": "zero"}]
    })json");
    std::string cmd = std::string(kCli) + " uncouple " + (tmp.path / "sys.json").string() +
                      " --normalize > " + (tmp.path / "out.txt").string() + " 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::ifstream in(tmp.path / "out.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("stage f1 (order 2)") != std::string::npos);
    CHECK(ss.str().find("stage f2 (order 0)") != std::string::npos);
}

TEST_CASE("oracle-check subcommand matches on an ordinary system") {
    TempDir tmp;
    write_file(tmp.path / "sys.json", R"json({
        "lambda": 2,
        "matrix": ["1", "x", "0", "2"],
        "rhs": [{"kind": "constant", "value": "1", "window": [0, 0]}, {"kind": "zero"}]
    })json");
    // the staged recurrence for f1 has a leading-coefficient root at n = 0,
    // so one value beyond max(d', delta) is needed (F1(2) = 2 follows from
    // the system itself); F2's surplus values are consistency-checked
    write_file(tmp.path / "iv.json", R"json({
        "initial-values": [
            {"component": 1, "eps-order": 0, "values": ["1", "2", "2"]},
            {"component": 2, "eps-order": 0, "values": ["1", "2"]}
        ]
    })json");
    int rc = run("oracle-check " + (tmp.path / "sys.json").string() + " --init " +
                 (tmp.path / "iv.json").string() + " --mu 30 --window 0:0");
    CHECK(rc == 0);
}
