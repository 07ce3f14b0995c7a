#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"

using namespace mshift;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out;
};

// stderr is folded into stdout; we only assert on merged text
RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(MSHIFT_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> ls;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) ls.push_back(l);
    return ls;
}

bool has_line(const std::string& text, const std::string& want) {
    for (const auto& l : lines_of(text))
        if (l == want) return true;
    return false;
}

bool has_prefix_line(const std::string& text, const std::string& prefix) {
    for (const auto& l : lines_of(text))
        if (l.rfind(prefix, 0) == 0) return true;
    return false;
}

// fixture files live in a per-process scratch directory
const fs::path& scratch() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("mshift-cli-" + std::to_string(getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string ruin_file(int n) {
    Rational p(1, 3);
    return write_file("walk" + std::to_string(n) + ".sgf",
                      emit_sgf(fx::ruin_graph(n, p), fx::ruin_rho(p), fx::ruin_labels(n)));
}

std::string parity_file(int n) {
    GspExtension e = fx::ruin_parity(n, Rational(1, 3));
    return write_file("parity" + std::to_string(n) + ".sgf",
                      emit_sgf(materialize(e), e.rho, materialize_labels(e)));
}

std::string data_file(const std::string& name) {
    return (fs::path(MSHIFT_DATA_DIR) / name).string();
}

}  // namespace

TEST_CASE("cli usage errors exit with 1") {
    CHECK(run_cli("").code == 1);
    CHECK(run_cli("bogus").code == 1);
    CHECK(run_cli("degree").code == 1);
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("degree missing-file.sgf").code == 1);
}

TEST_CASE("cli validate") {
    auto ok = run_cli("--report validate " + data_file("ruin3.sgf"));
    CHECK(ok.code == 0);
    CHECK(has_line(ok.out, "vertices=3"));
    CHECK(has_line(ok.out, "edges=6"));
    CHECK(has_line(ok.out, "period=1"));
    CHECK(has_line(ok.out, "rho-uniform=yes"));
    CHECK(has_line(ok.out, "labeled=yes"));
    CHECK(has_line(ok.out, "valid=yes"));

    auto human = run_cli("validate " + data_file("ruin3.sgf"));
    CHECK(human.code == 0);
    CHECK(has_line(human.out, "valid: yes"));

    CHECK(run_cli("validate " + data_file("bad_rowsum.sgf")).code == 2);
    CHECK(run_cli("validate " + data_file("bad_keyword.sgf")).code == 2);

    auto ext = run_cli("--report validate " + data_file("parity3.sgf"));
    CHECK(ext.code == 0);
    CHECK(has_line(ext.out, "extension=yes"));
    CHECK(has_line(ext.out, "extension.d=2"));
}

TEST_CASE("cli info reports exact stationary weights") {
    auto r = run_cli("--report info " + data_file("ruin3.sgf"));
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "stationary.1=4/7"));
    CHECK(has_line(r.out, "stationary.2=2/7"));
    CHECK(has_line(r.out, "stationary.3=1/7"));
    CHECK(has_line(r.out, "rho.1=1/3"));
}

TEST_CASE("cli degree on the ruin walk") {
    auto r = run_cli("--report degree " + ruin_file(3));
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "config.n-max=8"));
    CHECK(has_line(r.out, "degree.d=1"));
    CHECK(has_line(r.out, "degree.n=1"));
    CHECK(has_line(r.out, "degree.certified=yes"));
    CHECK(has_line(r.out, "degree.certificate=unit-degree"));
    CHECK(has_line(r.out, "degree.witness=0 0"));
    CHECK(has_line(r.out, "degree.witness-length=2"));
}

TEST_CASE("cli reads cocycle files as their skew products") {
    std::string ext = data_file("parity3.sgf");
    auto r = run_cli("--report degree " + ext);
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "degree.d=2"));
    CHECK(has_line(r.out, "degree.certified=yes"));
    CHECK(has_line(r.out, "degree.certificate=distinct-letter-weights"));

    auto i = run_cli("--report info " + ext);
    CHECK(i.code == 0);
    CHECK(has_line(i.out, "extension.d=2"));
    CHECK(has_line(i.out, "vertices=6"));

    // the cocycle file and its flattened form present the same shift
    auto v = run_cli("--report iso " + ext + " " + parity_file(3));
    CHECK(v.code == 0);
    CHECK(has_line(v.out, "iso.verdict=YES"));
}

TEST_CASE("cli degree is oblivious to worker count") {
    auto pick = [](const std::string& text) {
        std::vector<std::string> keep;
        for (const auto& l : lines_of(text))
            if (l.rfind("degree.", 0) == 0) keep.push_back(l);
        return keep;
    };
    auto one = run_cli("--report --jobs 1 degree " + parity_file(3));
    auto four = run_cli("--report --jobs 4 degree " + parity_file(3));
    CHECK(one.code == 0);
    CHECK(four.code == 0);
    CHECK(pick(one.out) == pick(four.out));
    CHECK(has_line(one.out, "degree.d=2"));
}

TEST_CASE("cli canon writes a parseable extension") {
    std::string out = (scratch() / "walk3-canon.sgf").string();
    auto r = run_cli("--report canon --out " + out + " " + ruin_file(3));
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "canon.d=1"));
    CHECK(has_line(r.out, "canon.base-size=1"));

    std::ifstream in(out);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    GspExtension e = parse_extension(ss.str(), 1u << 20);
    CHECK(e.d == 1);
    CHECK(e.base_size() == 1);
}

TEST_CASE("cli iso with certificate round trip") {
    std::string g1 = ruin_file(2), g2 = ruin_file(3);
    std::string cert = (scratch() / "walk23.cert").string();
    auto r = run_cli("--report iso --cert " + cert + " " + g1 + " " + g2);
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "iso.verdict=YES"));
    CHECK(has_line(r.out, "iso.d1=1"));
    CHECK(has_line(r.out, "iso.d2=1"));

    auto v = run_cli("--report verify-cert " + g1 + " " + g2 + " " + cert);
    CHECK(v.code == 0);
    CHECK(has_line(v.out, "cert.valid=yes"));

    SECTION("tampered certificates are rejected") {
        std::ifstream in(cert);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        // misroute the first hom1 line to a different target edge
        auto pos = text.find("hom1 ");
        REQUIRE(pos != std::string::npos);
        auto eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol - pos);
        std::string target = line.substr(line.rfind(' ') + 1);
        std::string other = target == "0@1" ? "1@1" : "0@1";
        std::string bad = text.substr(0, pos) + line.substr(0, line.rfind(' ') + 1) + other +
                          text.substr(eol);
        std::string badpath = write_file("tampered.cert", bad);
        auto b = run_cli("--report verify-cert " + g1 + " " + g2 + " " + badpath);
        CHECK(b.code == 2);
        CHECK(has_line(b.out, "cert.valid=no"));
    }

    SECTION("certificates asserting no are rejected") {
        std::string nopath = write_file("no.cert", "cert no\n");
        auto b = run_cli("--report verify-cert " + g1 + " " + g2 + " " + nopath);
        CHECK(b.code == 2);
        CHECK(has_line(b.out, "cert.valid=no"));
    }
}

TEST_CASE("cli iso verdict NO exits with 2") {
    auto r = run_cli("--report iso " + ruin_file(3) + " " + parity_file(3));
    CHECK(r.code == 2);
    CHECK(has_line(r.out, "iso.verdict=NO"));
    CHECK(has_line(r.out, "iso.reason=minimal-index"));
}

TEST_CASE("cli iso budget exhaustion exits with 3") {
    auto r = run_cli("--report --coloring-budget 0 iso " + ruin_file(2) + " " + ruin_file(3));
    CHECK(r.code == 3);
    CHECK(has_line(r.out, "iso.verdict=UNKNOWN"));
    CHECK(has_prefix_line(r.out, "iso.reason=budget:"));
}

TEST_CASE("cli common-ext emits a verifiable certificate") {
    std::string g1 = ruin_file(2), g2 = ruin_file(3);
    std::string out = (scratch() / "common.cert").string();
    auto r = run_cli("--report common-ext --out " + out + " " + g1 + " " + g2);
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "commonext.d=1"));
    CHECK(has_line(r.out, "commonext.vertices=4"));

    auto v = run_cli("--report verify-cert " + g1 + " " + g2 + " " + out);
    CHECK(v.code == 0);
    CHECK(has_line(v.out, "cert.valid=yes"));
}

TEST_CASE("cli sample is deterministic in the seed") {
    std::string g = ruin_file(3);
    auto a = run_cli("--seed 5 sample --length 50 " + g);
    auto b = run_cli("--seed 5 sample --length 50 " + g);
    auto c = run_cli("--seed 9 sample --length 50 " + g);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    auto ls = lines_of(a.out);
    REQUIRE(ls.size() == 50);
    StochasticGraph graph = fx::ruin_graph(3, Rational(1, 3));
    for (const auto& id : ls) CHECK(graph.edge_index(id) >= 0);

    CHECK(run_cli("sample --length 0 " + g).out.empty());
}
