#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "twintour/io.hpp"

#ifndef TWINTOUR_BIN
#define TWINTOUR_BIN "twintour"
#endif

using namespace twintour;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(TWINTOUR_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) output += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string value_of(const std::string& report, const std::string& key) {
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find(": ");
        if (pos != std::string::npos && line.substr(0, pos) == key)
            return line.substr(pos + 2);
    }
    return "";
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "twintour_cli_test";
        std::filesystem::create_directories(path);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("generation round trips preserve digests") {
    TempDir dir;
    auto gen = run("gen circular --n 9 -o " + dir.file("c9"));
    CHECK(gen.exit_code == 0);
    std::string digest = value_of(gen.output, "tournament_digest");
    CHECK_FALSE(digest.empty());
    CHECK(value_of(gen.output, "width") == "1");

    // Re-parse and re-format: the bytes must be identical.
    std::string data = read_file(dir.file("c9.trn"));
    std::istringstream in(data);
    Tournament t = parse_tournament(in);
    CHECK(format_tournament(t) == data);
}

TEST_CASE("iso exit codes and report keys") {
    TempDir dir;
    run("gen circular --n 9 -o " + dir.file("c9"));
    run("gen random --n 9 --seed 5 -o " + dir.file("r9"));

    auto same = run("iso " + dir.file("c9.trn") + " " + dir.file("c9.trn") + " --k 2 --oracle");
    CHECK(same.exit_code == 0);
    CHECK(value_of(same.output, "isomorphic") == "yes");
    CHECK(value_of(same.output, "aut_order") == "9");
    CHECK(value_of(same.output, "oracle") == "agree");

    auto diff = run("iso " + dir.file("c9.trn") + " " + dir.file("r9.trn") + " --k 9");
    CHECK(diff.exit_code == 1);
    CHECK(value_of(diff.output, "isomorphic") == "no");

    auto exceeded =
        run("partition-seq " + dir.file("c9.trn") + " --k 0");
    CHECK(exceeded.exit_code == 2);
    CHECK(value_of(exceeded.output, "result") == "twin-width-exceeded");

    auto usage = run("iso");
    CHECK(usage.exit_code == 64);
}

TEST_CASE("verification pipeline over files") {
    TempDir dir;
    auto gen = run("gen grid --n 4 --m 4 -o " + dir.file("g"));
    CHECK(gen.exit_code == 0);
    auto verify = run("tww-verify " + dir.file("g.red") + " " + dir.file("g.seq"));
    CHECK(verify.exit_code == 0);
    CHECK(value_of(verify.output, "width") == "6");

    // Deterministic reports modulo the timing field.
    auto again = run("tww-verify " + dir.file("g.red") + " " + dir.file("g.seq"));
    auto strip_time = [](std::string text) {
        auto pos = text.find("time_ms");
        return text.substr(0, pos);
    };
    CHECK(strip_time(verify.output) == strip_time(again.output));
}

TEST_CASE("width conversion chain") {
    TempDir dir;
    run("gen random --n 6 --seed 11 -o " + dir.file("t6"));
    write_file(dir.file("ord"), "order 6\n5 4 3 2 1 0\n");
    auto conv = run("width convert --graph " + dir.file("t6.trn") + " --from order --to dpd " +
                    "--input " + dir.file("ord") + " -o " + dir.file("t6.dpd"));
    CHECK(conv.exit_code == 0);
    CHECK_FALSE(value_of(conv.output, "width").empty());

    auto to_tree = run("width convert --graph " + dir.file("t6.trn") + " --from dpd --to dtd " +
                       "--input " + dir.file("t6.dpd") + " -o " + dir.file("t6.dtd"));
    CHECK(to_tree.exit_code == 0);
    CHECK(value_of(to_tree.output, "width") == value_of(conv.output, "width"));

    auto to_seq = run("width convert --graph " + dir.file("t6.trn") +
                      " --from dtd --to contraction --input " + dir.file("t6.dtd") + " -o " +
                      dir.file("t6.ctr"));
    CHECK(to_seq.exit_code == 0);
}

TEST_CASE("wl pair reporting") {
    TempDir dir;
    run("gen cfi --base k4 --twist 0 -o " + dir.file("a0"));
    run("gen cfi --base k4 --twist 1 -o " + dir.file("a1"));
    auto pair = run("wl --k 2 --pair " + dir.file("a0.trn") + " " + dir.file("a1.trn"));
    CHECK(pair.exit_code == 0);
    CHECK(value_of(pair.output, "distinguished") == "no");

    auto verify0 = run("tww-verify " + dir.file("a0.trn") + " " + dir.file("a0.seq"));
    CHECK(verify0.exit_code == 0);
    CHECK(std::stoi(value_of(verify0.output, "width")) <= 35);
}

TEST_CASE("json output is a flat object with the same keys") {
    TempDir dir;
    run("gen circular --n 5 -o " + dir.file("c5"));
    auto json = run("--json iso " + dir.file("c5.trn") + " " + dir.file("c5.trn") + " --k 2");
    CHECK(json.exit_code == 0);
    CHECK(json.output.find("{\"command\": \"iso\"") == 0);
    CHECK(json.output.find("\"aut_order\": \"5\"") != std::string::npos);

    auto bad = run("tww-verify " + dir.file("missing.file") + " " + dir.file("c5.trn"));
    CHECK(bad.exit_code == 1);
    CHECK_FALSE(value_of(bad.output, "error").empty());
}

TEST_CASE("malformed files produce line diagnostics") {
    TempDir dir;
    write_file(dir.file("bad.trn"), "tournament 3\n011\n00x\n110\n");
    auto result = run("iso " + dir.file("bad.trn") + " " + dir.file("bad.trn") + " --k 2");
    CHECK(result.exit_code == 1);
    CHECK(value_of(result.output, "error").find("line 3") != std::string::npos);
}
