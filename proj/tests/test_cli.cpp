#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "abeldim/cli.hpp"
#include "abeldim/random.hpp"

using namespace abeldim;

namespace {

namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    auto dir = fs::temp_directory_path() / "abeldim_test_cli";
    fs::create_directories(dir);
    auto p = (dir / name).string();
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("cli examples") {
    auto g1 = write_temp("g1.graph", "v: -2\n");
    auto a2 = write_temp("a2.graph", "v1: -2\nv2: -2\nedge v1 v2\n");
    auto bad = write_temp("bad.graph", "v: 1\n");

    auto r = run({"abel-dim", "--mode", "generic", "-g", g1, "-Z", "v:2", "-l", "v:1", "--coords", "estar"});
    CHECK(r.code == 0);
    CHECK(first_line(r.out) == "0");

    r = run({"invariants", "-g", a2});
    CHECK(r.code == 0);
    CHECK(r.out.find("det 3\n") != std::string::npos);
    CHECK(r.out.find("|H| 3\n") != std::string::npos);
    CHECK(r.out.find("Z_K 0\n") != std::string::npos);
    CHECK(r.out.find("Z_min v1:1 v2:1\n") != std::string::npos);

    r = run({"validate", "-g", bad});
    CHECK(r.code == 1);
    CHECK(r.err.find("NotNegativeDefinite") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    auto g1 = write_temp("g1.graph", "v: -2\n");
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"chi", "-g", g1}).code == 2);
    CHECK(run({"abel-dim", "-g", g1, "-Z", "v:1", "--mode", "sideways"}).code == 2);
    CHECK(run({"chi", "-g", g1, "-Z", "v:1", "--format", "xml"}).code == 2);
    CHECK(run({"chi", "--no-such-flag"}).code == 2);
    CHECK(run({"chi", "-g", "/nonexistent/file"}).code == 2);
    auto h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("--replay") != std::string::npos);
}

TEST_CASE("math errors exit 1 with the error name") {
    auto g1 = write_temp("g1.graph", "v: -2\n");
    auto r = run({"abel-dim", "-g", g1, "-Z", "v:0", "-l", "v:1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("CycleBelowE") != std::string::npos);
    r = run({"abel-dim", "-g", g1, "-Z", "v:1", "-l", "v:1/2", "--coords", "e"});
    CHECK(r.code == 1);
    CHECK(r.err.find("NotNegLipman") != std::string::npos);
    r = run({"chi", "-g", g1, "-Z", "w:1", "--format", "json"});
    CHECK(r.code == 1);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["error"]["kind"] == "UnknownVertex");
}

TEST_CASE("commands map to module values") {
    auto a2 = write_temp("a2.graph", "v1: -2\nv2: -2\nedge v1 v2\n");
    auto g1 = write_temp("g1.graph", "v: -2\n");
    CHECK(first_line(run({"chi", "-g", g1, "-Z", "v:1"}).out) == "1");
    CHECK(first_line(run({"chi", "-g", g1, "-Z", "v:1/2"}).out) == "1/4");
    CHECK(first_line(run({"minchi", "-g", a2, "-Z", "v1:2 v2:2"}).out) == "0");
    CHECK(first_line(run({"h1-generic", "-g", a2, "-Z", "v1:3 v2:3"}).out) == "0");
    CHECK(first_line(run({"h1-pic", "-g", g1, "-Z", "v:3", "-l", "v:1"}).out) == "0");
    CHECK(first_line(run({"dominant", "-g", a2, "-Z", "v1:1 v2:1", "-l", "v1:1", "--v1", "v1"}).out) == "true");
    // rational: every mode gives 0; elliptic: every mode gives 1
    auto e = write_temp("e.graph", "c: -1\na: -2\nb: -3\nd: -7\nedge c a\nedge c b\nedge c d\n");
    for (std::string mode : {"generic", "h1", "relative", "section5", "tower"}) {
        CAPTURE(mode);
        auto r = run({"abel-dim", "--mode", mode, "-g", a2, "-Z", "v1:2 v2:2", "-l", "v1:1 v2:1"});
        CHECK(r.code == 0);
        CHECK(first_line(r.out) == "0");
        r = run({"abel-dim", "--mode", mode, "-g", e, "-Z", "c:2 a:1 b:1 d:1", "-l", "c:1 d:1"});
        CHECK(r.code == 0);
        CHECK(first_line(r.out) == "1");
    }
    CHECK(first_line(run({"h1-generic", "-g", e, "-Z", "c:2 a:1 b:1 d:1"}).out) == "1");
    auto r = run({"blowup", "-g", a2, "--vertex", "v1", "-Z", "v1:1 v2:1", "--format", "json"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    auto id = j["result"]["new_vertex"].get<std::string>();
    CHECK(id == "v1~1");
    CHECK(j["result"]["cycle"].get<std::string>() == "v1:1 v1~1:1 v2:1");
    CHECK(j["result"]["graph"].get<std::string>().find("v1: -3\n") != std::string::npos);
}

TEST_CASE("structured output replays byte for byte") {
    auto e = write_temp("e.graph", "c: -1\na: -2\nb: -3\nd: -7\nedge c a\nedge c b\nedge c d\n");
    std::vector<std::vector<std::string>> runs = {
        {"invariants", "-g", e},
        {"abel-dim", "--mode", "relative", "-g", e, "-Z", "c:2 a:1 b:1 d:1", "-l", "c:1", "--v1", "a b"},
        {"abel-dim", "--mode", "tower", "-g", e, "-Z", "c:2 a:1 b:1 d:1", "-l", "c:1"},
        {"b-invariant", "-g", e, "-Z", "c:2 a:1 b:1 d:1", "-l", "c:1 d:1", "--v1", "c"},
        {"fuzz", "--seed", "3", "--count", "5"},
    };
    for (auto args : runs) {
        CAPTURE(args[0]);
        args.push_back("--format");
        args.push_back("json");
        auto first = run(args);
        REQUIRE(first.code == 0);
        auto j = nlohmann::json::parse(first.out);
        CHECK(j["format"] == 1);
        CHECK(j["config"]["graph"].get<std::string>().empty() == (args[0] == "fuzz"));
        auto path = write_temp("replay.json", first.out);
        auto again = run({"--replay", path});
        CHECK(again.code == 0);
        CHECK(again.out == first.out);
    }
}

TEST_CASE("config round trip") {
    auto g1 = write_temp("g1.graph", "v: -2\n");
    auto c = parse_args({"abel-dim", "--mode", "tower", "-g", g1, "-Z", "v:2", "-l", "v:1", "--v1", "v", "--jobs",
                         "3", "--tower-cap", "77", "--hypothesis", "strict", "--base", "genim", "--format", "json"});
    CHECK(c.mode == "tower");
    CHECK(c.graph == "v: -2\n");
    CHECK(c.jobs == 3);
    CHECK(c.tower_cap == 77);
    auto back = config_from_json(nlohmann::json::parse(config_to_json(c).dump()));
    CHECK(back == c);
    CHECK_THROWS_AS(parse_args({"abel-dim", "--coords", "polar"}), UsageError);
}

TEST_CASE("table oracle and misses report") {
    auto a2 = write_temp("a2.graph", "v1: -2\nv2: -2\nedge v1 v2\n");
    auto table = write_temp("empty.table", "# nothing yet\n");
    auto misses = (fs::temp_directory_path() / "abeldim_test_cli" / "misses.txt").string();
    fs::remove(misses);
    auto r = run({"h1-rel", "-g", a2, "-Z", "v1:2 v2:1", "-l", "v1:1", "--v1", "v1", "--oracle", table, "--misses",
                  misses});
    CHECK(r.code == 1);
    CHECK(r.err.find("MissingEntry") != std::string::npos);
    auto report = slurp(misses);
    CHECK(report.find("= ?") != std::string::npos);

    auto fallback = run({"h1-rel", "-g", a2, "-Z", "v1:2 v2:1", "-l", "v1:1", "--v1", "v1", "--oracle", table,
                         "--table-fallback"});
    auto generic = run({"h1-rel", "-g", a2, "-Z", "v1:2 v2:1", "-l", "v1:1", "--v1", "v1"});
    CHECK(fallback.code == 0);
    CHECK(fallback.out == generic.out);
}

TEST_CASE("emit table") {
    auto e = write_temp("e.graph", "c: -1\na: -2\nb: -3\nd: -7\nedge c a\nedge c b\nedge c d\n");
    auto path = (fs::temp_directory_path() / "abeldim_test_cli" / "tower.txt").string();
    auto r = run({"abel-dim", "--mode", "tower", "-g", e, "-Z", "c:2 a:1 b:1 d:1", "-l", "c:1", "--emit-table", path});
    CHECK(r.code == 0);
    auto text = slurp(path);
    CHECK(text.rfind("# tower table\n", 0) == 0);
    CHECK(text.find("d0 " + first_line(r.out) + "\n") != std::string::npos);
}

TEST_CASE("fuzz") {
    auto empty = run({"fuzz", "--count", "0", "--format", "json"});
    CHECK(empty.code == 0);
    CHECK(nlohmann::json::parse(empty.out)["result"]["disagreements"].empty());

    auto a = run({"fuzz", "--seed", "1", "--count", "50", "--format", "json"});
    CHECK(a.code == 0);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["result"]["disagreements"].empty());
    CHECK(j["result"]["towers"].get<int>() > 0);
    auto b = run({"fuzz", "--seed", "1", "--count", "50", "--format", "json", "--jobs", "2"});
    CHECK(nlohmann::json::parse(b.out)["result"] == j["result"]);
}

TEST_CASE("random graphs") {
    auto g = random_graph(7, 1);
    CHECK(g->size() == 1);
    CHECK(g->euler(0) <= -2);
    CHECK(random_graph(7, 6)->to_text() == random_graph(7, 6)->to_text());
    auto path = write_temp("r.graph", random_graph(7, 6)->to_text());
    CHECK(run({"validate", "-g", path}).code == 0);
}
