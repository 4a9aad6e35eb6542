#include "gammacap/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace gammacap;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "gammacap");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = runCli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const std::string& name)
{
    return std::string(GAMMACAP_DATA_DIR) + "/" + name;
}

fs::path scratch(const std::string& name, const std::string& contents)
{
    const fs::path p = fs::temp_directory_path() / ("gammacap_cli_test_" + name);
    std::ofstream(p) << contents;
    return p;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST_CASE("digest")
{
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hexDigest(0xabcULL) == "0000000000000abc");
    CHECK(round15(0.1 + 0.2) == 0.3);
}

TEST_CASE("capacity of two disks reproduces the table layout")
{
    const auto r = run({"capacity", data("two_disks.json")});
    CHECK(r.code == kExitOk);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[1].find("1.875000000000000") != std::string::npos);
    CHECK(rows[1].find("1.882812500000000") != std::string::npos);
    CHECK(rows[4].find("1.875595019096872") != std::string::npos);
}

TEST_CASE("corner basis on the square")
{
    const auto r = run({"capacity", data("square.json"), "--corner-basis", "--n", "6"});
    CHECK(r.code == kExitNotConverged);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[1].rfind("    2", 0) == 0);
    CHECK(rows[5].rfind("    6", 0) == 0);
    CHECK(rows[5].find("0.8346265") != std::string::npos);
}

TEST_CASE("input errors exit 1 without output")
{
    auto r = run({"capacity", "/nonexistent/geometry.json"});
    CHECK(r.code == kExitError);
    CHECK(r.out.empty());

    const auto bad = scratch("bad.json", R"({"components": [{"type": "circle", "center": [0, 0]}]})");
    r = run({"capacity", bad.string()});
    CHECK(r.code == kExitError);
    CHECK(r.out.empty());
    CHECK(r.err.find("/components/0") != std::string::npos);

    const auto broken = scratch("broken.json", "{\"components\": [\n  {\"type\": ");
    r = run({"capacity", broken.string()});
    CHECK(r.code == kExitError);
    CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("usage errors")
{
    CHECK(run({}).code == kExitError);
    CHECK(run({"capacity"}).code == kExitError);
    CHECK(run({"capacity", data("two_disks.json"), "--n", "3"}).code == kExitError);
    CHECK(run({"capacity", data("two_disks.json"), "--emit", "xml"}).code == kExitError);
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"--version"}).out == std::string(kToolVersion) + "\n");
}

TEST_CASE("machine-readable output is byte-identical across runs")
{
    for (const char* fmt : {"csv", "json"}) {
        const auto a = run({"capacity", data("two_disks.json"), "--emit", fmt});
        const auto b = run({"capacity", data("two_disks.json"), "--emit", fmt});
        CHECK(a.code == kExitOk);
        CHECK(a.out == b.out);
    }
    const auto csv = lines(run({"capacity", data("two_disks.json"), "--emit", "csv"}).out);
    CHECK(csv[0] == "stage,basis_size,lower,upper");
    CHECK(csv[1] == "0,2,1.875,1.8828125");
}

TEST_CASE("run manifest")
{
    const fs::path m1 = fs::temp_directory_path() / "gammacap_cli_test_m1.json";
    const fs::path m2 = fs::temp_directory_path() / "gammacap_cli_test_m2.json";
    run({"capacity", data("two_disks.json"), "--manifest", m1.string()});
    run({"capacity", data("two_disks.json"), "--rings", "2", "--manifest", m2.string()});
    std::ifstream f1(m1);
    std::ifstream f2(m2);
    const auto j1 = nlohmann::json::parse(f1);
    const auto j2 = nlohmann::json::parse(f2);
    CHECK(j1["command"] == "capacity");
    CHECK(j1["input_digest"] == j2["input_digest"]);
    CHECK(j1["stages"].size() == 5);
    CHECK(j2["stages"].size() == 3);
    CHECK(j1["config"]["max_stage"] == 4);
    CHECK(j1["tool_version"] == kToolVersion);
    CHECK(j1.contains("elapsed_s"));
}

TEST_CASE("subadditivity sweep")
{
    CHECK(run({"subadd", data("pair_pm2.json"), "--r-steps", "0"}).code == kExitError);
    const auto a = run({"subadd", data("pair_pm2.json"), "--r-steps", "5"});
    const auto b = run({"subadd", data("pair_pm2.json"), "--r-steps", "5"});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    const auto rows = lines(a.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].rfind("r,ratio_lower,ratio_upper", 0) == 0);
    CHECK(a.err.find("max certified ratio upper bound") != std::string::npos);
    CHECK(a.err.find("monotonicity: no certified increase") != std::string::npos);

    const auto cfg = scratch("random.json", R"({"random": {"n": 2, "m": 2, "side": 4, "seed": 1}})");
    const auto s1 = run({"subadd", cfg.string(), "--r-steps", "3"});
    const auto s2 = run({"subadd", cfg.string(), "--r-steps", "3", "--seed", "2"});
    CHECK(s1.code == kExitOk);
    CHECK(s1.out != s2.out);
}

TEST_CASE("rational verdicts")
{
    const auto r = run({"rational", data("rational_three_real.json")});
    CHECK(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "consistent-with-Ahlfors");
    CHECK(j["lower"].get<double>() <= 0.7);
    CHECK(j["upper"].get<double>() >= 0.7);
    CHECK(j["stages"].size() == 3);
    CHECK(r.out.find("\"verdict\"") < r.out.find("\"stages\""));

    const auto table = run({"rational", data("rational_three_real.json"), "--emit", "table"});
    CHECK(table.out.find("verdict: consistent-with-Ahlfors") != std::string::npos);

    const auto overlapping = scratch("overlap.json", R"({"residues": [1, 1], "poles": [2, 2]})");
    const auto o = run({"rational", overlapping.string()});
    CHECK(o.code == kExitError);
    CHECK(o.err.find("schema error") != std::string::npos);

    const auto clustered = scratch("cluster.json", R"({"residues": [1, 1], "poles": [0.1, -0.1]})");
    const auto d = run({"rational", clustered.string()});
    CHECK(d.code == kExitDisconnected);
    CHECK(nlohmann::json::parse(d.out)["error"] == "disconnected-level-set");
}
