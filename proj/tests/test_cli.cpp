#include <doctest.h>

#include <json.hpp>

#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr folded into the captured output.
Run run(const std::string& args) {
    const std::string cmd = std::string(TRICAUSAL_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("tricausal_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

nlohmann::json manifest(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

}  // namespace

TEST_CASE("show prints builtin objects") {
    const auto f = run("show fritz");
    CHECK(f.code == 0);
    CHECK(f.out.find("variables A:4 B:4 C:4") != std::string::npos);
    CHECK(f.out.find("0 0 0 (2+sqrt2)/32") != std::string::npos);
    CHECK(run("show wagon-wheel").code == 0);
    CHECK(run("show wagon-wheel-sets").code == 0);
    CHECK(run("show nothing").code == 1);
}

TEST_CASE("eval reports the exact value and verdict") {
    const auto dir = scratch("eval");
    const auto r = run("--out " + dir.string() + " eval --inequality wagon-wheel --distribution fritz");
    CHECK(r.code == 0);
    CHECK(r.out.find("value -1/16") != std::string::npos);
    CHECK(r.out.find("\nviolated") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "eval.json"));
    CHECK(j["violated"] == true);
    const auto m = manifest(dir);
    CHECK(m["command"] == "eval");
    CHECK(m["outputs"][0]["path"] == "eval.json");
}

TEST_CASE("input errors exit with code 1") {
    const auto dir = scratch("errors");
    spit(dir / "xyz.txt", "variables X:2 Y:2\n0 0 1\n");
    CHECK(run("--out " + dir.string() + " eval --distribution " + (dir / "xyz.txt").string()).code == 1);
    spit(dir / "bad.txt", "variables A:4 B:4 C:4\n0 0 0 1/2\n");
    CHECK(run("--out " + dir.string() + " eval --distribution " + (dir / "bad.txt").string()).code == 1);
    CHECK(run("--out " + dir.string() + " eval --distribution " + (dir / "missing.txt").string()).code != 0);
}

TEST_CASE("derive writes a certificate, an inequality and digests") {
    const auto dir = scratch("derive");
    const auto r = run("--out " + dir.string() + " derive --inflation wagon-wheel --distribution fritz");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("infeasible") != std::string::npos);
    const auto m = manifest(dir);
    CHECK(m["tool_version"] == "0.1.0");
    CHECK(m["rng_seed"].is_number());
    std::set<std::string> names;
    for (const auto& o : m["outputs"]) {
        names.insert(o["path"].get<std::string>());
        CHECK(o["sha256"].get<std::string>().size() == 64);
    }
    CHECK(names == std::set<std::string>{"certificate.txt", "inequality.txt", "summary.json"});
    const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(s["verdict"] == "infeasible");
    CHECK(s["inequality_terms"].get<int>() > 0);

    // The derived inequality evaluates through the CLI as violated.
    const auto e = run("--out " + (dir / "e").string() + " eval --inequality " + (dir / "inequality.txt").string());
    CHECK(e.code == 0);
    CHECK(e.out.find("\nviolated") != std::string::npos);
}

TEST_CASE("reruns are byte identical except for the wall clock") {
    const auto dir = scratch("rerun");
    const std::string args = "--out " + dir.string() + " --rng-seed 5 derive --inflation wagon-wheel";
    REQUIRE(run(args).code == 0);
    const auto first_ineq = slurp(dir / "inequality.txt");
    const auto first_cert = slurp(dir / "certificate.txt");
    auto first = manifest(dir);
    REQUIRE(run(args).code == 0);
    CHECK(slurp(dir / "inequality.txt") == first_ineq);
    CHECK(slurp(dir / "certificate.txt") == first_cert);
    auto second = manifest(dir);
    first.erase("wall_clock_seconds");
    second.erase("wall_clock_seconds");
    CHECK(first == second);
}

TEST_CASE("spiral inflation finds the Fritz distribution compatible") {
    const auto dir = scratch("spiral");
    const auto r = run("--out " + dir.string() + " derive --inflation spiral --distribution fritz");
    CHECK(r.code == 0);
    CHECK(r.out.find("compatible at this inflation") != std::string::npos);
    CHECK(fs::exists(dir / "witness.txt"));
}

TEST_CASE("noise scan needs a violated starting point") {
    const auto dir = scratch("noise");
    spit(dir / "zero.txt", "0\n");
    const auto r = run("--out " + dir.string() + " noise-scan --inequality " + (dir / "zero.txt").string());
    CHECK(r.code == 3);
    CHECK(r.out.find("precondition failed") != std::string::npos);
}

TEST_CASE("optimize with zero budget returns the seed") {
    const auto dir = scratch("optimize");
    const auto r = run("--out " + dir.string() + " optimize --budget 0 --seed fritz");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "result.json"));
    CHECK(j["violation"].get<double>() == doctest::Approx(1.0 / 16).epsilon(1e-9));
    for (const char* f : {"distribution.txt", "support.dat", "trace.dat", "manifest.json"}) CHECK(fs::exists(dir / f));
}

TEST_CASE("config file keys override flags") {
    const auto dir = scratch("config");
    const auto out = dir / "from-config";
    spit(dir / "run.json", R"({"out": ")" + out.string() + R"(", "distribution": "uniform", "rng_seed": 9})");
    const auto r = run("--config " + (dir / "run.json").string() + " --out " + (dir / "ignored").string() +
                       " eval --distribution fritz");
    CHECK(r.code == 0);
    REQUIRE(fs::exists(out / "eval.json"));
    CHECK(nlohmann::json::parse(slurp(out / "eval.json"))["distribution"] == "uniform");
    CHECK(manifest(out)["rng_seed"] == 9);
    spit(dir / "broken.json", "{");
    CHECK(run("--config " + (dir / "broken.json").string() + " show fritz").code == 1);
}
