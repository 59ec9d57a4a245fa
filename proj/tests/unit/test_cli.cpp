#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"

namespace {

namespace fs = std::filesystem;
using spinchain::cli::ExitCode;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = spinchain::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("spinchain_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 2") {
    CHECK(invoke({}).code == ExitCode::kUsageError);
    CHECK(invoke({"frobnicate"}).code == ExitCode::kUsageError);
    CHECK(invoke({"verify-brackets", "--samples", "0"}).code == ExitCode::kUsageError);
    CHECK(invoke({"classify", "1,0,0"}).code == ExitCode::kUsageError);
    CHECK(invoke({"linearize", "--s", "1.5"}).code == ExitCode::kUsageError);
    CHECK(invoke({"image", "--samples", "10", "--out", "/nonexistent/dir"}).code == ExitCode::kUsageError);
    CHECK(invoke({"--help"}).code == ExitCode::kPass);
}

TEST_CASE("verify-brackets is deterministic and versioned") {
    const Outcome a = invoke({"verify-brackets", "--samples", "300", "--seed", "5", "--chain-n", "4"});
    const Outcome b = invoke({"verify-brackets", "--samples", "300", "--seed", "5", "--chain-n", "4"});
    REQUIRE(a.code == ExitCode::kPass);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("pass") == true);
    const Outcome csv = invoke({"verify-brackets", "--samples", "50", "--format", "csv"});
    CHECK(csv.code == ExitCode::kPass);
    CHECK(csv.out.find(',') != std::string::npos);
}

TEST_CASE("verify-brackets fails the assertion with an impossible tolerance") {
    CHECK(invoke({"verify-brackets", "--samples", "200", "--tol-bracket", "1e-30"}).code ==
          ExitCode::kAssertionFailure);
}

TEST_CASE("classify") {
    const Outcome a = invoke({"classify", "1,0,0,0,1,0,0,0,1"});
    REQUIRE(a.code == ExitCode::kPass);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.at("rank") == 2);
    const Outcome s4 = invoke({"classify", "0,0,1,0,0,1,0,0,1"});
    CHECK(nlohmann::json::parse(s4.out).at("rank") == 0);
    CHECK(invoke({"classify", "2,0,0,0,1,0,0,0,1"}).code == ExitCode::kUsageError);
}

TEST_CASE("linearize classifies the whole default grid") {
    const Outcome a = invoke({"linearize", "--format", "json"});
    REQUIRE(a.code == ExitCode::kPass);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.contains("golden"));
}

TEST_CASE("image writes its data files") {
    const fs::path d = scratch_dir("image");
    const Outcome a = invoke({"image", "--samples", "2000", "--resolution", "9", "--slice", "0", "--out", d.string()});
    CHECK(a.code == ExitCode::kPass);
    for (const char* f : {"samples.csv", "boundary.csv", "critical_line.csv", "slice.csv"}) {
        CHECK(fs::exists(d / f));
        CHECK(fs::file_size(d / f) > 0);
    }
    fs::remove_all(d);
}

TEST_CASE("config files set options and unknown keys are rejected") {
    const fs::path d = scratch_dir("config");
    {
        std::ofstream f(d / "good.toml");
        f << "[verify-brackets]\nsamples = 40\nseed = 3\n";
    }
    {
        std::ofstream f(d / "bad.toml");
        f << "[verify-brackets]\nsampels = 40\n";
    }
    const Outcome good = invoke({"--config", (d / "good.toml").string(), "verify-brackets"});
    CHECK(good.code == ExitCode::kPass);
    CHECK(nlohmann::json::parse(good.out).at("samples") == 40);
    CHECK(invoke({"--config", (d / "bad.toml").string(), "verify-brackets"}).code == ExitCode::kUsageError);
    fs::remove_all(d);
}

}  // TEST_SUITE
