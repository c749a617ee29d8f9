// End-to-end tests driving the installed CLI binary as a subprocess.

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(COOPGAME_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// Scratch directory holding the game files the tests feed to the binary.
class Scratch {
  public:
    Scratch() {
        dir_ = std::filesystem::temp_directory_path() /
               ("coopgame_cli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir_);
    }
    ~Scratch() { std::filesystem::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path);
        out << content;
        return path.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

  private:
    std::filesystem::path dir_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kVoting = R"({"n": 3, "kind": "voting", "weights": [2, 1, 1], "quota": 3})";
const char* kG2 = R"({"n": 2, "kind": "tabulated", "values": [0, 1, 2, 4]})";

}  // namespace

TEST_CASE("value subcommand reproduces the worked voting example") {
    Scratch tmp;
    const std::string game = tmp.file("voting.json", kVoting);

    auto shap = run_cli("value --game " + game + " --method shapley");
    REQUIRE(shap.exit_code == 0);
    auto js = nlohmann::json::parse(shap.output);
    CHECK(js["method"] == "shapley");
    CHECK(js["n"] == 3);
    CHECK(std::fabs(js["values"][0].get<double>() - 2.0 / 3.0) <= 1e-12);
    CHECK(std::fabs(js["values"][1].get<double>() - 1.0 / 6.0) <= 1e-12);
    CHECK(std::fabs(js["values"][2].get<double>() - 1.0 / 6.0) <= 1e-12);

    auto bz = run_cli("value --game " + game + " --method banzhaf");
    REQUIRE(bz.exit_code == 0);
    auto jb = nlohmann::json::parse(bz.output);
    CHECK(std::fabs(jb["values"][0].get<double>() - 0.75) <= 1e-12);
    CHECK(std::fabs(jb["values"][1].get<double>() - 0.25) <= 1e-12);
}

TEST_CASE("kstep with one step matches banzhaf end to end") {
    Scratch tmp;
    for (const char* body : {kVoting, kG2}) {
        const std::string game = tmp.file("game.json", body);
        auto ks = run_cli("value --game " + game + " --method kstep --steps 1 --init 0.5");
        auto bz = run_cli("value --game " + game + " --method banzhaf");
        REQUIRE(ks.exit_code == 0);
        REQUIRE(bz.exit_code == 0);
        auto jk = nlohmann::json::parse(ks.output);
        auto jb = nlohmann::json::parse(bz.output);
        REQUIRE(jk["values"].size() == jb["values"].size());
        for (std::size_t i = 0; i < jk["values"].size(); ++i)
            CHECK(std::fabs(jk["values"][i].get<double>() - jb["values"][i].get<double>()) <= 1e-12);
    }
}

TEST_CASE("varindex output carries diagnostics") {
    Scratch tmp;
    const std::string game = tmp.file("g2.json", kG2);
    auto res = run_cli("value --game " + game + " --method varindex");
    REQUIRE(res.exit_code == 0);
    auto js = nlohmann::json::parse(res.output);
    CHECK(js["method"] == "varindex");
    CHECK(js["diagnostics"]["converged_at"].is_number_integer());
    CHECK(js["diagnostics"]["kl"].get<double>() >= 0.0);
    CHECK(js["diagnostics"]["temperature"] == 1.0);
    CHECK(std::fabs(js["values"][0].get<double>() - 1.946) <= 2e-3);
    CHECK(std::fabs(js["values"][1].get<double>() - 2.874) <= 2e-3);
}

TEST_CASE("marginals subcommand emits the EBM identity") {
    Scratch tmp;
    const std::string game = tmp.file("g2.json", kG2);
    auto res = run_cli("marginals --game " + game + " --temperature 1 --at 0.5,0.5");
    REQUIRE(res.exit_code == 0);
    auto js = nlohmann::json::parse(res.output);
    const double lz = js["log_z"].get<double>();
    CHECK(std::fabs(lz - std::log(1.0 + std::exp(1.0) + std::exp(2.0) + std::exp(4.0))) <= 1e-12);
    CHECK(std::fabs(js["true_marginals"][0].get<double>() - 0.87232) <= 1e-4);
    CHECK(std::fabs(js["elbo"].get<double>() + js["kl"].get<double>() - lz) <= 1e-9);
}

TEST_CASE("removal-curve emits ordered CSV") {
    Scratch tmp;
    const std::string game = tmp.file("g2.json", kG2);
    auto res = run_cli("removal-curve --game " + game + " --method banzhaf --direction desc");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output == "step,removed_player,payoff\n0,,4\n1,1,1\n2,0,0\n");
    auto asc = run_cli("removal-curve --game " + game + " --method banzhaf --direction asc");
    CHECK(asc.output == "step,removed_player,payoff\n0,,4\n1,0,2\n2,1,0\n");
}

TEST_CASE("flid-gen is byte-identical across runs and loadable") {
    Scratch tmp;
    const std::string out_a = tmp.path("a.json");
    const std::string out_b = tmp.path("b.json");
    REQUIRE(run_cli("flid-gen --n 6 --d 4 --seed 7 --out " + out_a).exit_code == 0);
    REQUIRE(run_cli("flid-gen --n 6 --d 4 --seed 7 --out " + out_b).exit_code == 0);
    CHECK(slurp(out_a) == slurp(out_b));
    REQUIRE(run_cli("flid-gen --n 6 --d 4 --seed 8 --out " + out_b).exit_code == 0);
    CHECK(slurp(out_a) != slurp(out_b));
    auto val = run_cli("value --game " + out_a + " --method shapley");
    CHECK(val.exit_code == 0);
}

TEST_CASE("randomized paths are deterministic given the seed") {
    Scratch tmp;
    const std::string game = tmp.file("g2.json", kG2);
    const std::string flags = "value --game " + game + " --method banzhaf --samples 500 --seed 11";
    auto a = run_cli(flags);
    auto b = run_cli(flags);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    auto js = nlohmann::json::parse(a.output);
    CHECK(js["diagnostics"]["seed"] == 11);
    CHECK(js["diagnostics"]["samples"] == 1000);  // 500 per coordinate, 2 players

    const std::string os_flags =
        "value --game " + game + " --method varindex --one-shot 200 --seed 3";
    auto c = run_cli(os_flags);
    auto d = run_cli(os_flags);
    REQUIRE(c.exit_code == 0);
    CHECK(c.output == d.output);
}

TEST_CASE("bench subcommand writes the benchmark CSV") {
    Scratch tmp;
    const std::string out = tmp.path("bench.csv");
    auto res = run_cli("bench --suite flid --n 4 --d 2 --seeds 2 --seed 5 --out " + out);
    REQUIRE(res.exit_code == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("n,D,seed,method,mse,spearman,kl,converged_at\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 2 seeds x 3 methods
}

TEST_CASE("axioms subcommand passes on its provable suite") {
    auto res = run_cli("axioms --seed 1 --n 5 --count 5");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("FAIL") == std::string::npos);
    CHECK(res.output.find("PASS") != std::string::npos);
}

TEST_CASE("exit codes distinguish failure modes") {
    Scratch tmp;
    // usage error
    CHECK(run_cli("value --method shapley").exit_code == 2);
    CHECK(run_cli("value --game x.json --method nonsense").exit_code == 2);
    // conflicting gradient flags
    const std::string game = tmp.file("g2.json", kG2);
    CHECK(run_cli("value --game " + game + " --exact --samples 10").exit_code == 2);
    // capacity error: tabulated game beyond the exact limit
    const std::string big = tmp.file("big.json", R"({"n": 30, "kind": "tabulated", "values": []})");
    CHECK(run_cli("value --game " + big + " --method banzhaf --exact").exit_code == 3);
    // file and parse errors
    CHECK(run_cli("value --game " + tmp.path("missing.json") + " --method shapley").exit_code == 4);
    const std::string bad = tmp.file("bad.json", "{\"n\": 2, \"kind\": \"mystery\"}");
    CHECK(run_cli("value --game " + bad + " --method shapley").exit_code == 4);
    // help exits cleanly
    CHECK(run_cli("--help").exit_code == 0);
}
