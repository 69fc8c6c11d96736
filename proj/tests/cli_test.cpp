// Copyright 2026 The ftq2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ftq2d/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

using namespace ftq2d;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ftq2d");
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
    auto p = fs::temp_directory_path() / ("ftq2d_cli_test_" + std::to_string(::getpid())) / name;
    fs::create_directories(p.parent_path());
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int data_rows(const std::string &csv) {
    std::istringstream is(csv);
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '#') ++n;
    }
    return n - 1;  // column header
}

}  // namespace

TEST(Cli, threshold_writes_full_grid_and_crossing) {
    auto csv = scratch("t.csv"), js = scratch("t.json");
    auto r = run({"threshold", "--model", "phenomenological", "--L", "3,5,7", "--p", "0.02:0.04:0.002", "--trials", "40",
                  "--seed", "7", "--bootstrap", "5", "--csv", csv.string(), "--json", js.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto text = slurp(csv);
    EXPECT_EQ(data_rows(text), 33);
    EXPECT_EQ(text.rfind("# ftq2d ", 0), 0u);
    EXPECT_NE(text.find("# config-hash "), std::string::npos);
    auto j = nlohmann::json::parse(slurp(js));
    EXPECT_EQ(j["points"], 33);
    EXPECT_TRUE(j.contains("config_hash"));
    EXPECT_EQ(j["ftq2d_version"], std::string(kVersion));
    EXPECT_TRUE(j.contains("crossing"));
}

TEST(Cli, threshold_is_independent_of_jobs) {
    std::vector<std::string> outputs;
    for (const char *jobs : {"1", "3"}) {
        auto csv = scratch(std::string("j") + jobs + ".csv"), js = scratch(std::string("j") + jobs + ".json");
        auto r = run({"threshold", "--L", "3,5", "--p", "0.025,0.03", "--trials", "60", "--seed", "11", "--jobs", jobs,
                      "--bootstrap", "5", "--csv", csv.string(), "--json", js.string()});
        ASSERT_EQ(r.code, 0) << r.err;
        outputs.push_back(slurp(csv) + slurp(js));
    }
    EXPECT_EQ(outputs[0], outputs[1]);
}

TEST(Cli, usage_errors_exit_one) {
    auto r = run({"threshold", "--p", "0.02:0.04:0.002", "--trials", "10"});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("--seed"), std::string::npos);
    for (const char *grid : {"0.04:0.02:0.002", "0.02:0.04:0", "abc", "0.02:0.04"}) {
        r = run({"threshold", "--p", grid, "--seed", "1", "--trials", "10"});
        EXPECT_NE(r.code, 0) << grid;
        EXPECT_FALSE(r.err.empty()) << grid;
    }
    EXPECT_EQ(run({"threshold", "--p", "0.03", "--seed", "1", "--model", "bogus"}).code, kExitUsage);
    EXPECT_EQ(run({"no-such-command"}).code, kExitUsage);
    EXPECT_EQ(run({}).code, kExitUsage);
    EXPECT_EQ(run({"distill", "--p", "0.01"}).code, kExitUsage);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, env_var_sets_output_directory) {
    auto dir = scratch("envdir");
    fs::remove_all(dir);
    ::setenv("FTQ2D_OUT_DIR", dir.string().c_str(), 1);
    auto r = run({"threshold", "--L", "3,5", "--p", "0.03", "--trials", "20", "--seed", "2", "--bootstrap", "3"});
    ::unsetenv("FTQ2D_OUT_DIR");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "threshold_phenomenological.csv"));
    EXPECT_TRUE(fs::exists(dir / "crossing_phenomenological.json"));
}

TEST(Cli, config_file_and_flag_precedence) {
    auto cfg = scratch("run.ini"), csv = scratch("cfg.csv"), js = scratch("cfg.json");
    std::ofstream(cfg) << "threshold.model = circuit\nthreshold.trials = 7\nthreshold.seed = 3\n";
    auto r = run({"--config", cfg.string(), "threshold", "--L", "3,5", "--p", "0.005", "--trials", "9", "--bootstrap",
                  "2", "--csv", csv.string(), "--json", js.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto text = slurp(csv);
    EXPECT_NE(text.find("circuit,0.005,3,9,"), std::string::npos) << text;
}

TEST(Cli, schedule_has_period_six) {
    auto r = run({"schedule", "--L", "3", "--rounds", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# period 6\n"), std::string::npos);
    EXPECT_NE(r.out.find("# config-hash "), std::string::npos);
    auto c = circuit_from_text(r.out);
    EXPECT_EQ(c.period, 6);
    EXPECT_EQ(run({"schedule", "--L", "1"}).code, kExitUsage);
}

TEST(Cli, distill_reports_three_levels) {
    auto r = run({"distill", "--p", "0.0075", "--target", "1e-15"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["levels"], 3);
    EXPECT_TRUE(j.contains("config_hash"));
}

TEST(Cli, verify_gates_passes_shipped_fixtures) {
    auto r = run({"verify-gates"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["fixtures"].size(), 5u);
    for (const auto &f : j["fixtures"]) EXPECT_TRUE(f["pass"].get<bool>()) << f["fixture"];
}

TEST(Cli, verify_gates_exits_two_on_failure) {
    auto good = fs::path(FTQ2D_FIXTURE_DIR) / "identity.json";
    auto j = nlohmann::json::parse(slurp(good));
    for (auto &s : j["surfaces"]) {
        if (!s["primal"].empty()) s["primal"].erase(s["primal"].begin());
    }
    auto bad = scratch("bad.json");
    std::ofstream(bad) << j.dump();
    auto r = run({"verify-gates", good.string(), bad.string()});
    EXPECT_EQ(r.code, kExitVerification);
    auto rep = nlohmann::json::parse(r.out);
    EXPECT_TRUE(rep["fixtures"][0]["pass"].get<bool>());
    EXPECT_FALSE(rep["fixtures"][1]["pass"].get<bool>());

    auto garbage = scratch("garbage.json");
    std::ofstream(garbage) << "{ not json";
    EXPECT_EQ(run({"verify-gates", garbage.string()}).code, kExitVerification);
}

TEST(Cli, decode_round_trips_a_sampled_trial) {
    auto trial = scratch("trial.json");
    auto a = run({"decode", "--L", "3", "--p", "0.02", "--seed", "5", "--save-trial", trial.string()});
    ASSERT_EQ(a.code, 0) << a.err;
    auto b = run({"decode", "--input", trial.string()});
    ASSERT_EQ(b.code, 0) << b.err;
    auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
    for (const char *k : {"primal", "dual", "residual_class", "failed"}) EXPECT_EQ(ja[k], jb[k]) << k;
    // The pairing covers every defect exactly once.
    for (const char *sec : {"primal", "dual"}) {
        std::multiset<int> seen;
        for (const auto &p : jb[sec]["pairs"]) {
            for (const auto &v : p) {
                if (v.get<int>() >= 0) seen.insert(v.get<int>());
            }
        }
        for (const auto &d : jb[sec]["defects"]) EXPECT_EQ(seen.count(d.get<int>()), 1u);
    }
    EXPECT_EQ(run({"decode", "--L", "3"}).code, kExitUsage);
    EXPECT_EQ(run({"decode", "--input", scratch("missing.json").string()}).code, kExitUsage);
}

TEST(Cli, decode_hand_built_trial) {
    // Two adjacent primal defects in the first layer pair with each other.
    nlohmann::json t{{"L", 3}, {"T", 3}, {"faults", nlohmann::json::array()}, {"logical", 0},
                     {"defects", {{"primal", {0, 1}}, {"dual", nlohmann::json::array()}}}};
    auto path = scratch("hand.json");
    std::ofstream(path) << t.dump();
    auto r = run({"decode", "--input", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["primal"]["pairs"].size(), 1u);
    EXPECT_EQ(j["primal"]["pairs"][0], (nlohmann::json{0, 1}));
    EXPECT_EQ(j["primal"]["weight"], 1);
    EXPECT_EQ(j["residual_class"], 0);
}
