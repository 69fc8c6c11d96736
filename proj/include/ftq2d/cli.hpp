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

// Command-line front end: threshold, decode, verify-gates, schedule, distill.
//
// Exit codes: 0 success, 1 usage error, 2 fixture or verification failure,
// 3 runtime error. Options may also come from a key-value file given with
// --config (keys are option names, "threshold.trials = 20000" for
// subcommand options); flags on the command line win. FTQ2D_OUT_DIR sets the
// default directory for files written by threshold.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "decoder.hpp"
#include "distill.hpp"
#include "gate_verify.hpp"
#include "noise.hpp"
#include "report.hpp"
#include "schedule.hpp"
#include "threshold.hpp"

namespace ftq2d {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitVerification = 2, kExitRuntime = 3 };

/// User input that parses but makes no sense (bad grid, bad L list).
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace cli_detail {

inline std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception &) {
            throw UsageError("bad integer '" + tok + "' in list");
        }
        if (used != tok.size()) throw UsageError("bad integer '" + tok + "' in list");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

inline std::string read_file(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    os << text;
}

inline std::string default_out_dir() {
    const char *env = std::getenv("FTQ2D_OUT_DIR");
    return env && *env ? env : ".";
}

/// JSON documents carry the same provenance as the text header block.
inline nlohmann::json with_header(nlohmann::json j, const std::string &canonical) {
    j["ftq2d_version"] = std::string(kVersion);
    j["config_hash"] = config_hash(canonical);
    return j;
}

}  // namespace cli_detail

struct ThresholdArgs {
    std::string model = "phenomenological";
    std::string Ls = "3,5,7";
    std::string grid;
    uint64_t trials = 20000;
    uint64_t seed = 0;
    int jobs = 1;
    int rounds = 0;
    int bootstrap = 200;
    std::string csv, json;
};

inline int cmd_threshold(const ThresholdArgs &a, std::ostream &out, std::ostream &err) {
    if (a.model != "phenomenological" && a.model != "circuit") throw UsageError("model must be phenomenological or circuit");
    std::vector<double> grid;
    try {
        grid = parse_grid(a.grid);
    } catch (const std::invalid_argument &e) {
        throw UsageError(std::string("invalid grid: ") + e.what());
    }
    auto Ls = cli_detail::parse_int_list(a.Ls);
    for (int L : Ls) {
        if (L < 2) throw UsageError("L values must be at least 2");
    }
    if (a.trials < 1) throw UsageError("trials must be positive");
    std::ostringstream canon;
    canon << "command=threshold\nmodel=" << a.model << "\nL=" << a.Ls << "\np=" << a.grid << "\ntrials=" << a.trials
          << "\nseed=" << a.seed << "\nrounds=" << a.rounds << "\nbootstrap=" << a.bootstrap << "\n";
    EstimateOptions opt;
    opt.jobs = std::max(1, a.jobs);
    opt.rounds = a.rounds;
    auto pts = sweep(a.model, Ls, grid, a.trials, a.seed, opt);
    std::string dir = cli_detail::default_out_dir();
    std::filesystem::path csv = a.csv.empty() ? std::filesystem::path(dir) / ("threshold_" + a.model + ".csv") : std::filesystem::path(a.csv);
    std::filesystem::path js = a.json.empty() ? std::filesystem::path(dir) / ("crossing_" + a.model + ".json") : std::filesystem::path(a.json);
    cli_detail::write_file(csv, header_block(canon.str()) + curve_csv(pts));
    nlohmann::json summary;
    summary["model"] = a.model;
    summary["points"] = pts.size();
    try {
        summary["crossing"] = crossing_to_json(find_crossing(pts, a.bootstrap, a.seed));
    } catch (const std::exception &e) {
        summary["crossing"] = nullptr;
        summary["error"] = e.what();
        err << "warning: " << e.what() << "\n";
    }
    summary = cli_detail::with_header(summary, canon.str());
    cli_detail::write_file(js, summary.dump(2) + "\n");
    out << summary.dump(2) << "\n";
    return kExitOk;
}

struct DecodeArgs {
    std::string input;
    std::string save_trial;
    std::string model = "circuit";
    int L = 0;
    int rounds = 0;
    double p = -1;
    uint64_t seed = 0;
    bool have_seed = false;
    bool graphs = false;
};

inline int cmd_decode(const DecodeArgs &a, std::ostream &out) {
    TrialSample s;
    int L = 0, T = 0;
    std::ostringstream canon;
    if (!a.input.empty()) {
        auto j = nlohmann::json::parse(cli_detail::read_file(a.input));
        L = j.at("L").get<int>();
        T = j.value("T", L);
        s = trial_from_json(j);
        canon << "command=decode\ninput=" << j.dump() << "\n";
    } else {
        if (a.L < 2 || a.p < 0 || !a.have_seed) throw UsageError("decode needs --input, or --L, --p and --seed to sample a trial");
        L = a.L;
        T = a.rounds > 0 ? a.rounds : a.L;
        auto dm = build_model(L, T, config_at(a.model, a.p));
        auto rng = trial_rng(a.seed, 0);
        s = dm.sample(rng, true);
        canon << "command=decode\nmodel=" << a.model << "\nL=" << L << "\nrounds=" << T << "\np=" << format_double(a.p)
              << "\nseed=" << a.seed << "\n";
        if (!a.save_trial.empty()) cli_detail::write_file(a.save_trial, trial_to_json(dm, s).dump(2) + "\n");
    }
    if (L < 2) throw UsageError("trial L must be at least 2");
    const int per_sector = L * L * (T + 1);
    for (int sec : {kPrimal, kDual}) {
        for (int d : s.defects[sec]) {
            if (d < 0 || d >= per_sector) throw UsageError("detector id out of range");
        }
    }
    auto r = decode(L, s.defects);
    auto outcome = classify(s.logical ^ r.logical());
    nlohmann::json j;
    j["L"] = L;
    j["T"] = T;
    for (int sec : {kPrimal, kDual}) {
        const auto &c = r.sectors[sec];
        auto g = build_matching_graph(sec, L, s.defects[sec]);
        nlohmann::json pairs = nlohmann::json::array();
        for (auto [u, v] : c.pairs) pairs.push_back({s.defects[sec][u], s.defects[sec][v]});
        nlohmann::json sj{{"defects", s.defects[sec]}, {"pairs", pairs}, {"weight", c.weight}, {"correction_qubits", c.qubits},
                          {"correction_logical", c.logical}};
        if (a.graphs) sj["graph"] = g.dump();
        j[sec == kPrimal ? "primal" : "dual"] = sj;
    }
    j["uncorrected_logical"] = s.logical;
    j["residual_class"] = s.logical ^ r.logical();
    j["failed"] = {{"primal", outcome.primal_failed}, {"dual", outcome.dual_failed}, {"any", outcome.failed()}};
    out << cli_detail::with_header(j, canon.str()).dump(2) << "\n";
    return kExitOk;
}

inline int cmd_verify_gates(const std::vector<std::string> &paths, const std::string &out_path, std::ostream &out,
                            std::ostream &err) {
    std::vector<std::string> files = paths;
    if (files.empty()) {
        for (const auto &e : std::filesystem::directory_iterator(FTQ2D_FIXTURE_DIR)) {
            if (e.path().extension() == ".json") files.push_back(e.path().string());
        }
        std::sort(files.begin(), files.end());
    }
    nlohmann::json rep = nlohmann::json::array();
    bool all_ok = true;
    std::string canon = "command=verify-gates\n";
    for (const auto &path : files) {
        nlohmann::json entry{{"fixture", path}};
        try {
            auto text = cli_detail::read_file(path);
            canon += path + "=" + config_hash(text) + "\n";
            auto f = fixture_from_json(nlohmann::json::parse(text));
            auto r = verify_gate(f.layout, f.surfaces, f.expected);
            entry["name"] = f.name;
            entry["report"] = report_to_json(r);
            entry["pass"] = r.ok;
            all_ok &= r.ok;
            for (const auto &s : r.surfaces) {
                for (const auto &v : s.violations) {
                    err << path << ": surface '" << s.name << "' violates " << v.condition << " at " << v.cell.str() << "\n";
                }
            }
        } catch (const std::exception &e) {
            entry["pass"] = false;
            entry["error"] = e.what();
            all_ok = false;
            err << path << ": " << e.what() << "\n";
        }
        rep.push_back(entry);
    }
    nlohmann::json doc = cli_detail::with_header({{"fixtures", rep}, {"pass", all_ok}}, canon);
    if (out_path.empty()) {
        out << doc.dump(2) << "\n";
    } else {
        cli_detail::write_file(out_path, doc.dump(2) + "\n");
    }
    return all_ok ? kExitOk : kExitVerification;
}

inline int cmd_schedule(int L, int rounds, const std::string &out_path, std::ostream &out) {
    if (L < 2) throw UsageError("L must be at least 2");
    if (rounds < 1) throw UsageError("rounds must be positive");
    auto c = build_schedule(L, rounds);
    std::string canon = "command=schedule\nL=" + std::to_string(L) + "\nrounds=" + std::to_string(rounds) + "\n";
    std::string text = header_block(canon) + circuit_to_text(c);
    if (out_path.empty()) {
        out << text;
    } else {
        cli_detail::write_file(out_path, text);
    }
    return kExitOk;
}

inline int cmd_distill(double p, double target, std::ostream &out) {
    if (!(p >= 0 && p <= 1) || !(target > 0 && target < 1)) throw UsageError("need p in [0, 1] and target in (0, 1)");
    std::string canon = "command=distill\np=" + format_double(p) + "\ntarget=" + format_double(target) + "\n";
    out << cli_detail::with_header(distillation_table(p, target), canon).dump(2) << "\n";
    return kExitOk;
}

/// Runs the CLI on an argument vector (args[0] is the program name).
inline int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"ftq2d: topological fault tolerance with 2D-local gates"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "key-value configuration file (flags win)");
    app.require_subcommand(1);

    ThresholdArgs th;
    auto *t = app.add_subcommand("threshold", "Monte Carlo threshold sweep: curve CSV and crossing JSON");
    t->add_option("--model", th.model, "phenomenological or circuit")->capture_default_str();
    t->add_option("--L", th.Ls, "comma-separated lattice sizes")->capture_default_str();
    t->add_option("--p", th.grid, "grid lo:hi:step or comma list")->required();
    t->add_option("--trials", th.trials, "trials per point")->capture_default_str();
    t->add_option("--seed", th.seed, "master seed")->required();
    t->add_option("--jobs", th.jobs, "worker threads (does not change results)")->capture_default_str();
    t->add_option("--rounds", th.rounds, "noisy rounds (0 means L)")->capture_default_str();
    t->add_option("--bootstrap", th.bootstrap, "bootstrap replicates for the crossing error")->capture_default_str();
    t->add_option("--csv", th.csv, "curve CSV path (default $FTQ2D_OUT_DIR/threshold_<model>.csv)");
    t->add_option("--json", th.json, "crossing JSON path (default $FTQ2D_OUT_DIR/crossing_<model>.json)");

    DecodeArgs de;
    auto *d = app.add_subcommand("decode", "Decode one trial and report pairing and residual class");
    d->add_option("--input", de.input, "trial JSON with L, T and per-sector defects");
    d->add_option("--model", de.model, "model for sampled trials")->capture_default_str();
    d->add_option("--L", de.L, "lattice size for a sampled trial");
    d->add_option("--rounds", de.rounds, "noisy rounds for a sampled trial (0 means L)");
    d->add_option("--p", de.p, "error rate for a sampled trial");
    auto *dseed = d->add_option("--seed", de.seed, "seed for a sampled trial");
    d->add_option("--save-trial", de.save_trial, "write the sampled trial JSON here");
    d->add_flag("--graphs", de.graphs, "include the matching graphs");

    std::vector<std::string> fixtures;
    std::string verify_out;
    auto *v = app.add_subcommand("verify-gates", "Certify gate fixtures (default: the shipped set)");
    v->add_option("fixtures", fixtures, "fixture JSON files");
    v->add_option("--out", verify_out, "report path (default stdout)");

    int sL = 3, sR = 4;
    std::string s_out;
    auto *s = app.add_subcommand("schedule", "Emit the syndrome-extraction circuit file");
    s->add_option("--L", sL, "lattice size")->capture_default_str();
    s->add_option("--rounds", sR, "noisy rounds")->capture_default_str();
    s->add_option("--out", s_out, "circuit path (default stdout)");

    double dp = 0, dt = 0;
    auto *ds = app.add_subcommand("distill", "Distillation levels and table for a physical error rate");
    ds->add_option("--p", dp, "physical error rate")->required();
    ds->add_option("--target", dt, "target logical error")->required();

    std::reverse(args.begin(), args.end());
    if (!args.empty()) args.pop_back();
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion &) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    de.have_seed = dseed->count() > 0;
    try {
        if (t->parsed()) return cmd_threshold(th, out, err);
        if (d->parsed()) return cmd_decode(de, out);
        if (v->parsed()) return cmd_verify_gates(fixtures, verify_out, out, err);
        if (s->parsed()) return cmd_schedule(sL, sR, s_out, out);
        if (ds->parsed()) return cmd_distill(dp, dt, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception &e) {
        err << "error: malformed input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    err << "usage error: no command\n";
    return kExitUsage;
}

}  // namespace ftq2d
