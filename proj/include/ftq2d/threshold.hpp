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

// Monte Carlo logical failure rates and threshold crossings.
//
// A trial draws one fault configuration from the detector model, decodes both
// sectors and fails if either residual winds around the torus. Trial i of a
// point always uses trial_rng(seed, i), so the failure count does not depend
// on how trials are split among worker threads.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "decoder.hpp"
#include "json.hpp"
#include "noise.hpp"
#include "report.hpp"

namespace ftq2d {

/// Reference values quoted alongside results. Reports print them; no test
/// asserts against them.
namespace context {
inline constexpr double kOptimalDecoderThreshold = 3.3e-2;
inline constexpr double kMatchingThreshold = 2.9e-2;
inline constexpr double kCircuitThreshold = 7.5e-3;
inline constexpr double kPriorLocalThreshold = 1.9e-5;
}  // namespace context

struct Interval {
    double lo = 0;
    double hi = 0;
};

/// Wilson score interval for k successes in n trials.
inline Interval wilson_interval(uint64_t k, uint64_t n, double confidence = 0.95) {
    if (n == 0) throw std::invalid_argument("wilson interval needs at least one trial");
    if (k > n) throw std::invalid_argument("more failures than trials");
    if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("confidence must lie in (0, 1)");
    boost::math::normal_distribution<double> normal;
    double z = boost::math::quantile(normal, 0.5 + confidence / 2);
    double nn = static_cast<double>(n);
    double phat = static_cast<double>(k) / nn;
    double z2 = z * z;
    double denom = 1 + z2 / nn;
    double centre = (phat + z2 / (2 * nn)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn)) / denom;
    // The bounds are exactly 0 at k = 0 and exactly 1 at k = n.
    double lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
    double hi = k == n ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

struct CurvePoint {
    std::string model;  ///< "circuit" or "phenomenological"
    double p = 0;
    int L = 0;
    int rounds = 0;
    uint64_t trials = 0;
    uint64_t failures = 0;
    uint64_t primal_failures = 0;
    uint64_t dual_failures = 0;
    double rate = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    uint64_t seed = 0;
};

struct EstimateOptions {
    int rounds = 0;  ///< noisy rounds; 0 means L
    Metric metric;
    int jobs = 1;
    double confidence = 0.95;
};

inline std::string model_tag(const ErrorModelConfig &cfg) {
    return cfg.is_phenomenological() ? "phenomenological" : "circuit";
}

/// Failure counts of trials [begin, end) of one point.
struct Counts {
    uint64_t failures = 0;
    uint64_t primal = 0;
    uint64_t dual = 0;

    Counts &operator+=(const Counts &o) {
        failures += o.failures;
        primal += o.primal;
        dual += o.dual;
        return *this;
    }
};

inline Counts run_trials(const DetectorModel &dm, const Metric &metric, uint64_t seed, uint64_t begin, uint64_t end) {
    Counts c;
    for (uint64_t i = begin; i < end; ++i) {
        auto rng = trial_rng(seed, i);
        auto outcome = decode_and_classify(dm.sample(rng), dm.L, metric);
        c.failures += outcome.failed();
        c.primal += outcome.primal_failed;
        c.dual += outcome.dual_failed;
    }
    return c;
}

/// Logical failure rate of an L x L torus memory under `cfg`.
inline CurvePoint estimate_logical_rate(int L, const ErrorModelConfig &cfg, double p, uint64_t trials, uint64_t seed,
                                        const EstimateOptions &opt = {}) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (L < 2) throw std::invalid_argument("L must be at least 2");
    cfg.validate();
    CurvePoint pt;
    pt.model = model_tag(cfg);
    pt.p = p;
    pt.L = L;
    pt.rounds = opt.rounds > 0 ? opt.rounds : L;
    pt.trials = trials;
    pt.seed = seed;
    const DetectorModel model = build_model(L, pt.rounds, cfg);
    const int jobs = static_cast<int>(std::clamp<uint64_t>(static_cast<uint64_t>(std::max(opt.jobs, 1)), 1, trials));
    std::vector<Counts> parts(jobs);
    auto chunk = [&](int w) {
        uint64_t b = trials * static_cast<uint64_t>(w) / static_cast<uint64_t>(jobs);
        uint64_t e = trials * static_cast<uint64_t>(w + 1) / static_cast<uint64_t>(jobs);
        // Detector models keep sampling scratch space, so each worker owns a copy.
        DetectorModel local = model;
        parts[w] = run_trials(local, opt.metric, seed, b, e);
    };
    if (jobs == 1) {
        chunk(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(chunk, w);
        for (auto &t : pool) t.join();
    }
    Counts total;
    for (const auto &c : parts) total += c;
    pt.failures = total.failures;
    pt.primal_failures = total.primal;
    pt.dual_failures = total.dual;
    pt.rate = static_cast<double>(pt.failures) / static_cast<double>(trials);
    auto ci = wilson_interval(pt.failures, trials, opt.confidence);
    pt.ci_lo = ci.lo;
    pt.ci_hi = ci.hi;
    return pt;
}

/// Noise configuration of one grid value: q = p for the phenomenological
/// model, all four circuit rates equal to p otherwise.
inline ErrorModelConfig config_at(const std::string &model, double p) {
    if (model == "phenomenological") return ErrorModelConfig::phenomenological(p, p);
    if (model == "circuit") return ErrorModelConfig::uniform(p);
    throw std::invalid_argument("unknown model '" + model + "' (expected circuit or phenomenological)");
}

/// Independent seed for one (L, grid index) cell of a sweep.
inline uint64_t point_seed(uint64_t master, int L, size_t grid_index) {
    std::seed_seq seq{static_cast<uint32_t>(master), static_cast<uint32_t>(master >> 32), static_cast<uint32_t>(L),
                      static_cast<uint32_t>(grid_index), 0x70743232u};
    std::array<uint32_t, 2> out;
    seq.generate(out.begin(), out.end());
    return (static_cast<uint64_t>(out[0]) << 32) | out[1];
}

/// Parses "lo:hi:step" or a comma list into an ascending grid.
inline std::vector<double> parse_grid(const std::string &text) {
    std::vector<double> grid;
    auto to_double = [](const std::string &s) {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
        return v;
    };
    try {
        if (text.find(':') != std::string::npos) {
            auto a = text.find(':');
            auto b = text.find(':', a + 1);
            if (b == std::string::npos) throw std::invalid_argument("range needs lo:hi:step");
            double lo = to_double(text.substr(0, a));
            double hi = to_double(text.substr(a + 1, b - a - 1));
            double step = to_double(text.substr(b + 1));
            if (!(step > 0) || hi < lo) throw std::invalid_argument("range needs lo <= hi and step > 0");
            auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
            for (long i = 0; i < n; ++i) {
                // Round to 12 digits so that 0.02 + 5 * 0.002 prints as 0.03.
                double v = lo + static_cast<double>(i) * step;
                grid.push_back(std::round(v * 1e12) / 1e12);
            }
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) grid.push_back(to_double(item));
        }
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument("invalid grid '" + text + "': " + e.what());
    } catch (const std::out_of_range &) {
        throw std::invalid_argument("invalid grid '" + text + "'");
    }
    if (grid.empty()) throw std::invalid_argument("empty grid");
    for (double v : grid) {
        if (!(v >= 0 && v <= 1)) throw std::invalid_argument("grid values must lie in [0, 1]");
    }
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw std::invalid_argument("grid must be strictly ascending");
    }
    return grid;
}

/// Rates for every (L, p) pair, ordered by L then p.
inline std::vector<CurvePoint> sweep(const std::string &model, const std::vector<int> &Ls, const std::vector<double> &grid,
                                     uint64_t trials, uint64_t seed, const EstimateOptions &opt = {}) {
    std::vector<CurvePoint> out;
    for (int L : Ls) {
        for (size_t i = 0; i < grid.size(); ++i) {
            out.push_back(estimate_logical_rate(L, config_at(model, grid[i]), grid[i], trials, point_seed(seed, L, i), opt));
        }
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string curve_csv(const std::vector<CurvePoint> &pts) {
    std::string out = "model,p,L,trials,failures,rate,ci_lo,ci_hi,seed\n";
    for (const auto &pt : pts) {
        out += pt.model + "," + format_double(pt.p) + "," + std::to_string(pt.L) + "," + std::to_string(pt.trials) +
               "," + std::to_string(pt.failures) + "," + format_double(pt.rate) + "," + format_double(pt.ci_lo) + "," +
               format_double(pt.ci_hi) + "," + std::to_string(pt.seed) + "\n";
    }
    return out;
}

inline nlohmann::json point_to_json(const CurvePoint &pt) {
    return {{"model", pt.model},     {"p", pt.p},
            {"L", pt.L},             {"rounds", pt.rounds},
            {"trials", pt.trials},   {"failures", pt.failures},
            {"primal_failures", pt.primal_failures}, {"dual_failures", pt.dual_failures},
            {"rate", pt.rate},       {"ci_lo", pt.ci_lo},
            {"ci_hi", pt.ci_hi},     {"seed", pt.seed}};
}

// ---------------------------------------------------------------------------
// Crossing estimate

struct Crossing {
    double estimate = 0;
    double error = 0;  ///< bootstrap standard deviation
    std::vector<std::pair<std::pair<int, int>, double>> pairwise;  ///< (L_a, L_b) -> crossing
    std::vector<double> bootstrap;  ///< replicate estimates that found a crossing
    int bootstrap_failed = 0;       ///< replicates without a crossing
};

namespace detail {

/// Crossing of two curves sampled on the same grid. Every sign change of
/// rate_b - rate_a is located by linear interpolation; several changes (noise
/// near the crossing) are averaged. Returns NaN if there is none.
inline double pair_crossing(const std::vector<double> &grid, const std::vector<double> &a, const std::vector<double> &b) {
    std::vector<double> hits;
    const size_t n = grid.size();
    for (size_t i = 0; i < n; ++i) {
        double di = b[i] - a[i];
        if (di == 0) {
            // A curve touching zero at the ends is not a crossing on its own.
            bool left = i > 0 && (b[i - 1] - a[i - 1]) != 0;
            bool right = i + 1 < n && (b[i + 1] - a[i + 1]) != 0;
            if (left || right || n == 1) hits.push_back(grid[i]);
            continue;
        }
        if (i + 1 < n) {
            double dj = b[i + 1] - a[i + 1];
            if (dj != 0 && (di < 0) != (dj < 0)) {
                hits.push_back(grid[i] + (grid[i + 1] - grid[i]) * di / (di - dj));
            }
        }
    }
    if (hits.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(hits.begin(), hits.end(), 0.0) / static_cast<double>(hits.size());
}

struct Curves {
    std::vector<double> grid;
    std::vector<int> Ls;
    std::vector<std::vector<double>> rates;    ///< [L index][grid index]
    std::vector<std::vector<uint64_t>> trials;  ///< same layout
};

inline Curves tabulate(const std::vector<CurvePoint> &pts) {
    std::map<int, std::map<double, const CurvePoint *>> by_L;
    for (const auto &pt : pts) by_L[pt.L][pt.p] = &pt;
    if (by_L.size() < 2) throw std::invalid_argument("crossing needs at least two values of L");
    Curves c;
    for (const auto &[p, _] : by_L.begin()->second) c.grid.push_back(p);
    for (const auto &[L, row] : by_L) {
        if (row.size() != c.grid.size()) throw std::invalid_argument("every L must share the same p grid");
        c.Ls.push_back(L);
        std::vector<double> r;
        std::vector<uint64_t> t;
        for (double p : c.grid) {
            auto it = row.find(p);
            if (it == row.end()) throw std::invalid_argument("every L must share the same p grid");
            r.push_back(it->second->rate);
            t.push_back(it->second->trials);
        }
        c.rates.push_back(std::move(r));
        c.trials.push_back(std::move(t));
    }
    return c;
}

/// Mean over adjacent-L pairs; NaN if any pair has no crossing.
inline double combined_crossing(const Curves &c, std::vector<std::pair<std::pair<int, int>, double>> *pairwise) {
    double sum = 0;
    for (size_t k = 0; k + 1 < c.Ls.size(); ++k) {
        double x = pair_crossing(c.grid, c.rates[k], c.rates[k + 1]);
        if (pairwise) pairwise->push_back({{c.Ls[k], c.Ls[k + 1]}, x});
        if (std::isnan(x)) return x;
        sum += x;
    }
    return sum / static_cast<double>(c.Ls.size() - 1);
}

}  // namespace detail

/// Threshold estimate from rate curves of two or more sizes on a shared grid.
/// The error bar comes from a parametric bootstrap that redraws every failure
/// count from a binomial with the observed rate.
inline Crossing find_crossing(const std::vector<CurvePoint> &pts, int bootstrap = 200, uint64_t seed = 1) {
    auto curves = detail::tabulate(pts);
    Crossing out;
    out.estimate = detail::combined_crossing(curves, &out.pairwise);
    if (std::isnan(out.estimate)) throw std::runtime_error("no crossing in grid");
    std::mt19937_64 rng(seed);
    for (int b = 0; b < bootstrap; ++b) {
        auto resampled = curves;
        for (size_t k = 0; k < curves.Ls.size(); ++k) {
            for (size_t i = 0; i < curves.grid.size(); ++i) {
                uint64_t n = curves.trials[k][i];
                if (n == 0) continue;
                std::binomial_distribution<uint64_t> draw(n, std::clamp(curves.rates[k][i], 0.0, 1.0));
                resampled.rates[k][i] = static_cast<double>(draw(rng)) / static_cast<double>(n);
            }
        }
        double x = detail::combined_crossing(resampled, nullptr);
        if (std::isnan(x)) {
            ++out.bootstrap_failed;
        } else {
            out.bootstrap.push_back(x);
        }
    }
    if (out.bootstrap.size() >= 2) {
        double m = std::accumulate(out.bootstrap.begin(), out.bootstrap.end(), 0.0) / static_cast<double>(out.bootstrap.size());
        double ss = 0;
        for (double x : out.bootstrap) ss += (x - m) * (x - m);
        out.error = std::sqrt(ss / static_cast<double>(out.bootstrap.size() - 1));
    }
    return out;
}

inline nlohmann::json crossing_to_json(const Crossing &c) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto &[ls, x] : c.pairwise) {
        pairs.push_back({{"L_a", ls.first}, {"L_b", ls.second}, {"crossing", x}});
    }
    return {{"p_c", c.estimate},
            {"p_c_error", c.error},
            {"pairwise", pairs},
            {"bootstrap", c.bootstrap},
            {"bootstrap_without_crossing", c.bootstrap_failed},
            {"context",
             {{"optimal_decoder_threshold", context::kOptimalDecoderThreshold},
              {"matching_threshold", context::kMatchingThreshold},
              {"circuit_threshold", context::kCircuitThreshold},
              {"prior_local_threshold", context::kPriorLocalThreshold}}}};
}

}  // namespace ftq2d
