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

#include "ftq2d/noise.hpp"

#include <cmath>

#include "gtest/gtest.h"

using namespace ftq2d;

namespace {

/// All defects of a history as (sector, round, check).
std::vector<std::array<int, 3>> defect_list(const SyndromeHistory &h) {
    std::vector<std::array<int, 3>> out;
    int n = h.L * h.L;
    for (int s : {0, 1}) {
        for (int d : h.defects(s)) out.push_back({s, d / n, d % n});
    }
    return out;
}

size_t find_op(const Circuit &c, int t, Gate g, Role role, int skip = 0) {
    for (size_t i = 0; i < c.ops.size(); ++i) {
        const Op &op = c.ops[i];
        if (op.t == t && op.gate == g && c.roles[op.q0] == role && skip-- == 0) return i;
    }
    throw std::logic_error("op not found");
}

}  // namespace

TEST(Noise, zero_probability_channels_are_identity) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(sample_channel_T1(0.0, rng), 0);
        auto two = sample_channel_T2(0.0, rng);
        EXPECT_EQ(two[0], 0);
        EXPECT_EQ(two[1], 0);
    }
}

// Multinomial check: every category count within 5 standard deviations.
TEST(Noise, channel_frequencies_match_multinomial) {
    const double p = 0.3;
    const int n = 1000000;
    std::mt19937_64 rng(2);
    std::array<int, 4> c1{};
    std::array<int, 16> c2{};
    for (int i = 0; i < n; ++i) {
        c1[sample_channel_T1(p, rng)]++;
        auto t = sample_channel_T2(p, rng);
        c2[t[0] | (t[1] << 2)]++;
    }
    auto within = [&](int count, double prob) {
        double sigma = std::sqrt(n * prob * (1 - prob));
        return std::abs(count - n * prob) <= 5 * sigma;
    };
    EXPECT_TRUE(within(c1[0], 1 - p));
    for (int k = 1; k < 4; ++k) EXPECT_TRUE(within(c1[k], p / 3)) << k;
    EXPECT_TRUE(within(c2[0], 1 - p));
    for (int k = 1; k < 16; ++k) EXPECT_TRUE(within(c2[k], p / 15)) << k;
}

// Summing the 15 outcomes: each non-identity Pauli on one qubit appears in 4 of
// them, so the marginal is depolarizing with total rate 12p/15.
TEST(Noise, two_qubit_channel_marginal) {
    const double p = 0.3;
    std::array<double, 4> marginal{1 - p, 0, 0, 0};
    for (int k = 1; k < 16; ++k) marginal[k & 3] += p / 15;
    EXPECT_DOUBLE_EQ(marginal[0], 1 - 12 * p / 15);
    for (int a = 1; a < 4; ++a) EXPECT_DOUBLE_EQ(marginal[a], 4 * p / 15);

    std::mt19937_64 rng(3);
    const int n = 400000;
    std::array<int, 4> counts{};
    for (int i = 0; i < n; ++i) counts[sample_channel_T2(p, rng)[1]]++;
    for (int a = 0; a < 4; ++a) {
        double sigma = std::sqrt(n * marginal[a] * (1 - marginal[a]));
        EXPECT_LE(std::abs(counts[a] - n * marginal[a]), 5 * sigma) << a;
    }
}

TEST(Noise, noiseless_trial_is_clean) {
    auto c = build_schedule(3, 3);
    auto r = run_trial(c, ErrorModelConfig::uniform(0.0), 5);
    EXPECT_TRUE(defect_list(r.history).empty());
    EXPECT_TRUE(r.residual(c.roles).is_identity_up_to_phase());
}

TEST(Noise, single_measurement_flip_gives_time_pair) {
    const int L = 3, T = 4;
    auto c = build_schedule(L, T);
    for (Role role : {Role::SyndromePrimal, Role::SyndromeDual}) {
        // Primal round 1 ends in step 6 + 5; dual round 1 ends in step 12 + 2.
        int t = role == Role::SyndromePrimal ? 11 : 14;
        size_t i = find_op(c, t, Gate::MeasX, role, 4);
        auto rec = meas_record(c, c.ops[i]);
        ASSERT_EQ(rec.round, 1);
        auto res = simulate_frame(c, {Fault{static_cast<int>(i), 0, 0, true}});
        auto d = defect_list(res.history);
        ASSERT_EQ(d.size(), 2u);
        EXPECT_EQ(d[0], (std::array<int, 3>{rec.sector, 1, rec.check}));
        EXPECT_EQ(d[1], (std::array<int, 3>{rec.sector, 2, rec.check}));
    }
}

TEST(Noise, single_code_x_gives_adjacent_same_round_pair) {
    const int L = 3, T = 3;
    auto c = build_schedule(L, T);
    Plane pl{L};
    // X right after the step-3 Hadamard of a horizontal edge in period 1 is an
    // X in the code frame; the site checks of round 1 see it.
    for (int skip = 0; skip < 9; ++skip) {
        size_t i = find_op(c, 9, Gate::H, Role::Code, skip);
        int q = c.ops[i].q0;
        ASSERT_TRUE(pl.horizontal(q));
        auto res = simulate_frame(c, {Fault{static_cast<int>(i), 1, 0, false}});
        auto d = defect_list(res.history);
        ASSERT_EQ(d.size(), 2u);
        auto adj = pl.adjacent_checks(kDual, q);
        std::sort(adj.begin(), adj.end());
        EXPECT_EQ(d[0], (std::array<int, 3>{kDual, 1, adj[0]}));
        EXPECT_EQ(d[1], (std::array<int, 3>{kDual, 1, adj[1]}));
    }
}

TEST(Noise, detector_model_matches_frame_simulation) {
    for (int L : {2, 3}) {
        auto c = build_schedule(L, 3);
        auto cfg = ErrorModelConfig::uniform(0.02);
        auto dm = build_circuit_model(c, cfg);
        Plane pl{L};
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<Fault> faults;
            auto slow = run_trial(c, cfg, 11, trial, &faults);
            std::vector<std::pair<int, int>> fired;
            for (const auto &f : faults) fired.push_back(dm.locate(f));
            auto fast = dm.apply(fired);
            EXPECT_EQ(fast.defects[0], slow.history.defects(0));
            EXPECT_EQ(fast.defects[1], slow.history.defects(1));
            EXPECT_EQ(fast.logical, frame_logical_mask(pl, slow.x, slow.z));
        }
    }
}

TEST(Noise, phenomenological_model_matches_frame_simulation) {
    const int L = 3, T = 3;
    auto dm = build_phenomenological_model(L, T, 0.05, 0.05);
    Plane pl{L};
    for (int trial = 0; trial < 300; ++trial) {
        auto rng = trial_rng(3, trial);
        auto s = dm.sample(rng, true);
        // Rebuild the explicit fault list from the fired mechanisms.
        std::vector<PhenoFault> faults;
        for (auto [m, k] : s.fired) {
            const auto &e = dm.outcomes[dm.mechanisms[m].first_outcome + k];
            int per_sector = (T + 1) * L * L;
            int sector = e.dets[0] >= per_sector;
            int d0 = e.dets[0] - sector * per_sector, d1 = e.dets[1] - sector * per_sector;
            int r = d0 / (L * L);
            if (d1 - d0 == L * L && d0 % (L * L) == d1 % (L * L) && d1 / (L * L) == r + 1) {
                faults.push_back({sector, r, d0 % (L * L), true});
            } else {
                // Find the code qubit between the two checks.
                for (int q = 0; q < pl.num_qubits(); ++q) {
                    if (pl.role(q) != Role::Code) continue;
                    auto adj = pl.adjacent_checks(sector, q);
                    std::sort(adj.begin(), adj.end());
                    if (adj[0] == d0 % (L * L) && adj[1] == d1 % (L * L) &&
                        (loop_bits(pl, sector, q) << (2 * sector)) == e.logical) {
                        faults.push_back({sector, r, q, false});
                        break;
                    }
                }
            }
        }
        ASSERT_EQ(faults.size(), s.fired.size());
        auto slow = simulate_phenomenological(L, T, faults);
        EXPECT_EQ(s.defects[0], slow.history.defects(0));
        EXPECT_EQ(s.defects[1], slow.history.defects(1));
        EXPECT_EQ(s.logical, frame_logical_mask(pl, slow.x, slow.z));
    }
}

TEST(Noise, defect_parity_is_even) {
    const int kTrials = 10000;
    auto circuit = build_circuit_model(build_schedule(3, 3), ErrorModelConfig::uniform(0.01));
    auto pheno = build_phenomenological_model(3, 3, 0.03, 0.03);
    int odd = 0;
    for (int i = 0; i < kTrials; ++i) {
        auto rng = trial_rng(17, i);
        for (const auto *dm : {&circuit, &pheno}) {
            auto s = dm->sample(rng);
            odd += (s.defects[0].size() % 2) + (s.defects[1].size() % 2);
        }
    }
    EXPECT_EQ(odd, 0);
}

TEST(Noise, y_fault_equals_x_then_z) {
    auto c = build_schedule(3, 3);
    Plane pl{3};
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        size_t i = rng() % c.ops.size();
        if (c.ops[i].gate == Gate::MeasX || c.ops[i].gate == Gate::PrepX) continue;
        int op = static_cast<int>(i);
        bool two = c.ops[i].q1 >= 0;
        auto y = simulate_frame(c, {Fault{op, 3, Pauli1(two ? 3 : 0), false}});
        auto xz = simulate_frame(c, {Fault{op, 1, Pauli1(two ? 1 : 0), false}, Fault{op, 2, Pauli1(two ? 2 : 0), false}});
        EXPECT_EQ(y.history.outcomes, xz.history.outcomes);
        EXPECT_EQ(frame_logical_mask(pl, y.x, y.z), frame_logical_mask(pl, xz.x, xz.z));
    }
}

TEST(Noise, no_idle_slot_for_storage_noise) {
    for (int L : {2, 3, 4}) EXPECT_NO_THROW(check_no_idle(build_schedule(L, 2)));
}

TEST(Noise, seed_determinism) {
    auto c = build_schedule(3, 3);
    auto cfg = ErrorModelConfig::uniform(0.02);
    auto a = run_trial(c, cfg, 99, 7);
    auto b = run_trial(c, cfg, 99, 7);
    EXPECT_EQ(a.history.outcomes, b.history.outcomes);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.z, b.z);
    auto dm = build_circuit_model(c, cfg);
    auto r1 = trial_rng(99, 7), r2 = trial_rng(99, 7);
    auto s1 = dm.sample(r1), s2 = dm.sample(r2);
    EXPECT_EQ(s1.defects, s2.defects);
    EXPECT_EQ(s1.logical, s2.logical);
}

TEST(Noise, phenomenological_special_cases) {
    const int L = 4, T = 3;
    Plane pl{L};
    // q = 0, one data flip: two defects in the same round.
    int q = pl.qubit(3, 2);
    auto one = simulate_phenomenological(L, T, {PhenoFault{kPrimal, 1, q, false}});
    auto d = one.history.defects(kPrimal);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0] / (L * L), 1);
    EXPECT_EQ(d[1] / (L * L), 1);
    EXPECT_TRUE(one.history.defects(kDual).empty());

    // p = 0: defects only pair up in time at a fixed check.
    for (int trial = 0; trial < 200; ++trial) {
        auto r = run_trial_phenomenological(L, T, 0.0, 0.2, 8, trial);
        for (int s : {0, 1}) {
            std::map<int, int> per_check;
            for (int x : r.history.defects(s)) per_check[x % (L * L)]++;
            for (auto [c, n] : per_check) EXPECT_EQ(n % 2, 0);
        }
    }

    // T = 1 with q = 0 is the perfect-measurement 2D model: all defects in round 0.
    for (int trial = 0; trial < 100; ++trial) {
        auto r = run_trial_phenomenological(L, 1, 0.1, 0.0, 9, trial);
        for (int s : {0, 1}) {
            for (int x : r.history.defects(s)) EXPECT_EQ(x / (L * L), 0);
        }
    }
}

TEST(Noise, config_key_value_round_trip) {
    auto c = ErrorModelConfig::individual(0.001, 0.002, 0.003, 0.004);
    auto back = ErrorModelConfig::from_key_value(c.to_key_value());
    EXPECT_EQ(back.mode, NoiseMode::Individual);
    EXPECT_EQ(back.p_2, 0.003);
    auto u = ErrorModelConfig::from_key_value("# comment\nmode = uniform\np = 0.01\n");
    EXPECT_EQ(u.p_M, 0.01);
    auto ph = ErrorModelConfig::from_key_value("mode = phenomenological\np = 0.03\n");
    EXPECT_EQ(ph.q, 0.03);
    EXPECT_THROW(ErrorModelConfig::from_key_value("mode = uniform\np = 1.5\n"), std::invalid_argument);
    EXPECT_THROW(ErrorModelConfig::from_key_value("nonsense\n"), std::invalid_argument);
}
