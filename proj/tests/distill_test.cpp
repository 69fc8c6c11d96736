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

#include "ftq2d/distill.hpp"

#include <cmath>

#include "ftq2d/threshold.hpp"
#include "gtest/gtest.h"

using namespace ftq2d;

TEST(Distill, injection_threshold_value) {
    // 1 / (6 sqrt 35) to 16 digits.
    EXPECT_NEAR(injection_threshold(), 0.02817180849095055, 1e-16);
    EXPECT_NEAR(injection_threshold(), 2.8e-2, 5e-4);
    EXPECT_GT(injection_threshold(), context::kCircuitThreshold);
}

TEST(Distill, fixed_point_is_invariant) {
    for (int l = 0; l <= 20; ++l) EXPECT_EQ(recurse(fixed_point(), l), fixed_point());
}

TEST(Distill, single_round_arithmetic) {
    EXPECT_NEAR(recurse(0.045, 1), 35 * 0.045 * 0.045 * 0.045, 1e-17);
    EXPECT_NEAR(recurse(0.045, 1), 3.189375e-3, 1e-15);
    EXPECT_EQ(recurse(0.0, 5), 0.0);
    EXPECT_EQ(recurse(0.3, 0), 0.3);
    EXPECT_THROW(recurse(-0.1, 1), std::invalid_argument);
    EXPECT_THROW(recurse(0.1, -1), std::invalid_argument);
}

TEST(Distill, levels_for_circuit_threshold_rate) {
    EXPECT_EQ(levels_needed(7.5e-3, 1e-15), 3);
    EXPECT_NEAR(recurse(0.045, 2), 1.1357e-6, 1e-9);
    EXPECT_NEAR(recurse(0.045, 3), 5.127e-17, 1e-19);
    EXPECT_EQ(levels_needed(0.01, 1.0), 0);
    EXPECT_THROW(levels_needed(injection_threshold(), 1e-10), std::domain_error);
    EXPECT_THROW(levels_needed(0.03, 1e-10), std::domain_error);
}

TEST(Distill, recursion_is_monotone_and_contracting) {
    double prev = -1;
    for (int i = 0; i <= 100; ++i) {
        double e = fixed_point() * i / 100.0;
        double r = recurse(e, 1);
        EXPECT_GE(r, prev);
        if (i > 0 && i < 100) EXPECT_LT(r, e);
        prev = r;
    }
}

TEST(Distill, levels_needed_monotonicity) {
    for (double p : {1e-4, 1e-3, 5e-3, 1e-2, 2e-2}) {
        int prev = 1000;
        for (double t : {1e-30, 1e-20, 1e-15, 1e-10, 1e-5, 1e-2}) {
            int l = levels_needed(p, t);
            EXPECT_LE(l, prev);
            prev = l;
        }
    }
    for (double t : {1e-30, 1e-15, 1e-5}) {
        int prev = 0;
        for (double p : {1e-4, 1e-3, 5e-3, 1e-2, 2e-2, 2.8e-2}) {
            int l = levels_needed(p, t);
            EXPECT_GE(l, prev);
            prev = l;
        }
    }
}

TEST(Distill, overhead_exponents) {
    auto o = overhead(std::exp(1.0));
    EXPECT_EQ(o.gamma_top, 3.0);
    EXPECT_NEAR(o.gamma_ms, 2.4649735207179269, 1e-14);
    EXPECT_EQ(o.dominant, 3.0);
    EXPECT_NEAR(o.scaled_size, std::exp(1.0), 1e-14);
    EXPECT_EQ(overhead(1.0).scaled_size, 0.0);
    EXPECT_NEAR(overhead(100.0).scaled_size, 100 * std::pow(std::log(100.0), 3), 1e-9);
    EXPECT_THROW(overhead(0.5), std::invalid_argument);
}

TEST(Distill, table_rows) {
    auto t = distillation_table(7.5e-3, 1e-15);
    EXPECT_EQ(t["levels"], 3);
    ASSERT_EQ(t["table"].size(), 4u);
    EXPECT_EQ(t["table"][3]["cumulative_input_states"], 3375.0);
    EXPECT_NEAR(t["table"][0]["epsilon"].get<double>(), 0.045, 1e-17);
}
