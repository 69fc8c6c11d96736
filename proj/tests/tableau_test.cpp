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

#include "ftq2d/tableau.hpp"

#include <map>
#include <random>

#include "dense_oracle.hpp"
#include "gtest/gtest.h"

using namespace ftq2d;
using P = PauliOperator<int>;

namespace {

P random_hermitian(int n, std::mt19937_64 &rng) {
    std::set<int> x, z;
    for (int q = 0; q < n; ++q) {
        if (rng() % 3 == 0) x.insert(q);
        if (rng() % 3 == 0) z.insert(q);
    }
    int ny = static_cast<int>(intersection_size(x, z));
    return P(ny + 2 * static_cast<int>(rng() & 1), x, z);
}

/// Cluster state on all face and edge qubits of a lattice; returns the
/// tableau and the cell -> index map.
std::pair<StabilizerTableau, std::map<Cell, int>> cluster_state(const Lattice &lat) {
    std::map<Cell, int> index;
    for (int d : {1, 2}) {
        for (const auto &c : all_cells(lat, Complex::Primal, d)) {
            int k = static_cast<int>(index.size());
            index[c] = k;
        }
    }
    StabilizerTableau t(index.size());
    for (size_t q = 0; q < index.size(); ++q) t.h(q);
    for (const auto &f : all_cells(lat, Complex::Primal, 2)) {
        for_each_facet(lat, f, [&](const Cell &e) {
            t.cz(index.at(f), index.at(e));
        });
    }
    return {t, index};
}

P to_indexed(const CellPauli &p, const std::map<Cell, int> &index) {
    std::set<int> x, z;
    for (const auto &c : p.x_support()) x.insert(index.at(c));
    for (const auto &c : p.z_support()) z.insert(index.at(c));
    return P(p.phase(), x, z);
}

}  // namespace

TEST(Tableau, z_on_zero_is_deterministic) {
    StabilizerTableau t(1);
    auto r = tableau_measure(t, P::Z(0));
    EXPECT_TRUE(r.deterministic);
    EXPECT_FALSE(r.outcome);
}

TEST(Tableau, repeated_x_measurement_agrees) {
    StabilizerTableau t(2);
    auto first = tableau_measure(t, P::X(0), true);
    EXPECT_FALSE(first.deterministic);
    EXPECT_TRUE(first.outcome);
    auto second = tableau_measure(t, P::X(0));
    EXPECT_TRUE(second.deterministic);
    EXPECT_EQ(second.outcome, first.outcome);
    EXPECT_THROW(tableau_measure(t, P::X(0), false), std::invalid_argument);
}

TEST(Tableau, bell_pair) {
    StabilizerTableau t(2);
    t.h(0);
    t.cx(0, 1);
    EXPECT_EQ(t.peek(P::X(0) * P::X(1)), std::optional<bool>(false));
    EXPECT_EQ(t.peek(P::Z(0) * P::Z(1)), std::optional<bool>(false));
    EXPECT_EQ(t.peek(P::Y(0) * P::Y(1)), std::optional<bool>(true));
    EXPECT_EQ(t.peek(P::Z(0)), std::nullopt);
}

TEST(Tableau, cluster_face_stabilizers_are_deterministic_plus_one) {
    // 2x2 cells in a plane, then one cube.
    for (auto lat : {Lattice{{2, 2, 0}, {false, false, false}}, Lattice::block(1, 1, 1)}) {
        auto [t, index] = cluster_state(lat);
        for (const auto &f : all_cells(lat, Complex::Primal, 2)) {
            auto k = to_indexed(cluster_stabilizer(Chain::of(lat, {f})), index);
            auto r = tableau_measure(t, k);
            EXPECT_TRUE(r.deterministic);
            EXPECT_FALSE(r.outcome);
        }
    }
    auto lat = Lattice::block(1, 1, 1);
    auto [t, index] = cluster_state(lat);
    auto q = Chain::of(lat, {primal_cell(lat, 1, 1, 1)});
    auto r = tableau_measure(t, to_indexed(cluster_stabilizer(boundary(q)), index));
    EXPECT_TRUE(r.deterministic);
    EXPECT_FALSE(r.outcome);
}

TEST(Tableau, agrees_with_state_vector_on_random_circuits) {
    std::mt19937_64 rng(99);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng() % 6);
        StabilizerTableau t(n);
        oracle::StateVector sv(n);
        int steps = 5 + static_cast<int>(rng() % 25);
        for (int s = 0; s < steps; ++s) {
            int kind = static_cast<int>(rng() % 4);
            int a = static_cast<int>(rng() % n);
            if (kind == 0) {
                t.h(a);
                sv.h(a);
            } else if (kind == 1) {
                t.s(a);
                sv.s(a);
            } else if (kind == 2 && n > 1) {
                int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
                t.cz(a, b);
                sv.cz(a, b);
            } else {
                P op = random_hermitian(n, rng);
                if (op.is_identity_up_to_phase()) continue;
                double e = sv.expectation(op);
                bool want_det = std::abs(std::abs(e) - 1.0) < 1e-9;
                bool forced = rng() & 1;
                auto r = want_det ? tableau_measure(t, op) : tableau_measure(t, op, forced);
                mismatches += r.deterministic != want_det;
                if (want_det) {
                    mismatches += r.outcome != (e < 0);
                } else {
                    mismatches += std::abs(e) > 1e-9;  // stabilizer states give 0 or +-1
                    sv.project(op, forced);
                }
            }
        }
        for (const auto &g : t.stabilizers()) {
            mismatches += std::abs(sv.expectation(g) - 1.0) > 1e-9;
        }
    }
    EXPECT_EQ(mismatches, 0);
}
