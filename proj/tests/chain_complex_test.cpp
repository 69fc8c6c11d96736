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

#include "ftq2d/chain_complex.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace ftq2d;

namespace {

Chain random_chain(const Lattice &lat, Complex cx, int dim, std::mt19937_64 &rng, double density) {
    Chain c(lat, cx, dim);
    std::bernoulli_distribution pick(density);
    for (const auto &cell : all_cells(lat, cx, dim)) {
        if (pick(rng)) {
            c.toggle(cell);
        }
    }
    return c;
}

}  // namespace

TEST(ChainComplex, face_boundary_is_four_edges) {
    auto lat = Lattice::torus(3, 3, 3);
    auto f = Chain::of(lat, {primal_cell(lat, 1, 1, 0)});
    auto b = boundary(f);
    EXPECT_EQ(b.dimension(), 1);
    ASSERT_EQ(b.size(), 4u);
    EXPECT_TRUE(b.contains(primal_cell(lat, 0, 1, 0)));
    EXPECT_TRUE(b.contains(primal_cell(lat, 2, 1, 0)));
    EXPECT_TRUE(b.contains(primal_cell(lat, 1, 0, 0)));
    EXPECT_TRUE(b.contains(primal_cell(lat, 1, 2, 0)));
}

TEST(ChainComplex, cube_boundary_of_boundary_vanishes) {
    auto lat = Lattice::block(2, 2, 2);
    auto q = Chain::of(lat, {primal_cell(lat, 1, 1, 1)});
    EXPECT_EQ(boundary(q).size(), 6u);
    EXPECT_TRUE(boundary(boundary(q)).empty());
}

TEST(ChainComplex, two_faces_sharing_an_edge) {
    // Faces (1,1,0) and (3,1,0) share edge (2,1,0); 4 + 4 - 2 = 6 edges remain.
    auto lat = Lattice::torus(4, 4, 4);
    auto c = Chain::of(lat, {primal_cell(lat, 1, 1, 0), primal_cell(lat, 3, 1, 0)});
    auto b = boundary(c);
    EXPECT_EQ(b.size(), 6u);
    EXPECT_FALSE(b.contains(primal_cell(lat, 2, 1, 0)));
}

TEST(ChainComplex, boundary_of_vertex_is_an_error) {
    auto lat = Lattice::torus(2, 2, 2);
    auto v = Chain::of(lat, {primal_cell(lat, 0, 0, 0)});
    EXPECT_THROW(boundary(v), std::invalid_argument);
    auto q = Chain::of(lat, {primal_cell(lat, 1, 1, 1)});
    EXPECT_THROW(coboundary(q), std::invalid_argument);
}

TEST(ChainComplex, dual_is_dimension_reversing_involution) {
    for (auto lat : {Lattice::torus(3, 2, 4), Lattice::block(2, 3, 2)}) {
        for (int d = 0; d <= 3; ++d) {
            for (const auto &c : all_cells(lat, Complex::Primal, d)) {
                Cell dc = dual(lat, c);
                EXPECT_EQ(dc.complex, Complex::Dual);
                EXPECT_EQ(dc.dimension(), 3 - d);
                EXPECT_EQ(dual(lat, dc), c);
                EXPECT_TRUE(valid_cell(lat, dc));
            }
        }
    }
}

TEST(ChainComplex, dual_cube_sits_on_a_site) {
    auto lat = Lattice::torus(3, 3, 3);
    Cell dq{Complex::Dual, {1, 1, 1}};
    ASSERT_EQ(dq.dimension(), 3);
    Cell site = dual(lat, dq);
    EXPECT_EQ(site.dimension(), 0);
    EXPECT_EQ(site.c, (std::array<int, 3>{0, 0, 0}));
}

TEST(ChainComplex, dual_of_edge_is_transversal_face) {
    // The dual face has the edge's centre as its centre, and its plane is
    // spanned by the two axes the edge does not extend along.
    auto lat = Lattice::torus(3, 3, 3);
    for (const auto &e : all_cells(lat, Complex::Primal, 1)) {
        Cell f = dual(lat, e);
        EXPECT_EQ(f.dimension(), 2);
        EXPECT_EQ(centre(lat, f), e.c);
        for (int a = 0; a < 3; ++a) {
            EXPECT_NE(e.extends_along(a), f.extends_along(a));
        }
    }
}

TEST(ChainComplex, coboundary_counts) {
    auto lat = Lattice::torus(3, 3, 3);
    auto e = Chain::of(lat, {primal_cell(lat, 1, 0, 0)});
    EXPECT_EQ(coboundary(e).size(), 4u);
    auto v = Chain::of(lat, {primal_cell(lat, 2, 2, 2)});
    EXPECT_EQ(coboundary(v).size(), 6u);
}

TEST(ChainComplex, adjointness) {
    std::mt19937_64 rng(11);
    auto lat = Lattice::torus(3, 3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        for (int k = 1; k <= 3; ++k) {
            auto a = random_chain(lat, Complex::Primal, k, rng, 0.3);
            auto b = random_chain(lat, Complex::Primal, k - 1, rng, 0.3);
            EXPECT_EQ(pairing(boundary(a), b), pairing(a, coboundary(b)));
        }
    }
}

TEST(ChainComplex, boundary_squared_is_zero_on_random_chains) {
    std::mt19937_64 rng(5);
    const int kTrials = 10000;
    int failures = 0;
    auto lats = {Lattice::torus(3, 3, 3), Lattice::block(2, 3, 2)};
    for (int trial = 0; trial < kTrials; ++trial) {
        for (const auto &lat : lats) {
            for (auto cx : {Complex::Primal, Complex::Dual}) {
                for (int k = 2; k <= 3; ++k) {
                    auto c = random_chain(lat, cx, k, rng, 0.05);
                    failures += !boundary(boundary(c)).empty();
                }
            }
        }
    }
    EXPECT_EQ(failures, 0);
}

TEST(ChainComplex, linearity) {
    std::mt19937_64 rng(17);
    auto lat = Lattice::torus(3, 2, 3);
    for (int trial = 0; trial < 300; ++trial) {
        auto a = random_chain(lat, Complex::Primal, 2, rng, 0.2);
        auto b = random_chain(lat, Complex::Primal, 2, rng, 0.2);
        EXPECT_EQ(boundary(a + b), boundary(a) + boundary(b));
        EXPECT_TRUE((a + a).empty());
    }
}

TEST(ChainComplex, dual_boundary_is_dual_coboundary_dual) {
    std::mt19937_64 rng(23);
    for (auto lat : {Lattice::torus(3, 3, 2), Lattice::block(2, 2, 3)}) {
        for (int k = 1; k <= 3; ++k) {
            for (int trial = 0; trial < 100; ++trial) {
                auto d = random_chain(lat, Complex::Dual, k, rng, 0.2);
                EXPECT_EQ(boundary(d), dual(coboundary(dual(d))));
            }
        }
    }
}

TEST(ChainComplex, torus_cell_counts) {
    for (int l : {2, 3, 4}) {
        auto lat = Lattice::torus(l, l, l);
        int l3 = l * l * l;
        EXPECT_EQ(all_cells(lat, Complex::Primal, 0).size(), size_t(l3));
        EXPECT_EQ(all_cells(lat, Complex::Primal, 1).size(), size_t(3 * l3));
        EXPECT_EQ(all_cells(lat, Complex::Primal, 2).size(), size_t(3 * l3));
        EXPECT_EQ(all_cells(lat, Complex::Primal, 3).size(), size_t(l3));
    }
}

TEST(ChainComplex, periodic_coordinates_are_reduced) {
    auto lat = Lattice::torus(3, 3, 3);
    EXPECT_EQ(primal_cell(lat, -1, 7, 6).c, (std::array<int, 3>{5, 1, 0}));
    EXPECT_THROW(primal_cell(Lattice::block(2, 2, 2), 5, 0, 0), std::out_of_range);
}

TEST(ChainComplex, json_round_trip) {
    std::mt19937_64 rng(3);
    auto lat = Lattice{{3, 2, 4}, {true, false, true}};
    auto c = random_chain(lat, Complex::Dual, 2, rng, 0.3);
    EXPECT_EQ(chain_from_json(chain_to_json(c)), c);
}
