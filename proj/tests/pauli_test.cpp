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

#include "ftq2d/pauli.hpp"

#include <random>

#include "dense_oracle.hpp"
#include "gtest/gtest.h"

using namespace ftq2d;
using P = PauliOperator<int>;

namespace {

P random_pauli(int n, std::mt19937_64 &rng) {
    std::set<int> x, z;
    for (int q = 0; q < n; ++q) {
        if (rng() & 1) x.insert(q);
        if (rng() & 1) z.insert(q);
    }
    return P(static_cast<int>(rng() & 3), x, z);
}

void apply_gate(oracle::StateVector &sv, const CliffordGate<int> &g) {
    switch (g.kind) {
        case CliffordKind::H:
            sv.h(g.q0);
            break;
        case CliffordKind::CZ:
            sv.cz(g.q0, g.q1);
            break;
        case CliffordKind::S:
            sv.s(g.q0);
            break;
    }
}

/// Checks G P G^dagger == P' column by column: P' G |e> == G P |e>.
bool conjugation_matches_dense(const P &p, const P &conj, const CliffordGate<int> &g, int n) {
    for (size_t col = 0; col < (size_t{1} << n); ++col) {
        oracle::StateVector a(n), b(n);
        a.amp.assign(a.amp.size(), 0.0);
        a.amp[col] = 1.0;
        b.amp = a.amp;
        apply_gate(a, g);
        auto lhs = a.apply(conj);
        b.amp = b.apply(p);
        apply_gate(b, g);
        for (size_t i = 0; i < lhs.size(); ++i) {
            if (std::abs(lhs[i] - b.amp[i]) > 1e-9) return false;
        }
    }
    return true;
}

}  // namespace

TEST(Pauli, x_times_z_is_minus_i_y) {
    P xz = P::X(0) * P::Z(0);
    EXPECT_EQ(xz.pauli_at(0), 'Y');
    EXPECT_EQ(xz.tensor_phase(), 3);  // -i
    EXPECT_EQ(multiply(P::Y(0), P::Y(0)), P::identity());
}

TEST(Pauli, square_is_plus_or_minus_identity) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 500; ++i) {
        auto a = random_pauli(5, rng);
        auto sq = a * a;
        EXPECT_TRUE(sq.is_identity_up_to_phase());
        EXPECT_EQ(sq.phase() % 2, 0);
    }
}

TEST(Pauli, product_matches_dense_matrices) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        auto a = random_pauli(3, rng), b = random_pauli(3, rng);
        auto ma = oracle::matrix(a, 3), mb = oracle::matrix(b, 3), mab = oracle::matrix(a * b, 3);
        for (size_t r = 0; r < 8; ++r) {
            for (size_t c = 0; c < 8; ++c) {
                oracle::cd acc = 0;
                for (size_t k = 0; k < 8; ++k) acc += ma[r][k] * mb[k][c];
                EXPECT_LT(std::abs(acc - mab[r][c]), 1e-12);
            }
        }
    }
}

TEST(Pauli, commutation) {
    EXPECT_FALSE(commutes(P::X(0), P::Z(0)));
    EXPECT_TRUE(commutes(P::X(0), P::Z(1)));
    EXPECT_TRUE(commutes(P::X(0) * P::X(1), P::Z(0) * P::Z(1)));
}

TEST(Pauli, symplectic_form_is_bilinear) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        auto a = random_pauli(6, rng), b = random_pauli(6, rng), c = random_pauli(6, rng);
        EXPECT_EQ(symplectic(a * b, c), symplectic(a, c) ^ symplectic(b, c));
    }
}

TEST(Pauli, hadamard_and_cz_rules) {
    P x0 = P::X(0);
    x0.apply_h(0);
    EXPECT_EQ(x0, P::Z(0));

    // Exact signed image of X0 X1 under CZ: +Y0 Y1.
    P xx = P::X(0) * P::X(1);
    xx.apply_cz(0, 1);
    EXPECT_EQ(xx, P::Y(0) * P::Y(1));
    EXPECT_TRUE(conjugation_matches_dense(P::X(0) * P::X(1), xx, {CliffordKind::CZ, 0, 1}, 2));

    P zz = P::Z(0) * P::Z(1);
    zz.apply_cz(0, 1);
    EXPECT_EQ(zz, P::Z(0) * P::Z(1));
}

TEST(Pauli, conjugation_matches_dense_oracle) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
        auto p = random_pauli(3, rng);
        CliffordGate<int> g{static_cast<CliffordKind>(rng() % 3), static_cast<int>(rng() % 3), 0};
        if (g.kind == CliffordKind::CZ) g.q1 = (g.q0 + 1 + static_cast<int>(rng() % 2)) % 3;
        auto c = conjugate_by_clifford(p, g);
        EXPECT_TRUE(conjugation_matches_dense(p, c, g, 3)) << i;
    }
}

TEST(Pauli, conjugation_preserves_commutation) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        auto a = random_pauli(6, rng), b = random_pauli(6, rng);
        bool before = commutes(a, b);
        for (int k = 0; k < 20; ++k) {
            CliffordGate<int> g{static_cast<CliffordKind>(rng() % 3), static_cast<int>(rng() % 6), 0};
            if (g.kind == CliffordKind::CZ) g.q1 = (g.q0 + 1 + static_cast<int>(rng() % 5)) % 6;
            a = conjugate_by_clifford(a, g);
            b = conjugate_by_clifford(b, g);
        }
        EXPECT_EQ(commutes(a, b), before);
    }
}

TEST(Pauli, cluster_stabilizers_from_chains) {
    auto lat = Lattice::torus(3, 3, 3);
    Cell f = primal_cell(lat, 1, 1, 2);
    auto kf = cluster_stabilizer(Chain::of(lat, {f}));
    EXPECT_EQ(kf.x_support(), std::set<Cell>{f});
    EXPECT_EQ(kf.z_support().size(), 4u);
    EXPECT_EQ(kf.phase(), 0);

    Chain empty1(lat, Complex::Primal, 1);
    EXPECT_EQ(operator_from_chains(empty1, empty1), CellPauli::identity());

    std::mt19937_64 rng(6);
    auto faces = all_cells(lat, Complex::Primal, 2);
    for (int i = 0; i < 50; ++i) {
        Chain c(lat, Complex::Primal, 2);
        for (const auto &x : faces) {
            if (rng() % 4 == 0) c.toggle(x);
        }
        auto k = cluster_stabilizer(c);
        EXPECT_EQ(k * k, CellPauli::identity());
    }

    EXPECT_THROW(operator_from_chains(Chain::of(lat, {primal_cell(lat, 0, 0, 0)}), empty1), std::invalid_argument);
}

TEST(Pauli, cube_stabilizer_is_x_only_product_of_face_stabilizers) {
    auto lat = Lattice::torus(3, 3, 3);
    auto all_edges = all_cells(lat, Complex::Primal, 1);
    for (const auto &q : all_cells(lat, Complex::Primal, 3)) {
        auto dq = boundary(Chain::of(lat, {q}));
        auto k = cluster_stabilizer(dq);
        EXPECT_TRUE(k.z_support().empty());
        EXPECT_EQ(k.x_support().size(), 6u);
        CellPauli prod;
        for (const auto &f : dq.cells()) {
            prod = prod * cluster_stabilizer(Chain::of(lat, {f}));
        }
        EXPECT_EQ(prod, k);
        for (const auto &e : all_edges) {
            EXPECT_TRUE(commutes(k, CellPauli::X(e)));
        }
    }
}

TEST(Pauli, elementary_cube_products_have_unit_phase) {
    auto lat = Lattice::torus(2, 2, 2);
    auto cubes = all_cells(lat, Complex::Primal, 3);
    for (const auto &a : cubes) {
        for (const auto &b : cubes) {
            auto ka = cluster_stabilizer(boundary(Chain::of(lat, {a})));
            auto kb = cluster_stabilizer(boundary(Chain::of(lat, {b})));
            EXPECT_EQ((ka * kb).phase(), 0);
        }
    }
}

TEST(Pauli, cluster_stabilizer_vs_single_z) {
    auto lat = Lattice::torus(3, 3, 3);
    auto c = Chain::of(lat, {primal_cell(lat, 1, 1, 0), primal_cell(lat, 3, 1, 0), primal_cell(lat, 1, 0, 1)});
    auto k = cluster_stabilizer(c);
    for (int dim : {1, 2}) {
        for (const auto &b : all_cells(lat, Complex::Primal, dim)) {
            EXPECT_EQ(commutes(k, CellPauli::Z(b)), !c.contains(b)) << b.str();
        }
    }
}

TEST(Pauli, text_and_json_forms) {
    std::vector<int> order{0, 1, 2, 3};
    auto p = pauli_from_string<int>("-XIZY", order);
    EXPECT_EQ(p.str(order), "-XIZY");
    EXPECT_EQ(p.pauli_at(3), 'Y');
    EXPECT_EQ(p, P::X(0) * P::Z(2) * P::Y(3) * P(2, {}, {}));
    EXPECT_EQ(pauli_from_json<int>(pauli_to_json(p)), p);
    EXPECT_THROW(pauli_from_string<int>("+XQ", std::vector<int>{0, 1}), std::invalid_argument);
}
