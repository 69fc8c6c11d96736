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

#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chain_complex.hpp"
#include "json.hpp"

namespace ftq2d {

/// Signed sparse Pauli operator i^phase * X(x_support) * Z(z_support).
///
/// The operator is stored in "X then Z" normal form, so a qubit present in
/// both supports carries X*Z = -iY. Qubit labels are any totally ordered type.
template <typename Q>
class PauliOperator {
  public:
    using Qubit = Q;

    PauliOperator() = default;
    PauliOperator(int phase, std::set<Q> x, std::set<Q> z) : phase_(norm(phase)), x_(std::move(x)), z_(std::move(z)) {
    }

    static PauliOperator identity() {
        return {};
    }
    static PauliOperator X(const Q &q) {
        return PauliOperator(0, {q}, {});
    }
    static PauliOperator Z(const Q &q) {
        return PauliOperator(0, {}, {q});
    }
    /// Y = i X Z.
    static PauliOperator Y(const Q &q) {
        return PauliOperator(1, {q}, {q});
    }

    /// Exponent k of the i^k prefactor in X-then-Z normal form.
    int phase() const {
        return phase_;
    }
    const std::set<Q> &x_support() const {
        return x_;
    }
    const std::set<Q> &z_support() const {
        return z_;
    }

    /// Prefactor when written as a tensor product of I, X, Y, Z (each Y
    /// absorbs one factor of i).
    int tensor_phase() const {
        return norm(phase_ - static_cast<int>(count_y()));
    }

    bool is_identity_up_to_phase() const {
        return x_.empty() && z_.empty();
    }
    bool is_hermitian() const {
        return tensor_phase() % 2 == 0;
    }
    size_t weight() const {
        std::set<Q> u = x_;
        u.insert(z_.begin(), z_.end());
        return u.size();
    }

    char pauli_at(const Q &q) const {
        bool x = x_.count(q), z = z_.count(q);
        return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }

    PauliOperator negated() const {
        return PauliOperator(phase_ + 2, x_, z_);
    }
    PauliOperator unsigned_copy() const {
        return PauliOperator(static_cast<int>(count_y()), x_, z_);
    }

    bool operator==(const PauliOperator &o) const = default;

    /// Same operator up to an overall phase.
    bool equal_up_to_phase(const PauliOperator &o) const {
        return x_ == o.x_ && z_ == o.z_;
    }

    // Conjugation by Clifford gates, in place.

    void apply_h(const Q &q) {
        bool x = x_.count(q), z = z_.count(q);
        if (x && z) {
            phase_ = norm(phase_ + 2);  // X^a Z^b -> Z^a X^b = (-1)^{ab} X^b Z^a
        }
        set_bit(x_, q, z);
        set_bit(z_, q, x);
    }

    /// CZ: X_q -> X_q Z_r, X_r -> Z_q X_r, Z unchanged.
    void apply_cz(const Q &q, const Q &r) {
        if (q == r) {
            throw std::invalid_argument("CZ needs two distinct qubits");
        }
        bool a = x_.count(q), b = x_.count(r);
        if (a && b) {
            phase_ = norm(phase_ + 2);
        }
        if (b) {
            toggle_bit(z_, q);
        }
        if (a) {
            toggle_bit(z_, r);
        }
    }

    /// S = diag(1, i): X -> Y, Y -> -X.
    void apply_s(const Q &q) {
        if (x_.count(q)) {
            // X Z^b -> (i X Z) Z^b
            phase_ = norm(phase_ + 1);
            toggle_bit(z_, q);
        }
    }

    std::string str(const std::vector<Q> &order) const {
        std::string s;
        int tp = tensor_phase();
        s += tp == 0 ? "+" : tp == 1 ? "+i" : tp == 2 ? "-" : "-i";
        for (const auto &q : order) {
            s += pauli_at(q);
        }
        return s;
    }

  private:
    static int norm(int p) {
        p %= 4;
        return p < 0 ? p + 4 : p;
    }
    static void set_bit(std::set<Q> &s, const Q &q, bool v) {
        if (v) {
            s.insert(q);
        } else {
            s.erase(q);
        }
    }
    static void toggle_bit(std::set<Q> &s, const Q &q) {
        auto [it, ins] = s.insert(q);
        if (!ins) {
            s.erase(it);
        }
    }
    size_t count_y() const {
        size_t n = 0;
        for (const auto &q : x_) {
            n += z_.count(q);
        }
        return n;
    }

    template <typename T>
    friend PauliOperator<T> multiply(const PauliOperator<T> &a, const PauliOperator<T> &b);

    int phase_ = 0;
    std::set<Q> x_;
    std::set<Q> z_;
};

template <typename Q>
size_t intersection_size(const std::set<Q> &a, const std::set<Q> &b) {
    const auto &small = a.size() < b.size() ? a : b;
    const auto &large = a.size() < b.size() ? b : a;
    size_t n = 0;
    for (const auto &q : small) {
        n += large.count(q);
    }
    return n;
}

template <typename Q>
std::set<Q> symmetric_difference(const std::set<Q> &a, const std::set<Q> &b) {
    std::set<Q> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

/// Group product a*b with exact phase.
template <typename Q>
PauliOperator<Q> multiply(const PauliOperator<Q> &a, const PauliOperator<Q> &b) {
    // (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{|z1 & x2|} X^{x1+x2} Z^{z1+z2}
    int sign = static_cast<int>(intersection_size(a.z_, b.x_) & 1) * 2;
    return PauliOperator<Q>(a.phase_ + b.phase_ + sign, symmetric_difference(a.x_, b.x_),
                            symmetric_difference(a.z_, b.z_));
}

template <typename Q>
PauliOperator<Q> operator*(const PauliOperator<Q> &a, const PauliOperator<Q> &b) {
    return multiply(a, b);
}

/// Symplectic form: 0 iff the operators commute.
template <typename Q>
bool symplectic(const PauliOperator<Q> &a, const PauliOperator<Q> &b) {
    return ((intersection_size(a.x_support(), b.z_support()) + intersection_size(a.z_support(), b.x_support())) &
            1) != 0;
}

template <typename Q>
bool commutes(const PauliOperator<Q> &a, const PauliOperator<Q> &b) {
    return !symplectic(a, b);
}

enum class CliffordKind { H, CZ, S };

template <typename Q>
struct CliffordGate {
    CliffordKind kind;
    Q q0;
    Q q1{};
};

template <typename Q>
PauliOperator<Q> conjugate_by_clifford(PauliOperator<Q> op, const CliffordGate<Q> &g) {
    switch (g.kind) {
        case CliffordKind::H:
            op.apply_h(g.q0);
            break;
        case CliffordKind::CZ:
            op.apply_cz(g.q0, g.q1);
            break;
        case CliffordKind::S:
            op.apply_s(g.q0);
            break;
    }
    return op;
}

/// Pauli operators on lattice cells. Qubits live on faces and edges of the
/// primal complex; a dual-complex cell is identified with its primal centre.
using CellPauli = PauliOperator<Cell>;

inline bool is_qubit_cell(const Cell &c) {
    int d = c.dimension();
    return d == 1 || d == 2;
}

/// X(x_chain) * Z(z_chain), both chains living on qubit-carrying cells.
inline CellPauli operator_from_chains(const Chain &x_chain, const Chain &z_chain) {
    auto collect = [](const Chain &ch) {
        std::set<Cell> out;
        if (ch.dimension() != 1 && ch.dimension() != 2) {
            if (!ch.empty()) {
                throw std::invalid_argument("operator support on non-qubit cells (vertices or cubes)");
            }
            return out;
        }
        for (const auto &c : ch.cells()) {
            Cell p{Complex::Primal, centre(ch.lattice(), c)};
            auto [it, ins] = out.insert(p);
            if (!ins) {
                out.erase(it);
            }
        }
        return out;
    };
    return CellPauli(0, collect(x_chain), collect(z_chain));
}

/// Cluster stabilizer K(c) = X(c) Z(boundary c) for a 2-chain of either complex.
inline CellPauli cluster_stabilizer(const Chain &c2) {
    if (c2.dimension() != 2) {
        throw std::invalid_argument("cluster stabilizer needs a 2-chain");
    }
    return operator_from_chains(c2, boundary(c2));
}

// Text form "+XIZY" over an explicit qubit order; sparse JSON
// {"phase": "+"|"-"|"+i"|"-i", "x": [...], "z": [...]} with phase in tensor form.

template <typename Q>
PauliOperator<Q> pauli_from_string(std::string_view s, const std::vector<Q> &order) {
    int tp = 0;
    size_t pos = 0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        tp = s[0] == '-' ? 2 : 0;
        pos = 1;
        if (pos < s.size() && s[pos] == 'i') {
            tp += 1;
            ++pos;
        }
    }
    if (s.size() - pos != order.size()) {
        throw std::invalid_argument("Pauli string length does not match qubit count");
    }
    std::set<Q> x, z;
    int ny = 0;
    for (size_t k = 0; k < order.size(); ++k) {
        char ch = s[pos + k];
        switch (ch) {
            case 'I':
            case '_':
                break;
            case 'X':
                x.insert(order[k]);
                break;
            case 'Z':
                z.insert(order[k]);
                break;
            case 'Y':
                x.insert(order[k]);
                z.insert(order[k]);
                ++ny;
                break;
            default:
                throw std::invalid_argument(std::string("bad Pauli character '") + ch + "'");
        }
    }
    return PauliOperator<Q>(tp + ny, std::move(x), std::move(z));
}

inline std::string phase_label(int tensor_phase) {
    static const char *names[] = {"+", "+i", "-", "-i"};
    return names[tensor_phase & 3];
}

inline int phase_from_label(const std::string &s) {
    if (s == "+" || s == "+1") return 0;
    if (s == "+i") return 1;
    if (s == "-" || s == "-1") return 2;
    if (s == "-i") return 3;
    throw std::invalid_argument("bad phase label '" + s + "'");
}

template <typename Q>
nlohmann::json pauli_to_json(const PauliOperator<Q> &p) {
    nlohmann::json x = nlohmann::json::array(), z = nlohmann::json::array();
    for (const auto &q : p.x_support()) {
        if constexpr (std::is_same_v<Q, Cell>) {
            x.push_back(q.c);
        } else {
            x.push_back(q);
        }
    }
    for (const auto &q : p.z_support()) {
        if constexpr (std::is_same_v<Q, Cell>) {
            z.push_back(q.c);
        } else {
            z.push_back(q);
        }
    }
    return {{"phase", phase_label(p.tensor_phase())}, {"x", x}, {"z", z}};
}

template <typename Q>
PauliOperator<Q> pauli_from_json(const nlohmann::json &j) {
    std::set<Q> x, z;
    for (const auto &e : j.at("x")) {
        if constexpr (std::is_same_v<Q, Cell>) {
            x.insert(Cell{Complex::Primal, e.get<std::array<int, 3>>()});
        } else {
            x.insert(e.get<Q>());
        }
    }
    for (const auto &e : j.at("z")) {
        if constexpr (std::is_same_v<Q, Cell>) {
            z.insert(Cell{Complex::Primal, e.get<std::array<int, 3>>()});
        } else {
            z.insert(e.get<Q>());
        }
    }
    int ny = static_cast<int>(intersection_size(x, z));
    return PauliOperator<Q>(phase_from_label(j.value("phase", std::string("+"))) + ny, std::move(x), std::move(z));
}

}  // namespace ftq2d
