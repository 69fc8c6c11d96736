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

#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "gf2.hpp"
#include "pauli.hpp"

namespace ftq2d {

/// Dense Pauli row over n qubits in X-then-Z normal form.
struct DensePauli {
    int phase = 0;
    gf2::BitVec x, z;

    explicit DensePauli(size_t n = 0) : x(n), z(n) {
    }

    static DensePauli from_sparse(const PauliOperator<int> &p, size_t n) {
        DensePauli d(n);
        d.phase = p.phase();
        for (int q : p.x_support()) {
            check(q, n);
            d.x.set(q);
        }
        for (int q : p.z_support()) {
            check(q, n);
            d.z.set(q);
        }
        return d;
    }

    PauliOperator<int> to_sparse() const {
        std::set<int> xs, zs;
        for (size_t q = 0; q < x.size(); ++q) {
            if (x.get(q)) xs.insert(static_cast<int>(q));
            if (z.get(q)) zs.insert(static_cast<int>(q));
        }
        return PauliOperator<int>(phase, std::move(xs), std::move(zs));
    }

    bool anticommutes(const DensePauli &o) const {
        return x.dot(o.z) ^ z.dot(o.x);
    }

    /// this <- this * o
    void right_multiply(const DensePauli &o) {
        phase = (phase + o.phase + (z.dot(o.x) ? 2 : 0)) & 3;
        x ^= o.x;
        z ^= o.z;
    }

    int y_count() const {
        size_t n = 0;
        for (size_t q = 0; q < x.size(); ++q) {
            n += x.get(q) && z.get(q);
        }
        return static_cast<int>(n);
    }
    /// 0 for +P, 1 for -P; requires a Hermitian row.
    bool sign_bit() const {
        int tp = (phase - y_count()) & 3;
        if (tp & 1) {
            throw std::logic_error("non-Hermitian stabilizer row");
        }
        return tp == 2;
    }

  private:
    static void check(int q, size_t n) {
        if (q < 0 || static_cast<size_t>(q) >= n) {
            throw std::out_of_range("qubit index out of range");
        }
    }
};

struct MeasureResult {
    bool outcome = false;  // false <-> +1 eigenvalue
    bool deterministic = false;
};

/// Stabilizer tableau with destabilizers (Aaronson-Gottesman style), meant for
/// verification at small qubit counts.
class StabilizerTableau {
  public:
    /// |0...0>
    explicit StabilizerTableau(size_t n) : n_(n) {
        for (size_t q = 0; q < n; ++q) {
            DensePauli d(n), s(n);
            d.x.set(q);
            s.z.set(q);
            destab_.push_back(std::move(d));
            stab_.push_back(std::move(s));
        }
    }

    size_t num_qubits() const {
        return n_;
    }

    void h(size_t q) {
        for_rows([&](DensePauli &r) {
            bool x = r.x.get(q), z = r.z.get(q);
            if (x && z) r.phase = (r.phase + 2) & 3;
            r.x.set(q, z);
            r.z.set(q, x);
        });
    }
    void s(size_t q) {
        for_rows([&](DensePauli &r) {
            if (r.x.get(q)) {
                r.phase = (r.phase + 1) & 3;
                r.z.flip(q);
            }
        });
    }
    void cz(size_t a, size_t b) {
        for_rows([&](DensePauli &r) {
            bool xa = r.x.get(a), xb = r.x.get(b);
            if (xa && xb) r.phase = (r.phase + 2) & 3;
            if (xb) r.z.flip(a);
            if (xa) r.z.flip(b);
        });
    }
    void cx(size_t c, size_t t) {
        h(t);
        cz(c, t);
        h(t);
    }
    void pauli_x(size_t q) {
        for_rows([&](DensePauli &r) {
            if (r.z.get(q)) r.phase = (r.phase + 2) & 3;
        });
    }
    void pauli_z(size_t q) {
        for_rows([&](DensePauli &r) {
            if (r.x.get(q)) r.phase = (r.phase + 2) & 3;
        });
    }

    /// Projects onto the +1 eigenstate of X (measure Z, flip if needed, H).
    void prepare_plus(size_t q, std::mt19937_64 &rng) {
        auto r = measure(PauliOperator<int>::Z(static_cast<int>(q)), std::nullopt, &rng);
        if (r.outcome) pauli_x(q);
        h(q);
    }

    /// Measures a Hermitian Pauli operator. A forced outcome is honoured for
    /// random measurements and must agree with deterministic ones.
    MeasureResult measure(const PauliOperator<int> &op, std::optional<bool> forced, std::mt19937_64 *rng = nullptr) {
        if (!op.is_hermitian()) {
            throw std::invalid_argument("can only measure Hermitian Pauli operators");
        }
        DensePauli p = DensePauli::from_sparse(op, n_);
        std::optional<size_t> pivot;
        for (size_t i = 0; i < n_; ++i) {
            if (stab_[i].anticommutes(p)) {
                pivot = i;
                break;
            }
        }
        if (!pivot) {
            DensePauli acc(n_);
            for (size_t i = 0; i < n_; ++i) {
                if (destab_[i].anticommutes(p)) {
                    acc.right_multiply(stab_[i]);
                }
            }
            // acc = +-op as operators; compare signs.
            bool acc_sign = acc.sign_bit();
            bool op_sign = p.sign_bit();
            bool outcome = acc_sign ^ op_sign;
            if (forced && *forced != outcome) {
                throw std::invalid_argument("forced outcome contradicts a deterministic measurement");
            }
            return {outcome, true};
        }
        size_t k = *pivot;
        for (size_t i = 0; i < n_; ++i) {
            if (i != k && stab_[i].anticommutes(p)) stab_[i].right_multiply(stab_[k]);
            if (i != k && destab_[i].anticommutes(p)) destab_[i].right_multiply(stab_[k]);
        }
        bool outcome;
        if (forced) {
            outcome = *forced;
        } else if (rng) {
            outcome = (*rng)() & 1;
        } else {
            outcome = false;
        }
        destab_[k] = stab_[k];
        stab_[k] = p;
        if (outcome) {
            stab_[k].phase = (stab_[k].phase + 2) & 3;
        }
        return {outcome, false};
    }

    /// Expectation sign if op is (up to sign) in the stabilizer group.
    std::optional<bool> peek(const PauliOperator<int> &op) const {
        StabilizerTableau copy = *this;
        DensePauli p = DensePauli::from_sparse(op, n_);
        for (size_t i = 0; i < n_; ++i) {
            if (stab_[i].anticommutes(p)) return std::nullopt;
        }
        return copy.measure(op, std::nullopt).outcome;
    }

    std::vector<PauliOperator<int>> stabilizers() const {
        std::vector<PauliOperator<int>> out;
        for (const auto &s : stab_) out.push_back(s.to_sparse());
        return out;
    }

  private:
    template <typename F>
    void for_rows(F &&f) {
        for (auto &r : stab_) f(r);
        for (auto &r : destab_) f(r);
    }

    size_t n_;
    std::vector<DensePauli> destab_;
    std::vector<DensePauli> stab_;
};

/// Measurement through tableau_measure(t, op, forced).
inline MeasureResult tableau_measure(StabilizerTableau &t, const PauliOperator<int> &op,
                                     std::optional<bool> forced = std::nullopt) {
    return t.measure(op, forced);
}

}  // namespace ftq2d
