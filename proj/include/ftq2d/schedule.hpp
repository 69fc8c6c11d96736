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

// Single-layer 2D circuit that builds the cluster slice by slice.
//
// The code plane is an L x L torus in doubled coordinates (X, Y) in [0, 2L)^2.
// Every position holds one qubit:
//   (odd, even) and (even, odd)  code qubits on horizontal and vertical edges,
//   (odd, odd)                   primal syndrome qubits on plaquettes,
//   (even, even)                 dual syndrome qubits on sites.
//
// One period has six steps and every qubit is touched in every step:
//
//   step              0      1      2      3      4      5
//   horizontal edge   H      CZ     CZ     H      CZ     CZ
//   vertical edge     CZ     CZ     H      CZ     CZ     H
//   plaquette         Prep   CZ-N   CZ-S   CZ-W   CZ-E   MeasX
//   site              CZ-S   CZ-N   MeasX  Prep   CZ-W   CZ-E
//
// A site qubit prepared in step 3 of one period finishes its cycle in step 2 of
// the next, so primal and dual rounds are offset by three steps. The code
// frame is the physical frame at a period boundary; in it plaquette checks
// are X-type and site checks Z-type. The site measurements in step 2 of the
// very first period have no preceding preparation and are not rounds.
//
// A noiseless three-step tail completes the last site cycle.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pauli.hpp"

namespace ftq2d {

enum class Gate : uint8_t { PrepX, H, CZ, MeasX };
enum class Role : uint8_t { Code, SyndromePrimal, SyndromeDual };

/// Sector 0 collects plaquette (primal) checks, sector 1 site (dual) checks.
enum Sector : int { kPrimal = 0, kDual = 1 };

inline const char *gate_name(Gate g) {
    switch (g) {
        case Gate::PrepX:
            return "PREP_X";
        case Gate::H:
            return "H";
        case Gate::CZ:
            return "CZ";
        case Gate::MeasX:
            return "MEAS_X";
    }
    return "?";
}

inline Gate gate_from_name(const std::string &s) {
    if (s == "PREP_X") return Gate::PrepX;
    if (s == "H") return Gate::H;
    if (s == "CZ") return Gate::CZ;
    if (s == "MEAS_X") return Gate::MeasX;
    throw std::invalid_argument("unknown gate '" + s + "'");
}

inline const char *role_name(Role r) {
    switch (r) {
        case Role::Code:
            return "code";
        case Role::SyndromePrimal:
            return "syndrome-primal";
        case Role::SyndromeDual:
            return "syndrome-dual";
    }
    return "?";
}

inline Role role_from_name(const std::string &s) {
    if (s == "code") return Role::Code;
    if (s == "syndrome-primal") return Role::SyndromePrimal;
    if (s == "syndrome-dual") return Role::SyndromeDual;
    throw std::invalid_argument("unknown qubit role '" + s + "'");
}

struct Op {
    int t = 0;
    Gate gate = Gate::H;
    int q0 = 0;
    int q1 = -1;

    bool operator==(const Op &) const = default;
};

/// What a syndrome measurement reports: (sector, round, check index), or a
/// warm-up measurement with round -1 that carries no information.
struct MeasRecord {
    int sector = kPrimal;
    int round = -1;
    int check = -1;
};

/// Geometry helpers shared by the circuit, noise and decoder code.
struct Plane {
    int L = 2;

    int side() const {
        return 2 * L;
    }
    int num_qubits() const {
        return 4 * L * L;
    }
    int wrap(int v) const {
        int m = 2 * L;
        v %= m;
        return v < 0 ? v + m : v;
    }
    int qubit(int X, int Y) const {
        return wrap(Y) * side() + wrap(X);
    }
    std::array<int, 2> coords(int q) const {
        return {q % side(), q / side()};
    }
    Role role(int q) const {
        auto [X, Y] = coords(q);
        if ((X & 1) != (Y & 1)) return Role::Code;
        return (X & 1) ? Role::SyndromePrimal : Role::SyndromeDual;
    }
    bool horizontal(int q) const {
        return coords(q)[0] & 1;
    }
    int num_checks() const {
        return L * L;
    }
    /// Qubit of check c in a sector (plaquette or site).
    int check_qubit(int sector, int c) const {
        int x = c % L, y = c / L;
        return sector == kPrimal ? qubit(2 * x + 1, 2 * y + 1) : qubit(2 * x, 2 * y);
    }
    int check_index(int q) const {
        auto [X, Y] = coords(q);
        return (Y / 2) * L + X / 2;
    }
    /// Code qubits N, S, W, E of a check qubit.
    std::array<int, 4> neighbours(int q) const {
        auto [X, Y] = coords(q);
        return {qubit(X, Y + 1), qubit(X, Y - 1), qubit(X - 1, Y), qubit(X + 1, Y)};
    }
    /// Code qubits whose flip is detected by the given sector's checks: the
    /// two checks of that sector adjacent to code qubit q.
    std::array<int, 2> adjacent_checks(int sector, int q) const {
        auto [X, Y] = coords(q);
        bool hz = (X & 1) != 0;
        if (sector == kPrimal) {
            return hz ? std::array<int, 2>{check_index(qubit(X, Y - 1)), check_index(qubit(X, Y + 1))}
                      : std::array<int, 2>{check_index(qubit(X - 1, Y)), check_index(qubit(X + 1, Y))};
        }
        return hz ? std::array<int, 2>{check_index(qubit(X - 1, Y)), check_index(qubit(X + 1, Y))}
                  : std::array<int, 2>{check_index(qubit(X, Y - 1)), check_index(qubit(X, Y + 1))};
    }
};

struct Circuit {
    int L = 2;
    int rounds = 1;
    int period = 6;
    std::vector<Role> roles;
    /// Noisy part: steps [0, period * rounds). Ordered by step.
    std::vector<Op> ops;
    /// Noiseless completion, steps >= period * rounds.
    std::vector<Op> tail;

    Plane plane() const {
        return Plane{L};
    }
    int num_qubits() const {
        return static_cast<int>(roles.size());
    }
    int num_steps() const {
        return period * rounds;
    }
};

inline Circuit build_schedule(int L, int rounds) {
    if (L < 2) throw std::invalid_argument("schedule needs L >= 2");
    if (rounds < 1) throw std::invalid_argument("schedule needs at least one round");
    Plane pl{L};
    Circuit c;
    c.L = L;
    c.rounds = rounds;
    c.roles.resize(pl.num_qubits());
    for (int q = 0; q < pl.num_qubits(); ++q) c.roles[q] = pl.role(q);

    auto for_role = [&](Role r, auto &&f) {
        for (int q = 0; q < pl.num_qubits(); ++q) {
            if (c.roles[q] == r) f(q);
        }
    };
    auto emit_step = [&](std::vector<Op> &out, int t, int phase) {
        for_role(Role::Code, [&](int q) {
            bool hz = pl.horizontal(q);
            if ((hz && (phase == 0 || phase == 3)) || (!hz && (phase == 2 || phase == 5))) {
                out.push_back({t, Gate::H, q, -1});
            }
        });
        for_role(Role::SyndromePrimal, [&](int q) {
            auto nb = pl.neighbours(q);  // N, S, W, E
            switch (phase) {
                case 0:
                    out.push_back({t, Gate::PrepX, q, -1});
                    break;
                case 5:
                    out.push_back({t, Gate::MeasX, q, -1});
                    break;
                default:
                    out.push_back({t, Gate::CZ, q, nb[phase - 1]});
                    break;
            }
        });
        for_role(Role::SyndromeDual, [&](int q) {
            auto nb = pl.neighbours(q);
            switch (phase) {
                case 0:
                    out.push_back({t, Gate::CZ, q, nb[1]});
                    break;
                case 1:
                    out.push_back({t, Gate::CZ, q, nb[0]});
                    break;
                case 2:
                    out.push_back({t, Gate::MeasX, q, -1});
                    break;
                case 3:
                    out.push_back({t, Gate::PrepX, q, -1});
                    break;
                case 4:
                    out.push_back({t, Gate::CZ, q, nb[2]});
                    break;
                case 5:
                    out.push_back({t, Gate::CZ, q, nb[3]});
                    break;
            }
        });
    };
    for (int t = 0; t < c.num_steps(); ++t) emit_step(c.ops, t, t % 6);
    int t0 = c.num_steps();
    for_role(Role::SyndromeDual, [&](int q) { c.tail.push_back({t0, Gate::CZ, q, pl.neighbours(q)[1]}); });
    for_role(Role::SyndromeDual, [&](int q) { c.tail.push_back({t0 + 1, Gate::CZ, q, pl.neighbours(q)[0]}); });
    for_role(Role::SyndromeDual, [&](int q) { c.tail.push_back({t0 + 2, Gate::MeasX, q, -1}); });
    return c;
}

/// Round bookkeeping for a measurement op.
inline MeasRecord meas_record(const Circuit &c, const Op &op) {
    if (op.gate != Gate::MeasX) throw std::invalid_argument("not a measurement");
    Plane pl = c.plane();
    MeasRecord r;
    Role role = c.roles.at(op.q0);
    r.check = pl.check_index(op.q0);
    if (role == Role::SyndromePrimal) {
        r.sector = kPrimal;
        r.round = op.t / c.period;
    } else if (role == Role::SyndromeDual) {
        r.sector = kDual;
        r.round = op.t / c.period - 1;
    } else {
        throw std::invalid_argument("measurement on a code qubit");
    }
    return r;
}

/// Throws if some qubit is idle or doubly used in a step of the noisy part.
inline void check_no_idle(const Circuit &c) {
    std::vector<int> last(c.num_qubits(), -1);
    std::vector<int> count(static_cast<size_t>(c.num_qubits()) * c.num_steps(), 0);
    for (const auto &op : c.ops) {
        if (op.t < 0 || op.t >= c.num_steps()) throw std::invalid_argument("op outside the noisy window");
        count[static_cast<size_t>(op.t) * c.num_qubits() + op.q0]++;
        if (op.q1 >= 0) count[static_cast<size_t>(op.t) * c.num_qubits() + op.q1]++;
    }
    for (int t = 0; t < c.num_steps(); ++t) {
        for (int q = 0; q < c.num_qubits(); ++q) {
            int n = count[static_cast<size_t>(t) * c.num_qubits() + q];
            if (n != 1) {
                throw std::invalid_argument("qubit " + std::to_string(q) + " has " + std::to_string(n) +
                                            " operations in step " + std::to_string(t));
            }
        }
    }
}

/// The check each syndrome measurement extracts: the measured X of the
/// syndrome qubit, pulled back to its preparation through its own CZ gates and
/// the code-qubit Hadamards, then expressed in the code frame. CZ gates of other
/// syndrome qubits are left out because those qubits are mid-cycle at the
/// period boundary. Keyed by (sector, round, check).
inline std::map<std::array<int, 3>, PauliOperator<int>> checks_measured_by(const Circuit &c) {
    std::vector<Op> all = c.ops;
    all.insert(all.end(), c.tail.begin(), c.tail.end());
    Plane pl = c.plane();
    std::map<std::array<int, 3>, PauliOperator<int>> out;
    std::vector<int> last_prep(c.num_qubits(), -1);
    for (size_t i = 0; i < all.size(); ++i) {
        const Op &m = all[i];
        if (m.gate == Gate::PrepX) last_prep[m.q0] = static_cast<int>(i);
        if (m.gate != Gate::MeasX) continue;
        MeasRecord rec = meas_record(c, m);
        if (rec.round < 0 || last_prep[m.q0] < 0) continue;
        int prep_index = last_prep[m.q0];
        int t_prep = all[prep_index].t;
        auto p = PauliOperator<int>::X(m.q0);
        for (int j = static_cast<int>(i) - 1; j >= 0 && all[j].t >= t_prep; --j) {
            const Op &op = all[j];
            if (op.t >= m.t || j == prep_index) continue;
            if (op.gate == Gate::H) {
                p.apply_h(op.q0);
            } else if (op.gate == Gate::CZ) {
                if (op.q0 == m.q0 || op.q1 == m.q0) p.apply_cz(op.q0, op.q1);
            } else if (op.q0 == m.q0) {
                throw std::logic_error("unexpected operation on a syndrome qubit during its cycle");
            }
        }
        if (p.pauli_at(m.q0) != 'X') throw std::logic_error("measured operator does not end on the prepared X");
        p = p * PauliOperator<int>::X(m.q0);
        for (int q : p.x_support()) {
            if (c.roles[q] != Role::Code) throw std::logic_error("check spreads onto another syndrome qubit");
        }
        for (int q : p.z_support()) {
            if (c.roles[q] != Role::Code) throw std::logic_error("check spreads onto another syndrome qubit");
        }
        // Undo the Hadamards applied since the last period boundary.
        int phase = t_prep % c.period;
        std::set<int> support = p.x_support();
        support.insert(p.z_support().begin(), p.z_support().end());
        for (int q : support) {
            bool rotated = pl.horizontal(q) ? (phase >= 1 && phase <= 3) : (phase >= 3 && phase <= 5);
            if (rotated) p.apply_h(q);
        }
        out[{rec.sector, rec.round, rec.check}] = p;
    }
    return out;
}

// Circuit file: header lines starting with '#', one op per line afterwards.
//   # ftq2d-circuit v1
//   # extent L
//   # rounds T
//   # period 6
//   # noiseless_from <step>
//   # qubit <index> <role> <X> <Y>
//   <t> <GATE> <q0> [<q1>]

inline std::string circuit_to_text(const Circuit &c) {
    std::ostringstream os;
    Plane pl = c.plane();
    os << "# ftq2d-circuit v1\n";
    os << "# extent " << c.L << "\n";
    os << "# rounds " << c.rounds << "\n";
    os << "# period " << c.period << "\n";
    os << "# noiseless_from " << c.num_steps() << "\n";
    for (int q = 0; q < c.num_qubits(); ++q) {
        auto xy = pl.coords(q);
        os << "# qubit " << q << " " << role_name(c.roles[q]) << " " << xy[0] << " " << xy[1] << "\n";
    }
    auto emit = [&](const Op &op) {
        os << op.t << " " << gate_name(op.gate) << " " << op.q0;
        if (op.q1 >= 0) os << " " << op.q1;
        os << "\n";
    };
    for (const auto &op : c.ops) emit(op);
    for (const auto &op : c.tail) emit(op);
    return os.str();
}

inline Circuit circuit_from_text(const std::string &text) {
    Circuit c;
    std::istringstream is(text);
    std::string line;
    int noiseless_from = -1;
    bool saw_magic = false;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (line[0] == '#') {
            std::string hash, key;
            ls >> hash >> key;
            if (key == "ftq2d-circuit") {
                saw_magic = true;
            } else if (key == "extent") {
                ls >> c.L;
            } else if (key == "rounds") {
                ls >> c.rounds;
            } else if (key == "period") {
                ls >> c.period;
            } else if (key == "noiseless_from") {
                ls >> noiseless_from;
            } else if (key == "qubit") {
                int q, X, Y;
                std::string role;
                ls >> q >> role >> X >> Y;
                if (q != static_cast<int>(c.roles.size())) {
                    throw std::invalid_argument("circuit file: qubits must be listed in order");
                }
                c.roles.push_back(role_from_name(role));
            }
            continue;
        }
        Op op;
        std::string g;
        if (!(ls >> op.t >> g >> op.q0)) {
            throw std::invalid_argument("circuit file: malformed op on line " + std::to_string(lineno));
        }
        op.gate = gate_from_name(g);
        if (op.gate == Gate::CZ && !(ls >> op.q1)) {
            throw std::invalid_argument("circuit file: CZ needs two qubits on line " + std::to_string(lineno));
        }
        if (op.q0 < 0 || op.q0 >= static_cast<int>(c.roles.size()) || op.q1 >= static_cast<int>(c.roles.size())) {
            throw std::invalid_argument("circuit file: qubit index out of range on line " + std::to_string(lineno));
        }
        (noiseless_from >= 0 && op.t >= noiseless_from ? c.tail : c.ops).push_back(op);
    }
    if (!saw_magic) throw std::invalid_argument("circuit file: missing '# ftq2d-circuit v1' header");
    if (c.period != 6) throw std::invalid_argument("circuit file: only period 6 is supported");
    if (static_cast<int>(c.roles.size()) != 4 * c.L * c.L) {
        throw std::invalid_argument("circuit file: qubit count does not match extent");
    }
    if (noiseless_from != c.num_steps()) {
        throw std::invalid_argument("circuit file: noiseless_from must equal period * rounds");
    }
    return c;
}

}  // namespace ftq2d
