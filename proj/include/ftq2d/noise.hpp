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

// Fault sampling and Pauli-frame propagation.
//
// Two equivalent simulation paths are provided. simulate_frame() pushes an
// explicit fault list through the circuit gate by gate; it is the reference.
// DetectorModel precomputes, for every fault location and every Pauli it can
// suffer, the set of detectors it flips and its effect on the logical
// witnesses. A trial is then the XOR of a handful of such effects, which is
// what the Monte Carlo loops use.
//
// Detectors: in each sector the check outcomes m(r) are recorded for rounds
// r = 0..T-1 plus a perfect final round T read off the code frame. Detector
// (r, c) fires when m(r, c) != m(r-1, c), with m(-1, c) = 0.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pauli.hpp"
#include "schedule.hpp"

namespace ftq2d {

// ---------------------------------------------------------------------------
// Error model configuration

enum class NoiseMode { Uniform, Individual, Phenomenological };

struct ErrorModelConfig {
    NoiseMode mode = NoiseMode::Uniform;
    double p_P = 0;  ///< |+> preparation
    double p_1 = 0;  ///< Hadamard (single-qubit depolarizing after the gate)
    double p_2 = 0;  ///< CZ (two-qubit depolarizing after the gate)
    double p_M = 0;  ///< measurement outcome flip
    double p = 0;    ///< phenomenological data flip per round
    double q = 0;    ///< phenomenological syndrome flip per round

    static ErrorModelConfig uniform(double p) {
        ErrorModelConfig c;
        c.mode = NoiseMode::Uniform;
        c.p_P = c.p_1 = c.p_2 = c.p_M = p;
        c.p = p;
        return c;
    }
    static ErrorModelConfig individual(double pp, double p1, double p2, double pm) {
        ErrorModelConfig c;
        c.mode = NoiseMode::Individual;
        c.p_P = pp;
        c.p_1 = p1;
        c.p_2 = p2;
        c.p_M = pm;
        return c;
    }
    static ErrorModelConfig phenomenological(double p, double q) {
        ErrorModelConfig c;
        c.mode = NoiseMode::Phenomenological;
        c.p = p;
        c.q = q;
        return c;
    }

    bool is_phenomenological() const {
        return mode == NoiseMode::Phenomenological;
    }

    void validate() const {
        for (double v : {p_P, p_1, p_2, p_M, p, q}) {
            if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("probabilities must lie in [0, 1]");
        }
        if (mode == NoiseMode::Uniform && !(p_P == p_1 && p_1 == p_2 && p_2 == p_M)) {
            throw std::invalid_argument("uniform mode needs p_P = p_1 = p_2 = p_M");
        }
    }

    /// Key-value text, one "key = value" per line; '#' starts a comment.
    std::string to_key_value() const {
        std::ostringstream os;
        os.precision(17);
        os << "mode = " << mode_name() << "\n";
        if (mode == NoiseMode::Phenomenological) {
            os << "p = " << p << "\nq = " << q << "\n";
        } else {
            os << "p_P = " << p_P << "\np_1 = " << p_1 << "\np_2 = " << p_2 << "\np_M = " << p_M << "\n";
        }
        return os.str();
    }

    static ErrorModelConfig from_key_value(const std::string &text) {
        std::map<std::string, std::string> kv;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos) {
                    throw std::invalid_argument("config line without '=': " + line);
                }
                continue;
            }
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t\r");
                auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        auto num = [&](const std::string &k, double def) {
            auto it = kv.find(k);
            return it == kv.end() ? def : std::stod(it->second);
        };
        std::string mode = kv.count("mode") ? kv["mode"] : "uniform";
        ErrorModelConfig c;
        if (mode == "uniform") {
            if (!kv.count("p")) throw std::invalid_argument("uniform mode needs key 'p'");
            c = uniform(num("p", 0));
        } else if (mode == "individual") {
            c = individual(num("p_P", 0), num("p_1", 0), num("p_2", 0), num("p_M", 0));
        } else if (mode == "phenomenological") {
            double p = num("p", 0);
            c = phenomenological(p, num("q", p));
        } else {
            throw std::invalid_argument("unknown noise mode '" + mode + "'");
        }
        c.validate();
        return c;
    }

    std::string mode_name() const {
        switch (mode) {
            case NoiseMode::Uniform:
                return "uniform";
            case NoiseMode::Individual:
                return "individual";
            case NoiseMode::Phenomenological:
                return "phenomenological";
        }
        return "?";
    }
};

// ---------------------------------------------------------------------------
// Random streams and channels

/// Independent generator for trial `index` of a run with master seed `seed`.
/// Streams depend only on (seed, index), so results do not depend on how
/// trials are spread over workers.
inline std::mt19937_64 trial_rng(uint64_t seed, uint64_t index) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(index),
                      static_cast<uint32_t>(index >> 32), 0x66747132u};
    return std::mt19937_64(seq);
}

/// Single-qubit Pauli as two bits: bit 0 = X part, bit 1 = Z part
/// (0 = I, 1 = X, 2 = Z, 3 = Y).
using Pauli1 = uint8_t;

inline char pauli1_char(Pauli1 p) {
    return "IXZY"[p & 3];
}

/// T1 = (1 - p)[I] + p/3 ([X] + [Y] + [Z]).
template <typename Rng>
Pauli1 sample_channel_T1(double p, Rng &rng) {
    if (p <= 0) return 0;
    if (!std::bernoulli_distribution(p)(rng)) return 0;
    return static_cast<Pauli1>(std::uniform_int_distribution<int>(1, 3)(rng));
}

/// Two-qubit depolarizing: each of the 15 non-identity Paulis with p/15.
/// Outcome k in 1..15 encodes (first, second) = (k & 3, k >> 2).
template <typename Rng>
std::array<Pauli1, 2> sample_channel_T2(double p, Rng &rng) {
    if (p <= 0) return {0, 0};
    if (!std::bernoulli_distribution(p)(rng)) return {0, 0};
    int k = std::uniform_int_distribution<int>(1, 15)(rng);
    return {static_cast<Pauli1>(k & 3), static_cast<Pauli1>(k >> 2)};
}

// ---------------------------------------------------------------------------
// Syndrome histories

struct SyndromeHistory {
    int L = 0;
    int T = 0;
    /// outcomes[sector][r * L * L + c] for r = 0..T (round T is the perfect read-out).
    std::array<std::vector<uint8_t>, 2> outcomes;

    SyndromeHistory() = default;
    SyndromeHistory(int l, int t) : L(l), T(t) {
        for (auto &o : outcomes) o.assign(static_cast<size_t>(t + 1) * l * l, 0);
    }

    int detectors_per_sector() const {
        return (T + 1) * L * L;
    }

    uint8_t &at(int sector, int round, int check) {
        return outcomes[sector][static_cast<size_t>(round) * L * L + check];
    }
    uint8_t at(int sector, int round, int check) const {
        return outcomes[sector][static_cast<size_t>(round) * L * L + check];
    }

    /// Detector ids r * L * L + c, ascending.
    std::vector<int> defects(int sector) const {
        std::vector<int> out;
        int n = L * L;
        for (int r = 0; r <= T; ++r) {
            for (int c = 0; c < n; ++c) {
                uint8_t prev = r == 0 ? 0 : at(sector, r - 1, c);
                if (at(sector, r, c) != prev) out.push_back(r * n + c);
            }
        }
        return out;
    }
};

/// Which of a sector's two witness loops contain code qubit q (bit 0, bit 1).
///
/// Sector 0 residuals are Z strings between plaquettes; their winding is read
/// off by the horizontal edges of row Y = 0 (winding along y) and the vertical
/// edges of column X = 0 (winding along x). Sector 1 residuals are X strings
/// between sites; the loops are the horizontal edges of column X = 1 and the
/// vertical edges of row Y = 1.
inline uint8_t loop_bits(const Plane &pl, int sector, int q) {
    auto [X, Y] = pl.coords(q);
    if ((X & 1) == (Y & 1)) return 0;
    bool hz = X & 1;
    if (sector == kPrimal) {
        return static_cast<uint8_t>((hz && Y == 0) ? 1 : (!hz && X == 0) ? 2 : 0);
    }
    return static_cast<uint8_t>((hz && X == 1) ? 1 : (!hz && Y == 1) ? 2 : 0);
}

/// Logical witness mask of a frame: bits 0-1 from Z parts (sector 0),
/// bits 2-3 from X parts (sector 1).
inline uint8_t frame_logical_mask(const Plane &pl, const std::vector<uint8_t> &x, const std::vector<uint8_t> &z) {
    uint8_t m = 0;
    for (int q = 0; q < pl.num_qubits(); ++q) {
        if (z[q]) m ^= loop_bits(pl, kPrimal, q);
        if (x[q]) m ^= static_cast<uint8_t>(loop_bits(pl, kDual, q) << 2);
    }
    return m;
}

/// Perfect read-out of the code frame into round `round` of a history.
inline void perfect_readout(const Plane &pl, const std::vector<uint8_t> &x, const std::vector<uint8_t> &z,
                            SyndromeHistory &h, int round) {
    for (int c = 0; c < pl.num_checks(); ++c) {
        uint8_t zp = 0, xp = 0;
        for (int q : pl.neighbours(pl.check_qubit(kPrimal, c))) zp ^= z[q];
        for (int q : pl.neighbours(pl.check_qubit(kDual, c))) xp ^= x[q];
        h.at(kPrimal, round, c) = zp;
        h.at(kDual, round, c) = xp;
    }
}

// ---------------------------------------------------------------------------
// Reference path: explicit frame simulation

/// A fault attached to op `op` of the noisy part of a circuit. Gate and
/// preparation faults act right after the op; `flip` inverts a measurement
/// outcome.
struct Fault {
    int op = 0;
    Pauli1 p0 = 0;
    Pauli1 p1 = 0;
    bool flip = false;

    bool operator==(const Fault &) const = default;
};

struct FrameResult {
    SyndromeHistory history;
    std::vector<uint8_t> x, z;  ///< final frame on every qubit

    /// Residual error on the code qubits before correction.
    PauliOperator<int> residual(const std::vector<Role> &roles) const {
        std::set<int> xs, zs;
        for (size_t q = 0; q < x.size(); ++q) {
            if (roles[q] != Role::Code) continue;
            if (x[q]) xs.insert(static_cast<int>(q));
            if (z[q]) zs.insert(static_cast<int>(q));
        }
        int ny = static_cast<int>(intersection_size(xs, zs));
        return PauliOperator<int>(ny, std::move(xs), std::move(zs));
    }
};

/// Propagates the faults (any order) through the circuit.
inline FrameResult simulate_frame(const Circuit &c, std::vector<Fault> faults) {
    std::stable_sort(faults.begin(), faults.end(), [](const Fault &a, const Fault &b) { return a.op < b.op; });
    Plane pl = c.plane();
    FrameResult res;
    res.history = SyndromeHistory(c.L, c.rounds);
    res.x.assign(c.num_qubits(), 0);
    res.z.assign(c.num_qubits(), 0);
    auto &x = res.x;
    auto &z = res.z;
    auto apply_op = [&](const Op &op, bool flip) {
        switch (op.gate) {
            case Gate::PrepX:
                x[op.q0] = z[op.q0] = 0;
                break;
            case Gate::H:
                std::swap(x[op.q0], z[op.q0]);
                break;
            case Gate::CZ:
                z[op.q0] ^= x[op.q1];
                z[op.q1] ^= x[op.q0];
                break;
            case Gate::MeasX: {
                MeasRecord rec = meas_record(c, op);
                if (rec.round >= 0) res.history.at(rec.sector, rec.round, rec.check) = z[op.q0] ^ (flip ? 1 : 0);
                break;
            }
        }
    };
    size_t fi = 0;
    for (size_t i = 0; i < c.ops.size(); ++i) {
        const Op &op = c.ops[i];
        bool flip = false;
        size_t fj = fi;
        while (fj < faults.size() && faults[fj].op == static_cast<int>(i)) flip ^= faults[fj++].flip;
        apply_op(op, flip);
        for (; fi < fj; ++fi) {
            const Fault &f = faults[fi];
            x[op.q0] ^= f.p0 & 1;
            z[op.q0] ^= (f.p0 >> 1) & 1;
            if (op.q1 >= 0) {
                x[op.q1] ^= f.p1 & 1;
                z[op.q1] ^= (f.p1 >> 1) & 1;
            }
        }
    }
    if (fi != faults.size()) throw std::invalid_argument("fault attached to a nonexistent op");
    for (const auto &op : c.tail) apply_op(op, false);
    perfect_readout(pl, x, z, res.history, c.rounds);
    return res;
}

/// Samples faults for every noisy op of the circuit.
template <typename Rng>
std::vector<Fault> sample_faults(const Circuit &c, const ErrorModelConfig &cfg, Rng &rng) {
    std::vector<Fault> out;
    for (size_t i = 0; i < c.ops.size(); ++i) {
        const Op &op = c.ops[i];
        Fault f;
        f.op = static_cast<int>(i);
        switch (op.gate) {
            case Gate::PrepX:
                if (cfg.p_P > 0 && std::bernoulli_distribution(cfg.p_P)(rng)) {
                    f.p0 = 2;
                    out.push_back(f);
                }
                break;
            case Gate::H:
                f.p0 = sample_channel_T1(cfg.p_1, rng);
                if (f.p0) out.push_back(f);
                break;
            case Gate::CZ: {
                auto pp = sample_channel_T2(cfg.p_2, rng);
                f.p0 = pp[0];
                f.p1 = pp[1];
                if (f.p0 || f.p1) out.push_back(f);
                break;
            }
            case Gate::MeasX:
                // Warm-up measurements carry no information; flipping them is moot.
                if (meas_record(c, op).round < 0) break;
                if (cfg.p_M > 0 && std::bernoulli_distribution(cfg.p_M)(rng)) {
                    f.flip = true;
                    out.push_back(f);
                }
                break;
        }
    }
    return out;
}

/// One circuit-level trial on the reference path.
inline FrameResult run_trial(const Circuit &c, const ErrorModelConfig &cfg, uint64_t seed, uint64_t index = 0,
                             std::vector<Fault> *faults_out = nullptr) {
    auto rng = trial_rng(seed, index);
    auto faults = sample_faults(c, cfg, rng);
    if (faults_out) *faults_out = faults;
    return simulate_frame(c, std::move(faults));
}

/// A phenomenological fault: a data flip on code qubit `where` (Z for sector
/// 0, X for sector 1) before the measurement of round `round`, or a flip of
/// the outcome of check `where` in round `round`.
struct PhenoFault {
    int sector = kPrimal;
    int round = 0;
    int where = 0;
    bool measurement = false;
};

/// Reference path for the phenomenological model with explicit per-round frames.
inline FrameResult simulate_phenomenological(int L, int T, const std::vector<PhenoFault> &faults) {
    Plane pl{L};
    FrameResult res;
    res.history = SyndromeHistory(L, T);
    res.x.assign(pl.num_qubits(), 0);
    res.z.assign(pl.num_qubits(), 0);
    for (int r = 0; r < T; ++r) {
        for (const auto &f : faults) {
            if (f.round == r && !f.measurement) (f.sector == kPrimal ? res.z : res.x)[f.where] ^= 1;
        }
        perfect_readout(pl, res.x, res.z, res.history, r);
        for (const auto &f : faults) {
            if (f.round == r && f.measurement) res.history.at(f.sector, r, f.where) ^= 1;
        }
    }
    perfect_readout(pl, res.x, res.z, res.history, T);
    return res;
}

template <typename Rng>
std::vector<PhenoFault> sample_phenomenological_faults(int L, int T, double p, double q, Rng &rng) {
    Plane pl{L};
    std::vector<PhenoFault> out;
    std::bernoulli_distribution data(p), meas(q);
    for (int r = 0; r < T; ++r) {
        for (int s : {kPrimal, kDual}) {
            for (int qb = 0; qb < pl.num_qubits(); ++qb) {
                if (pl.role(qb) == Role::Code && p > 0 && data(rng)) out.push_back({s, r, qb, false});
            }
            for (int c = 0; c < pl.num_checks(); ++c) {
                if (q > 0 && meas(rng)) out.push_back({s, r, c, true});
            }
        }
    }
    return out;
}

inline FrameResult run_trial_phenomenological(int L, int T, double p, double q, uint64_t seed, uint64_t index = 0) {
    auto rng = trial_rng(seed, index);
    return simulate_phenomenological(L, T, sample_phenomenological_faults(L, T, p, q, rng));
}

// ---------------------------------------------------------------------------
// Fast path: detector model

/// Effect of one fault: flipped detectors (global ids, sector 1 offset by the
/// per-sector count) and the logical witness mask.
struct Effect {
    std::vector<int> dets;
    uint8_t logical = 0;
};

inline Effect xor_effects(const Effect &a, const Effect &b) {
    Effect r;
    std::set_symmetric_difference(a.dets.begin(), a.dets.end(), b.dets.begin(), b.dets.end(),
                                  std::back_inserter(r.dets));
    r.logical = a.logical ^ b.logical;
    return r;
}

/// An independent error mechanism: fires with probability p and then picks
/// one of its outcomes uniformly.
struct Mechanism {
    double p = 0;
    int first_outcome = 0;
    int num_outcomes = 1;
    int op = -1;  ///< circuit op index, or -1 for phenomenological mechanisms
};

struct TrialSample {
    std::array<std::vector<int>, 2> defects;  ///< per-sector detector ids r * L * L + c, ascending
    uint8_t logical = 0;                      ///< logical witness mask of the uncorrected residual
    std::vector<std::pair<int, int>> fired;   ///< (mechanism, outcome), filled when requested
};

class DetectorModel {
  public:
    int L = 0;
    int T = 0;
    std::vector<Mechanism> mechanisms;
    std::vector<Effect> outcomes;

    int detectors_per_sector() const {
        return (T + 1) * L * L;
    }

    /// Draws one trial. Mechanisms are visited in order with geometric gaps
    /// between firing mechanisms of equal probability.
    template <typename Rng>
    TrialSample sample(Rng &rng, bool record_fired = false) const {
        TrialSample s;
        scratch_.assign(2 * detectors_per_sector(), 0);
        touched_.clear();
        size_t i = 0;
        while (i < mechanisms.size()) {
            size_t j = i;
            double p = mechanisms[i].p;
            while (j < mechanisms.size() && mechanisms[j].p == p) ++j;
            if (p > 0) {
                int64_t idx = static_cast<int64_t>(i) - 1;
                std::geometric_distribution<int64_t> gap(p);
                while (true) {
                    idx += 1 + (p >= 1.0 ? 0 : gap(rng));
                    if (idx >= static_cast<int64_t>(j)) break;
                    const Mechanism &m = mechanisms[idx];
                    int k = m.num_outcomes == 1 ? 0 : std::uniform_int_distribution<int>(0, m.num_outcomes - 1)(rng);
                    apply_outcome(m.first_outcome + k, s.logical);
                    if (record_fired) s.fired.push_back({static_cast<int>(idx), k});
                }
            }
            i = j;
        }
        collect(s);
        return s;
    }

    /// Trial with an explicit list of (mechanism, outcome) pairs.
    TrialSample apply(const std::vector<std::pair<int, int>> &fired) const {
        TrialSample s;
        scratch_.assign(2 * detectors_per_sector(), 0);
        touched_.clear();
        for (auto [m, k] : fired) {
            const Mechanism &mech = mechanisms.at(m);
            if (k < 0 || k >= mech.num_outcomes) throw std::out_of_range("mechanism outcome out of range");
            apply_outcome(mech.first_outcome + k, s.logical);
        }
        s.fired = fired;
        collect(s);
        return s;
    }

    /// Maps a circuit fault to (mechanism, outcome).
    std::pair<int, int> locate(const Fault &f) const {
        auto it = op_to_mechanism.find(f.op);
        if (it == op_to_mechanism.end()) throw std::invalid_argument("no mechanism at this op");
        const Mechanism &m = mechanisms[it->second];
        int k;
        if (m.num_outcomes == 15) {
            k = (f.p0 | (f.p1 << 2)) - 1;
        } else if (m.num_outcomes == 3) {
            k = f.p0 - 1;
        } else {
            k = 0;
        }
        if (k < 0) throw std::invalid_argument("identity fault");
        return {it->second, k};
    }

    std::map<int, int> op_to_mechanism;

  private:
    void apply_outcome(int o, uint8_t &logical) const {
        const Effect &e = outcomes[o];
        for (int d : e.dets) {
            if (!scratch_[d]) touched_.push_back(d);
            scratch_[d] ^= 1;
        }
        logical ^= e.logical;
    }

    void collect(TrialSample &s) const {
        const int n = detectors_per_sector();
        for (int d : touched_) {
            if (scratch_[d]) {
                s.defects[d >= n].push_back(d >= n ? d - n : d);
                scratch_[d] = 0;
            }
        }
        for (auto &v : s.defects) std::sort(v.begin(), v.end());
    }

    // Per-call scratch; a DetectorModel is therefore not shared between
    // threads without copying.
    mutable std::vector<uint8_t> scratch_;
    mutable std::vector<int> touched_;
};

namespace detail {

enum class BasisKind : uint8_t { X, Z, Flip };

struct BasisFault {
    int op;
    int qubit;
    BasisKind kind;
};

/// Effects of single X / Z / flip faults, 64 at a time in the bit lanes of a
/// word-parallel frame.
inline std::vector<Effect> basis_effects(const Circuit &c, const std::vector<BasisFault> &basis) {
    Plane pl = c.plane();
    const int nq = c.num_qubits();
    const int per_sector = (c.rounds + 1) * c.L * c.L;
    const int n_checks = c.L * c.L;
    std::vector<Effect> out(basis.size());
    std::vector<MeasRecord> records(c.ops.size() + c.tail.size());
    for (size_t i = 0; i < c.ops.size(); ++i) {
        if (c.ops[i].gate == Gate::MeasX) records[i] = meas_record(c, c.ops[i]);
    }
    for (size_t i = 0; i < c.tail.size(); ++i) {
        if (c.tail[i].gate == Gate::MeasX) records[c.ops.size() + i] = meas_record(c, c.tail[i]);
    }
    std::vector<uint64_t> X(nq), Z(nq), det(2 * per_sector);
    for (size_t start = 0; start < basis.size(); start += 64) {
        size_t end = std::min(basis.size(), start + 64);
        std::fill(X.begin(), X.end(), 0);
        std::fill(Z.begin(), Z.end(), 0);
        std::fill(det.begin(), det.end(), 0);
        auto toggle_meas = [&](const MeasRecord &rec, uint64_t lanes) {
            if (rec.round < 0 || !lanes) return;
            int base = rec.sector * per_sector;
            det[base + rec.round * n_checks + rec.check] ^= lanes;
            det[base + (rec.round + 1) * n_checks + rec.check] ^= lanes;
        };
        size_t next = start;
        const size_t total = c.ops.size() + c.tail.size();
        for (size_t i = static_cast<size_t>(basis[start].op); i < total; ++i) {
            const Op &op = i < c.ops.size() ? c.ops[i] : c.tail[i - c.ops.size()];
            switch (op.gate) {
                case Gate::PrepX:
                    X[op.q0] = Z[op.q0] = 0;
                    break;
                case Gate::H:
                    std::swap(X[op.q0], Z[op.q0]);
                    break;
                case Gate::CZ:
                    Z[op.q0] ^= X[op.q1];
                    Z[op.q1] ^= X[op.q0];
                    break;
                case Gate::MeasX:
                    toggle_meas(records[i], Z[op.q0]);
                    break;
            }
            while (next < end && basis[next].op == static_cast<int>(i)) {
                uint64_t bit = uint64_t{1} << (next - start);
                const BasisFault &b = basis[next];
                if (b.kind == BasisKind::X) {
                    X[b.qubit] ^= bit;
                } else if (b.kind == BasisKind::Z) {
                    Z[b.qubit] ^= bit;
                } else {
                    toggle_meas(records[i], bit);
                }
                ++next;
            }
        }
        // Perfect final round and logical witnesses.
        std::array<uint64_t, 4> logical{0, 0, 0, 0};
        for (int cidx = 0; cidx < n_checks; ++cidx) {
            uint64_t zp = 0, xp = 0;
            for (int q : pl.neighbours(pl.check_qubit(kPrimal, cidx))) zp ^= Z[q];
            for (int q : pl.neighbours(pl.check_qubit(kDual, cidx))) xp ^= X[q];
            det[c.rounds * n_checks + cidx] ^= zp;
            det[per_sector + c.rounds * n_checks + cidx] ^= xp;
        }
        for (int q = 0; q < nq; ++q) {
            uint8_t lp = loop_bits(pl, kPrimal, q), ld = loop_bits(pl, kDual, q);
            for (int b = 0; b < 2; ++b) {
                if (lp >> b & 1) logical[b] ^= Z[q];
                if (ld >> b & 1) logical[2 + b] ^= X[q];
            }
        }
        for (size_t d = 0; d < det.size(); ++d) {
            uint64_t m = det[d];
            while (m) {
                int lane = __builtin_ctzll(m);
                m &= m - 1;
                out[start + lane].dets.push_back(static_cast<int>(d));
            }
        }
        for (int b = 0; b < 4; ++b) {
            uint64_t m = logical[b];
            while (m) {
                int lane = __builtin_ctzll(m);
                m &= m - 1;
                out[start + lane].logical ^= static_cast<uint8_t>(1 << b);
            }
        }
    }
    return out;
}

inline void sort_by_probability(DetectorModel &dm) {
    // Group equal probabilities so sampling can skip geometrically; the sort
    // is stable, so the model stays deterministic.
    std::vector<size_t> order(dm.mechanisms.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return dm.mechanisms[a].p > dm.mechanisms[b].p; });
    std::vector<Mechanism> sorted;
    std::map<int, int> op_map;
    for (size_t i : order) {
        if (dm.mechanisms[i].op >= 0) op_map[dm.mechanisms[i].op] = static_cast<int>(sorted.size());
        sorted.push_back(dm.mechanisms[i]);
    }
    dm.mechanisms = std::move(sorted);
    dm.op_to_mechanism = std::move(op_map);
}

}  // namespace detail

/// Detector model of a scheduled circuit under the circuit-level error model.
inline DetectorModel build_circuit_model(const Circuit &c, const ErrorModelConfig &cfg) {
    cfg.validate();
    if (cfg.is_phenomenological()) throw std::invalid_argument("circuit model needs a circuit-level config");
    using detail::BasisFault;
    using detail::BasisKind;
    std::vector<BasisFault> basis;
    struct Loc {
        int op;
        Gate gate;
        size_t first_basis;
    };
    std::vector<Loc> locs;
    for (size_t i = 0; i < c.ops.size(); ++i) {
        const Op &op = c.ops[i];
        int oi = static_cast<int>(i);
        Loc loc{oi, op.gate, basis.size()};
        switch (op.gate) {
            case Gate::PrepX:
                basis.push_back({oi, op.q0, BasisKind::Z});
                break;
            case Gate::H:
                basis.push_back({oi, op.q0, BasisKind::X});
                basis.push_back({oi, op.q0, BasisKind::Z});
                break;
            case Gate::CZ:
                basis.push_back({oi, op.q0, BasisKind::X});
                basis.push_back({oi, op.q0, BasisKind::Z});
                basis.push_back({oi, op.q1, BasisKind::X});
                basis.push_back({oi, op.q1, BasisKind::Z});
                break;
            case Gate::MeasX:
                if (meas_record(c, op).round < 0) continue;
                basis.push_back({oi, op.q0, BasisKind::Flip});
                break;
        }
        locs.push_back(loc);
    }
    auto be = detail::basis_effects(c, basis);
    DetectorModel dm;
    dm.L = c.L;
    dm.T = c.rounds;
    auto pauli_effect = [&](size_t xb, size_t zb, Pauli1 p) {
        Effect e;
        if (p & 1) e = xor_effects(e, be[xb]);
        if (p & 2) e = xor_effects(e, be[zb]);
        return e;
    };
    for (const auto &loc : locs) {
        Mechanism m;
        m.op = loc.op;
        m.first_outcome = static_cast<int>(dm.outcomes.size());
        size_t b = loc.first_basis;
        switch (loc.gate) {
            case Gate::PrepX:
                m.p = cfg.p_P;
                dm.outcomes.push_back(be[b]);
                break;
            case Gate::MeasX:
                m.p = cfg.p_M;
                dm.outcomes.push_back(be[b]);
                break;
            case Gate::H:
                m.p = cfg.p_1;
                m.num_outcomes = 3;
                for (Pauli1 p = 1; p <= 3; ++p) dm.outcomes.push_back(pauli_effect(b, b + 1, p));
                break;
            case Gate::CZ:
                m.p = cfg.p_2;
                m.num_outcomes = 15;
                for (int k = 1; k <= 15; ++k) {
                    dm.outcomes.push_back(xor_effects(pauli_effect(b, b + 1, static_cast<Pauli1>(k & 3)),
                                                      pauli_effect(b + 2, b + 3, static_cast<Pauli1>(k >> 2))));
                }
                break;
        }
        dm.mechanisms.push_back(m);
    }
    detail::sort_by_probability(dm);
    return dm;
}

/// Detector model of the phenomenological model: per round, every code qubit
/// flips with probability p in each sector and every check outcome flips with
/// probability q; the final round is perfect. Mechanism order: for each round,
/// sector 0 data, sector 0 checks, sector 1 data, sector 1 checks.
inline DetectorModel build_phenomenological_model(int L, int T, double p, double q) {
    if (L < 2 || T < 1) throw std::invalid_argument("phenomenological model needs L >= 2 and T >= 1");
    if (!(p >= 0 && p <= 1 && q >= 0 && q <= 1)) throw std::invalid_argument("probabilities must lie in [0, 1]");
    Plane pl{L};
    DetectorModel dm;
    dm.L = L;
    dm.T = T;
    const int n = L * L;
    const int per_sector = (T + 1) * n;
    for (int r = 0; r < T; ++r) {
        for (int s : {kPrimal, kDual}) {
            for (int qb = 0; qb < pl.num_qubits(); ++qb) {
                if (pl.role(qb) != Role::Code) continue;
                auto ch = pl.adjacent_checks(s, qb);
                Effect e;
                e.dets = {s * per_sector + r * n + ch[0], s * per_sector + r * n + ch[1]};
                std::sort(e.dets.begin(), e.dets.end());
                e.logical = static_cast<uint8_t>(loop_bits(pl, s, qb) << (2 * s));
                dm.mechanisms.push_back({p, static_cast<int>(dm.outcomes.size()), 1, -1});
                dm.outcomes.push_back(std::move(e));
            }
            for (int c = 0; c < n; ++c) {
                Effect e;
                e.dets = {s * per_sector + r * n + c, s * per_sector + (r + 1) * n + c};
                dm.mechanisms.push_back({q, static_cast<int>(dm.outcomes.size()), 1, -1});
                dm.outcomes.push_back(std::move(e));
            }
        }
    }
    detail::sort_by_probability(dm);
    return dm;
}

/// Builds the right model for a config (rounds T, extent L).
inline DetectorModel build_model(int L, int T, const ErrorModelConfig &cfg) {
    if (cfg.is_phenomenological()) return build_phenomenological_model(L, T, cfg.p, cfg.q);
    return build_circuit_model(build_schedule(L, T), cfg);
}

// ---------------------------------------------------------------------------
// Debug dumps

inline nlohmann::json trial_to_json(const DetectorModel &dm, const TrialSample &s) {
    nlohmann::json j;
    j["L"] = dm.L;
    j["T"] = dm.T;
    nlohmann::json fired = nlohmann::json::array();
    for (auto [m, k] : s.fired) {
        fired.push_back({{"mechanism", m}, {"outcome", k}, {"op", dm.mechanisms[m].op}});
    }
    j["faults"] = fired;
    j["defects"] = {{"primal", s.defects[0]}, {"dual", s.defects[1]}};
    j["logical"] = s.logical;
    return j;
}

inline TrialSample trial_from_json(const nlohmann::json &j) {
    TrialSample s;
    s.defects[0] = j.at("defects").at("primal").get<std::vector<int>>();
    s.defects[1] = j.at("defects").at("dual").get<std::vector<int>>();
    s.logical = j.value("logical", 0);
    return s;
}

}  // namespace ftq2d
