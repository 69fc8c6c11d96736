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

// Minimum-weight matching decoder for the toric memory.
//
// Each sector is decoded on its own. Defects are space-time points
// (round, x, y) on an L x L torus; two defects are joined at cost
// w_s * (toroidal L1 distance) + w_t * |round difference|. Matched pairs are
// joined by a canonical shortest path (x first, then y, then time) whose
// spatial steps toggle the code qubit between neighbouring checks. The
// residual (frame plus correction) is then a cycle whose winding is read off
// by the witness loops.

#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "blossom.hpp"
#include "noise.hpp"
#include "schedule.hpp"

namespace ftq2d {

struct Metric {
    int64_t w_s = 1;
    int64_t w_t = 1;
    /// If positive, only pairs within this weight are offered to the matcher
    /// first; the complete graph is used if that leaves defects unmatched.
    int64_t radius = 0;
};

struct DefectNode {
    int round = 0;
    int x = 0;
    int y = 0;

    auto operator<=>(const DefectNode &) const = default;
};

struct MatchingGraph {
    int L = 0;
    int sector = kPrimal;
    Metric metric;
    std::vector<DefectNode> nodes;

    static int torus_distance(int a, int b, int L) {
        int d = std::abs(a - b) % L;
        return std::min(d, L - d);
    }

    int64_t weight(int i, int j) const {
        const auto &a = nodes[i];
        const auto &b = nodes[j];
        int64_t ds = torus_distance(a.x, b.x, L) + torus_distance(a.y, b.y, L);
        int64_t dt = std::abs(a.round - b.round);
        return metric.w_s * ds + metric.w_t * dt;
    }

    /// Line format: "node <id> <round> <x> <y>" then "edge <u> <v> <w>".
    std::string dump() const {
        std::ostringstream os;
        os << "# sector " << (sector == kPrimal ? "primal" : "dual") << " L " << L << "\n";
        for (size_t i = 0; i < nodes.size(); ++i) {
            os << "node " << i << " " << nodes[i].round << " " << nodes[i].x << " " << nodes[i].y << "\n";
        }
        for (size_t i = 0; i < nodes.size(); ++i) {
            for (size_t j = i + 1; j < nodes.size(); ++j) {
                os << "edge " << i << " " << j << " " << weight(static_cast<int>(i), static_cast<int>(j)) << "\n";
            }
        }
        return os.str();
    }
};

/// Nodes for detector ids r * L * L + c (c = y * L + x), kept in id order.
inline MatchingGraph build_matching_graph(int sector, int L, const std::vector<int> &defects, Metric metric = {}) {
    MatchingGraph g;
    g.L = L;
    g.sector = sector;
    g.metric = metric;
    const int n = L * L;
    g.nodes.reserve(defects.size());
    for (int d : defects) {
        int c = d % n;
        g.nodes.push_back({d / n, c % L, c / L});
    }
    return g;
}

/// Exact minimum-weight perfect matching of the graph's nodes.
inline std::vector<int> match(const MatchingGraph &g) {
    const int n = static_cast<int>(g.nodes.size());
    if (n % 2) throw std::invalid_argument("odd number of defects in a sector");
    if (g.metric.radius > 0 && n > 0) {
        std::vector<WeightedEdge> edges;
        int64_t wmax = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                int64_t w = g.weight(i, j);
                if (w <= g.metric.radius) {
                    edges.push_back({i, j, w});
                    wmax = std::max(wmax, w);
                }
            }
        }
        for (auto &e : edges) e.w = wmax + 1 - e.w;
        auto mate = max_weight_matching(n, edges, true);
        bool perfect = true;
        for (int v : mate) perfect &= v >= 0;
        if (perfect) return mate;
    }
    return min_weight_perfect_matching(n, [&](int i, int j) { return g.weight(i, j); });
}

/// Brute-force minimum perfect matching weight (oracle for small graphs).
inline int64_t brute_force_matching_weight(int n, const std::function<int64_t(int, int)> &w) {
    if (n % 2) throw std::invalid_argument("odd node count");
    std::vector<bool> used(n, false);
    int64_t best = std::numeric_limits<int64_t>::max();
    std::function<void(int64_t)> rec = [&](int64_t acc) {
        if (acc >= best) return;
        int i = 0;
        while (i < n && used[i]) ++i;
        if (i == n) {
            best = acc;
            return;
        }
        used[i] = true;
        for (int j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            used[j] = true;
            rec(acc + w(i, j));
            used[j] = false;
        }
        used[i] = false;
    };
    rec(0);
    return best;
}

struct SectorCorrection {
    std::vector<std::pair<int, int>> pairs;  ///< matched node indices
    int64_t weight = 0;
    std::vector<int> qubits;  ///< code qubits toggled by the spatial projection, ascending
    uint8_t logical = 0;      ///< witness-loop parities of the correction (2 bits)
};

namespace detail {

/// Signed shortest step count from a to b on a cycle of length L; ties go in
/// the positive direction.
inline int torus_delta(int a, int b, int L) {
    int d = ((b - a) % L + L) % L;
    return 2 * d <= L ? d : d - L;
}

}  // namespace detail

/// Code qubits crossed by the canonical path between two check positions.
inline void path_qubits(const Plane &pl, int sector, DefectNode a, const DefectNode &b, std::vector<uint8_t> &toggled) {
    const int L = pl.L;
    int dx = detail::torus_delta(a.x, b.x, L);
    int dy = detail::torus_delta(a.y, b.y, L);
    int sx = dx >= 0 ? 1 : -1, sy = dy >= 0 ? 1 : -1;
    for (int k = 0; k < std::abs(dx); ++k) {
        // Between check columns x and x + 1.
        int lo = sx > 0 ? a.x : a.x - 1;
        int q = sector == kPrimal ? pl.qubit(2 * lo + 2, 2 * a.y + 1) : pl.qubit(2 * lo + 1, 2 * a.y);
        toggled[q] ^= 1;
        a.x = ((a.x + sx) % L + L) % L;
    }
    for (int k = 0; k < std::abs(dy); ++k) {
        int lo = sy > 0 ? a.y : a.y - 1;
        int q = sector == kPrimal ? pl.qubit(2 * a.x + 1, 2 * lo + 2) : pl.qubit(2 * a.x, 2 * lo + 1);
        toggled[q] ^= 1;
        a.y = ((a.y + sy) % L + L) % L;
    }
}

inline SectorCorrection decode_sector(const MatchingGraph &g) {
    SectorCorrection out;
    auto mate = match(g);
    Plane pl{g.L};
    std::vector<uint8_t> toggled(pl.num_qubits(), 0);
    for (int i = 0; i < static_cast<int>(mate.size()); ++i) {
        int j = mate[i];
        if (i < j) {
            out.pairs.push_back({i, j});
            out.weight += g.weight(i, j);
            path_qubits(pl, g.sector, g.nodes[i], g.nodes[j], toggled);
        }
    }
    for (int q = 0; q < pl.num_qubits(); ++q) {
        if (toggled[q]) {
            out.qubits.push_back(q);
            out.logical ^= loop_bits(pl, g.sector, q);
        }
    }
    return out;
}

struct DecodeResult {
    std::array<SectorCorrection, 2> sectors;

    /// Witness mask of the correction, laid out like frame masks.
    uint8_t logical() const {
        return static_cast<uint8_t>(sectors[0].logical | (sectors[1].logical << 2));
    }
};

inline DecodeResult decode(int L, const std::array<std::vector<int>, 2> &defects, Metric metric = {}) {
    DecodeResult r;
    for (int s : {kPrimal, kDual}) r.sectors[s] = decode_sector(build_matching_graph(s, L, defects[s], metric));
    return r;
}

/// Per-sector failure flags of a decoded trial.
struct TrialOutcome {
    bool primal_failed = false;
    bool dual_failed = false;

    bool failed() const {
        return primal_failed || dual_failed;
    }
};

inline TrialOutcome classify(uint8_t residual_mask) {
    return {(residual_mask & 3) != 0, (residual_mask & 12) != 0};
}

inline TrialOutcome decode_and_classify(const TrialSample &s, int L, Metric metric = {}) {
    auto r = decode(L, s.defects, metric);
    return classify(s.logical ^ r.logical());
}

/// Residual of a reference-path trial after applying a correction: Z parts
/// from sector 0, X parts from sector 1.
inline PauliOperator<int> corrected_residual(const PauliOperator<int> &frame_residual, const DecodeResult &r) {
    PauliOperator<int> corr;
    for (int q : r.sectors[kPrimal].qubits) corr = corr * PauliOperator<int>::Z(q);
    for (int q : r.sectors[kDual].qubits) corr = corr * PauliOperator<int>::X(q);
    return frame_residual * corr;
}

/// Homology class of a residual on the code qubits: a 4-bit witness mask
/// (bits 0-1 sector 0, bits 2-3 sector 1); zero means trivial. Throws if the
/// residual has a nonzero syndrome, since only cycles have a class.
inline uint8_t homology_class(const PauliOperator<int> &residual, int L) {
    Plane pl{L};
    std::vector<uint8_t> x(pl.num_qubits(), 0), z(pl.num_qubits(), 0);
    for (int q : residual.x_support()) {
        if (q < 0 || q >= pl.num_qubits() || pl.role(q) != Role::Code) {
            throw std::invalid_argument("residual acts on a non-code qubit");
        }
        x[q] = 1;
    }
    for (int q : residual.z_support()) {
        if (q < 0 || q >= pl.num_qubits() || pl.role(q) != Role::Code) {
            throw std::invalid_argument("residual acts on a non-code qubit");
        }
        z[q] = 1;
    }
    SyndromeHistory h(L, 0);
    perfect_readout(pl, x, z, h, 0);
    for (int s : {kPrimal, kDual}) {
        for (auto v : h.outcomes[s]) {
            if (v) throw std::invalid_argument("residual is not a cycle (nonzero syndrome)");
        }
    }
    return frame_logical_mask(pl, x, z);
}

}  // namespace ftq2d
