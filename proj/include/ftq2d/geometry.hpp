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

// Defect layouts on the 3D cluster lattice and the 2D codes on their slices.
//
// Every qubit cell (primal edge or primal face) carries a region label:
// V_p / V_d (vacuum, measured in X), D_p / D_d (defects, measured in Z),
// S (unmeasured injection qubits), I / O (in-plane edges of the first and
// last time slice, the code qubits of the input and output).
//
// Slice codes use electric holes (sets of sites whose stars are not
// enforced) and magnetic holes (sets of plaquettes whose face checks are not
// enforced). Plane cells are written with z = 0 and translated to the slice.

#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chain_complex.hpp"
#include "gf2.hpp"
#include "pauli.hpp"

namespace ftq2d {

enum class Region : uint8_t { Vp, Vd, Dp, Dd, S, I, O };

inline const char *region_name(Region r) {
    static const char *names[] = {"V_p", "V_d", "D_p", "D_d", "S", "I", "O"};
    return names[static_cast<int>(r)];
}

inline Region region_from_name(const std::string &s) {
    for (int k = 0; k < 7; ++k) {
        if (s == region_name(static_cast<Region>(k))) return static_cast<Region>(k);
    }
    throw std::invalid_argument("unknown region '" + s + "'");
}

inline bool is_measured(Region r) {
    return r == Region::Vp || r == Region::Vd || r == Region::Dp || r == Region::Dd;
}

enum class HoleKind : uint8_t { Electric, Magnetic };

/// Two holes encoding one qubit. Electric holes hold sites, magnetic holes
/// hold in-plane faces, both as plane cells (z = 0).
struct HolePair {
    HoleKind kind = HoleKind::Electric;
    std::array<std::set<Cell>, 2> holes;
};

/// Logical representatives of a hole pair plus the chains they live on.
struct EncodedLogicals {
    CellPauli X;
    CellPauli Z;
    std::set<Cell> x_support;
    std::set<Cell> z_support;
};

/// The plane lattice underlying a slice of a 3D lattice.
inline Lattice slice_plane(const Lattice &lat) {
    return Lattice{{lat.extent[0], lat.extent[1], 0}, {lat.periodic[0], lat.periodic[1], false}};
}

inline Cell translate_z(const Cell &c, int z) {
    Cell r = c;
    r.c[2] += z;
    return r;
}

inline CellPauli translate_z(const CellPauli &p, int z) {
    std::set<Cell> x, zs;
    for (const auto &c : p.x_support()) x.insert(translate_z(c, z));
    for (const auto &c : p.z_support()) zs.insert(translate_z(c, z));
    return CellPauli(p.phase(), std::move(x), std::move(zs));
}

namespace detail {

/// Sites at the two ends of a primal edge.
inline std::array<Cell, 2> edge_ends(const Lattice &lat, const Cell &e) {
    std::array<Cell, 2> out;
    int k = 0;
    for_each_facet(lat, e, [&](const Cell &s) { out[k++] = s; });
    if (k != 2) throw std::logic_error("edge without two ends");
    return out;
}

inline std::vector<Cell> faces_of_edge(const Lattice &lat, const Cell &e) {
    std::vector<Cell> out;
    for_each_coface(lat, e, [&](const Cell &f) { out.push_back(f); });
    return out;
}

}  // namespace detail

/// Edges of the plane that carry code qubits: edges inside a hole (both
/// ends in one electric hole, or both faces in one magnetic hole) are not.
inline std::set<Cell> code_qubits(const Lattice &plane, const std::vector<HolePair> &pairs) {
    std::set<Cell> out;
    for (const auto &e : all_cells(plane, Complex::Primal, 1)) {
        bool interior = false;
        for (const auto &p : pairs) {
            for (const auto &h : p.holes) {
                if (p.kind == HoleKind::Electric) {
                    auto ends = detail::edge_ends(plane, e);
                    interior |= h.count(ends[0]) && h.count(ends[1]);
                } else {
                    auto fs = detail::faces_of_edge(plane, e);
                    interior |= fs.size() == 2 && h.count(fs[0]) && h.count(fs[1]);
                }
            }
        }
        if (!interior) out.insert(e);
    }
    return out;
}

struct CodeChecks {
    std::vector<CellPauli> stars;
    std::vector<CellPauli> plaquettes;
    /// Product of the unenforced checks of both holes of each pair.
    std::vector<CellPauli> pair_products;

    std::vector<CellPauli> all() const {
        std::vector<CellPauli> out = stars;
        out.insert(out.end(), plaquettes.begin(), plaquettes.end());
        out.insert(out.end(), pair_products.begin(), pair_products.end());
        return out;
    }
};

namespace detail {

inline CellPauli star(const Lattice &plane, const Cell &site, const std::set<Cell> &qubits) {
    std::set<Cell> x;
    for_each_coface(plane, site, [&](const Cell &e) {
        if (qubits.count(e)) x.insert(e);
    });
    return CellPauli(0, std::move(x), {});
}

inline CellPauli plaquette(const Lattice &plane, const Cell &face, const std::set<Cell> &qubits) {
    std::set<Cell> z;
    for_each_facet(plane, face, [&](const Cell &e) {
        if (qubits.count(e)) z.insert(e);
    });
    return CellPauli(0, {}, std::move(z));
}

inline void check_hole_cells(const Lattice &plane, const HolePair &p) {
    int want = p.kind == HoleKind::Electric ? 0 : 2;
    for (const auto &h : p.holes) {
        if (h.empty()) throw std::invalid_argument("empty hole");
        for (const auto &c : h) {
            if (c.complex != Complex::Primal || c.dimension() != want || c.c[2] != 0 || !valid_cell(plane, c)) {
                throw std::invalid_argument("hole cell " + c.str() + " is not a plane " +
                                            (want == 0 ? "site" : "face"));
            }
        }
    }
}

}  // namespace detail

/// Stabilizer checks of the slice code with the given hole pairs. Throws if
/// holes overlap.
inline CodeChecks surface_code_checks(const Lattice &plane, const std::vector<HolePair> &pairs) {
    if (plane.extent[2] != 0) throw std::invalid_argument("surface_code_checks needs a flat plane lattice");
    std::set<Cell> electric, magnetic;
    for (const auto &p : pairs) {
        detail::check_hole_cells(plane, p);
        auto &used = p.kind == HoleKind::Electric ? electric : magnetic;
        for (const auto &h : p.holes) {
            for (const auto &c : h) {
                if (!used.insert(c).second) throw std::invalid_argument("holes overlap at " + c.str());
            }
        }
    }
    auto qubits = code_qubits(plane, pairs);
    CodeChecks out;
    for (const auto &s : all_cells(plane, Complex::Primal, 0)) {
        if (electric.count(s)) continue;
        auto op = detail::star(plane, s, qubits);
        if (!op.is_identity_up_to_phase()) out.stars.push_back(op);
    }
    for (const auto &f : all_cells(plane, Complex::Primal, 2)) {
        if (magnetic.count(f)) continue;
        auto op = detail::plaquette(plane, f, qubits);
        if (!op.is_identity_up_to_phase()) out.plaquettes.push_back(op);
    }
    for (const auto &p : pairs) {
        CellPauli prod;
        for (const auto &h : p.holes) {
            for (const auto &c : h) {
                prod = prod * (p.kind == HoleKind::Electric ? detail::star(plane, c, qubits)
                                                            : detail::plaquette(plane, c, qubits));
            }
        }
        out.pair_products.push_back(prod);
    }
    return out;
}

/// Shortest edge path between two site sets avoiding `blocked` sites (BFS).
/// Returns the edges of the path; throws if the sets are disconnected.
inline std::set<Cell> shortest_site_path(const Lattice &plane, const std::set<Cell> &from, const std::set<Cell> &to,
                                         const std::set<Cell> &blocked) {
    std::map<Cell, Cell> via;  // site -> edge used to reach it
    std::deque<Cell> queue;
    std::set<Cell> seen;
    for (const auto &s : from) {
        queue.push_back(s);
        seen.insert(s);
    }
    while (!queue.empty()) {
        Cell s = queue.front();
        queue.pop_front();
        if (to.count(s)) {
            std::set<Cell> path;
            while (!from.count(s)) {
                Cell e = via.at(s);
                path.insert(e);
                auto ends = detail::edge_ends(plane, e);
                s = ends[0] == s ? ends[1] : ends[0];
            }
            return path;
        }
        std::vector<Cell> edges;
        for_each_coface(plane, s, [&](const Cell &e) { edges.push_back(e); });
        for (const auto &e : edges) {
            auto ends = detail::edge_ends(plane, e);
            Cell t = ends[0] == s ? ends[1] : ends[0];
            if (seen.count(t) || (blocked.count(t) && !to.count(t))) continue;
            if (from.count(t)) continue;
            seen.insert(t);
            via[t] = e;
            queue.push_back(t);
        }
    }
    throw std::invalid_argument("holes are not connected in the plane");
}

/// Shortest dual path between two face sets: the edges crossed.
inline std::set<Cell> shortest_face_path(const Lattice &plane, const std::set<Cell> &from, const std::set<Cell> &to,
                                         const std::set<Cell> &blocked) {
    std::map<Cell, Cell> via;
    std::deque<Cell> queue;
    std::set<Cell> seen;
    for (const auto &f : from) {
        queue.push_back(f);
        seen.insert(f);
    }
    while (!queue.empty()) {
        Cell f = queue.front();
        queue.pop_front();
        if (to.count(f)) {
            std::set<Cell> path;
            while (!from.count(f)) {
                Cell e = via.at(f);
                path.insert(e);
                auto fs = detail::faces_of_edge(plane, e);
                f = fs[0] == f ? fs[1] : fs[0];
            }
            return path;
        }
        std::vector<Cell> edges;
        for_each_facet(plane, f, [&](const Cell &e) { edges.push_back(e); });
        for (const auto &e : edges) {
            auto fs = detail::faces_of_edge(plane, e);
            if (fs.size() != 2) continue;
            Cell g = fs[0] == f ? fs[1] : fs[0];
            if (seen.count(g) || (blocked.count(g) && !to.count(g)) || from.count(g)) continue;
            seen.insert(g);
            via[g] = e;
            queue.push_back(g);
        }
    }
    throw std::invalid_argument("holes are not connected in the plane");
}

/// Logical operators of one pair. Electric: Z is a shortest path between
/// the holes and X the ring around the first hole. Magnetic: X is a shortest
/// dual path and Z the ring around the first hole. Paths avoid the holes of
/// `others`.
inline EncodedLogicals logical_operators(const Lattice &plane, const HolePair &pair,
                                         const std::vector<HolePair> &others = {}) {
    detail::check_hole_cells(plane, pair);
    std::vector<HolePair> all = others;
    all.push_back(pair);
    auto qubits = code_qubits(plane, all);
    EncodedLogicals out;
    std::set<Cell> blocked;
    for (const auto &o : others) {
        if (o.kind != pair.kind) continue;
        for (const auto &h : o.holes) blocked.insert(h.begin(), h.end());
    }
    CellPauli ring;
    for (const auto &c : pair.holes[0]) {
        ring = ring * (pair.kind == HoleKind::Electric ? detail::star(plane, c, qubits)
                                                       : detail::plaquette(plane, c, qubits));
    }
    if (pair.kind == HoleKind::Electric) {
        out.z_support = shortest_site_path(plane, pair.holes[0], pair.holes[1], blocked);
        out.x_support = ring.x_support();
    } else {
        out.x_support = shortest_face_path(plane, pair.holes[0], pair.holes[1], blocked);
        out.z_support = ring.z_support();
    }
    out.X = CellPauli(0, out.x_support, {});
    out.Z = CellPauli(0, {}, out.z_support);
    return out;
}

/// A defect strand: the cells of its core path and its thickness. Thick
/// strands occupy the box dilation of the core by thickness - 1 sites.
struct Strand {
    Complex type = Complex::Primal;
    std::vector<Cell> path;  ///< primal sites (primal strands) or dual cube centres as dual sites
    int thickness = 1;
};

/// An encoded qubit on the input or output slice.
struct SliceQubit {
    std::string name;
    Region slice = Region::I;
    HolePair pair;
};

/// An unmeasured qubit of the S region acting as a bare logical qubit.
struct BareQubit {
    std::string name;
    Cell cell;
};

/// Failure witnesses of a memory block: a logical string on the z = 0 slice.
struct Witness {
    std::string name;
    char type = 'Z';
    std::set<Cell> support;
};

struct DefectLayout {
    std::string name;
    Lattice lattice = Lattice::block(1, 1, 1);
    std::map<Cell, Region> regions;
    std::vector<Strand> strands;
    std::vector<SliceQubit> qubits;
    std::vector<BareQubit> bare;
    std::vector<Witness> witnesses;

    Region region(const Cell &c) const {
        auto it = regions.find(c);
        if (it == regions.end()) throw std::out_of_range("no qubit at " + c.str());
        return it->second;
    }

    std::vector<Cell> cells_in(Region r) const {
        std::vector<Cell> out;
        for (const auto &[c, g] : regions) {
            if (g == r) out.push_back(c);
        }
        return out;
    }

    int z_top() const {
        return lattice.periodic[2] ? -1 : lattice.period(2);
    }

    int slice_z(Region r) const {
        return r == Region::O ? z_top() : 0;
    }

    std::vector<HolePair> pairs_on(Region slice) const {
        std::vector<HolePair> out;
        for (const auto &q : qubits) {
            if (q.slice == slice) out.push_back(q.pair);
        }
        return out;
    }

    const SliceQubit &qubit(const std::string &name, Region slice) const {
        for (const auto &q : qubits) {
            if (q.name == name && q.slice == slice) return q;
        }
        throw std::out_of_range("no qubit '" + name + "' on slice " + region_name(slice));
    }

    /// Logical representatives of a slice qubit, placed on its slice.
    std::pair<CellPauli, CellPauli> logicals(const std::string &name, Region slice) const {
        const auto &q = qubit(name, slice);
        std::vector<HolePair> others;
        for (const auto &o : qubits) {
            if (o.slice == slice && o.name != name) others.push_back(o.pair);
        }
        auto lg = logical_operators(slice_plane(lattice), q.pair, others);
        int z = slice_z(slice);
        return {translate_z(lg.X, z), translate_z(lg.Z, z)};
    }

    /// Code checks of a slice, placed on the slice.
    std::vector<CellPauli> slice_checks(Region slice) const {
        auto checks = surface_code_checks(slice_plane(lattice), pairs_on(slice)).all();
        for (auto &c : checks) c = translate_z(c, slice_z(slice));
        return checks;
    }

    void validate() const {
        lattice.validate();
        size_t qubit_cells = 0;
        for (int d : {1, 2}) {
            for (const auto &c : all_cells(lattice, Complex::Primal, d)) {
                ++qubit_cells;
                if (!regions.count(c)) throw std::invalid_argument("qubit " + c.str() + " has no region");
            }
        }
        if (regions.size() != qubit_cells) throw std::invalid_argument("region map holds non-qubit cells");
        for (const auto &[c, r] : regions) {
            int d = c.dimension();
            bool ok = true;
            switch (r) {
                case Region::Vp:
                case Region::Dd:
                    ok = d == 2;
                    break;
                case Region::Vd:
                case Region::Dp:
                    ok = d == 1;
                    break;
                case Region::S:
                    ok = true;
                    break;
                case Region::I:
                case Region::O:
                    ok = d == 1 && !c.extends_along(2) && !lattice.periodic[2] && c.c[2] == slice_z(r);
                    break;
            }
            if (!ok) throw std::invalid_argument(std::string("cell ") + c.str() + " cannot be in " + region_name(r));
        }
        for (const auto &q : qubits) {
            if (q.slice != Region::I && q.slice != Region::O) throw std::invalid_argument("slice qubit off I/O");
            detail::check_hole_cells(slice_plane(lattice), q.pair);
        }
        for (Region s : {Region::I, Region::O}) {
            auto pairs = pairs_on(s);
            if (pairs.empty()) continue;
            auto qs = code_qubits(slice_plane(lattice), pairs);
            int z = slice_z(s);
            for (const auto &e : qs) {
                if (region(translate_z(e, z)) != s) {
                    throw std::invalid_argument("code qubit " + translate_z(e, z).str() + " not in slice region");
                }
            }
        }
        for (const auto &b : bare) {
            if (region(b.cell) != Region::S) throw std::invalid_argument("bare qubit outside S");
        }
    }
};

/// Cells occupied by a strand: primal edges (primal strands) or primal faces
/// (dual strands) between neighbouring points of the dilated path.
inline std::set<Cell> strand_cells(const Lattice &lat, const Strand &s) {
    if (s.thickness < 1) throw std::invalid_argument("strand thickness must be positive");
    std::set<std::array<int, 3>> pts;
    for (const auto &p : s.path) {
        for (int dx = 0; dx < s.thickness; ++dx) {
            for (int dy = 0; dy < s.thickness; ++dy) {
                for (int dz = 0; dz < s.thickness; ++dz) {
                    std::array<int, 3> q{p.c[0] + 2 * dx, p.c[1] + 2 * dy, p.c[2] + 2 * dz};
                    bool ok = true;
                    for (int a = 0; a < 3; ++a) {
                        if (s.type == Complex::Primal) {
                            ok &= lat.in_range(Complex::Primal, a, q[a]);
                        } else {
                            ok &= lat.in_range(Complex::Primal, a, q[a] - 1) && lat.in_range(Complex::Primal, a, q[a] + 1);
                        }
                        q[a] = lat.wrap(a, q[a]);
                    }
                    if (ok) pts.insert(q);
                }
            }
        }
    }
    std::set<Cell> out;
    for (const auto &q : pts) {
        for (int a = 0; a < 3; ++a) {
            auto n = q;
            n[a] = lat.wrap(a, n[a] + 2);
            if (!pts.count(n)) continue;
            auto mid = q;
            mid[a] = lat.wrap(a, mid[a] + 1);
            Cell c{Complex::Primal, mid};
            if (valid_cell(lat, c)) out.insert(c);
        }
    }
    return out;
}

namespace detail {

/// Points on straight axis-aligned runs between consecutive waypoints (step 2).
inline std::vector<Cell> trace(Complex cx, const std::vector<std::array<int, 3>> &waypoints) {
    std::vector<Cell> out;
    for (size_t k = 0; k < waypoints.size(); ++k) {
        auto p = waypoints[k];
        if (k == 0) {
            out.push_back(Cell{cx, p});
            continue;
        }
        auto q = waypoints[k - 1];
        int axis = -1;
        for (int a = 0; a < 3; ++a) {
            if (p[a] != q[a]) {
                if (axis >= 0) throw std::invalid_argument("waypoints must differ along one axis");
                axis = a;
            }
        }
        if (axis < 0) continue;
        int step = p[axis] > q[axis] ? 2 : -2;
        while (q != p) {
            q[axis] += step;
            out.push_back(Cell{cx, q});
        }
    }
    return out;
}

inline DefectLayout empty_block(std::string name, int lx, int ly, int lz) {
    DefectLayout l;
    l.name = std::move(name);
    l.lattice = Lattice::block(lx, ly, lz);
    for (const auto &c : all_cells(l.lattice, Complex::Primal, 1)) l.regions[c] = Region::Vd;
    for (const auto &c : all_cells(l.lattice, Complex::Primal, 2)) l.regions[c] = Region::Vp;
    return l;
}

inline void mark_slice(DefectLayout &l, Region slice) {
    int z = l.slice_z(slice);
    for (const auto &c : all_cells(l.lattice, Complex::Primal, 1)) {
        if (!c.extends_along(2) && c.c[2] == z) l.regions[c] = slice;
    }
}

inline void add_strand(DefectLayout &l, Strand s) {
    Region r = s.type == Complex::Primal ? Region::Dp : Region::Dd;
    for (const auto &c : strand_cells(l.lattice, s)) l.regions[c] = r;
    l.strands.push_back(std::move(s));
}

/// Electric hole: the sites of a thickness x thickness square at (x, y).
inline std::set<Cell> site_hole(int x, int y, int thickness) {
    std::set<Cell> h;
    for (int i = 0; i < thickness; ++i) {
        for (int j = 0; j < thickness; ++j) h.insert(Cell{Complex::Primal, {x + 2 * i, y + 2 * j, 0}});
    }
    return h;
}

inline void add_electric_qubit(DefectLayout &l, const std::string &name, Region slice, int xa, int xb, int y,
                               int thickness) {
    HolePair p;
    p.kind = HoleKind::Electric;
    p.holes = {site_hole(xa, y, thickness), site_hole(xb, y, thickness)};
    l.qubits.push_back({name, slice, p});
}

}  // namespace detail

/// Periodic memory block: L x L x T torus, all vacuum, with the four
/// witness strings on the z = 0 slice.
inline DefectLayout build_memory_block(int L, int T) {
    if (L < 1 || T < 1) throw std::invalid_argument("memory block needs positive extents");
    DefectLayout l;
    l.name = "memory";
    l.lattice = Lattice::torus(L, L, T);
    for (const auto &c : all_cells(l.lattice, Complex::Primal, 1)) l.regions[c] = Region::Vd;
    for (const auto &c : all_cells(l.lattice, Complex::Primal, 2)) l.regions[c] = Region::Vp;
    Witness zx{"primal-x", 'Z', {}}, zy{"primal-y", 'Z', {}}, xx{"dual-x", 'X', {}}, xy{"dual-y", 'X', {}};
    for (int i = 0; i < L; ++i) {
        zx.support.insert(Cell{Complex::Primal, {2 * i + 1, 0, 0}});
        zy.support.insert(Cell{Complex::Primal, {0, 2 * i + 1, 0}});
        xx.support.insert(Cell{Complex::Primal, {2 * i, 1, 0}});
        xy.support.insert(Cell{Complex::Primal, {1, 2 * i, 0}});
    }
    l.witnesses = {zx, zy, xx, xy};
    return l;
}

/// One electric pair carried straight from input to output.
inline DefectLayout build_identity_layout(int spacing, int length, int thickness = 1) {
    if (spacing < 2 * thickness || length < 1) throw std::invalid_argument("identity layout needs spacing >= 2d");
    const int m = std::max(0, thickness - 1) + 1;
    int lx = 2 * m + spacing + thickness - 1, ly = 2 * m + thickness - 1;
    auto l = detail::empty_block("identity", lx, ly, length);
    detail::mark_slice(l, Region::I);
    detail::mark_slice(l, Region::O);
    int xa = 2 * m, xb = 2 * (m + spacing), y = 2 * m;
    for (int x : {xa, xb}) {
        detail::add_strand(l, {Complex::Primal, detail::trace(Complex::Primal, {{x, y, 0}, {x, y, 2 * length}}), thickness});
    }
    detail::add_electric_qubit(l, "q", Region::I, xa, xb, y, thickness);
    detail::add_electric_qubit(l, "q", Region::O, xa, xb, y, thickness);
    return l;
}

/// Smallest identity block: a 2 x 1 x 1 block with the pair on two corners.
inline DefectLayout build_minimal_identity_layout() {
    auto l = detail::empty_block("identity-minimal", 2, 1, 1);
    detail::mark_slice(l, Region::I);
    detail::mark_slice(l, Region::O);
    for (int x : {0, 4}) {
        detail::add_strand(l, {Complex::Primal, detail::trace(Complex::Primal, {{x, 0, 0}, {x, 0, 2}}), 1});
    }
    detail::add_electric_qubit(l, "q", Region::I, 0, 4, 0, 1);
    detail::add_electric_qubit(l, "q", Region::O, 0, 4, 0, 1);
    return l;
}

enum class PrepBasis : uint8_t { Z, X };

/// Preparation of an electric pair in |0> (strands joined below, a U) or
/// |+> (strands with free lower ends).
inline DefectLayout build_prep_layout(PrepBasis basis, int spacing, int length) {
    if (spacing < 2 || length < 2) throw std::invalid_argument("prep layout needs spacing >= 2 and length >= 2");
    const int m = 2;
    auto l = detail::empty_block(basis == PrepBasis::Z ? "prep_z" : "prep_x", 2 * m + spacing, 2 * m, length);
    detail::mark_slice(l, Region::O);
    int xa = 2 * m, xb = 2 * (m + spacing), y = 2 * m, zs = 2;
    if (basis == PrepBasis::Z) {
        detail::add_strand(l, {Complex::Primal,
                               detail::trace(Complex::Primal, {{xa, y, 2 * length}, {xa, y, zs}, {xb, y, zs}, {xb, y, 2 * length}}),
                               1});
    } else {
        for (int x : {xa, xb}) {
            detail::add_strand(l, {Complex::Primal, detail::trace(Complex::Primal, {{x, y, zs}, {x, y, 2 * length}}), 1});
        }
    }
    detail::add_electric_qubit(l, "q", Region::O, xa, xb, y, 1);
    return l;
}

/// Injection: a U whose bottom has one unmeasured edge S in its middle.
inline DefectLayout build_injection_layout(int spacing, int length) {
    if (spacing < 2 || length < 2) throw std::invalid_argument("injection layout needs spacing >= 2 and length >= 2");
    auto l = build_prep_layout(PrepBasis::Z, spacing, length);
    l.name = "injection";
    const int m = 2;
    int xs = 2 * (m + spacing / 2) - 1, y = 2 * m, zs = 2;
    Cell s{Complex::Primal, {xs, y, zs}};
    l.regions[s] = Region::S;
    l.bare.push_back({"S", s});
    return l;
}

/// Site positions (in site units) of the braided CNOT. Control strands C2
/// and C1 are joined by a bridge at mid-time; the target strands are T1 and
/// T2. A dual loop passes through the control loop below the bridge, the
/// control loop above it, the target loop, and once outside all of them.
struct CnotGeometry {
    int spacing = 0;
    int thickness = 1;
    int c2 = 0, c1 = 0, t1 = 0, t2 = 0, y = 0, z_bridge = 0;
    int lx = 0, ly = 0, lz = 0;
};

inline CnotGeometry cnot_geometry(int spacing, int thickness) {
    if (thickness < 1) throw std::invalid_argument("defect thickness must be positive");
    if (spacing < 2 * thickness) throw std::invalid_argument("defect spacing must be at least twice the thickness");
    CnotGeometry g;
    g.spacing = spacing;
    g.thickness = thickness;
    int pitch = spacing + thickness - 1;
    g.c2 = pitch;
    g.c1 = 2 * pitch;
    g.t1 = 3 * pitch;
    g.t2 = 4 * pitch;
    g.y = pitch;
    g.z_bridge = pitch;
    g.lx = 5 * pitch + thickness - 1;
    g.ly = 2 * pitch + thickness - 1;
    g.lz = 2 * pitch + thickness - 1;
    return g;
}

inline DefectLayout build_cnot_layout(int spacing, int thickness = 1) {
    auto g = cnot_geometry(spacing, thickness);
    auto l = detail::empty_block("cnot", g.lx, g.ly, g.lz);
    detail::mark_slice(l, Region::I);
    detail::mark_slice(l, Region::O);
    const int d = thickness;
    const int top = 2 * g.lz, y = 2 * g.y;
    for (int x : {g.c2, g.c1, g.t1, g.t2}) {
        detail::add_strand(l, {Complex::Primal, detail::trace(Complex::Primal, {{2 * x, y, 0}, {2 * x, y, top}}), d});
    }
    detail::add_strand(
        l, {Complex::Primal, detail::trace(Complex::Primal, {{2 * g.c2, y, 2 * g.z_bridge}, {2 * g.c1, y, 2 * g.z_bridge}}), d});
    // Dual loop through cube centres (odd doubled coordinates).
    auto mid = [&](int a, int b) { return 2 * ((a + d - 1 + b) / 2) + 1; };
    const int h = 2 * ((g.spacing) / 2) + 1;
    const int x1 = mid(g.c2, g.c1), x3 = mid(g.t1, g.t2), x4 = mid(g.c1, g.t1);
    const int yf = y + h, yb = y - h, z1 = 2 * g.z_bridge - h, z2 = 2 * g.z_bridge + h;
    std::vector<std::array<int, 3>> loop = {{x1, yb, z1}, {x1, yf, z1}, {x1, yf, z2}, {x1, yb, z2}, {x3, yb, z2},
                                            {x3, yf, z2}, {x3, yf, z1}, {x4, yf, z1}, {x4, yb, z1}, {x1, yb, z1}};
    detail::add_strand(l, {Complex::Dual, detail::trace(Complex::Dual, loop), d});
    for (Region s : {Region::I, Region::O}) {
        detail::add_electric_qubit(l, "c", s, 2 * g.c1, 2 * g.c2, y, d);
        detail::add_electric_qubit(l, "t", s, 2 * g.t1, 2 * g.t2, y, d);
    }
    return l;
}

/// Primal 1-cycle around the rectangle with corners (xa, z_lo) and (xb, z_hi)
/// in the plane at height y (doubled coordinates).
inline Chain primal_rectangle(const Lattice &lat, int xa, int xb, int y, int z_lo, int z_hi) {
    Chain c(lat, Complex::Primal, 1);
    std::vector<std::array<int, 3>> w = {{xa, y, z_lo}, {xa, y, z_hi}, {xb, y, z_hi}, {xb, y, z_lo}, {xa, y, z_lo}};
    auto pts = detail::trace(Complex::Primal, w);
    for (size_t k = 1; k < pts.size(); ++k) {
        std::array<int, 3> m;
        for (int a = 0; a < 3; ++a) m[a] = (pts[k - 1].c[a] + pts[k].c[a]) / 2;
        c.toggle(Cell{Complex::Primal, m});
    }
    return c;
}

/// Dual 1-chain of a closed dual strand core, as primal faces it pierces.
inline Chain dual_loop_faces(const Lattice &lat, const Strand &s) {
    if (s.type != Complex::Dual) throw std::invalid_argument("not a dual strand");
    Chain c(lat, Complex::Primal, 2);
    for (size_t k = 0; k < s.path.size(); ++k) {
        const auto &a = s.path[k];
        const auto &b = s.path[(k + 1) % s.path.size()];
        if (a == b) continue;
        std::array<int, 3> m;
        int diff = 0;
        for (int ax = 0; ax < 3; ++ax) {
            m[ax] = (a.c[ax] + b.c[ax]) / 2;
            diff += std::abs(a.c[ax] - b.c[ax]);
        }
        if (diff != 2) throw std::invalid_argument("dual strand is not a closed loop of unit steps");
        c.toggle(Cell{Complex::Primal, m});
    }
    return c;
}

/// Some primal 2-chain whose boundary is the given primal 1-cycle.
inline std::optional<Chain> bounding_surface(const Chain &cycle) {
    const Lattice &lat = cycle.lattice();
    auto edges = all_cells(lat, Complex::Primal, 1);
    std::map<Cell, size_t> index;
    for (size_t i = 0; i < edges.size(); ++i) index[edges[i]] = i;
    auto faces = all_cells(lat, Complex::Primal, 2);
    if (faces.size() > gf2::RowSpace::kMaxTrack) throw std::invalid_argument("lattice too large for bounding_surface");
    gf2::RowSpace rs(edges.size());
    for (const auto &f : faces) {
        gf2::BitVec v(edges.size());
        for_each_facet(lat, f, [&](const Cell &e) { v.flip(index.at(e)); });
        rs.insert(std::move(v));
    }
    gf2::BitVec t(edges.size());
    for (const auto &e : cycle.cells()) t.flip(index.at(e));
    auto combo = rs.express(t);
    if (!combo) return std::nullopt;
    Chain out(lat, Complex::Primal, 2);
    for (size_t i : *combo) out.toggle(faces[i]);
    return out;
}

/// Linking number mod 2 of a closed dual strand with a primal 1-cycle in an
/// open block: the parity of crossings of the dual loop with a surface
/// bounded by the primal cycle.
inline int linking_parity(const Strand &dual_loop, const Chain &primal_cycle) {
    auto sigma = bounding_surface(primal_cycle);
    if (!sigma) throw std::invalid_argument("primal chain is not a boundary");
    auto pierced = dual_loop_faces(primal_cycle.lattice(), dual_loop);
    return pairing(pierced, *sigma) ? 1 : 0;
}

// JSON form of a layout: lattice, every non-vacuum region as a cell list
// (vacuum is implied by dimension), strands, slice qubits, bare qubits.

inline nlohmann::json cell_list_to_json(const std::set<Cell> &cells) {
    auto a = nlohmann::json::array();
    for (const auto &c : cells) a.push_back(c.c);
    return a;
}

inline std::set<Cell> cell_list_from_json(const nlohmann::json &j, Complex cx = Complex::Primal) {
    std::set<Cell> out;
    for (const auto &e : j) out.insert(Cell{cx, e.get<std::array<int, 3>>()});
    return out;
}

inline nlohmann::json layout_to_json(const DefectLayout &l) {
    nlohmann::json j;
    j["name"] = l.name;
    j["lattice"] = lattice_to_json(l.lattice);
    nlohmann::json regions = nlohmann::json::object();
    for (Region r : {Region::Dp, Region::Dd, Region::S, Region::I, Region::O}) {
        auto cells = l.cells_in(r);
        regions[region_name(r)] = cell_list_to_json({cells.begin(), cells.end()});
    }
    j["regions"] = regions;
    j["strands"] = nlohmann::json::array();
    for (const auto &s : l.strands) {
        j["strands"].push_back({{"type", s.type == Complex::Primal ? "primal" : "dual"},
                                {"path", cell_list_to_json({s.path.begin(), s.path.end()})},
                                {"ordered_path", [&] {
                                     auto a = nlohmann::json::array();
                                     for (const auto &c : s.path) a.push_back(c.c);
                                     return a;
                                 }()},
                                {"thickness", s.thickness}});
    }
    j["qubits"] = nlohmann::json::array();
    for (const auto &q : l.qubits) {
        j["qubits"].push_back({{"name", q.name},
                               {"slice", region_name(q.slice)},
                               {"kind", q.pair.kind == HoleKind::Electric ? "electric" : "magnetic"},
                               {"holes", {cell_list_to_json(q.pair.holes[0]), cell_list_to_json(q.pair.holes[1])}}});
    }
    j["bare"] = nlohmann::json::array();
    for (const auto &b : l.bare) j["bare"].push_back({{"name", b.name}, {"cell", b.cell.c}});
    j["witnesses"] = nlohmann::json::array();
    for (const auto &w : l.witnesses) {
        j["witnesses"].push_back({{"name", w.name}, {"type", std::string(1, w.type)}, {"support", cell_list_to_json(w.support)}});
    }
    return j;
}

inline DefectLayout layout_from_json(const nlohmann::json &j) {
    DefectLayout l;
    l.name = j.value("name", "");
    l.lattice = lattice_from_json(j.at("lattice"));
    for (const auto &c : all_cells(l.lattice, Complex::Primal, 1)) l.regions[c] = Region::Vd;
    for (const auto &c : all_cells(l.lattice, Complex::Primal, 2)) l.regions[c] = Region::Vp;
    for (const auto &[name, cells] : j.at("regions").items()) {
        Region r = region_from_name(name);
        for (const auto &c : cell_list_from_json(cells)) {
            if (!l.regions.count(c)) throw std::invalid_argument("region cell " + c.str() + " is not a qubit");
            l.regions[c] = r;
        }
    }
    for (const auto &s : j.value("strands", nlohmann::json::array())) {
        Strand st;
        st.type = s.at("type").get<std::string>() == "dual" ? Complex::Dual : Complex::Primal;
        for (const auto &c : s.at("ordered_path")) st.path.push_back(Cell{st.type, c.get<std::array<int, 3>>()});
        st.thickness = s.value("thickness", 1);
        l.strands.push_back(std::move(st));
    }
    for (const auto &q : j.value("qubits", nlohmann::json::array())) {
        SliceQubit sq;
        sq.name = q.at("name").get<std::string>();
        sq.slice = region_from_name(q.at("slice").get<std::string>());
        sq.pair.kind = q.at("kind").get<std::string>() == "magnetic" ? HoleKind::Magnetic : HoleKind::Electric;
        sq.pair.holes = {cell_list_from_json(q.at("holes").at(0)), cell_list_from_json(q.at("holes").at(1))};
        l.qubits.push_back(std::move(sq));
    }
    for (const auto &b : j.value("bare", nlohmann::json::array())) {
        l.bare.push_back({b.at("name").get<std::string>(), Cell{Complex::Primal, b.at("cell").get<std::array<int, 3>>()}});
    }
    for (const auto &w : j.value("witnesses", nlohmann::json::array())) {
        l.witnesses.push_back({w.at("name").get<std::string>(), w.at("type").get<std::string>().at(0),
                               cell_list_from_json(w.at("support"))});
    }
    l.validate();
    return l;
}

}  // namespace ftq2d
