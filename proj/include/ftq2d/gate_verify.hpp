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

// Gate certification by correlation surfaces.
//
// A correlation surface is a primal 2-chain c2 and a dual 2-chain d2. Its
// cluster stabilizer K = X(c2) Z(dc2) X(d2) Z(dd2) is compatible with the
// layout when it commutes with X on every vacuum qubit and Z on every defect
// qubit. Measuring all of those with +1 outcomes then leaves K restricted to
// the unmeasured qubits (I, O, S) as a stabilizer of the output. Comparing
// that operator with the claimed logical action, modulo the slice code
// stabilizers, certifies one line of the gate's Clifford map.
//
// The compatibility conditions split by complex: c2 may not use defect faces
// and its boundary may not touch vacuum edges; d2 may not use defect edges
// and its boundary may not touch vacuum faces.

#pragma once

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chain_complex.hpp"
#include "geometry.hpp"
#include "gf2.hpp"
#include "pauli.hpp"

namespace ftq2d {

struct CorrelationSurface {
    std::string name;
    std::set<Cell> primal;  ///< primal faces
    std::set<Cell> dual;    ///< dual faces (dual coordinates)
    CellPauli claimed;      ///< claimed action on I, O and S
    std::string logical_in;
    std::string logical_out;
};

/// Raised when the surfaces do not determine the whole logical map.
class InsufficientGeneratingSet : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline Chain primal_chain(const Lattice &lat, const std::set<Cell> &cells) {
    Chain c(lat, Complex::Primal, 2);
    for (const auto &x : cells) c.toggle(x);
    return c;
}

inline Chain dual_chain(const Lattice &lat, const std::set<Cell> &cells) {
    Chain c(lat, Complex::Dual, 2);
    for (const auto &x : cells) c.toggle(x);
    return c;
}

/// Full cluster stabilizer of a surface, on primal qubit cells.
inline CellPauli surface_stabilizer(const Lattice &lat, const CorrelationSurface &s) {
    return cluster_stabilizer(primal_chain(lat, s.primal)) * cluster_stabilizer(dual_chain(lat, s.dual));
}

struct Violation {
    std::string condition;
    Cell cell;
};

struct CompatibilityReport {
    std::vector<Violation> violations;

    bool ok() const {
        return violations.empty();
    }
    std::set<std::string> conditions() const {
        std::set<std::string> out;
        for (const auto &v : violations) out.insert(v.condition);
        return out;
    }
};

/// Commutation form: K must commute with X_a for vacuum a and Z_b for defect b.
inline CompatibilityReport check_compatibility(const DefectLayout &layout, const CorrelationSurface &s) {
    CompatibilityReport rep;
    auto K = surface_stabilizer(layout.lattice, s);
    std::set<Cell> support = K.x_support();
    support.insert(K.z_support().begin(), K.z_support().end());
    for (const auto &a : support) {
        Region r = layout.region(a);
        if ((r == Region::Vp || r == Region::Vd) && !commutes(K, CellPauli::X(a))) {
            rep.violations.push_back({"commutes-with-V", a});
        }
        if ((r == Region::Dp || r == Region::Dd) && !commutes(K, CellPauli::Z(a))) {
            rep.violations.push_back({"commutes-with-D", a});
        }
    }
    return rep;
}

/// Support form of the same conditions, one name per structural rule.
inline CompatibilityReport check_support_conditions(const DefectLayout &layout, const CorrelationSurface &s) {
    CompatibilityReport rep;
    const auto &lat = layout.lattice;
    auto c2 = primal_chain(lat, s.primal);
    auto d2 = dual_chain(lat, s.dual);
    for (const auto &f : c2.cells()) {
        if (layout.region(f) == Region::Dd) rep.violations.push_back({"primal-surface-off-Dd", f});
    }
    for (const auto &e : std::set<Cell>(boundary(c2).cells())) {
        if (layout.region(e) == Region::Vd) rep.violations.push_back({"primal-boundary-off-Vd", e});
    }
    for (const auto &f : d2.cells()) {
        Cell e{Complex::Primal, centre(lat, f)};
        if (layout.region(e) == Region::Dp) rep.violations.push_back({"dual-surface-off-Dp", e});
    }
    for (const auto &g : std::set<Cell>(boundary(d2).cells())) {
        Cell f{Complex::Primal, centre(lat, g)};
        if (layout.region(f) == Region::Vp) rep.violations.push_back({"dual-boundary-off-Vp", f});
    }
    return rep;
}

struct InducedOperator {
    CellPauli op;                ///< on I, O and S, for all-+1 outcomes
    std::set<Cell> byproduct;    ///< measured qubits whose outcome flips the sign
};

/// Throws std::invalid_argument if the surface is not compatible.
inline InducedOperator induced_io_stabilizer(const DefectLayout &layout, const CorrelationSurface &s) {
    auto rep = check_compatibility(layout, s);
    if (!rep.ok()) {
        throw std::invalid_argument("surface '" + s.name + "' violates " + rep.violations.front().condition + " at " +
                                    rep.violations.front().cell.str());
    }
    auto K = surface_stabilizer(layout.lattice, s);
    InducedOperator out;
    std::set<Cell> x, z;
    for (const auto &a : K.x_support()) {
        if (is_measured(layout.region(a))) {
            out.byproduct.insert(a);
        } else {
            x.insert(a);
        }
    }
    for (const auto &a : K.z_support()) {
        if (is_measured(layout.region(a))) {
            out.byproduct.insert(a);
        } else {
            z.insert(a);
        }
    }
    // Measured and unmeasured parts sit on disjoint qubits, so the phase of K
    // in X-then-Z form carries over unchanged.
    out.op = CellPauli(K.phase(), std::move(x), std::move(z));
    return out;
}

/// Symplectic vectors over the unmeasured qubits (I, O, S) and the slice
/// code stabilizers as a subspace.
class BoundarySpace {
  public:
    explicit BoundarySpace(const DefectLayout &layout) : stabs_(0) {
        for (const auto &[c, r] : layout.regions) {
            if (!is_measured(r)) {
                index_[c] = cells_.size();
                cells_.push_back(c);
            }
        }
        stabs_ = gf2::RowSpace(2 * cells_.size());
        for (Region s : {Region::I, Region::O}) {
            if (layout.cells_in(s).empty()) continue;
            for (const auto &chk : layout.slice_checks(s)) {
                stabilizers_.push_back(chk);
                stabs_.insert(vec(chk));
            }
        }
    }

    size_t size() const {
        return cells_.size();
    }
    const std::vector<Cell> &cells() const {
        return cells_;
    }
    const std::vector<CellPauli> &stabilizers() const {
        return stabilizers_;
    }
    bool contains(const Cell &c) const {
        return index_.count(c) != 0;
    }
    size_t index(const Cell &c) const {
        auto it = index_.find(c);
        if (it == index_.end()) throw std::invalid_argument("operator acts on measured qubit " + c.str());
        return it->second;
    }

    gf2::BitVec vec(const CellPauli &p) const {
        gf2::BitVec v(2 * cells_.size());
        for (const auto &c : p.x_support()) v.flip(index(c));
        for (const auto &c : p.z_support()) v.flip(cells_.size() + index(c));
        return v;
    }

    CellPauli pauli(const gf2::BitVec &v) const {
        std::set<Cell> x, z;
        for (size_t i = 0; i < cells_.size(); ++i) {
            if (v.get(i)) x.insert(cells_[i]);
            if (v.get(cells_.size() + i)) z.insert(cells_[i]);
        }
        return CellPauli(0, std::move(x), std::move(z));
    }

    /// a == b up to sign and multiplication by slice stabilizers.
    bool equivalent(const CellPauli &a, const CellPauli &b) const {
        auto v = vec(a);
        v ^= vec(b);
        return stabs_.contains(v);
    }

    bool is_stabilizer(const CellPauli &a) const {
        return stabs_.contains(vec(a));
    }

  private:
    std::vector<Cell> cells_;
    std::map<Cell, size_t> index_;
    std::vector<CellPauli> stabilizers_;
    gf2::RowSpace stabs_;
};

// Logical expressions such as "Z_c Z_t" or "X_S X_q": space-separated
// factors <P>_<qubit> with P in {X, Y, Z}.

struct LogicalFactor {
    char pauli;
    std::string qubit;
};

inline std::vector<LogicalFactor> parse_logical(const std::string &expr) {
    std::vector<LogicalFactor> out;
    std::istringstream is(expr);
    std::string tok;
    while (is >> tok) {
        if (tok.size() < 3 || tok[1] != '_' || (tok[0] != 'X' && tok[0] != 'Y' && tok[0] != 'Z')) {
            throw std::invalid_argument("bad logical factor '" + tok + "'");
        }
        out.push_back({tok[0], tok.substr(2)});
    }
    return out;
}

/// Physical representative of a logical expression. Names resolve to bare
/// qubits first, then to slice qubits on `slice`.
inline CellPauli logical_representative(const DefectLayout &layout, const std::string &expr, Region slice) {
    CellPauli out;
    for (const auto &f : parse_logical(expr)) {
        CellPauli X, Z;
        bool found = false;
        for (const auto &b : layout.bare) {
            if (b.name == f.qubit) {
                X = CellPauli::X(b.cell);
                Z = CellPauli::Z(b.cell);
                found = true;
            }
        }
        if (!found) std::tie(X, Z) = layout.logicals(f.qubit, slice);
        if (f.pauli != 'Z') out = out * X;
        if (f.pauli != 'X') out = out * Z;
    }
    return out.unsigned_copy();
}

struct ExpectedAction {
    std::string kind = "unitary";  ///< "unitary" or "state"
    std::string gate;
    std::vector<std::pair<std::string, std::string>> maps;  ///< unitary: input -> output
    std::vector<std::string> stabilizers;                   ///< state: output stabilizers
};

inline nlohmann::json expected_to_json(const ExpectedAction &e) {
    nlohmann::json j{{"kind", e.kind}, {"gate", e.gate}};
    if (e.kind == "unitary") {
        j["maps"] = nlohmann::json::array();
        for (const auto &[a, b] : e.maps) j["maps"].push_back({{"in", a}, {"out", b}});
    } else {
        j["stabilizers"] = e.stabilizers;
    }
    return j;
}

inline ExpectedAction expected_from_json(const nlohmann::json &j) {
    ExpectedAction e;
    e.kind = j.at("kind").get<std::string>();
    if (e.kind != "unitary" && e.kind != "state") throw std::invalid_argument("expected_action.kind must be unitary or state");
    e.gate = j.value("gate", "");
    if (e.kind == "unitary") {
        for (const auto &m : j.at("maps")) e.maps.push_back({m.at("in").get<std::string>(), m.at("out").get<std::string>()});
    } else {
        e.stabilizers = j.at("stabilizers").get<std::vector<std::string>>();
    }
    return e;
}

namespace detail {

/// Names of the logical qubits an expectation talks about, in a fixed order.
inline std::vector<std::string> logical_names(const DefectLayout &layout, Region slice) {
    std::vector<std::string> out;
    for (const auto &b : layout.bare) out.push_back(b.name);
    for (const auto &q : layout.qubits) {
        if (q.slice == slice) out.push_back(q.name);
    }
    return out;
}

/// Binary symplectic vector of a logical expression over named qubits.
inline gf2::BitVec logical_vector(const std::string &expr, const std::vector<std::string> &names) {
    gf2::BitVec v(2 * names.size());
    for (const auto &f : parse_logical(expr)) {
        auto it = std::find(names.begin(), names.end(), f.qubit);
        if (it == names.end()) throw std::invalid_argument("unknown logical qubit '" + f.qubit + "'");
        size_t k = it - names.begin();
        if (f.pauli != 'Z') v.flip(k);
        if (f.pauli != 'X') v.flip(names.size() + k);
    }
    return v;
}

inline std::string logical_string(const gf2::BitVec &v, const std::vector<std::string> &names) {
    std::string out;
    for (size_t k = 0; k < names.size(); ++k) {
        bool x = v.get(k), z = v.get(names.size() + k);
        if (!x && !z) continue;
        if (!out.empty()) out += " ";
        out += std::string(1, x && z ? 'Y' : (x ? 'X' : 'Z')) + "_" + names[k];
    }
    return out;
}

}  // namespace detail

struct SurfaceReport {
    std::string name;
    bool compatible = false;
    std::vector<Violation> violations;
    CellPauli induced;
    size_t byproduct_size = 0;
    bool matches_claim = false;
    bool matches_expected = false;
    std::string expected_io;
};

struct GateReport {
    bool ok = false;
    std::vector<SurfaceReport> surfaces;
    /// Rank of the logical content of the full induced group, split by side
    /// (unitary gates only): a unitary needs all three equal to 2k.
    int group_rank = -1, input_rank = -1, output_rank = -1;
    bool unitary_checked = false;
    bool unitary = false;
    std::string message;
};

/// Columns of the surface systems. A primal column is a face: constraint bits
/// are the vacuum edges in its boundary, boundary bits its action on I/O/S.
/// A dual column is an edge: constraints are the vacuum faces it bounds.
struct SurfaceSystem {
    Complex type;
    std::vector<Cell> unknowns;          ///< primal faces or primal edges (centres of dual faces)
    std::map<Cell, size_t> constraint;   ///< forbidden boundary cells
    size_t width() const {
        return constraint.size();
    }
};

inline SurfaceSystem surface_system(const DefectLayout &layout, Complex type) {
    SurfaceSystem sys;
    sys.type = type;
    for (const auto &[c, r] : layout.regions) {
        if (type == Complex::Primal) {
            if (c.dimension() == 2 && r != Region::Dd) sys.unknowns.push_back(c);
            if (r == Region::Vd) sys.constraint.emplace(c, sys.constraint.size());
        } else {
            if (c.dimension() == 1 && r != Region::Dp) sys.unknowns.push_back(c);
            if (r == Region::Vp) sys.constraint.emplace(c, sys.constraint.size());
        }
    }
    return sys;
}

/// The column of one unknown: constraint bits followed by the boundary
/// symplectic vector.
inline gf2::BitVec surface_column(const DefectLayout &layout, const SurfaceSystem &sys, const BoundarySpace &bs,
                                  const Cell &u) {
    const size_t w = sys.width(), n = bs.size();
    gf2::BitVec v(w + 2 * n);
    auto touch = [&](const Cell &c, bool z_part) {
        auto it = sys.constraint.find(c);
        if (it != sys.constraint.end()) {
            v.flip(it->second);
        } else if (bs.contains(c)) {
            v.flip(w + (z_part ? n : 0) + bs.index(c));
        }
    };
    touch(u, false);
    if (sys.type == Complex::Primal) {
        for_each_facet(layout.lattice, u, [&](const Cell &e) { touch(e, true); });
    } else {
        for_each_coface(layout.lattice, u, [&](const Cell &f) { touch(f, true); });
    }
    return v;
}

inline CorrelationSurface surface_from_unknowns(const DefectLayout &layout, Complex type, const std::vector<Cell> &cells) {
    CorrelationSurface s;
    for (const auto &c : cells) {
        if (type == Complex::Primal) {
            s.primal.insert(c);
        } else {
            s.dual.insert(dual(layout.lattice, c));
        }
    }
    return s;
}

/// Finds a compatible single-complex surface whose induced operator equals
/// `target` (pure X or pure Z) modulo slice stabilizers of the same type.
/// Returns nullopt if none exists.
inline std::optional<CorrelationSurface> solve_surface(const DefectLayout &layout, const CellPauli &target) {
    bool has_x = !target.x_support().empty(), has_z = !target.z_support().empty();
    if (has_x == has_z) throw std::invalid_argument("solve_surface needs a pure X or pure Z target");
    // Z on edges comes from primal boundaries; X on edges from dual surfaces.
    bool edges_only = true;
    for (const auto &c : has_x ? target.x_support() : target.z_support()) edges_only &= c.dimension() == 1;
    if (!edges_only) throw std::invalid_argument("solve_surface targets must act on edges");
    Complex type = has_z ? Complex::Primal : Complex::Dual;
    BoundarySpace bs(layout);
    auto sys = surface_system(layout, type);
    std::vector<CellPauli> gauges;
    for (const auto &st : bs.stabilizers()) {
        bool pure = has_x ? st.z_support().empty() : st.x_support().empty();
        if (pure) gauges.push_back(st);
    }
    if (sys.unknowns.size() + gauges.size() > gf2::RowSpace::kMaxTrack) {
        throw std::invalid_argument("layout too large for the surface solver");
    }
    const size_t w = sys.width();
    gf2::RowSpace rs(w + 2 * bs.size());
    for (const auto &u : sys.unknowns) rs.insert(surface_column(layout, sys, bs, u));
    auto pad = [&](const CellPauli &p) {
        gf2::BitVec v(w + 2 * bs.size());
        auto b = bs.vec(p);
        for (size_t i = 0; i < b.size(); ++i) {
            if (b.get(i)) v.set(w + i);
        }
        return v;
    };
    for (const auto &g : gauges) rs.insert(pad(g));
    auto combo = rs.express(pad(target));
    if (!combo) return std::nullopt;
    std::vector<Cell> cells;
    for (size_t i : *combo) {
        if (i < sys.unknowns.size()) cells.push_back(sys.unknowns[i]);
    }
    return surface_from_unknowns(layout, type, cells);
}

/// Basis of every operator on I/O/S induced by some compatible surface
/// (both complexes).
inline std::vector<CellPauli> induced_group(const DefectLayout &layout) {
    BoundarySpace bs(layout);
    std::vector<CellPauli> out;
    for (Complex type : {Complex::Primal, Complex::Dual}) {
        auto sys = surface_system(layout, type);
        const size_t w = sys.width();
        gf2::RowSpace rs(w + 2 * bs.size());
        for (const auto &u : sys.unknowns) rs.insert(surface_column(layout, sys, bs, u));
        for (const auto &row : rs.basis()) {
            auto p = row.first_set();
            if (!p || *p < w) continue;
            gf2::BitVec b(2 * bs.size());
            for (size_t i = 0; i < b.size(); ++i) {
                if (row.get(w + i)) b.set(i);
            }
            out.push_back(bs.pauli(b));
        }
    }
    return out;
}

namespace detail {

/// Logical content of an operator: for each named qubit on each side, the
/// pair of anticommutation bits with Z-bar (X content) and X-bar (Z content).
inline gf2::BitVec logical_content(const DefectLayout &layout, const CellPauli &p, const std::vector<Region> &sides) {
    std::vector<std::pair<CellPauli, CellPauli>> reps;
    for (Region s : sides) {
        for (const auto &q : layout.qubits) {
            if (q.slice == s) reps.push_back(layout.logicals(q.name, s));
        }
    }
    gf2::BitVec v(2 * reps.size());
    for (size_t k = 0; k < reps.size(); ++k) {
        if (!commutes(p, reps[k].second)) v.set(2 * k);
        if (!commutes(p, reps[k].first)) v.set(2 * k + 1);
    }
    return v;
}

}  // namespace detail

/// Certifies a gate or state preparation from its correlation surfaces.
/// Throws InsufficientGeneratingSet if the surfaces do not pin down the map.
inline GateReport verify_gate(const DefectLayout &layout, const std::vector<CorrelationSurface> &surfaces,
                              const ExpectedAction &expected, bool check_group = true) {
    layout.validate();
    BoundarySpace bs(layout);
    GateReport rep;
    const bool unitary = expected.kind == "unitary";
    auto in_names = detail::logical_names(layout, Region::I);
    auto out_names = detail::logical_names(layout, Region::O);

    // Linear extension of the expected map over the input generators.
    gf2::RowSpace span_in(2 * in_names.size());
    std::vector<gf2::BitVec> map_out;
    if (unitary) {
        for (const auto &[a, b] : expected.maps) {
            span_in.insert(detail::logical_vector(a, in_names));
            map_out.push_back(detail::logical_vector(b, out_names));
        }
    }
    gf2::RowSpace covered(2 * (unitary ? in_names.size() : out_names.size()));
    gf2::RowSpace expected_states(2 * out_names.size());
    for (const auto &s : expected.stabilizers) expected_states.insert(detail::logical_vector(s, out_names));

    rep.ok = true;
    for (const auto &s : surfaces) {
        SurfaceReport sr;
        sr.name = s.name;
        // Coverage counts the declared inputs, whether or not they certify.
        if (unitary) {
            covered.insert(detail::logical_vector(s.logical_in, in_names));
        } else {
            covered.insert(detail::logical_vector(s.logical_out, out_names));
        }
        auto compat = check_compatibility(layout, s);
        sr.compatible = compat.ok();
        sr.violations = compat.violations;
        if (!sr.compatible) {
            rep.ok = false;
            rep.surfaces.push_back(sr);
            continue;
        }
        auto ind = induced_io_stabilizer(layout, s);
        sr.induced = ind.op;
        sr.byproduct_size = ind.byproduct.size();
        sr.matches_claim = bs.equivalent(ind.op, s.claimed);
        CellPauli want;
        if (unitary) {
            auto vin = detail::logical_vector(s.logical_in, in_names);
            auto combo = span_in.express(vin);
            if (!combo) throw std::invalid_argument("surface input '" + s.logical_in + "' outside the expected map");
            gf2::BitVec vout(2 * out_names.size());
            for (size_t i : *combo) vout ^= map_out[i];
            std::string out_expr = detail::logical_string(vout, out_names);
            sr.expected_io = s.logical_in + " -> " + out_expr;
            want = logical_representative(layout, s.logical_in, Region::I) *
                   logical_representative(layout, out_expr, Region::O);
        } else {
            auto vout = detail::logical_vector(s.logical_out, out_names);
            sr.expected_io = s.logical_out;
            bool in_span = expected_states.contains(vout);
            want = logical_representative(layout, s.logical_out, Region::O);
            if (!in_span) want = CellPauli();  // never equivalent for a nontrivial claim
            if (!in_span) sr.expected_io += " (not implied by the expected state)";
        }
        sr.matches_expected = bs.equivalent(ind.op, want) && !want.is_identity_up_to_phase();
        rep.ok &= sr.matches_claim && sr.matches_expected;
        rep.surfaces.push_back(sr);
    }
    size_t need = unitary ? 2 * in_names.size() : out_names.size();
    if (covered.dim() < need) {
        throw InsufficientGeneratingSet("surfaces span " + std::to_string(covered.dim()) + " of " +
                                        std::to_string(need) + " logical generators");
    }
    if (unitary && check_group) {
        // The induced group must act as a bijection between input and output
        // logicals: no operator acts logically on one side only.
        std::vector<gf2::BitVec> both, ins, outs;
        for (const auto &g : induced_group(layout)) {
            auto vi = detail::logical_content(layout, g, {Region::I});
            auto vo = detail::logical_content(layout, g, {Region::O});
            gf2::BitVec v(vi.size() + vo.size());
            for (size_t i = 0; i < vi.size(); ++i) v.set(i, vi.get(i));
            for (size_t i = 0; i < vo.size(); ++i) v.set(vi.size() + i, vo.get(i));
            both.push_back(v);
            ins.push_back(vi);
            outs.push_back(vo);
        }
        rep.group_rank = static_cast<int>(gf2::rank(both));
        rep.input_rank = static_cast<int>(gf2::rank(ins));
        rep.output_rank = static_cast<int>(gf2::rank(outs));
        rep.unitary_checked = true;
        int k2 = static_cast<int>(2 * in_names.size());
        rep.unitary = rep.group_rank == k2 && rep.input_rank == k2 && rep.output_rank == k2;
        rep.ok &= rep.unitary;
    }
    std::ostringstream msg;
    int passed = 0;
    for (const auto &s : rep.surfaces) passed += s.compatible && s.matches_claim && s.matches_expected;
    msg << passed << "/" << rep.surfaces.size() << " surfaces certified";
    if (rep.unitary_checked) msg << (rep.unitary ? ", induced group is unitary" : ", induced group is not unitary");
    rep.message = msg.str();
    return rep;
}

// Fixture file: {"format": "ftq2d-gate-fixture", "version": 1, "name",
// "layout_ref", "layout", "expected_action", "surfaces": [{"name",
// "logical": {"in", "out"}, "primal": [...], "dual": [...], "claimed"}]}.

struct GateFixture {
    std::string name;
    DefectLayout layout;
    ExpectedAction expected;
    std::vector<CorrelationSurface> surfaces;
};

inline nlohmann::json fixture_to_json(const GateFixture &f) {
    nlohmann::json j{{"format", "ftq2d-gate-fixture"},
                     {"version", 1},
                     {"name", f.name},
                     {"layout_ref", f.layout.name},
                     {"layout", layout_to_json(f.layout)},
                     {"expected_action", expected_to_json(f.expected)}};
    j["surfaces"] = nlohmann::json::array();
    for (const auto &s : f.surfaces) {
        j["surfaces"].push_back({{"name", s.name},
                                 {"logical", {{"in", s.logical_in}, {"out", s.logical_out}}},
                                 {"primal", cell_list_to_json(s.primal)},
                                 {"dual", cell_list_to_json(s.dual)},
                                 {"claimed", pauli_to_json(s.claimed)}});
    }
    return j;
}

inline GateFixture fixture_from_json(const nlohmann::json &j) {
    if (j.value("format", "") != "ftq2d-gate-fixture") throw std::invalid_argument("not a gate fixture");
    if (j.value("version", 0) != 1) throw std::invalid_argument("unsupported fixture version");
    GateFixture f;
    f.name = j.at("name").get<std::string>();
    f.layout = layout_from_json(j.at("layout"));
    f.expected = expected_from_json(j.at("expected_action"));
    for (const auto &s : j.at("surfaces")) {
        CorrelationSurface cs;
        cs.name = s.at("name").get<std::string>();
        cs.logical_in = s.at("logical").value("in", "");
        cs.logical_out = s.at("logical").value("out", "");
        cs.primal = cell_list_from_json(s.at("primal"), Complex::Primal);
        cs.dual = cell_list_from_json(s.at("dual"), Complex::Dual);
        cs.claimed = pauli_from_json<Cell>(s.at("claimed"));
        for (const auto &c : cs.primal) {
            if (c.dimension() != 2 || !valid_cell(f.layout.lattice, c)) throw std::invalid_argument("bad primal face " + c.str());
        }
        for (const auto &c : cs.dual) {
            if (c.dimension() != 2 || !valid_cell(f.layout.lattice, c)) throw std::invalid_argument("bad dual face " + c.str());
        }
        f.surfaces.push_back(std::move(cs));
    }
    return f;
}

inline nlohmann::json report_to_json(const GateReport &r) {
    nlohmann::json j{{"ok", r.ok}, {"message", r.message}};
    if (r.unitary_checked) {
        j["induced_group"] = {{"rank", r.group_rank}, {"input_rank", r.input_rank}, {"output_rank", r.output_rank},
                              {"unitary", r.unitary}};
    }
    j["surfaces"] = nlohmann::json::array();
    for (const auto &s : r.surfaces) {
        nlohmann::json v = nlohmann::json::array();
        for (const auto &x : s.violations) v.push_back({{"condition", x.condition}, {"cell", x.cell.c}});
        j["surfaces"].push_back({{"name", s.name},
                                 {"compatible", s.compatible},
                                 {"violations", v},
                                 {"expected", s.expected_io},
                                 {"matches_claim", s.matches_claim},
                                 {"matches_expected", s.matches_expected},
                                 {"sign", phase_label(s.induced.tensor_phase())},
                                 {"byproduct_qubits", s.byproduct_size}});
    }
    return j;
}

}  // namespace ftq2d
