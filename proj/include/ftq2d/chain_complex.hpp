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

#include <array>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ftq2d {

/// Which of the two interleaved cubic complexes a cell belongs to.
enum class Complex : uint8_t { Primal = 0, Dual = 1 };

/// Cubic lattice in doubled coordinates.
///
/// A cell is addressed by an integer triple; a coordinate is odd iff the cell
/// extends along that axis. On a periodic axis of extent n coordinates live in
/// [0, 2n). On an open axis the primal complex spans [0, 2n] and the dual
/// complex (shifted by one) spans [1, 2n + 1]. An open axis of extent 0 is a
/// flat axis, which is how 2D code planes are expressed.
struct Lattice {
    std::array<int, 3> extent{1, 1, 1};
    std::array<bool, 3> periodic{true, true, true};

    static Lattice torus(int lx, int ly, int lz) {
        return Lattice{{lx, ly, lz}, {true, true, true}};
    }
    static Lattice block(int lx, int ly, int lz) {
        return Lattice{{lx, ly, lz}, {false, false, false}};
    }
    /// Periodic in x and y, flat in z.
    static Lattice plane_torus(int l) {
        return Lattice{{l, l, 0}, {true, true, false}};
    }

    void validate() const {
        for (int a = 0; a < 3; ++a) {
            if (extent[a] < 0 || (periodic[a] && extent[a] < 1)) {
                throw std::invalid_argument("lattice extent must be positive on periodic axes");
            }
        }
    }

    int period(int axis) const {
        return 2 * extent[axis];
    }

    int wrap(int axis, int v) const {
        if (!periodic[axis]) {
            return v;
        }
        int m = period(axis);
        v %= m;
        return v < 0 ? v + m : v;
    }

    bool in_range(Complex cx, int axis, int v) const {
        if (periodic[axis]) {
            return true;
        }
        int lo = cx == Complex::Primal ? 0 : 1;
        return v >= lo && v <= lo + period(axis);
    }

    bool operator==(const Lattice &) const = default;
};

struct Cell {
    Complex complex = Complex::Primal;
    std::array<int, 3> c{0, 0, 0};

    constexpr int dimension() const {
        return (c[0] & 1) + (c[1] & 1) + (c[2] & 1);
    }
    constexpr bool extends_along(int axis) const {
        return (c[axis] & 1) != 0;
    }

    auto operator<=>(const Cell &) const = default;
    bool operator==(const Cell &) const = default;

    std::string str() const {
        return std::string(complex == Complex::Primal ? "p(" : "d(") + std::to_string(c[0]) + "," +
               std::to_string(c[1]) + "," + std::to_string(c[2]) + ")";
    }
};

inline Cell make_cell(const Lattice &lat, Complex cx, int x, int y, int z) {
    Cell r{cx, {lat.wrap(0, x), lat.wrap(1, y), lat.wrap(2, z)}};
    for (int a = 0; a < 3; ++a) {
        if (!lat.in_range(cx, a, r.c[a])) {
            throw std::out_of_range("cell " + r.str() + " outside lattice");
        }
    }
    return r;
}

inline Cell primal_cell(const Lattice &lat, int x, int y, int z) {
    return make_cell(lat, Complex::Primal, x, y, z);
}

/// Shift by one along every axis with a complex swap. Dimension k maps to 3-k
/// and the geometric centre is preserved: cubes of the dual complex land on
/// sites of the primal one.
inline Cell dual(const Lattice &lat, const Cell &cell) {
    int d = cell.complex == Complex::Primal ? 1 : -1;
    Complex other = cell.complex == Complex::Primal ? Complex::Dual : Complex::Primal;
    return Cell{other, {lat.wrap(0, cell.c[0] + d), lat.wrap(1, cell.c[1] + d), lat.wrap(2, cell.c[2] + d)}};
}

/// Centre of a cell expressed in primal doubled coordinates.
inline std::array<int, 3> centre(const Lattice &lat, const Cell &cell) {
    return cell.complex == Complex::Primal ? cell.c : dual(lat, cell).c;
}

inline bool valid_cell(const Lattice &lat, const Cell &cell) {
    for (int a = 0; a < 3; ++a) {
        if (!lat.in_range(cell.complex, a, cell.c[a])) {
            return false;
        }
        if (lat.periodic[a] && (cell.c[a] < 0 || cell.c[a] >= lat.period(a))) {
            return false;
        }
    }
    return true;
}

template <typename F>
void for_each_facet(const Lattice &lat, const Cell &cell, F &&f) {
    for (int a = 0; a < 3; ++a) {
        if (!cell.extends_along(a)) {
            continue;
        }
        for (int s : {-1, 1}) {
            // Dual cells at an open face of the block lose their outer facet
            // (relative boundary).
            int v = cell.c[a] + s;
            if (!lat.in_range(cell.complex, a, v)) {
                continue;
            }
            Cell n = cell;
            n.c[a] = lat.wrap(a, v);
            f(n);
        }
    }
}

template <typename F>
void for_each_coface(const Lattice &lat, const Cell &cell, F &&f) {
    for (int a = 0; a < 3; ++a) {
        if (cell.extends_along(a)) {
            continue;
        }
        for (int s : {-1, 1}) {
            int v = cell.c[a] + s;
            if (!lat.in_range(cell.complex, a, v)) {
                continue;
            }
            // Extent-1 periodic axis: both cofaces coincide and cancel.
            Cell n = cell;
            n.c[a] = lat.wrap(a, v);
            f(n);
        }
    }
}

/// Z2 chain: a finite set of same-dimension cells of one complex.
class Chain {
  public:
    Chain() = default;
    Chain(Lattice lattice, Complex cx, int dim) : lattice_(lattice), complex_(cx), dim_(dim) {
        if (dim < 0 || dim > 3) {
            throw std::invalid_argument("chain dimension must be in 0..3");
        }
    }

    static Chain of(Lattice lattice, std::initializer_list<Cell> cells) {
        if (cells.size() == 0) {
            throw std::invalid_argument("Chain::of needs at least one cell to infer dimension");
        }
        Chain r(lattice, cells.begin()->complex, cells.begin()->dimension());
        for (const auto &c : cells) {
            r.toggle(c);
        }
        return r;
    }

    const Lattice &lattice() const {
        return lattice_;
    }
    Complex complex() const {
        return complex_;
    }
    int dimension() const {
        return dim_;
    }
    const std::set<Cell> &cells() const {
        return cells_;
    }
    bool empty() const {
        return cells_.empty();
    }
    size_t size() const {
        return cells_.size();
    }
    bool contains(const Cell &c) const {
        return cells_.count(c) != 0;
    }

    /// Adds one cell with Z2 coefficient (symmetric difference).
    void toggle(const Cell &c) {
        if (c.dimension() != dim_ || c.complex != complex_) {
            throw std::invalid_argument("cell " + c.str() + " does not match chain dimension/complex");
        }
        if (!valid_cell(lattice_, c)) {
            throw std::out_of_range("cell " + c.str() + " outside lattice");
        }
        auto [it, inserted] = cells_.insert(c);
        if (!inserted) {
            cells_.erase(it);
        }
    }

    Chain &operator+=(const Chain &o) {
        check_compatible(o);
        for (const auto &c : o.cells_) {
            toggle(c);
        }
        return *this;
    }
    friend Chain operator+(Chain a, const Chain &b) {
        a += b;
        return a;
    }
    bool operator==(const Chain &o) const {
        return lattice_ == o.lattice_ && complex_ == o.complex_ && dim_ == o.dim_ && cells_ == o.cells_;
    }

  private:
    void check_compatible(const Chain &o) const {
        if (!(lattice_ == o.lattice_) || complex_ != o.complex_ || dim_ != o.dim_) {
            throw std::invalid_argument("adding chains of different lattice/complex/dimension");
        }
    }

    Lattice lattice_{};
    Complex complex_ = Complex::Primal;
    int dim_ = 0;
    std::set<Cell> cells_;
};

inline Chain boundary(const Chain &chain) {
    if (chain.dimension() == 0) {
        throw std::invalid_argument("boundary of a 0-chain is undefined");
    }
    Chain r(chain.lattice(), chain.complex(), chain.dimension() - 1);
    for (const auto &cell : chain.cells()) {
        for_each_facet(chain.lattice(), cell, [&](const Cell &f) {
            r.toggle(f);
        });
    }
    return r;
}

inline Chain coboundary(const Chain &chain) {
    if (chain.dimension() == 3) {
        throw std::invalid_argument("coboundary of a 3-chain is undefined");
    }
    Chain r(chain.lattice(), chain.complex(), chain.dimension() + 1);
    for (const auto &cell : chain.cells()) {
        for_each_coface(chain.lattice(), cell, [&](const Cell &f) {
            r.toggle(f);
        });
    }
    return r;
}

inline Chain dual(const Chain &chain) {
    Complex other = chain.complex() == Complex::Primal ? Complex::Dual : Complex::Primal;
    Chain r(chain.lattice(), other, 3 - chain.dimension());
    for (const auto &cell : chain.cells()) {
        r.toggle(dual(chain.lattice(), cell));
    }
    return r;
}

/// Z2 pairing <a, b>: parity of the number of common cells.
inline bool pairing(const Chain &a, const Chain &b) {
    bool parity = false;
    for (const auto &c : a.cells()) {
        parity ^= b.contains(c);
    }
    return parity;
}

/// Every cell of the given dimension and complex, in lexicographic order.
inline std::vector<Cell> all_cells(const Lattice &lat, Complex cx, int dim) {
    std::vector<Cell> out;
    std::array<int, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
        if (lat.periodic[a]) {
            lo[a] = 0;
            hi[a] = lat.period(a) - 1;
        } else {
            lo[a] = cx == Complex::Primal ? 0 : 1;
            hi[a] = lo[a] + lat.period(a);
        }
    }
    for (int x = lo[0]; x <= hi[0]; ++x) {
        for (int y = lo[1]; y <= hi[1]; ++y) {
            for (int z = lo[2]; z <= hi[2]; ++z) {
                Cell c{cx, {x, y, z}};
                if (c.dimension() == dim) {
                    out.push_back(c);
                }
            }
        }
    }
    return out;
}

// JSON form: {"lattice": {"extent": [..], "periodic": [..]}, "complex": "primal",
// "dimension": k, "cells": [[x,y,z], ...]}

inline nlohmann::json lattice_to_json(const Lattice &lat) {
    return {{"extent", lat.extent}, {"periodic", lat.periodic}};
}

inline Lattice lattice_from_json(const nlohmann::json &j) {
    Lattice lat{j.at("extent").get<std::array<int, 3>>(), j.at("periodic").get<std::array<bool, 3>>()};
    lat.validate();
    return lat;
}

inline nlohmann::json cells_to_json(const std::set<Cell> &cells) {
    auto arr = nlohmann::json::array();
    for (const auto &c : cells) {
        arr.push_back(c.c);
    }
    return arr;
}

inline nlohmann::json chain_to_json(const Chain &chain) {
    return {
        {"lattice", lattice_to_json(chain.lattice())},
        {"complex", chain.complex() == Complex::Primal ? "primal" : "dual"},
        {"dimension", chain.dimension()},
        {"cells", cells_to_json(chain.cells())},
    };
}

inline Chain chain_from_json(const nlohmann::json &j) {
    Lattice lat = lattice_from_json(j.at("lattice"));
    std::string cx = j.at("complex").get<std::string>();
    if (cx != "primal" && cx != "dual") {
        throw std::invalid_argument("complex must be 'primal' or 'dual'");
    }
    Chain r(lat, cx == "primal" ? Complex::Primal : Complex::Dual, j.at("dimension").get<int>());
    for (const auto &t : j.at("cells")) {
        r.toggle(Cell{r.complex(), t.get<std::array<int, 3>>()});
    }
    return r;
}

}  // namespace ftq2d
