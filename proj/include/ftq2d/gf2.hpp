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

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ftq2d::gf2 {

/// Packed bit vector of fixed length.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t n) : n_(n), words_((n + 63) / 64, 0) {
    }

    size_t size() const {
        return n_;
    }
    bool get(size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(size_t i, bool v = true) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) {
        words_[i >> 6] ^= uint64_t{1} << (i & 63);
    }
    BitVec &operator^=(const BitVec &o) {
        for (size_t k = 0; k < words_.size(); ++k) {
            words_[k] ^= o.words_[k];
        }
        return *this;
    }
    bool dot(const BitVec &o) const {
        uint64_t acc = 0;
        for (size_t k = 0; k < words_.size(); ++k) {
            acc ^= words_[k] & o.words_[k];
        }
        return std::popcount(acc) & 1;
    }
    bool any() const {
        for (auto w : words_) {
            if (w) {
                return true;
            }
        }
        return false;
    }
    size_t count() const {
        size_t c = 0;
        for (auto w : words_) {
            c += std::popcount(w);
        }
        return c;
    }
    std::optional<size_t> first_set() const {
        for (size_t k = 0; k < words_.size(); ++k) {
            if (words_[k]) {
                return k * 64 + std::countr_zero(words_[k]);
            }
        }
        return std::nullopt;
    }
    bool operator==(const BitVec &) const = default;

  private:
    size_t n_ = 0;
    std::vector<uint64_t> words_;
};

/// Incrementally built row echelon basis of a subspace of GF(2)^n.
///
/// Each stored row remembers which inserted vectors it is a combination of, so
/// membership queries can also return a certificate.
class RowSpace {
  public:
    explicit RowSpace(size_t n) : n_(n) {
    }

    size_t dim() const {
        return rows_.size();
    }
    size_t ambient() const {
        return n_;
    }
    size_t inserted() const {
        return inserted_;
    }

    /// Returns true if v was independent of the current span.
    bool insert(BitVec v) {
        BitVec combo(kMaxTrack);
        if (inserted_ < kMaxTrack) {
            combo.set(inserted_);
        }
        ++inserted_;
        reduce(v, &combo);
        auto pivot = v.first_set();
        if (!pivot) {
            return false;
        }
        rows_.push_back({std::move(v), *pivot, std::move(combo)});
        return true;
    }

    bool contains(BitVec v) const {
        reduce(v, nullptr);
        return !v.any();
    }

    /// Indices of inserted vectors summing to v, if v is in the span. Only
    /// available while fewer than kMaxTrack vectors have been inserted.
    std::optional<std::vector<size_t>> express(BitVec v) const {
        if (inserted_ > kMaxTrack) {
            throw std::logic_error("RowSpace::express: too many vectors to track combinations");
        }
        BitVec combo(kMaxTrack);
        reduce(v, &combo);
        if (v.any()) {
            return std::nullopt;
        }
        std::vector<size_t> out;
        for (size_t i = 0; i < inserted_; ++i) {
            if (combo.get(i)) {
                out.push_back(i);
            }
        }
        return out;
    }

    /// Echelon basis of the span; pivots (first set bits) are distinct.
    std::vector<BitVec> basis() const {
        std::vector<BitVec> out;
        for (const auto &r : rows_) out.push_back(r.v);
        return out;
    }

    static constexpr size_t kMaxTrack = 8192;

  private:
    struct Row {
        BitVec v;
        size_t pivot;
        BitVec combo;
    };

    void reduce(BitVec &v, BitVec *combo) const {
        for (const auto &r : rows_) {
            if (v.get(r.pivot)) {
                v ^= r.v;
                if (combo) {
                    *combo ^= r.combo;
                }
            }
        }
    }

    size_t n_;
    size_t inserted_ = 0;
    std::vector<Row> rows_;
};

inline size_t rank(const std::vector<BitVec> &vs) {
    if (vs.empty()) {
        return 0;
    }
    RowSpace rs(vs.front().size());
    for (const auto &v : vs) {
        rs.insert(v);
    }
    return rs.dim();
}

}  // namespace ftq2d::gf2
