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

// Leading-order magic-state distillation arithmetic.
//
// One round of the 15-to-1 protocol maps an input error eps to 35 eps^3. An
// injected state starts at eps_0 = 6 p. The map has a repelling fixed point at
// 1 / sqrt(35); below it the error falls doubly exponentially. Iteration is done
// in the scaled variable u = sqrt(35) eps, where the map is u -> u^3, so the
// fixed point u = 1 is preserved exactly in floating point.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace ftq2d {

struct DistillationParams {
    double branching = 35;      ///< coefficient of eps^3
    int inputs_per_round = 15;  ///< input states consumed per output
    double injection_factor = 6;  ///< eps_0 = injection_factor * p
};

inline double fixed_point() {
    return 1.0 / std::sqrt(35.0);
}

/// Largest physical error rate for which distillation converges.
inline double injection_threshold() {
    return 1.0 / (6.0 * std::sqrt(35.0));
}

/// eps after `levels` rounds starting from eps0. Values above the fixed point
/// grow without bound since the map is taken to leading order as written.
inline double recurse(double eps0, int levels) {
    if (!(eps0 >= 0 && eps0 <= 1)) throw std::invalid_argument("eps0 must lie in [0, 1]");
    if (levels < 0) throw std::invalid_argument("levels must be non-negative");
    const double s = std::sqrt(35.0);
    double u = eps0 * s;
    for (int l = 0; l < levels; ++l) u = u * u * u;
    return u / s;
}

/// Smallest level count with recurse(6 p, l) <= target.
inline int levels_needed(double p, double target) {
    if (!(p >= 0)) throw std::invalid_argument("p must be non-negative");
    if (!(target >= 0)) throw std::invalid_argument("target must be non-negative");
    double eps = 6 * p;
    if (eps <= target) return 0;
    if (p >= injection_threshold()) {
        throw std::domain_error("p at or above the injection threshold: distillation diverges, target unreachable");
    }
    for (int l = 1; l <= 64; ++l) {
        if (recurse(eps, l) <= target) return l;
    }
    throw std::domain_error("target unreachable within 64 levels");
}

struct Overhead {
    double gamma_top = 3;                           ///< topological exponent
    double gamma_ms = std::log(15.0) / std::log(3.0);  ///< distillation exponent
    double dominant = 3;                            ///< the larger of the two
    double scaled_size = 0;                         ///< S (ln S)^3, unit-normalized
};

/// Scaling of a bare circuit of size S; the constant in front is set to 1.
inline Overhead overhead(double S) {
    if (!(S >= 1)) throw std::invalid_argument("circuit size must be at least 1");
    Overhead o;
    o.dominant = std::max(o.gamma_top, o.gamma_ms);
    double ls = std::log(S);
    o.scaled_size = S * ls * ls * ls;
    return o;
}

/// Per-level table for a physical rate p, up to the first level reaching the
/// target.
inline nlohmann::json distillation_table(double p, double target) {
    int levels = levels_needed(p, target);
    nlohmann::json rows = nlohmann::json::array();
    double inputs = 1;
    for (int l = 0; l <= levels; ++l) {
        rows.push_back({{"level", l}, {"epsilon", recurse(6 * p, l)}, {"cumulative_input_states", inputs}});
        inputs *= 15;
    }
    auto o = overhead(std::exp(1.0));
    return {{"p", p},
            {"target", target},
            {"levels", levels},
            {"injection_threshold", injection_threshold()},
            {"fixed_point", fixed_point()},
            {"table", rows},
            {"exponents", {{"gamma_top", o.gamma_top}, {"gamma_ms", o.gamma_ms}, {"dominant", o.dominant}}}};
}

}  // namespace ftq2d
