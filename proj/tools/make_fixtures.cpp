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

// Writes the gate fixtures. Surfaces are found here by solving the GF(2)
// compatibility system for each claimed logical action; the verifier never
// solves for surfaces, it only checks the ones stored in the files.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ftq2d/gate_verify.hpp"
#include "ftq2d/geometry.hpp"

namespace {

using namespace ftq2d;

GateFixture synthesize(const std::string &name, DefectLayout layout, const ExpectedAction &expected) {
    GateFixture f{name, std::move(layout), expected, {}};
    auto add = [&](const std::string &label, const std::string &in, const std::string &out, const CellPauli &claim) {
        auto s = solve_surface(f.layout, claim);
        if (!s) throw std::runtime_error(name + ": no compatible surface for " + label);
        s->name = label;
        s->logical_in = in;
        s->logical_out = out;
        s->claimed = claim;
        f.surfaces.push_back(*s);
    };
    if (expected.kind == "unitary") {
        for (const auto &[in, out] : expected.maps) {
            auto claim = logical_representative(f.layout, in, Region::I) * logical_representative(f.layout, out, Region::O);
            add(in + " -> " + out, in, out, claim.unsigned_copy());
        }
    } else {
        for (const auto &st : expected.stabilizers) add(st, "", st, logical_representative(f.layout, st, Region::O));
    }
    auto rep = verify_gate(f.layout, f.surfaces, f.expected);
    if (!rep.ok) throw std::runtime_error(name + ": synthesized surfaces do not verify: " + report_to_json(rep).dump());
    std::cerr << name << ": " << rep.message << "\n";
    return f;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Write the gate-certification fixtures"};
    std::string out = FTQ2D_FIXTURE_DIR;
    int spacing = 3;
    app.add_option("--out", out, "output directory");
    app.add_option("--spacing", spacing, "CNOT defect spacing")->check(CLI::Range(2, 16));
    CLI11_PARSE(app, argc, argv);
    try {
        std::filesystem::create_directories(out);
        std::vector<GateFixture> fixtures;
        fixtures.push_back(synthesize("identity", build_identity_layout(3, 3),
                                      {"unitary", "I", {{"X_q", "X_q"}, {"Z_q", "Z_q"}}, {}}));
        fixtures.push_back(synthesize("prep_z", build_prep_layout(PrepBasis::Z, 3, 4), {"state", "prep_z", {}, {"Z_q"}}));
        fixtures.push_back(synthesize("prep_x", build_prep_layout(PrepBasis::X, 3, 4), {"state", "prep_x", {}, {"X_q"}}));
        fixtures.push_back(synthesize("injection", build_injection_layout(3, 4),
                                      {"state", "injection", {}, {"Z_S Z_q", "X_S X_q"}}));
        fixtures.push_back(synthesize(
            "cnot", build_cnot_layout(spacing, 1),
            {"unitary", "CNOT", {{"Z_t", "Z_c Z_t"}, {"X_t", "X_t"}, {"Z_c", "Z_c"}, {"X_c", "X_c X_t"}}, {}}));
        for (const auto &f : fixtures) {
            std::ofstream os(std::filesystem::path(out) / (f.name + ".json"));
            os << fixture_to_json(f).dump() << "\n";
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
