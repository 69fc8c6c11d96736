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

// Version string and configuration fingerprints stamped on every output.

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace ftq2d {

#ifdef FTQ2D_VERSION
inline constexpr std::string_view kVersion = FTQ2D_VERSION;
#else
inline constexpr std::string_view kVersion = "0.0.0";
#endif

/// 64-bit FNV-1a of a canonical configuration string, as 16 hex digits.
inline std::string config_hash(std::string_view canonical) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Comment block placed at the top of text outputs.
inline std::string header_block(std::string_view canonical, std::string_view comment = "# ") {
    std::string out;
    out += std::string(comment) + "ftq2d " + std::string(kVersion) + "\n";
    out += std::string(comment) + "config-hash " + config_hash(canonical) + "\n";
    return out;
}

}  // namespace ftq2d
