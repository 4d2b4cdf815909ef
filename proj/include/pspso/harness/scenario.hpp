#pragma once

#include <pspso/error.hpp>
#include <pspso/problem.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace pspso::harness {

struct ScenarioSpec {
    std::string_view name;
    std::size_t peaks;
    std::int64_t change_frequency;
    std::size_t dims;
    double shift_severity;
};

// Peaks, change frequency, dimensions, shift severity.
inline constexpr std::array<ScenarioSpec, 12> scenario_catalog{{
    {"F1", 5, 5000, 5, 1.0},
    {"F2", 10, 5000, 5, 1.0},
    {"F3", 25, 5000, 5, 1.0},
    {"F4", 50, 5000, 5, 1.0},
    {"F5", 100, 5000, 5, 1.0},
    {"F6", 10, 2500, 5, 1.0},
    {"F7", 10, 1000, 5, 1.0},
    {"F8", 10, 500, 5, 1.0},
    {"F9", 10, 5000, 10, 1.0},
    {"F10", 10, 5000, 20, 1.0},
    {"F11", 10, 5000, 5, 2.0},
    {"F12", 10, 5000, 5, 5.0},
}};

inline std::string scenario_names() {
    std::string out;
    for (const auto& s : scenario_catalog) {
        out += s.name;
        out += ", ";
    }
    return out + "custom";
}

/// Landscape parameters for a catalog scenario; "custom" gives the plain defaults.
inline LandscapeParams resolve_scenario(std::string_view name) {
    LandscapeParams params;
    if (name == "custom") return params;
    for (const auto& s : scenario_catalog) {
        if (s.name != name) continue;
        params.num_peaks = s.peaks;
        params.schedule.change_frequency = s.change_frequency;
        params.space.dims = s.dims;
        params.schedule.shift_severity = s.shift_severity;
        return params;
    }
    throw ConfigError("unknown scenario '" + std::string(name) + "' (valid: " + scenario_names() + ")");
}

} // namespace pspso::harness
