#pragma once

#include <cstdint>
#include <filesystem>

#include "mtsa/cli/workspace.hpp"
#include "mtsa/core.hpp"

namespace mtsa::cli {

// Desk-scale synthetic workspace: one historical year of hourly demand plus
// two projected years (26,280 intervals, 24 future pay periods), with a
// campus-style load profile peaking on weekday afternoons.
CalendarTable build_demo_calendar();
TimeSeries build_demo_demand(const CalendarTable& cal, std::uint64_t seed = 7);

// Initializes a workspace with the demo data, the bundled scripts, and a
// zero-interruption configuration.
Workspace write_demo_workspace(const std::filesystem::path& root, std::uint64_t seed = 7);

}  // namespace mtsa::cli
