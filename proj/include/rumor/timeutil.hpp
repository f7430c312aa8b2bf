#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace rumor {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::chrono::seconds kWindowLength{48 * 3600};

// Accepts "YYYY-MM-DDTHH:MM:SSZ" (or a "+00:00" suffix). Throws DataError.
Timestamp parse_iso8601(std::string_view text);

std::string format_iso8601(Timestamp t);

inline double hours_between(Timestamp from, Timestamp to) {
    return static_cast<double>((to - from).count()) / 3600.0;
}

}  // namespace rumor
