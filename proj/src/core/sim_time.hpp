#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace atant {

/// A simulated timestamp: an absolute instant plus the UTC offset it was
/// written with. Comparisons are instant-based; the offset is kept so
/// calendar-day questions can be answered in the narrative's own zone.
struct sim_time {
    std::chrono::sys_seconds instant{};
    std::chrono::seconds utc_offset{0};

    [[nodiscard]] std::chrono::seconds local_seconds_since_epoch() const {
        return instant.time_since_epoch() + utc_offset;
    }

    [[nodiscard]] std::chrono::year_month_day local_date() const;
    [[nodiscard]] std::chrono::weekday local_weekday() const;

    friend bool operator==(const sim_time& a, const sim_time& b) {
        return a.instant == b.instant && a.utc_offset == b.utc_offset;
    }
    friend auto operator<=>(const sim_time& a, const sim_time& b) {
        if (auto c = a.instant <=> b.instant; c != 0) return c;
        return a.utc_offset <=> b.utc_offset;
    }
};

/// Accepts "YYYY-MM-DD[T ]HH:MM[:SS](Z|±HH:MM|±HHMM)". The zone
/// designator is mandatory.
std::optional<sim_time> parse_sim_time(std::string_view s);

/// Canonical form: seconds always present, "Z" for zero offset,
/// "±HH:MM" otherwise.
std::string to_iso(const sim_time& t);

/// Build from local calendar fields interpreted at the given offset.
sim_time make_sim_time(std::chrono::year_month_day local_day, std::chrono::seconds time_of_day,
                       std::chrono::seconds utc_offset);

/// Current wall clock, UTC, for snapshot stamps only.
std::string wall_clock_iso();

}  // namespace atant
