#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "core/sim_time.hpp"

namespace atant {

enum class temporal_kind { none, absolute, relative, sequence };
enum class temporal_direction { none, past, future, present };

std::string_view to_string(temporal_kind k);
std::string_view to_string(temporal_direction d);
std::optional<temporal_kind> temporal_kind_from(std::string_view s);
std::optional<temporal_direction> temporal_direction_from(std::string_view s);

struct temporal_resolution {
    std::optional<sim_time> resolved;
    temporal_kind kind = temporal_kind::none;
    temporal_direction direction = temporal_direction::none;
    /// For sequence expressions ("after the wedding"): the folded anchor
    /// phrase, so ingestion can inherit the anchor event's resolved time.
    std::string reference_phrase;
};

/// Resolve a temporal expression against a reference instant.
///
/// Grammar: yesterday/today/tonight/tomorrow; [last|this|next] <weekday>
/// (bare weekday = first occurrence on or after the reference date,
/// "next" = strictly after, "last" = strictly before); in N days/weeks/
/// months; N days/weeks/months ago; last/next week/month; explicit
/// "Month D[, YYYY]" dates; ISO YYYY-MM-DD dates; and sequence anchors
/// ("after <phrase>" / "before <phrase>"). An optional time of day
/// ("3pm", "at 7:30", "15:00") refines day-level results. Unknown
/// expressions yield the none-tuple. Pure: depends only on the
/// arguments.
///
/// Direction compares local calendar days in the reference's zone;
/// the same day resolves to `present`.
temporal_resolution resolve_temporal(std::string_view expression, const sim_time& reference);

/// True for tokens that can participate in a temporal phrase; used to
/// carve temporal suffixes off object phrases during extraction.
bool temporal_vocab_token(std::string_view folded_token);

}  // namespace atant
