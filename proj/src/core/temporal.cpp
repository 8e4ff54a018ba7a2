#include "core/temporal.hpp"

#include <array>
#include <cctype>
#include <regex>
#include <vector>

#include "core/text.hpp"

namespace atant {

using namespace std::chrono;

std::string_view to_string(temporal_kind k) {
    switch (k) {
        case temporal_kind::absolute: return "absolute";
        case temporal_kind::relative: return "relative";
        case temporal_kind::sequence: return "sequence";
        case temporal_kind::none: break;
    }
    return "none";
}

std::string_view to_string(temporal_direction d) {
    switch (d) {
        case temporal_direction::past: return "past";
        case temporal_direction::future: return "future";
        case temporal_direction::present: return "present";
        case temporal_direction::none: break;
    }
    return "none";
}

std::optional<temporal_kind> temporal_kind_from(std::string_view s) {
    if (s == "absolute") return temporal_kind::absolute;
    if (s == "relative") return temporal_kind::relative;
    if (s == "sequence") return temporal_kind::sequence;
    if (s == "none") return temporal_kind::none;
    return std::nullopt;
}

std::optional<temporal_direction> temporal_direction_from(std::string_view s) {
    if (s == "past") return temporal_direction::past;
    if (s == "future") return temporal_direction::future;
    if (s == "present") return temporal_direction::present;
    if (s == "none") return temporal_direction::none;
    return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, 7> kWeekdays = {
    "sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"};

constexpr std::array<std::string_view, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

int weekday_index(std::string_view tok) {
    for (size_t i = 0; i < kWeekdays.size(); ++i)
        if (tok == kWeekdays[i]) return static_cast<int>(i);
    return -1;
}

int month_index(std::string_view tok) {
    for (size_t i = 0; i < kMonths.size(); ++i)
        if (tok == kMonths[i]) return static_cast<int>(i) + 1;
    return -1;
}

std::optional<int> number_token(std::string_view tok) {
    static constexpr std::array<std::string_view, 12> words = {
        "one", "two", "three", "four", "five", "six",
        "seven", "eight", "nine", "ten", "eleven", "twelve"};
    if (tok == "a" || tok == "an") return 1;
    for (size_t i = 0; i < words.size(); ++i)
        if (tok == words[i]) return static_cast<int>(i) + 1;
    if (tok.empty() || tok.size() > 4) return std::nullopt;
    int v = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return v;
}

year_month_day clamp_ymd(year y, month m, day d) {
    year_month_day ymd{y, m, d};
    if (!ymd.ok()) ymd = y / m / last;
    return ymd;
}

year_month_day add_months(year_month_day base, int n) {
    year_month ym = base.year() / base.month();
    ym += months{n};
    return clamp_ymd(ym.year(), ym.month(), base.day());
}

// "3pm", "10:30am", "15:00", "at 7" is not accepted without am/pm.
std::optional<seconds> find_time_of_day(const std::string& norm) {
    static const std::regex ampm(R"((?:^| )(\d{1,2})(?::(\d{2}))? ?(am|pm)(?: |$))");
    static const std::regex h24(R"((?:^| )(\d{1,2}):(\d{2})(?: |$))");
    std::smatch m;
    if (std::regex_search(norm, m, ampm)) {
        int h = std::stoi(m[1].str());
        int mi = m[2].matched ? std::stoi(m[2].str()) : 0;
        if (h > 12 || mi > 59) return std::nullopt;
        if (m[3].str() == "pm" && h != 12) h += 12;
        if (m[3].str() == "am" && h == 12) h = 0;
        return hours{h} + minutes{mi};
    }
    if (std::regex_search(norm, m, h24)) {
        int h = std::stoi(m[1].str());
        int mi = std::stoi(m[2].str());
        if (h > 23 || mi > 59) return std::nullopt;
        return hours{h} + minutes{mi};
    }
    return std::nullopt;
}

}  // namespace

temporal_resolution resolve_temporal(std::string_view expression, const sim_time& reference) {
    temporal_resolution out;
    std::vector<std::string> toks = text::tokenize(expression);
    if (toks.empty()) return out;
    std::string norm = text::join(toks);

    year_month_day ref_date = reference.local_date();
    std::optional<seconds> tod = find_time_of_day(norm);

    auto finish = [&](year_month_day date, temporal_kind kind) {
        out.kind = kind;
        out.resolved = make_sim_time(date, tod.value_or(seconds{0}), reference.utc_offset);
        sys_days resolved_day{date};
        sys_days ref_day{ref_date};
        if (resolved_day == ref_day)
            out.direction = temporal_direction::present;
        else if (resolved_day > ref_day)
            out.direction = temporal_direction::future;
        else
            out.direction = temporal_direction::past;
        return out;
    };

    // ISO date. Tokenization splits on '-', so scan the raw expression.
    {
        static const std::regex iso(R"((\d{4})-(\d{2})-(\d{2}))");
        std::string raw(expression);
        std::smatch m;
        if (std::regex_search(raw, m, iso)) {
            year_month_day ymd{year{std::stoi(m[1].str())},
                               month{static_cast<unsigned>(std::stoi(m[2].str()))},
                               day{static_cast<unsigned>(std::stoi(m[3].str()))}};
            if (ymd.ok()) return finish(ymd, temporal_kind::absolute);
        }
    }

    // Month-name dates: "june 3", "june 3rd 2026".
    for (size_t i = 0; i < toks.size(); ++i) {
        int mo = month_index(toks[i]);
        if (mo < 0 || i + 1 >= toks.size()) continue;
        std::string daytok = toks[i + 1];
        for (const char* sfx : {"st", "nd", "rd", "th"}) {
            if (daytok.size() > 2 && daytok.ends_with(sfx)) {
                daytok.resize(daytok.size() - 2);
                break;
            }
        }
        auto dnum = number_token(daytok);
        if (!dnum || *dnum < 1 || *dnum > 31) continue;
        int yr = static_cast<int>(ref_date.year());
        if (i + 2 < toks.size() && toks[i + 2].size() == 4) {
            if (auto ynum = number_token(toks[i + 2]); ynum && *ynum >= 1000) yr = *ynum;
        }
        year_month_day ymd{year{yr}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(*dnum)}};
        if (ymd.ok()) return finish(ymd, temporal_kind::absolute);
    }

    // Day-relative words.
    for (const auto& t : toks) {
        if (t == "yesterday")
            return finish(year_month_day{sys_days{ref_date} - days{1}}, temporal_kind::relative);
        if (t == "today" || t == "tonight")
            return finish(ref_date, temporal_kind::relative);
        if (t == "tomorrow")
            return finish(year_month_day{sys_days{ref_date} + days{1}}, temporal_kind::relative);
    }

    // Weekdays, optionally qualified.
    for (size_t i = 0; i < toks.size(); ++i) {
        int wd = weekday_index(toks[i]);
        if (wd < 0) continue;
        std::string qual = i > 0 ? toks[i - 1] : "";
        int ref_wd = static_cast<int>(reference.local_weekday().c_encoding());
        int delta;
        if (qual == "next") {
            delta = ((wd - ref_wd + 6) % 7) + 1;  // strictly after
        } else if (qual == "last") {
            delta = -(((ref_wd - wd + 6) % 7) + 1);  // strictly before
        } else {
            delta = (wd - ref_wd + 7) % 7;  // "this" or bare: today counts
        }
        return finish(year_month_day{sys_days{ref_date} + days{delta}}, temporal_kind::relative);
    }

    // "in N days/weeks/months"
    for (size_t i = 0; i + 2 < toks.size() + 0u; ++i) {
        if (toks[i] != "in" || i + 2 >= toks.size()) continue;
        auto n = number_token(toks[i + 1]);
        if (!n) continue;
        const std::string& unit = toks[i + 2];
        if (unit == "day" || unit == "days")
            return finish(year_month_day{sys_days{ref_date} + days{*n}}, temporal_kind::relative);
        if (unit == "week" || unit == "weeks")
            return finish(year_month_day{sys_days{ref_date} + days{7 * *n}}, temporal_kind::relative);
        if (unit == "month" || unit == "months")
            return finish(add_months(ref_date, *n), temporal_kind::relative);
    }

    // "N days/weeks/months ago"
    for (size_t i = 0; i + 2 < toks.size(); ++i) {
        auto n = number_token(toks[i]);
        if (!n || toks[i + 2] != "ago") continue;
        const std::string& unit = toks[i + 1];
        if (unit == "day" || unit == "days")
            return finish(year_month_day{sys_days{ref_date} - days{*n}}, temporal_kind::relative);
        if (unit == "week" || unit == "weeks")
            return finish(year_month_day{sys_days{ref_date} - days{7 * *n}}, temporal_kind::relative);
        if (unit == "month" || unit == "months")
            return finish(add_months(ref_date, -*n), temporal_kind::relative);
    }

    // "last/next week/month"
    for (size_t i = 0; i + 1 < toks.size(); ++i) {
        int sign = toks[i] == "next" ? 1 : toks[i] == "last" ? -1 : 0;
        if (sign == 0) continue;
        if (toks[i + 1] == "week")
            return finish(year_month_day{sys_days{ref_date} + days{7 * sign}},
                          temporal_kind::relative);
        if (toks[i + 1] == "month")
            return finish(add_months(ref_date, sign), temporal_kind::relative);
    }

    // Sequence anchors, start-anchored after optional "right"/"just".
    {
        size_t i = 0;
        while (i < toks.size() && (toks[i] == "right" || toks[i] == "just")) ++i;
        if (i < toks.size()) {
            temporal_direction dir = temporal_direction::none;
            size_t skip = 1;
            if (toks[i] == "after" || toks[i] == "following") {
                dir = temporal_direction::future;
            } else if (toks[i] == "before") {
                dir = temporal_direction::past;
            } else if (toks[i] == "prior" && i + 1 < toks.size() && toks[i + 1] == "to") {
                dir = temporal_direction::past;
                skip = 2;
            }
            if (dir != temporal_direction::none && i + skip < toks.size()) {
                out.kind = temporal_kind::sequence;
                out.direction = dir;
                std::vector<std::string> rest(toks.begin() + static_cast<long>(i + skip),
                                              toks.end());
                out.reference_phrase = text::join(rest);
                return out;
            }
        }
    }

    return out;
}

bool temporal_vocab_token(std::string_view tok) {
    if (weekday_index(tok) >= 0 || month_index(tok) >= 0) return true;
    static constexpr std::array<std::string_view, 22> words = {
        "yesterday", "today", "tonight", "tomorrow", "last", "this", "next",
        "in",        "on",    "at",      "ago",      "day",  "days", "week",
        "weeks",     "month", "months",  "am",       "pm",   "a",    "an", "the"};
    for (auto w : words)
        if (tok == w) return true;
    // digits, ordinals (3rd), clock forms (3pm); tokenize already split ':'
    bool has_digit = false;
    for (char c : tok) {
        if (std::isdigit(static_cast<unsigned char>(c))) has_digit = true;
    }
    if (!has_digit) return false;
    static const std::regex shape(R"(^\d{1,4}(st|nd|rd|th|am|pm)?$)");
    return std::regex_match(std::string(tok), shape);
}

}  // namespace atant
