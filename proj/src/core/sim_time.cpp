#include "core/sim_time.hpp"

#include <cstdio>

namespace atant {

using namespace std::chrono;

year_month_day sim_time::local_date() const {
    auto local = sys_seconds{local_seconds_since_epoch()};
    return year_month_day{floor<days>(local)};
}

weekday sim_time::local_weekday() const {
    auto local = sys_seconds{local_seconds_since_epoch()};
    return weekday{floor<days>(local)};
}

namespace {

bool read_digits(std::string_view s, size_t& i, int count, int& out) {
    int value = 0;
    for (int k = 0; k < count; ++k) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9') return false;
        value = value * 10 + (s[i] - '0');
        ++i;
    }
    out = value;
    return true;
}

bool expect(std::string_view s, size_t& i, char c) {
    if (i >= s.size() || s[i] != c) return false;
    ++i;
    return true;
}

}  // namespace

std::optional<sim_time> parse_sim_time(std::string_view s) {
    size_t i = 0;
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    if (!read_digits(s, i, 4, y)) return std::nullopt;
    if (!expect(s, i, '-')) return std::nullopt;
    if (!read_digits(s, i, 2, mo)) return std::nullopt;
    if (!expect(s, i, '-')) return std::nullopt;
    if (!read_digits(s, i, 2, d)) return std::nullopt;
    if (i >= s.size() || (s[i] != 'T' && s[i] != ' ')) return std::nullopt;
    ++i;
    if (!read_digits(s, i, 2, h)) return std::nullopt;
    if (!expect(s, i, ':')) return std::nullopt;
    if (!read_digits(s, i, 2, mi)) return std::nullopt;
    if (i < s.size() && s[i] == ':') {
        ++i;
        if (!read_digits(s, i, 2, se)) return std::nullopt;
    }
    if (i >= s.size()) return std::nullopt;

    seconds offset{0};
    if (s[i] == 'Z' || s[i] == 'z') {
        ++i;
    } else if (s[i] == '+' || s[i] == '-') {
        int sign = s[i] == '-' ? -1 : 1;
        ++i;
        int oh = 0, om = 0;
        if (!read_digits(s, i, 2, oh)) return std::nullopt;
        if (i < s.size() && s[i] == ':') ++i;
        if (!read_digits(s, i, 2, om)) return std::nullopt;
        if (oh > 14 || om > 59) return std::nullopt;
        offset = seconds{sign * (oh * 3600 + om * 60)};
    } else {
        return std::nullopt;
    }
    if (i != s.size()) return std::nullopt;

    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    if (h > 23 || mi > 59 || se > 60) return std::nullopt;

    seconds local = sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{se};
    sim_time t;
    t.utc_offset = offset;
    t.instant = sys_seconds{local - offset};
    return t;
}

std::string to_iso(const sim_time& t) {
    seconds local = t.local_seconds_since_epoch();
    auto dp = floor<days>(sys_seconds{local});
    year_month_day ymd{dp};
    auto tod = local - dp.time_since_epoch();
    int h = static_cast<int>(duration_cast<hours>(tod).count());
    int mi = static_cast<int>(duration_cast<minutes>(tod).count() % 60);
    int se = static_cast<int>(tod.count() % 60);

    char buf[40];
    int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d",
                          static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                          static_cast<unsigned>(ymd.day()), h, mi, se);
    std::string out(buf, static_cast<size_t>(n));
    if (t.utc_offset == seconds{0}) {
        out += 'Z';
    } else {
        long total = t.utc_offset.count();
        char sign = total < 0 ? '-' : '+';
        if (total < 0) total = -total;
        std::snprintf(buf, sizeof buf, "%c%02ld:%02ld", sign, total / 3600, (total / 60) % 60);
        out += buf;
    }
    return out;
}

sim_time make_sim_time(year_month_day local_day, seconds time_of_day, seconds utc_offset) {
    sim_time t;
    t.utc_offset = utc_offset;
    seconds local = sys_days{local_day}.time_since_epoch() + time_of_day;
    t.instant = sys_seconds{local - utc_offset};
    return t;
}

std::string wall_clock_iso() {
    sim_time t;
    t.instant = floor<seconds>(system_clock::now());
    return to_iso(t);
}

}  // namespace atant
