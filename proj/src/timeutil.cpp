#include "rumor/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "rumor/errors.hpp"

namespace rumor {

namespace {

int read_digits(std::string_view text, std::size_t pos, std::size_t count) {
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + count, value);
    if (ec != std::errc{} || ptr != first + count)
        throw DataError("bad timestamp '" + std::string(text) + "'");
    return value;
}

}  // namespace

Timestamp parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    // 2016-07-22T16:22:00Z
    // 0123456789012345678
    if (text.size() < 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':')
        throw DataError("bad timestamp '" + std::string(text) + "'");
    const std::string_view zone = text.substr(19);
    if (zone != "Z" && zone != "+00:00")
        throw DataError("timestamp must be UTC: '" + std::string(text) + "'");

    const year_month_day ymd{year{read_digits(text, 0, 4)},
                             month{static_cast<unsigned>(read_digits(text, 5, 2))},
                             day{static_cast<unsigned>(read_digits(text, 8, 2))}};
    const int hh = read_digits(text, 11, 2);
    const int mm = read_digits(text, 14, 2);
    const int ss = read_digits(text, 17, 2);
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60)
        throw DataError("timestamp out of range '" + std::string(text) + "'");
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

std::string format_iso8601(Timestamp t) {
    using namespace std::chrono;
    const auto day_start = floor<days>(t);
    const year_month_day ymd{day_start};
    const hh_mm_ss hms{t - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

}  // namespace rumor
