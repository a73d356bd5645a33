#pragma once
// Date literals: DATBIN (UNIX timestamp + binning) and DATFEAT (calendar
// feature entities). Proleptic Gregorian calendar throughout.

#include "literal_forge/binning.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace lforge {

struct CalendarDate {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    /// 1..4
    unsigned quarter() const { return (month + 2) / 3; }
    /// 0 = Sunday .. 6 = Saturday
    unsigned weekday() const;
    std::string_view weekday_name() const;
    /// ISO form, e.g. "1607-01-24" or "-0044-03-15".
    std::string iso() const;

    friend bool operator==(const CalendarDate&, const CalendarDate&) = default;
    friend auto operator<=>(const CalendarDate&, const CalendarDate&) = default;
};

bool valid_date(int year, unsigned month, unsigned day);

/// Parses xsd:date, xsd:dateTime (truncated to its date), xsd:gYearMonth
/// (day 1) and xsd:gYear (January 1). Timezones are accepted and ignored.
/// Any other datatype accepts whichever of these shapes matches. On failure
/// returns nullopt and fills `error`.
std::optional<CalendarDate> parse_date(std::string_view lexical, std::string_view datatype, std::string& error);
std::optional<CalendarDate> parse_date(std::string_view lexical,
                                       std::string_view datatype = "http://www.w3.org/2001/XMLSchema#date");

/// Seconds since 1970-01-01T00:00:00Z at midnight UTC of the date.
std::int64_t to_unix_timestamp(const CalendarDate& date);

/// {weekday name, day<D>, month<M>, quarter<Q>, year<Y>}.
std::array<std::string, 5> datfeat(const CalendarDate& date);

struct DatfeatSettings {
    /// dayN nextDay dayN+1, monthN nextMonth monthN+1, monthN inQuarter quarterQ.
    bool calendar_links = true;
    /// yearA nextYear yearB between consecutive distinct years in use.
    bool year_chain = false;
};

inline constexpr std::string_view kNextDay = "nextDay";
inline constexpr std::string_view kNextMonth = "nextMonth";
inline constexpr std::string_view kInQuarter = "inQuarter";
inline constexpr std::string_view kNextYear = "nextYear";

/// Timestamps of parseable dates binned with the numeric machinery; dates
/// that do not parse are linked with TRANSFORM and counted as fallbacks.
Augmentation datbin(const GroupInput& in, const BinningSpec& spec, const LofSettings& lof = {});

/// Five feature links per parseable date. Calendar structure (when enabled)
/// goes into `structural`; distinct years are listed in details["years"].
Augmentation emit_datfeat_triples(const GroupInput& in, const DatfeatSettings& settings = {});

/// The fixed day/month/quarter skeleton.
std::vector<Triple> calendar_structure(const Minter& minter);

/// Chain over the given years in ascending order.
std::vector<Triple> year_chain(const Minter& minter, const std::set<int>& years);

}  // namespace lforge
