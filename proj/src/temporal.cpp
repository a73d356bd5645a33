#include "literal_forge/temporal.hpp"

#include "literal_forge/baselines.hpp"

#include <chrono>
#include <cstdio>

namespace lforge {

namespace {

constexpr std::string_view kWeekdays[] = {"sunday", "monday", "tuesday", "wednesday",
                                          "thursday", "friday", "saturday"};

std::chrono::year_month_day to_ymd(const CalendarDate& d) {
    return std::chrono::year_month_day{std::chrono::year{d.year}, std::chrono::month{d.month},
                                       std::chrono::day{d.day}};
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class DateScanner {
public:
    explicit DateScanner(std::string_view s) : s_(s) {}

    bool at_end() const { return pos_ >= s_.size(); }
    bool peek(char c) const { return !at_end() && s_[pos_] == c; }
    bool take(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    // exactly `n` digits, or at least `n` when `at_least`
    bool digits(std::size_t n, long& value, bool at_least = false) {
        std::size_t start = pos_;
        while (!at_end() && is_digit(s_[pos_]) && (at_least || pos_ - start < n)) ++pos_;
        std::size_t len = pos_ - start;
        if (len < n || len > 9) return false;
        value = 0;
        for (std::size_t i = start; i < pos_; ++i) value = value * 10 + (s_[i] - '0');
        return true;
    }

    bool timezone() {
        if (at_end()) return true;
        if (take('Z')) return at_end();
        if (!take('+') && !take('-')) return false;
        long hh = 0, mm = 0;
        if (!digits(2, hh) || !take(':') || !digits(2, mm)) return false;
        return at_end() && (hh < 14 || (hh == 14 && mm == 0)) && mm < 60;
    }

    bool time_of_day() {
        long hh = 0, mm = 0, ss = 0;
        if (!digits(2, hh) || !take(':') || !digits(2, mm) || !take(':') || !digits(2, ss)) return false;
        if (take('.')) {
            std::size_t start = pos_;
            while (!at_end() && is_digit(s_[pos_])) ++pos_;
            if (pos_ == start) return false;
        }
        if (hh == 24) return mm == 0 && ss == 0;
        return hh < 24 && mm < 60 && ss < 60;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

enum class Shape { Year, YearMonth, Date, DateTime, Any };

Shape shape_for(std::string_view datatype) {
    if (!datatype.starts_with(vocab::xsd)) return Shape::Any;
    auto local = datatype.substr(vocab::xsd.size());
    if (local == "date") return Shape::Date;
    if (local == "dateTime" || local == "dateTimeStamp") return Shape::DateTime;
    if (local == "gYearMonth") return Shape::YearMonth;
    if (local == "gYear") return Shape::Year;
    return Shape::Any;
}

}  // namespace

bool valid_date(int year, unsigned month, unsigned day) {
    if (year < -32767 || year > 32767) return false;
    return std::chrono::year_month_day{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}}.ok();
}

unsigned CalendarDate::weekday() const {
    return std::chrono::weekday{std::chrono::sys_days{to_ymd(*this)}}.c_encoding();
}

std::string_view CalendarDate::weekday_name() const { return kWeekdays[weekday()]; }

std::string CalendarDate::iso() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%04d-%02u-%02u", year < 0 ? "-" : "", year < 0 ? -year : year, month, day);
    return buf;
}

std::optional<CalendarDate> parse_date(std::string_view lexical, std::string_view datatype, std::string& error) {
    error.clear();
    while (!lexical.empty() && (lexical.front() == ' ' || lexical.front() == '\t')) lexical.remove_prefix(1);
    while (!lexical.empty() && (lexical.back() == ' ' || lexical.back() == '\t')) lexical.remove_suffix(1);

    Shape shape = shape_for(datatype);
    DateScanner scan(lexical);
    bool negative = scan.take('-');
    long year = 0, month = 1, day = 1;
    if (!scan.digits(4, year, true)) {
        error = "invalid year in \"" + std::string(lexical) + "\"";
        return std::nullopt;
    }
    bool has_month = false, has_day = false, has_time = false;
    if (scan.take('-')) {
        has_month = scan.digits(2, month);
        if (has_month && scan.take('-')) has_day = scan.digits(2, day);
        if (!has_month || (!has_day && scan.peek('-'))) {
            error = "malformed date \"" + std::string(lexical) + "\"";
            return std::nullopt;
        }
    }
    if (has_day && scan.take('T')) {
        has_time = scan.time_of_day();
        if (!has_time) {
            error = "malformed time in \"" + std::string(lexical) + "\"";
            return std::nullopt;
        }
    }
    if (!scan.timezone()) {
        error = "trailing characters in \"" + std::string(lexical) + "\"";
        return std::nullopt;
    }

    bool shape_ok = false;
    switch (shape) {
        case Shape::Year: shape_ok = !has_month; break;
        case Shape::YearMonth: shape_ok = has_month && !has_day; break;
        case Shape::Date: shape_ok = has_day && !has_time; break;
        case Shape::DateTime: shape_ok = has_time; break;
        case Shape::Any: shape_ok = true; break;
    }
    if (!shape_ok) {
        error = "\"" + std::string(lexical) + "\" does not match its datatype";
        return std::nullopt;
    }
    int y = static_cast<int>(negative ? -year : year);
    if (month < 1 || month > 12 || !valid_date(y, static_cast<unsigned>(month), static_cast<unsigned>(day))) {
        error = "invalid calendar date \"" + std::string(lexical) + "\"";
        return std::nullopt;
    }
    return CalendarDate{y, static_cast<unsigned>(month), static_cast<unsigned>(day)};
}

std::optional<CalendarDate> parse_date(std::string_view lexical, std::string_view datatype) {
    std::string error;
    return parse_date(lexical, datatype, error);
}

std::int64_t to_unix_timestamp(const CalendarDate& date) {
    auto days = std::chrono::sys_days{to_ymd(date)}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 86400;
}

std::array<std::string, 5> datfeat(const CalendarDate& date) {
    return {std::string(date.weekday_name()), "day" + std::to_string(date.day), "month" + std::to_string(date.month),
            "quarter" + std::to_string(date.quarter()), "year" + std::to_string(date.year)};
}

namespace {

// Parses every statement; failures are linked with TRANSFORM.
template <class OnDate>
void for_each_date(const GroupInput& in, Augmentation& out, OnDate&& on_date) {
    const Term predicate = in.predicate();
    std::string error;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const Term& value = in.value(i);
        auto date = value.is_literal() ? parse_date(value.value, value.datatype, error) : std::nullopt;
        if (!date) {
            out.link({in.subject(i), predicate, transform_entity(in, value)});
            ++out.fallback_statements;
            ++failed;
            continue;
        }
        on_date(i, *date);
    }
    if (failed > 0)
        out.warnings.push_back(in.predicate_iri() + ": " + std::to_string(failed) +
                               " unparseable date(s) linked with TRANSFORM");
}

}  // namespace

Augmentation datbin(const GroupInput& in, const BinningSpec& spec, const LofSettings& lof) {
    spec.validate();
    Augmentation out;
    BinnedPopulation population;
    for_each_date(in, out, [&](std::size_t i, const CalendarDate& date) {
        population.statements.push_back(i);
        population.values.push_back(static_cast<double>(to_unix_timestamp(date)));
    });
    Augmentation binned = bin_population(in, std::move(population), spec, lof, in.stem());
    nlohmann::json details = std::move(binned.details);
    out.append(std::move(binned));
    out.details = std::move(details);
    return out;
}

Augmentation emit_datfeat_triples(const GroupInput& in, const DatfeatSettings& settings) {
    Augmentation out;
    const Term predicate = in.predicate();
    std::set<int> years;
    for_each_date(in, out, [&](std::size_t i, const CalendarDate& date) {
        for (const auto& feature : datfeat(date)) out.link({in.subject(i), predicate, in.minter.entity(feature)});
        years.insert(date.year);
    });
    if (settings.calendar_links && out.statements.size() > out.fallback_statements)
        out.structural = calendar_structure(in.minter);
    if (settings.year_chain)
        for (auto& t : year_chain(in.minter, years)) out.structural.push_back(std::move(t));
    out.details = {{"years", years}, {"distinct_years", years.size()}};
    return out;
}

std::vector<Triple> calendar_structure(const Minter& minter) {
    std::vector<Triple> out;
    const Term next_day = minter.entity(kNextDay);
    const Term next_month = minter.entity(kNextMonth);
    const Term in_quarter = minter.entity(kInQuarter);
    for (unsigned d = 1; d < 31; ++d)
        out.push_back({minter.entity("day" + std::to_string(d)), next_day, minter.entity("day" + std::to_string(d + 1))});
    for (unsigned m = 1; m <= 12; ++m) {
        Term month = minter.entity("month" + std::to_string(m));
        if (m < 12) out.push_back({month, next_month, minter.entity("month" + std::to_string(m + 1))});
        out.push_back({month, in_quarter, minter.entity("quarter" + std::to_string((m + 2) / 3))});
    }
    return out;
}

std::vector<Triple> year_chain(const Minter& minter, const std::set<int>& years) {
    std::vector<Triple> out;
    const Term next_year = minter.entity(kNextYear);
    for (auto it = years.begin(); it != years.end() && std::next(it) != years.end(); ++it)
        out.push_back({minter.entity("year" + std::to_string(*it)), next_year,
                       minter.entity("year" + std::to_string(*std::next(it)))});
    return out;
}

}  // namespace lforge
