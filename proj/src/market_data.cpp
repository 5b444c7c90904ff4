#include "dmdt/market_data.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "dmdt/dates.hpp"
#include "dmdt/errors.hpp"

namespace dmdt {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_price(const std::string& raw, const std::string& path, size_t line_no,
                   const char* field) {
    const std::string s = trim(raw);
    size_t used = 0;
    double value = 0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(line_no) + ": cannot parse " + field +
                        " value '" + s + "'");
    }
    if (used != s.size())
        throw DataError(path + ":" + std::to_string(line_no) + ": trailing junk in " + field +
                        " value '" + s + "'");
    return value;
}

std::string parse_date_field(const std::string& raw, const std::string& format,
                             const std::string& path, size_t line_no) {
    const std::string s = trim(raw);
    if (format == "%Y-%m-%d") {
        if (!is_iso_date(s))
            throw DataError(path + ":" + std::to_string(line_no) + ": bad date '" + s + "'");
        return s;
    }
    std::tm tm = {};
    std::istringstream ss(s);
    ss >> std::get_time(&tm, format.c_str());
    if (ss.fail())
        throw DataError(path + ":" + std::to_string(line_no) + ": date '" + s +
                        "' does not match format " + format);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday);
    if (!is_iso_date(buf))
        throw DataError(path + ":" + std::to_string(line_no) + ": date '" + s +
                        "' is not a valid calendar day");
    return buf;
}

double field_of(const OhlcRow& row, PriceField field) {
    switch (field) {
        case PriceField::Open: return row.open;
        case PriceField::High: return row.high;
        case PriceField::Low: return row.low;
        case PriceField::Close: return row.close;
        case PriceField::AdjClose: return row.adj_close;
    }
    return row.adj_close;
}

}  // namespace

PriceField price_field_from_name(const std::string& name) {
    if (name == "open") return PriceField::Open;
    if (name == "high") return PriceField::High;
    if (name == "low") return PriceField::Low;
    if (name == "close") return PriceField::Close;
    if (name == "adj_close") return PriceField::AdjClose;
    throw ValidationError("unknown price field '" + name +
                          "' (expected open|high|low|close|adj_close)");
}

std::string price_field_name(PriceField field) {
    switch (field) {
        case PriceField::Open: return "open";
        case PriceField::High: return "high";
        case PriceField::Low: return "low";
        case PriceField::Close: return "close";
        case PriceField::AdjClose: return "adj_close";
    }
    return "adj_close";
}

TickerSeries load_ticker_csv(const std::string& path, const std::string& symbol,
                             const CsvSchema& schema) {
    std::ifstream file(path);
    if (!file) throw DataError("cannot open ticker CSV: " + path);

    const int max_col = std::max({schema.date_col, schema.open_col, schema.high_col,
                                  schema.low_col, schema.close_col, schema.adj_close_col,
                                  schema.volume_col});

    TickerSeries out;
    out.symbol = symbol;
    std::string line;
    size_t line_no = 0;
    bool skipped_header = !schema.has_header;
    while (std::getline(file, line)) {
        ++line_no;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        if (trim(line).empty()) continue;

        const auto cols = split_csv_line(line);
        if (static_cast<int>(cols.size()) <= max_col)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected at least " +
                            std::to_string(max_col + 1) + " columns, got " +
                            std::to_string(cols.size()));

        OhlcRow row;
        row.date = parse_date_field(cols[schema.date_col], schema.date_format, path, line_no);
        row.open = parse_price(cols[schema.open_col], path, line_no, "open");
        row.high = parse_price(cols[schema.high_col], path, line_no, "high");
        row.low = parse_price(cols[schema.low_col], path, line_no, "low");
        row.close = parse_price(cols[schema.close_col], path, line_no, "close");
        row.adj_close = parse_price(cols[schema.adj_close_col], path, line_no, "adj close");
        row.volume = static_cast<long long>(
            parse_price(cols[schema.volume_col], path, line_no, "volume"));

        for (double p : {row.open, row.high, row.low, row.close, row.adj_close})
            if (!(p > 0.0))
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": non-positive price for " + row.date);
        out.rows.push_back(std::move(row));
    }
    if (out.rows.empty()) throw DataError(path + ": no data rows");

    std::sort(out.rows.begin(), out.rows.end(),
              [](const OhlcRow& a, const OhlcRow& b) { return a.date < b.date; });
    for (size_t i = 1; i < out.rows.size(); ++i)
        if (out.rows[i].date == out.rows[i - 1].date)
            throw DataError(path + ": duplicate date " + out.rows[i].date);
    return out;
}

TickerSeries clip_series(const TickerSeries& s, const std::string& start,
                         const std::string& end) {
    TickerSeries out;
    out.symbol = s.symbol;
    for (const auto& row : s.rows) {
        if (!start.empty() && row.date < start) continue;
        if (!end.empty() && row.date > end) continue;
        out.rows.push_back(row);
    }
    return out;
}

PricePanel build_panel(const std::vector<TickerSeries>& series, PriceField field,
                       AlignmentPolicy policy, const std::string& benchmark_symbol) {
    if (series.empty()) throw ValidationError("build_panel: no ticker series given");
    for (const auto& s : series)
        if (s.rows.empty())
            throw DataError("build_panel: ticker " + s.symbol + " has no rows in range");

    std::vector<std::string> calendar;
    if (policy == AlignmentPolicy::Intersection) {
        std::map<std::string, size_t> hits;
        for (const auto& s : series)
            for (const auto& row : s.rows) hits[row.date] += 1;
        for (const auto& [date, count] : hits)
            if (count == series.size()) calendar.push_back(date);
        if (calendar.empty()) {
            std::string detail = "build_panel: calendars have empty intersection;";
            for (const auto& s : series)
                detail += " " + s.symbol + "[" + s.rows.front().date + ".." +
                          s.rows.back().date + " x" + std::to_string(s.rows.size()) + "]";
            throw DataError(detail);
        }
    } else {
        std::set<std::string> all;
        for (const auto& s : series)
            for (const auto& row : s.rows) all.insert(row.date);
        calendar.assign(all.begin(), all.end());
        for (const auto& s : series)
            if (s.rows.front().date > calendar.front())
                throw DataError("build_panel: ticker " + s.symbol + " starts " +
                                s.rows.front().date + ", after calendar start " +
                                calendar.front() + " (start gaps cannot be forward-filled)");
    }

    PricePanel panel;
    panel.calendar = calendar;
    panel.prices.resize(static_cast<int>(series.size()), static_cast<int>(calendar.size()));

    for (size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        panel.symbols.push_back(s.symbol);
        size_t src = 0;
        double last = 0.0;
        for (size_t t = 0; t < calendar.size(); ++t) {
            while (src < s.rows.size() && s.rows[src].date < calendar[t]) {
                last = field_of(s.rows[src], field);
                ++src;
            }
            if (src < s.rows.size() && s.rows[src].date == calendar[t]) {
                last = field_of(s.rows[src], field);
                ++src;
            }
            panel.prices(static_cast<int>(i), static_cast<int>(t)) = last;
        }
    }

    if (!benchmark_symbol.empty()) {
        for (size_t i = 0; i < panel.symbols.size(); ++i)
            if (panel.symbols[i] == benchmark_symbol)
                panel.benchmark_row = static_cast<int>(i);
    }
    if (panel.days() < 2) throw DataError("build_panel: aligned calendar has fewer than 2 days");
    return panel;
}

SnapshotWindow make_window(const PricePanel& panel, int end_index, int length) {
    if (length < 2)
        throw ValidationError("make_window: window length must be >= 2, got " +
                              std::to_string(length));
    if (end_index < 0 || end_index >= panel.days())
        throw ValidationError("make_window: end index " + std::to_string(end_index) +
                              " outside panel of " + std::to_string(panel.days()) + " days");
    const int start = end_index - length + 1;
    if (start < 0)
        throw ValidationError("make_window: insufficient history for a " +
                              std::to_string(length) + "-day window ending at day " +
                              std::to_string(end_index));

    SnapshotWindow w;
    w.data = panel.prices.middleCols(start, length);
    w.dt = 1.0;
    w.start_index = start;
    return w;
}

}  // namespace dmdt
