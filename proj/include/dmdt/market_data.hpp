#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmdt/dmd.hpp"
#include "dmdt/types.hpp"

namespace dmdt {

struct OhlcRow {
    std::string date;  // ISO YYYY-MM-DD
    double open = 0, high = 0, low = 0, close = 0, adj_close = 0;
    long long volume = 0;
};

/// One ticker's daily bars, dates strictly ascending.
struct TickerSeries {
    std::string symbol;
    std::vector<OhlcRow> rows;
};

/// Column layout of a ticker CSV. Defaults to the classic Yahoo export:
/// Date,Open,High,Low,Close,Adj Close,Volume with ISO dates and a header row.
struct CsvSchema {
    bool has_header = true;
    std::string date_format = "%Y-%m-%d";
    int date_col = 0;
    int open_col = 1;
    int high_col = 2;
    int low_col = 3;
    int close_col = 4;
    int adj_close_col = 5;
    int volume_col = 6;
};

/// Parses one ticker CSV. Rows come back sorted ascending by date even when
/// the file is in Yahoo's descending order. Throws DataError on malformed
/// rows (with line number), non-positive prices, or duplicate dates.
TickerSeries load_ticker_csv(const std::string& path, const std::string& symbol,
                             const CsvSchema& schema = {});

enum class PriceField { Open, High, Low, Close, AdjClose };

PriceField price_field_from_name(const std::string& name);
std::string price_field_name(PriceField field);

enum class AlignmentPolicy {
    Intersection,  // calendar = dates present in every series
    ForwardFill,   // calendar = union of dates; gaps carry the last value
};

/// All tickers on one shared trading calendar.
struct PricePanel {
    std::vector<std::string> symbols;   // N, input order preserved
    std::vector<std::string> calendar;  // T, ascending ISO dates
    RealMatrix prices;                  // N x T
    std::optional<int> benchmark_row;

    int tickers() const { return static_cast<int>(symbols.size()); }
    int days() const { return static_cast<int>(calendar.size()); }
};

/// Aligns the series on a common calendar and extracts one price field.
/// Under ForwardFill a gap before a ticker's first date is a coverage error.
/// `benchmark_symbol`, when found among the series, marks that row.
PricePanel build_panel(const std::vector<TickerSeries>& series,
                       PriceField field = PriceField::AdjClose,
                       AlignmentPolicy policy = AlignmentPolicy::Intersection,
                       const std::string& benchmark_symbol = "");

/// Restricts a series to dates in [start, end] (both optional, inclusive).
TickerSeries clip_series(const TickerSeries& s, const std::string& start,
                         const std::string& end);

/// The `length` columns ending at `end_index` (inclusive), dt = 1 trading day.
SnapshotWindow make_window(const PricePanel& panel, int end_index, int length);

}  // namespace dmdt
