#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmdt/linalg.hpp"
#include "dmdt/market_data.hpp"

namespace dmdt {

/// Search space for the (sampling window, prediction horizon) grid.
struct GridSpec {
    int m_min = 2;   // sampling windows, in days; DMD needs >= 2 snapshots
    int m_max = 25;
    int l_min = 1;   // prediction horizons, in days
    int l_max = 10;
    RankPolicy rank_policy = RankPolicy::threshold(1e-10);

    int m_count() const { return m_max - m_min + 1; }
    int l_count() const { return l_max - l_min + 1; }
    bool contains(int m, int l) const {
        return m >= m_min && m <= m_max && l >= l_min && l <= l_max;
    }
};

void validate(const GridSpec& spec);

enum class Direction { Up, Down, Flat };

/// Per-company forecast direction at day `day`: fit the last `sample_days`
/// snapshots, predict `horizon` days ahead, and compare with today's price.
/// Forecasts within 1e-9 of today's price count as Flat.
std::vector<Direction> directional_signal(const PricePanel& panel, int day, int sample_days,
                                          int horizon, const RankPolicy& policy);

/// Inclusive range of panel day indices.
struct DaySpan {
    int first = 0;
    int last = 0;
    int length() const { return last - first + 1; }
};

/// Directional hit counts for one (m, l) cell. A cell with no scored
/// predictions is invalid, not zero.
struct CellStats {
    long long correct = 0;
    long long total = 0;
    bool valid() const { return total > 0; }
    double rate() const { return static_cast<double>(correct) / static_cast<double>(total); }
};

/// Scores cell (m, l) over every day whose sampling window and realized
/// horizon both lie inside `span`. Flat forecasts and exactly-zero realized
/// moves are excluded from both counts.
CellStats evaluate_cell(const PricePanel& panel, int sample_days, int horizon, DaySpan span,
                        const RankPolicy& policy);

/// Success-rate surface over the grid.
struct SuccessGrid {
    GridSpec spec;
    std::vector<CellStats> cells;  // row-major: m outer, l inner
    DaySpan span;
    std::string span_start_date;
    std::string span_end_date;

    const CellStats& cell(int m, int l) const;
    CellStats& cell(int m, int l);
    bool has_valid_cell() const;
};

/// Evaluates every cell of `spec` over `span`. Equivalent to calling
/// evaluate_cell per cell; sampling-window fits are shared across horizons.
SuccessGrid train_grid(const PricePanel& panel, const GridSpec& spec, DaySpan span);

/// The grid's best cell and its 3x3 neighborhood test.
struct Hotspot {
    int m = 0;
    int l = 0;
    double center_rate = 0.0;
    double neighborhood_mean = 0.0;
    bool qualified = false;
};

/// Finds the valid cell with the highest success rate (ties: smaller m,
/// then smaller l) and averages the valid cells of its 3x3 neighborhood.
/// Qualified iff that mean strictly exceeds `threshold`. Returns nullopt
/// when the grid has no valid cell at all.
std::optional<Hotspot> find_hotspot(const SuccessGrid& grid, double threshold = 0.53);

}  // namespace dmdt
