#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmdt/market_data.hpp"
#include "dmdt/trainer.hpp"

namespace dmdt {

enum class Algorithm { Fixed, SlidingMax, HotspotGated };
enum class EntryMode {
    Cohort,  // open a new position batch daily; equity split across horizons
    Cycle,   // commit full equity, wait flat before re-entering
};

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm a);

struct BacktestConfig {
    double initial_capital = 1'000'000.0;
    double cost_per_position = 8.0;
    Algorithm algorithm = Algorithm::Fixed;
    int sample_days = 11;            // m, Fixed only
    int horizon = 5;                 // l, Fixed only
    int lookback = 100;              // training days, adaptive algorithms
    double hotspot_threshold = 0.53; // HotspotGated only
    GridSpec grid;                   // adaptive cell search space + rank policy
    EntryMode entry_mode = EntryMode::Cohort;
    bool allow_short = true;
    bool charge_exit_cost = true;    // cost per position at close as well as open
    bool trade_benchmark = false;    // benchmark row tradeable when true
};

void validate(const BacktestConfig& config);

enum class LedgerAction { Open, Close, Hold };
enum class Side { Long, Short };

/// One ledger row. `cash_delta` is the principal cash movement of the row
/// (negative when capital is committed); `cost` is the fee charged on top,
/// so cash evolves as cash += cash_delta - cost.
struct LedgerEntry {
    int day = 0;
    std::string date;
    LedgerAction action = LedgerAction::Hold;
    std::string symbol;
    Side direction = Side::Long;
    double shares = 0.0;
    double price = 0.0;
    double cash_delta = 0.0;
    double cost = 0.0;
};

struct TradeLedger {
    std::vector<LedgerEntry> entries;
    std::vector<double> equity_curve;  // marked to market, one value per panel day
};

struct WindowHistogram {
    std::map<int, int> sampling;    // chosen m -> days traded
    std::map<int, int> prediction;  // chosen l -> days traded
};

struct BacktestReport {
    BacktestConfig config;
    double final_equity = 0.0;
    double annualized_return = 0.0;
    double participation_rate = 0.0;  // days opened / days free to open
    int days_opened = 0;
    int days_eligible = 0;
    std::vector<double> equity_curve;
    std::vector<double> benchmark_curve;  // empty when panel has no benchmark row
    std::vector<double> holdings_curve;
    WindowHistogram window_hist;  // adaptive algorithms only
    TradeLedger ledger;
};

/// Trades a fixed (m, l) pair every eligible day.
BacktestReport run_fixed(const PricePanel& panel, const BacktestConfig& config);

/// From day `lookback` on, retrains the grid daily over the trailing
/// `lookback` days and trades the best cell.
BacktestReport run_sliding_max(const PricePanel& panel, const BacktestConfig& config);

/// As run_sliding_max, but only trades when the best cell's 3x3
/// neighborhood mean clears the hot-spot threshold.
BacktestReport run_hotspot_gated(const PricePanel& panel, const BacktestConfig& config);

/// Dispatches on config.algorithm.
BacktestReport run_backtest(const PricePanel& panel, const BacktestConfig& config);

struct BenchmarkCurves {
    std::vector<double> benchmark;  // buy-and-hold of the benchmark row
    std::vector<double> holdings;   // equal-dollar buy-and-hold of the traded universe
};

BenchmarkCurves benchmark_curves(const PricePanel& panel, const BacktestConfig& config);

/// Compound annual growth: (final/initial)^(252/days) - 1.
double annualize(const std::vector<double>& equity_curve);

}  // namespace dmdt
