#include "dmdt/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dmdt/errors.hpp"

namespace dmdt {

namespace {

struct OpenPosition {
    int company = 0;
    Side direction = Side::Long;
    double shares = 0.0;
    double entry_price = 0.0;
    double committed = 0.0;  // dollars reserved at entry
    int entry_day = 0;
    int exit_day = 0;
};

double mark_value(const OpenPosition& p, double price) {
    if (p.direction == Side::Long) return p.shares * price;
    return p.committed + p.shares * (p.entry_price - price);
}

/// Day-ordered trading engine. The algorithms differ only in when trading
/// starts and which (m, l) cell a day uses, supplied by `choose`.
template <typename ChooseCell>
BacktestReport run_engine(const PricePanel& panel, const BacktestConfig& config,
                          int start_day, int min_horizon, bool record_hist,
                          ChooseCell&& choose) {
    const int days = panel.days();
    const int last_entry_day = days - 1 - min_horizon;
    if (start_day > last_entry_day)
        throw ValidationError("backtest: panel has no eligible trading days (needs more than " +
                              std::to_string(start_day + min_horizon + 1) + ")");

    BacktestReport report;
    report.config = config;

    double cash = config.initial_capital;
    std::vector<OpenPosition> open;
    TradeLedger& ledger = report.ledger;
    ledger.equity_curve.assign(days, 0.0);

    const double cost = config.cost_per_position;
    const double exit_cost = config.charge_exit_cost ? cost : 0.0;

    for (int t = 0; t < days; ++t) {
        // Close positions whose horizon ends today, in opening order.
        size_t kept = 0;
        for (size_t i = 0; i < open.size(); ++i) {
            const OpenPosition& p = open[i];
            if (p.exit_day != t) {
                open[kept++] = open[i];
                continue;
            }
            const double exit_price = panel.prices(p.company, t);
            const double proceeds = p.direction == Side::Long
                                        ? p.shares * exit_price
                                        : p.committed + p.shares * (p.entry_price - exit_price);
            cash += proceeds - exit_cost;
            ledger.entries.push_back({t, panel.calendar[t], LedgerAction::Close,
                                      panel.symbols[p.company], p.direction, p.shares,
                                      exit_price, proceeds, exit_cost});
        }
        open.resize(kept);

        const bool free_to_open = t >= start_day && t <= last_entry_day &&
                                  (config.entry_mode == EntryMode::Cohort || open.empty());
        if (free_to_open) {
            report.days_eligible += 1;
            bool opened = false;

            const std::optional<std::pair<int, int>> cell = choose(t);
            if (cell && t + cell->second <= days - 1) {
                const auto [m, l] = *cell;
                const auto signal =
                    directional_signal(panel, t, m, l, config.grid.rank_policy);

                std::vector<int> tradeable;
                for (int n = 0; n < panel.tickers(); ++n) {
                    if (signal[n] == Direction::Flat) continue;
                    if (!config.trade_benchmark && panel.benchmark_row &&
                        *panel.benchmark_row == n)
                        continue;
                    if (!config.allow_short && signal[n] == Direction::Down) continue;
                    tradeable.push_back(n);
                }

                if (!tradeable.empty()) {
                    double equity_now = cash;
                    for (const auto& p : open) equity_now += mark_value(p, panel.prices(p.company, t));
                    const double gross = config.entry_mode == EntryMode::Cycle
                                             ? cash
                                             : std::min(equity_now / l, cash);
                    const double n_pos = static_cast<double>(tradeable.size());
                    const double principal = gross - n_pos * cost;
                    if (principal > 0.0) {
                        const double per_company = principal / n_pos;
                        for (int n : tradeable) {
                            const double price = panel.prices(n, t);
                            OpenPosition p;
                            p.company = n;
                            p.direction = signal[n] == Direction::Up ? Side::Long : Side::Short;
                            p.shares = per_company / price;
                            p.entry_price = price;
                            p.committed = per_company;
                            p.entry_day = t;
                            p.exit_day = t + l;
                            open.push_back(p);
                            cash += -per_company - cost;
                            ledger.entries.push_back({t, panel.calendar[t], LedgerAction::Open,
                                                      panel.symbols[n], p.direction, p.shares,
                                                      price, -per_company, cost});
                        }
                        opened = true;
                        if (record_hist) {
                            report.window_hist.sampling[m] += 1;
                            report.window_hist.prediction[l] += 1;
                        }
                    }
                }
            }

            if (opened) {
                report.days_opened += 1;
            } else {
                ledger.entries.push_back({t, panel.calendar[t], LedgerAction::Hold, "",
                                          Side::Long, 0.0, 0.0, 0.0, 0.0});
            }
        }

        double equity = cash;
        for (const auto& p : open) equity += mark_value(p, panel.prices(p.company, t));
        ledger.equity_curve[t] = equity;
    }

    report.final_equity = ledger.equity_curve.back();
    report.equity_curve = ledger.equity_curve;
    report.annualized_return = annualize(report.equity_curve);
    report.participation_rate =
        report.days_eligible > 0
            ? static_cast<double>(report.days_opened) / report.days_eligible
            : 0.0;

    const BenchmarkCurves curves = benchmark_curves(panel, config);
    report.benchmark_curve = curves.benchmark;
    report.holdings_curve = curves.holdings;
    return report;
}

}  // namespace

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "fixed") return Algorithm::Fixed;
    if (name == "sliding_max") return Algorithm::SlidingMax;
    if (name == "hotspot_gated") return Algorithm::HotspotGated;
    throw ValidationError("unknown algorithm '" + name +
                          "' (expected fixed|sliding_max|hotspot_gated)");
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Fixed: return "fixed";
        case Algorithm::SlidingMax: return "sliding_max";
        case Algorithm::HotspotGated: return "hotspot_gated";
    }
    return "fixed";
}

void validate(const BacktestConfig& config) {
    if (!(config.initial_capital > 0.0))
        throw ValidationError("backtest config: initial capital must be positive");
    if (config.cost_per_position < 0.0)
        throw ValidationError("backtest config: cost per position must be >= 0");
    if (config.algorithm == Algorithm::Fixed) {
        if (config.sample_days < 2)
            throw ValidationError("backtest config: sampling window must be >= 2 days");
        if (config.horizon < 1)
            throw ValidationError("backtest config: horizon must be >= 1 day");
    } else {
        validate(config.grid);
        if (config.lookback < config.grid.m_max + config.grid.l_max + 1)
            throw ValidationError("backtest config: lookback must be >= max m + max l + 1 = " +
                                  std::to_string(config.grid.m_max + config.grid.l_max + 1));
    }
}

BacktestReport run_fixed(const PricePanel& panel, const BacktestConfig& config) {
    validate(config);
    const int m = config.sample_days;
    const int l = config.horizon;
    return run_engine(panel, config, m - 1, l, /*record_hist=*/false,
                      [&](int) { return std::optional<std::pair<int, int>>({m, l}); });
}

BacktestReport run_sliding_max(const PricePanel& panel, const BacktestConfig& config) {
    validate(config);
    return run_engine(panel, config, config.lookback, config.grid.l_min,
                      /*record_hist=*/true,
                      [&](int t) -> std::optional<std::pair<int, int>> {
                          const SuccessGrid grid = train_grid(
                              panel, config.grid, {t - config.lookback, t - 1});
                          const auto spot = find_hotspot(grid, config.hotspot_threshold);
                          if (!spot) return std::nullopt;
                          return std::pair<int, int>{spot->m, spot->l};
                      });
}

BacktestReport run_hotspot_gated(const PricePanel& panel, const BacktestConfig& config) {
    validate(config);
    return run_engine(panel, config, config.lookback, config.grid.l_min,
                      /*record_hist=*/true,
                      [&](int t) -> std::optional<std::pair<int, int>> {
                          const SuccessGrid grid = train_grid(
                              panel, config.grid, {t - config.lookback, t - 1});
                          const auto spot = find_hotspot(grid, config.hotspot_threshold);
                          if (!spot || !spot->qualified) return std::nullopt;
                          return std::pair<int, int>{spot->m, spot->l};
                      });
}

BacktestReport run_backtest(const PricePanel& panel, const BacktestConfig& config) {
    switch (config.algorithm) {
        case Algorithm::Fixed: return run_fixed(panel, config);
        case Algorithm::SlidingMax: return run_sliding_max(panel, config);
        case Algorithm::HotspotGated: return run_hotspot_gated(panel, config);
    }
    throw ValidationError("backtest: unknown algorithm");
}

BenchmarkCurves benchmark_curves(const PricePanel& panel, const BacktestConfig& config) {
    const int days = panel.days();
    BenchmarkCurves out;

    if (panel.benchmark_row) {
        const int b = *panel.benchmark_row;
        const double base = panel.prices(b, 0);
        const double invested = config.initial_capital - config.cost_per_position;
        out.benchmark.resize(days);
        for (int t = 0; t < days; ++t)
            out.benchmark[t] = invested * panel.prices(b, t) / base;
    }

    std::vector<int> held;
    for (int n = 0; n < panel.tickers(); ++n) {
        if (!config.trade_benchmark && panel.benchmark_row && *panel.benchmark_row == n)
            continue;
        held.push_back(n);
    }
    if (held.empty()) throw ValidationError("benchmark_curves: no holdable tickers in universe");

    const double n_held = static_cast<double>(held.size());
    const double per_ticker = (config.initial_capital - n_held * config.cost_per_position) / n_held;
    out.holdings.assign(days, 0.0);
    for (int n : held) {
        const double base = panel.prices(n, 0);
        for (int t = 0; t < days; ++t)
            out.holdings[t] += per_ticker * panel.prices(n, t) / base;
    }
    return out;
}

double annualize(const std::vector<double>& equity_curve) {
    if (equity_curve.size() < 2)
        throw ValidationError("annualize: need at least 2 equity points");
    for (double v : equity_curve)
        if (!(v > 0.0)) throw NumericalError("annualize: non-positive equity value");
    const double ratio = equity_curve.back() / equity_curve.front();
    const double years = static_cast<double>(equity_curve.size()) / 252.0;
    return std::pow(ratio, 1.0 / years) - 1.0;
}

}  // namespace dmdt
