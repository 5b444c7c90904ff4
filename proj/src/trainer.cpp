#include "dmdt/trainer.hpp"

#include <cmath>
#include <string>

#include "dmdt/dmd.hpp"
#include "dmdt/errors.hpp"

namespace dmdt {

namespace {

constexpr double kFlatTolerance = 1e-9;

Direction classify(double forecast, double today) {
    const double diff = forecast - today;
    if (std::abs(diff) <= kFlatTolerance) return Direction::Flat;
    return diff > 0 ? Direction::Up : Direction::Down;
}

void score_day(const PricePanel& panel, const std::vector<Direction>& signal, int day,
               int horizon, CellStats& stats) {
    for (int n = 0; n < panel.tickers(); ++n) {
        if (signal[n] == Direction::Flat) continue;
        const double now = panel.prices(n, day);
        const double later = panel.prices(n, day + horizon);
        if (later == now) continue;  // realized flat: not an up or a down
        const bool went_up = later > now;
        const bool said_up = signal[n] == Direction::Up;
        stats.total += 1;
        if (went_up == said_up) stats.correct += 1;
    }
}

}  // namespace

void validate(const GridSpec& spec) {
    if (spec.m_min < 2)
        throw ValidationError("grid spec: sampling windows must be >= 2 days");
    if (spec.m_max < spec.m_min || spec.l_max < spec.l_min || spec.l_min < 1)
        throw ValidationError("grid spec: empty or inverted m/l range");
}

std::vector<Direction> directional_signal(const PricePanel& panel, int day, int sample_days,
                                          int horizon, const RankPolicy& policy) {
    if (horizon < 1) throw ValidationError("directional_signal: horizon must be >= 1");
    const SnapshotWindow window = make_window(panel, day, sample_days);
    const DmdModel model = fit(window, policy);
    const RealVector forecast = predict(model, horizon);

    std::vector<Direction> out(panel.tickers());
    for (int n = 0; n < panel.tickers(); ++n)
        out[n] = classify(forecast(n), panel.prices(n, day));
    return out;
}

CellStats evaluate_cell(const PricePanel& panel, int sample_days, int horizon, DaySpan span,
                        const RankPolicy& policy) {
    if (span.first < 0 || span.last >= panel.days() || span.first > span.last)
        throw ValidationError("evaluate_cell: span outside panel");

    CellStats stats;
    const int t_begin = span.first + sample_days - 1;
    const int t_end = span.last - horizon;
    for (int t = t_begin; t <= t_end; ++t) {
        const auto signal = directional_signal(panel, t, sample_days, horizon, policy);
        score_day(panel, signal, t, horizon, stats);
    }
    return stats;
}

const CellStats& SuccessGrid::cell(int m, int l) const {
    return cells[(m - spec.m_min) * spec.l_count() + (l - spec.l_min)];
}

CellStats& SuccessGrid::cell(int m, int l) {
    return cells[(m - spec.m_min) * spec.l_count() + (l - spec.l_min)];
}

bool SuccessGrid::has_valid_cell() const {
    for (const auto& c : cells)
        if (c.valid()) return true;
    return false;
}

SuccessGrid train_grid(const PricePanel& panel, const GridSpec& spec, DaySpan span) {
    validate(spec);
    if (span.first < 0 || span.last >= panel.days() || span.first > span.last)
        throw ValidationError("train_grid: span outside panel");
    if (span.length() < spec.m_min + spec.l_min + 1)
        throw ValidationError("train_grid: span of " + std::to_string(span.length()) +
                              " days cannot score even the smallest cell (needs " +
                              std::to_string(spec.m_min + spec.l_min + 1) + ")");

    SuccessGrid grid;
    grid.spec = spec;
    grid.span = span;
    grid.span_start_date = panel.calendar[span.first];
    grid.span_end_date = panel.calendar[span.last];
    grid.cells.assign(static_cast<size_t>(spec.m_count()) * spec.l_count(), CellStats{});

    // One fit serves every horizon sharing the same (m, t) window; the
    // resulting counts are identical to per-cell evaluate_cell calls.
    std::vector<Direction> signal(panel.tickers());
    for (int m = spec.m_min; m <= spec.m_max; ++m) {
        const int t_begin = span.first + m - 1;
        const int t_end = span.last - spec.l_min;
        for (int t = t_begin; t <= t_end; ++t) {
            const DmdModel model = fit(make_window(panel, t, m), spec.rank_policy);
            for (int l = spec.l_min; l <= spec.l_max; ++l) {
                if (t + l > span.last) break;
                const RealVector forecast = predict(model, l);
                for (int n = 0; n < panel.tickers(); ++n)
                    signal[n] = classify(forecast(n), panel.prices(n, t));
                score_day(panel, signal, t, l, grid.cell(m, l));
            }
        }
    }
    return grid;
}

std::optional<Hotspot> find_hotspot(const SuccessGrid& grid, double threshold) {
    const GridSpec& spec = grid.spec;
    bool found = false;
    int best_m = 0, best_l = 0;
    double best_rate = -1.0;
    for (int m = spec.m_min; m <= spec.m_max; ++m) {
        for (int l = spec.l_min; l <= spec.l_max; ++l) {
            const CellStats& c = grid.cell(m, l);
            if (!c.valid()) continue;
            if (!found || c.rate() > best_rate) {
                found = true;
                best_rate = c.rate();
                best_m = m;
                best_l = l;
            }
        }
    }
    if (!found) return std::nullopt;

    double sum = 0.0;
    int count = 0;
    for (int m = best_m - 1; m <= best_m + 1; ++m) {
        for (int l = best_l - 1; l <= best_l + 1; ++l) {
            if (!spec.contains(m, l)) continue;
            const CellStats& c = grid.cell(m, l);
            if (!c.valid()) continue;
            sum += c.rate();
            count += 1;
        }
    }

    Hotspot spot;
    spot.m = best_m;
    spot.l = best_l;
    spot.center_rate = best_rate;
    spot.neighborhood_mean = sum / count;
    spot.qualified = spot.neighborhood_mean > threshold;
    return spot;
}

}  // namespace dmdt
