#include "dmdt/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "dmdt/errors.hpp"

namespace dmdt {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw NumericalError("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string format_money(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    if (ec != std::errc()) throw NumericalError("format_money: conversion failed");
    return std::string(buf, ptr);
}

void write_success_grid_csv(std::ostream& os, const SuccessGrid& grid) {
    os << "m,l,success_rate,n_predictions\n";
    for (int m = grid.spec.m_min; m <= grid.spec.m_max; ++m) {
        for (int l = grid.spec.l_min; l <= grid.spec.l_max; ++l) {
            const CellStats& c = grid.cell(m, l);
            os << m << ',' << l << ',';
            if (c.valid()) os << format_double(c.rate());
            os << ',' << c.total << '\n';
        }
    }
}

void write_hotspot_json(std::ostream& os, const std::optional<Hotspot>& spot) {
    json j;
    if (spot) {
        j["found"] = true;
        j["center_m"] = spot->m;
        j["center_l"] = spot->l;
        j["center_rate"] = spot->center_rate;
        j["neighborhood_mean"] = spot->neighborhood_mean;
        j["qualified"] = spot->qualified;
    } else {
        j["found"] = false;
        j["reason"] = "no valid cells";
    }
    os << j.dump(2) << '\n';
}

void write_equity_csv(std::ostream& os, const std::vector<std::string>& calendar,
                      const std::vector<double>& strategy,
                      const std::vector<double>& benchmark,
                      const std::vector<double>& holdings) {
    os << "date,strategy,benchmark,holdings\n";
    for (size_t t = 0; t < calendar.size(); ++t) {
        os << calendar[t] << ',' << format_money(strategy[t]) << ',';
        if (!benchmark.empty()) os << format_money(benchmark[t]);
        os << ',';
        if (!holdings.empty()) os << format_money(holdings[t]);
        os << '\n';
    }
}

namespace {

const char* action_name(LedgerAction a) {
    switch (a) {
        case LedgerAction::Open: return "open";
        case LedgerAction::Close: return "close";
        case LedgerAction::Hold: return "hold";
    }
    return "hold";
}

}  // namespace

void write_ledger_csv(std::ostream& os, const TradeLedger& ledger) {
    os << "day,date,action,symbol,direction,shares,price,cash_delta,cost\n";
    for (const LedgerEntry& e : ledger.entries) {
        os << e.day << ',' << e.date << ',' << action_name(e.action) << ',' << e.symbol << ',';
        if (e.action == LedgerAction::Hold)
            os << ",0,0.00,0.00,0.00\n";
        else
            os << (e.direction == Side::Long ? "long" : "short") << ','
               << format_double(e.shares) << ',' << format_money(e.price) << ','
               << format_money(e.cash_delta) << ',' << format_money(e.cost) << '\n';
    }
}

void write_window_hist_csv(std::ostream& os, const WindowHistogram& hist) {
    os << "value,count,kind\n";
    for (const auto& [m, count] : hist.sampling) os << m << ',' << count << ",sampling\n";
    for (const auto& [l, count] : hist.prediction) os << l << ',' << count << ",prediction\n";
}

namespace {

json grid_to_json(const GridSpec& spec) {
    json j;
    j["m_min"] = spec.m_min;
    j["m_max"] = spec.m_max;
    j["l_min"] = spec.l_min;
    j["l_max"] = spec.l_max;
    switch (spec.rank_policy.mode) {
        case RankPolicy::Mode::Full:
            j["rank_policy"] = {{"mode", "full"}};
            break;
        case RankPolicy::Mode::Fixed:
            j["rank_policy"] = {{"mode", "fixed"}, {"k", spec.rank_policy.fixed_rank}};
            break;
        case RankPolicy::Mode::Threshold:
            j["rank_policy"] = {{"mode", "threshold"}, {"epsilon", spec.rank_policy.epsilon}};
            break;
    }
    return j;
}

}  // namespace

void write_report_json(std::ostream& os, const BacktestReport& report) {
    const BacktestConfig& c = report.config;
    json j;
    j["config"]["algorithm"] = algorithm_name(c.algorithm);
    j["config"]["initial_capital"] = c.initial_capital;
    j["config"]["cost_per_position"] = c.cost_per_position;
    j["config"]["entry_mode"] = c.entry_mode == EntryMode::Cohort ? "cohort" : "cycle";
    j["config"]["allow_short"] = c.allow_short;
    j["config"]["charge_exit_cost"] = c.charge_exit_cost;
    j["config"]["trade_benchmark"] = c.trade_benchmark;
    if (c.algorithm == Algorithm::Fixed) {
        j["config"]["m"] = c.sample_days;
        j["config"]["l"] = c.horizon;
    } else {
        j["config"]["lookback"] = c.lookback;
        j["config"]["grid"] = grid_to_json(c.grid);
        if (c.algorithm == Algorithm::HotspotGated)
            j["config"]["hotspot_threshold"] = c.hotspot_threshold;
    }

    j["final_equity"] = report.final_equity;
    j["annualized_return"] = report.annualized_return;
    j["participation_rate"] = report.participation_rate;
    j["days_opened"] = report.days_opened;
    j["days_eligible"] = report.days_eligible;

    if (c.algorithm != Algorithm::Fixed) {
        json sampling = json::object();
        for (const auto& [m, count] : report.window_hist.sampling)
            sampling[std::to_string(m)] = count;
        json prediction = json::object();
        for (const auto& [l, count] : report.window_hist.prediction)
            prediction[std::to_string(l)] = count;
        j["window_histograms"] = {{"sampling", sampling}, {"prediction", prediction}};
    }
    os << j.dump(2) << '\n';
}

void write_energies_csv(std::ostream& os, const DmdModel& model) {
    const SpectrumSummary summary = spectrum_summary(model);
    os << "k,sigma_k,fraction\n";
    for (int k = 0; k < model.svd_rank; ++k)
        os << (k + 1) << ',' << format_double(model.sigma_spectrum(k)) << ','
           << format_double(summary.energy_fractions[k]) << '\n';
}

void write_eigenvalues_csv(std::ostream& os, const DmdModel& model) {
    os << "k,re_omega,im_omega,abs_mu\n";
    for (int k = 0; k < model.rank; ++k)
        os << (k + 1) << ',' << format_double(model.rates(k).real()) << ','
           << format_double(model.rates(k).imag()) << ','
           << format_double(std::abs(model.eigenvalues(k))) << '\n';
}

void write_modes_csv(std::ostream& os, const DmdModel& model,
                     const std::vector<std::string>& symbols) {
    os << "symbol";
    for (int k = 1; k <= model.rank; ++k) os << ",mode" << k << "_re,mode" << k << "_im";
    os << '\n';
    for (int n = 0; n < model.companies(); ++n) {
        os << symbols[n];
        for (int k = 0; k < model.rank; ++k)
            os << ',' << format_double(model.modes(n, k).real()) << ','
               << format_double(model.modes(n, k).imag());
        os << '\n';
    }
}

void write_rate_hist_csv(std::ostream& os, const SpectrumSummary& summary) {
    os << "bin_lo,bin_hi,count\n";
    for (size_t b = 0; b + 1 < summary.hist_edges.size(); ++b)
        os << format_double(summary.hist_edges[b]) << ','
           << format_double(summary.hist_edges[b + 1]) << ','
           << summary.rate_magnitude_hist[b] << '\n';
}

}  // namespace dmdt
