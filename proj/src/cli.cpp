#include "dmdt/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmdt/backtest.hpp"
#include "dmdt/dmd.hpp"
#include "dmdt/errors.hpp"
#include "dmdt/market_data.hpp"
#include "dmdt/report_io.hpp"
#include "dmdt/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dmdt {

namespace {

constexpr const char* kVersion = "1.0.0";

struct RunConfig {
    std::string universe_path;
    std::string start_date;
    std::string end_date;
    PriceField price_field = PriceField::AdjClose;
    std::string out_dir = "out";
    long seed = 0;  // reserved for fixture generators; no runtime effect
    BacktestConfig backtest;
    std::string decompose_end_date;  // empty: last panel day
    int decompose_m = 0;             // 0: unset
};

RankPolicy rank_policy_from_json(const json& j) {
    const std::string mode = j.value("mode", "threshold");
    if (mode == "full") return RankPolicy::full();
    if (mode == "fixed") {
        if (!j.contains("k")) throw ValidationError("rank_policy: fixed mode needs \"k\"");
        return RankPolicy::fixed(j.at("k").get<int>());
    }
    if (mode == "threshold") return RankPolicy::threshold(j.value("epsilon", 1e-10));
    throw ValidationError("rank_policy: unknown mode '" + mode + "'");
}

RunConfig load_run_config(const std::string& path) {
    RunConfig config;
    if (path.empty()) return config;

    std::ifstream file(path);
    if (!file) throw DataError("cannot open config file: " + path);
    json j;
    try {
        file >> j;
    } catch (const json::parse_error& e) {
        throw DataError("config " + path + ": " + e.what());
    }

    config.universe_path = j.value("universe", "");
    config.start_date = j.value("start_date", "");
    config.end_date = j.value("end_date", "");
    if (j.contains("price_field"))
        config.price_field = price_field_from_name(j.at("price_field").get<std::string>());
    config.out_dir = j.value("out_dir", "out");
    config.seed = j.value("seed", 0L);

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        config.backtest.grid.m_min = g.value("m_min", 2);
        config.backtest.grid.m_max = g.value("m_max", 25);
        config.backtest.grid.l_min = g.value("l_min", 1);
        config.backtest.grid.l_max = g.value("l_max", 10);
        if (g.contains("rank_policy"))
            config.backtest.grid.rank_policy = rank_policy_from_json(g.at("rank_policy"));
    }

    if (j.contains("backtest")) {
        const json& b = j.at("backtest");
        BacktestConfig& bt = config.backtest;
        bt.initial_capital = b.value("initial_capital", bt.initial_capital);
        bt.cost_per_position = b.value("cost_per_position", bt.cost_per_position);
        if (b.contains("algorithm"))
            bt.algorithm = algorithm_from_name(b.at("algorithm").get<std::string>());
        bt.sample_days = b.value("m", bt.sample_days);
        bt.horizon = b.value("l", bt.horizon);
        bt.lookback = b.value("lookback", bt.lookback);
        bt.hotspot_threshold = b.value("hotspot_threshold", bt.hotspot_threshold);
        if (b.contains("entry_mode")) {
            const std::string mode = b.at("entry_mode").get<std::string>();
            if (mode == "cohort") bt.entry_mode = EntryMode::Cohort;
            else if (mode == "cycle") bt.entry_mode = EntryMode::Cycle;
            else throw ValidationError("backtest config: unknown entry_mode '" + mode + "'");
        }
        bt.allow_short = b.value("allow_short", bt.allow_short);
        bt.charge_exit_cost = b.value("charge_exit_cost", bt.charge_exit_cost);
        bt.trade_benchmark = b.value("trade_benchmark", bt.trade_benchmark);
    }

    if (j.contains("decompose")) {
        const json& d = j.at("decompose");
        config.decompose_end_date = d.value("end_date", "");
        config.decompose_m = d.value("m", 0);
    }
    return config;
}

struct Universe {
    struct Entry {
        std::string symbol;
        std::string path;
    };
    std::vector<Entry> tickers;
    std::string benchmark = "SPY";
};

Universe load_universe(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw DataError("cannot open universe file: " + path);
    json j;
    try {
        file >> j;
    } catch (const json::parse_error& e) {
        throw DataError("universe " + path + ": " + e.what());
    }

    Universe u;
    if (!j.contains("tickers") || !j.at("tickers").is_array() || j.at("tickers").empty())
        throw DataError("universe " + path + ": needs a non-empty \"tickers\" array");
    const fs::path base = fs::path(path).parent_path();
    for (const json& t : j.at("tickers")) {
        Universe::Entry e;
        e.symbol = t.at("symbol").get<std::string>();
        fs::path p = t.at("path").get<std::string>();
        e.path = p.is_absolute() ? p.string() : (base / p).string();
        u.tickers.push_back(std::move(e));
    }
    u.benchmark = j.value("benchmark", "SPY");
    return u;
}

PricePanel load_panel(const RunConfig& config) {
    if (config.universe_path.empty())
        throw ValidationError("no universe file given (config key \"universe\")");
    const Universe u = load_universe(config.universe_path);

    std::vector<TickerSeries> series;
    series.reserve(u.tickers.size());
    for (const auto& t : u.tickers) {
        TickerSeries s = load_ticker_csv(t.path, t.symbol);
        s = clip_series(s, config.start_date, config.end_date);
        if (s.rows.empty())
            throw DataError("ticker " + t.symbol + " has no data in the requested range");
        series.push_back(std::move(s));
    }
    return build_panel(series, config.price_field, AlignmentPolicy::Intersection, u.benchmark);
}

std::string benchmark_symbol_of(const RunConfig& config) {
    return load_universe(config.universe_path).benchmark;
}

/// Collects artifacts and only leaves them on disk when every one of them
/// was written; a failed run removes its partial output.
class ArtifactWriter {
public:
    explicit ArtifactWriter(const fs::path& dir) : dir_(dir) {
        std::error_code ec;
        created_dir_ = fs::create_directories(dir_, ec);
        if (ec) throw DataError("cannot create output directory " + dir_.string());
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path target = dir_ / name;
        std::ofstream out(target, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write artifact " + target.string());
        out << content;
        out.close();
        if (!out) throw DataError("failed writing artifact " + target.string());
        written_.push_back(target);
    }

    void discard() {
        std::error_code ec;
        for (const fs::path& p : written_) fs::remove(p, ec);
        if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
    }

private:
    fs::path dir_;
    bool created_dir_ = false;
    std::vector<fs::path> written_;
};

int panel_index_of_date(const PricePanel& panel, const std::string& iso) {
    // Last trading day on or before the requested date.
    int idx = -1;
    for (int t = 0; t < panel.days(); ++t)
        if (panel.calendar[t] <= iso) idx = t;
    if (idx < 0)
        throw ValidationError("date " + iso + " precedes the panel start " + panel.calendar[0]);
    return idx;
}

void cmd_decompose(const RunConfig& config) {
    if (config.decompose_m < 2)
        throw ValidationError("decompose: sampling window --m must be given and >= 2");

    const PricePanel panel = load_panel(config);
    const int end_index = config.decompose_end_date.empty()
                              ? panel.days() - 1
                              : panel_index_of_date(panel, config.decompose_end_date);

    const SnapshotWindow window = make_window(panel, end_index, config.decompose_m);
    const DmdModel model = fit(window, config.backtest.grid.rank_policy);
    const SpectrumSummary summary = spectrum_summary(model);

    ArtifactWriter writer(config.out_dir);
    try {
        std::ostringstream energies, eigenvalues, modes, hist;
        write_energies_csv(energies, model);
        write_eigenvalues_csv(eigenvalues, model);
        write_modes_csv(modes, model, panel.symbols);
        write_rate_hist_csv(hist, summary);
        writer.write("energies.csv", energies.str());
        writer.write("eigenvalues.csv", eigenvalues.str());
        writer.write("modes.csv", modes.str());
        writer.write("rate_hist.csv", hist.str());
    } catch (...) {
        writer.discard();
        throw;
    }
}

void cmd_train(const RunConfig& config) {
    const PricePanel panel = load_panel(config);
    const DaySpan span{0, panel.days() - 1};
    const SuccessGrid grid = train_grid(panel, config.backtest.grid, span);
    const auto spot = find_hotspot(grid, config.backtest.hotspot_threshold);

    ArtifactWriter writer(config.out_dir);
    try {
        std::ostringstream grid_csv, hotspot;
        write_success_grid_csv(grid_csv, grid);
        write_hotspot_json(hotspot, spot);
        writer.write("success_grid.csv", grid_csv.str());
        writer.write("hotspot.json", hotspot.str());
    } catch (...) {
        writer.discard();
        throw;
    }
}

void cmd_backtest(const RunConfig& config) {
    const PricePanel panel = load_panel(config);
    if (!panel.benchmark_row)
        throw ValidationError("benchmark symbol '" + benchmark_symbol_of(config) +
                              "' not found in the universe");

    const BacktestReport report = run_backtest(panel, config.backtest);

    ArtifactWriter writer(config.out_dir);
    try {
        std::ostringstream report_json, equity, ledger;
        write_report_json(report_json, report);
        write_equity_csv(equity, panel.calendar, report.equity_curve, report.benchmark_curve,
                         report.holdings_curve);
        write_ledger_csv(ledger, report.ledger);
        writer.write("report.json", report_json.str());
        writer.write("equity.csv", equity.str());
        writer.write("ledger.csv", ledger.str());
        if (config.backtest.algorithm != Algorithm::Fixed) {
            std::ostringstream hist;
            write_window_hist_csv(hist, report.window_hist);
            writer.write("window_hist.csv", hist.str());
        }
    } catch (...) {
        writer.discard();
        throw;
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"DMD portfolio decomposition, hot-spot training, and trading backtests"};
    app.require_subcommand(1);

    std::string config_path, out_dir, algorithm, price_field, end_date;
    int m = 0, l = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--price-field", price_field, "open|high|low|close|adj_close");
    };

    CLI::App* decompose = app.add_subcommand("decompose", "write spectrum artifacts for one window");
    add_common(decompose);
    decompose->add_option("--m", m, "sampling window length in days");
    decompose->add_option("--end-date", end_date, "window end date (default: last panel day)");

    CLI::App* train = app.add_subcommand("train", "score the (m,l) grid and report the hot-spot");
    add_common(train);

    CLI::App* backtest = app.add_subcommand("backtest", "simulate a trading algorithm");
    add_common(backtest);
    backtest->add_option("--algorithm", algorithm, "fixed|sliding_max|hotspot_gated");
    backtest->add_option("--m", m, "sampling window (fixed algorithm)");
    backtest->add_option("--l", l, "prediction horizon (fixed algorithm)");

    CLI::App* version = app.add_subcommand("version", "print version and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (version->parsed()) {
            std::cout << "dmdtrade " << kVersion << "\n";
            return 0;
        }

        RunConfig config = load_run_config(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!price_field.empty()) config.price_field = price_field_from_name(price_field);
        if (!algorithm.empty()) config.backtest.algorithm = algorithm_from_name(algorithm);

        if (decompose->parsed()) {
            if (m > 0) config.decompose_m = m;
            if (!end_date.empty()) config.decompose_end_date = end_date;
            cmd_decompose(config);
        } else if (train->parsed()) {
            cmd_train(config);
        } else if (backtest->parsed()) {
            if (m > 0) config.backtest.sample_days = m;
            if (l > 0) config.backtest.horizon = l;
            cmd_backtest(config);
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace dmdt
