#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dmdt/backtest.hpp"
#include "dmdt/dmd.hpp"
#include "dmdt/trainer.hpp"

namespace dmdt {

/// Shortest decimal string that round-trips the value exactly.
std::string format_double(double v);
/// Fixed two decimal places, for dollar columns.
std::string format_money(double v);

// Trainer artifacts.
void write_success_grid_csv(std::ostream& os, const SuccessGrid& grid);
void write_hotspot_json(std::ostream& os, const std::optional<Hotspot>& spot);

// Backtest artifacts.
void write_equity_csv(std::ostream& os, const std::vector<std::string>& calendar,
                      const std::vector<double>& strategy,
                      const std::vector<double>& benchmark,
                      const std::vector<double>& holdings);
void write_ledger_csv(std::ostream& os, const TradeLedger& ledger);
void write_window_hist_csv(std::ostream& os, const WindowHistogram& hist);
void write_report_json(std::ostream& os, const BacktestReport& report);

// Decomposition artifacts.
void write_energies_csv(std::ostream& os, const DmdModel& model);
void write_eigenvalues_csv(std::ostream& os, const DmdModel& model);
void write_modes_csv(std::ostream& os, const DmdModel& model,
                     const std::vector<std::string>& symbols);
void write_rate_hist_csv(std::ostream& os, const SpectrumSummary& summary);

}  // namespace dmdt
