#pragma once

// Deterministic synthetic data used across the unit and acceptance suites.
// Randomness only ever comes from a seeded mt19937 through the helpers here,
// so frozen expected values stay valid everywhere the engine is standard.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dmdt/market_data.hpp"
#include "dmdt/types.hpp"

namespace fixtures {

double uniform01(std::mt19937& gen);                 // (0,1), engine-exact
double uniform(std::mt19937& gen, double lo, double hi);
double gauss(std::mt19937& gen);                     // Box-Muller from uniform01

std::vector<std::string> make_calendar(int days, const std::string& start = "2015-01-02");

dmdt::PricePanel make_panel(const dmdt::RealMatrix& prices,
                            std::optional<int> benchmark_row = std::nullopt,
                            const std::string& start_date = "2015-01-02");

dmdt::RealMatrix constant_prices(int tickers, int days, double base = 50.0);
dmdt::RealMatrix geometric_prices(int tickers, int days, double factor, double base = 1.0);
dmdt::RealMatrix random_walk_prices(int tickers, int days, unsigned seed,
                                    double daily_vol = 0.02, double drift = 0.0);

// Plain-loop dense helpers, used by the linear-system oracles.
dmdt::RealMatrix mat_mul(const dmdt::RealMatrix& a, const dmdt::RealMatrix& b);
dmdt::RealMatrix mat_inverse(const dmdt::RealMatrix& a);
dmdt::RealVector advance(const dmdt::RealMatrix& a, dmdt::RealVector x, int steps);

/// Random diagonalizable real system A = P diag(spectrum) P^-1 with the
/// given real spectrum; P is drawn until well-conditioned.
dmdt::RealMatrix diagonalizable_system(const std::vector<double>& spectrum, std::mt19937& gen);

/// Snapshot matrix [x0, A x0, A^2 x0, ...] with `days` columns.
dmdt::RealMatrix linear_system_prices(const dmdt::RealMatrix& a, const dmdt::RealVector& x0,
                                      int days);

// CLI fixtures on disk.
void write_ticker_csv(const std::string& path, const std::vector<std::string>& calendar,
                      const std::vector<double>& adj_close, bool descending = false);
void write_universe_json(const std::string& path,
                         const std::vector<std::pair<std::string, std::string>>& symbol_files,
                         const std::string& benchmark);
std::string read_file(const std::string& path);

}  // namespace fixtures
