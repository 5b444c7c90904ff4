#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dmdt/dates.hpp"
#include "dmdt/report_io.hpp"

namespace fixtures {

using dmdt::RealMatrix;
using dmdt::RealVector;

double uniform01(std::mt19937& gen) {
    return (static_cast<double>(gen()) + 0.5) * (1.0 / 4294967296.0);
}

double uniform(std::mt19937& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

double gauss(std::mt19937& gen) {
    const double u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::string> make_calendar(int days, const std::string& start) {
    std::vector<std::string> out(days);
    for (int i = 0; i < days; ++i) out[i] = dmdt::iso_add_days(start, i);
    return out;
}

dmdt::PricePanel make_panel(const RealMatrix& prices, std::optional<int> benchmark_row,
                            const std::string& start_date) {
    dmdt::PricePanel panel;
    panel.prices = prices;
    panel.calendar = make_calendar(static_cast<int>(prices.cols()), start_date);
    for (int n = 0; n < prices.rows(); ++n) panel.symbols.push_back("T" + std::to_string(n));
    panel.benchmark_row = benchmark_row;
    return panel;
}

RealMatrix constant_prices(int tickers, int days, double base) {
    RealMatrix out(tickers, days);
    for (int n = 0; n < tickers; ++n)
        for (int t = 0; t < days; ++t) out(n, t) = base + 2.0 * n;
    return out;
}

RealMatrix geometric_prices(int tickers, int days, double factor, double base) {
    RealMatrix out(tickers, days);
    for (int n = 0; n < tickers; ++n) {
        double p = base * (1.0 + 0.5 * n);
        for (int t = 0; t < days; ++t) {
            out(n, t) = p;
            p *= factor;
        }
    }
    return out;
}

RealMatrix random_walk_prices(int tickers, int days, unsigned seed, double daily_vol,
                              double drift) {
    std::mt19937 gen(seed);
    RealMatrix out(tickers, days);
    for (int n = 0; n < tickers; ++n) {
        double p = 40.0 + 10.0 * n;
        for (int t = 0; t < days; ++t) {
            out(n, t) = p;
            p *= std::exp(drift + daily_vol * gauss(gen));
        }
    }
    return out;
}

RealMatrix mat_mul(const RealMatrix& a, const RealMatrix& b) {
    RealMatrix out = RealMatrix::Zero(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k)
            for (int j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
}

RealMatrix mat_inverse(const RealMatrix& a) {
    const int n = static_cast<int>(a.rows());
    RealMatrix m = a;
    RealMatrix inv = RealMatrix::Identity(n, n);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
        if (std::abs(m(pivot, col)) < 1e-12)
            throw std::runtime_error("fixture inverse: singular matrix");
        m.row(pivot).swap(m.row(col));
        inv.row(pivot).swap(inv.row(col));
        const double d = m(col, col);
        m.row(col) /= d;
        inv.row(col) /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = m(r, col);
            m.row(r) -= f * m.row(col);
            inv.row(r) -= f * inv.row(col);
        }
    }
    return inv;
}

RealVector advance(const RealMatrix& a, RealVector x, int steps) {
    for (int s = 0; s < steps; ++s) {
        RealVector next = RealVector::Zero(x.size());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) next(i) += a(i, j) * x(j);
        x = next;
    }
    return x;
}

dmdt::RealMatrix diagonalizable_system(const std::vector<double>& spectrum, std::mt19937& gen) {
    const int n = static_cast<int>(spectrum.size());
    RealMatrix d = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = spectrum[i];

    for (int attempt = 0; attempt < 100; ++attempt) {
        RealMatrix p(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) p(i, j) = uniform(gen, -1.0, 1.0);
        // Keep only well-conditioned bases so the fixture stays benign.
        Eigen::JacobiSVD<RealMatrix> svd(p);
        if (svd.singularValues()(n - 1) < 0.2) continue;
        return mat_mul(mat_mul(p, d), mat_inverse(p));
    }
    throw std::runtime_error("fixture: failed to draw a well-conditioned basis");
}

RealMatrix linear_system_prices(const RealMatrix& a, const RealVector& x0, int days) {
    RealMatrix out(x0.size(), days);
    RealVector x = x0;
    for (int t = 0; t < days; ++t) {
        out.col(t) = x;
        x = advance(a, x, 1);
    }
    return out;
}

void write_ticker_csv(const std::string& path, const std::vector<std::string>& calendar,
                      const std::vector<double>& adj_close, bool descending) {
    std::ostringstream os;
    os << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    auto row = [&](size_t t) {
        const double p = adj_close[t];
        os << calendar[t] << ',' << dmdt::format_double(p * 0.99) << ','
           << dmdt::format_double(p * 1.02) << ',' << dmdt::format_double(p * 0.98) << ','
           << dmdt::format_double(p * 1.01) << ',' << dmdt::format_double(p) << ','
           << (100000 + 37 * t) << '\n';
    };
    if (descending)
        for (size_t t = calendar.size(); t-- > 0;) row(t);
    else
        for (size_t t = 0; t < calendar.size(); ++t) row(t);

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("fixture: cannot write " + path);
    file << os.str();
}

void write_universe_json(const std::string& path,
                         const std::vector<std::pair<std::string, std::string>>& symbol_files,
                         const std::string& benchmark) {
    std::ostringstream os;
    os << "{\n  \"tickers\": [\n";
    for (size_t i = 0; i < symbol_files.size(); ++i) {
        os << "    {\"symbol\": \"" << symbol_files[i].first << "\", \"path\": \""
           << symbol_files[i].second << "\"}";
        os << (i + 1 < symbol_files.size() ? ",\n" : "\n");
    }
    os << "  ],\n  \"benchmark\": \"" << benchmark << "\"\n}\n";
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("fixture: cannot write " + path);
    file << os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

}  // namespace fixtures
