#include <doctest.h>

#include <cmath>
#include <random>

#include "dmdt/errors.hpp"
#include "dmdt/trainer.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dmdt;

namespace {

const RankPolicy kPolicy = RankPolicy::threshold(1e-10);

GridSpec small_spec(int m_min, int m_max, int l_min, int l_max) {
    GridSpec spec;
    spec.m_min = m_min;
    spec.m_max = m_max;
    spec.l_min = l_min;
    spec.l_max = l_max;
    return spec;
}

SuccessGrid handmade_grid(const GridSpec& spec, double fill_rate) {
    SuccessGrid grid;
    grid.spec = spec;
    grid.cells.assign(static_cast<size_t>(spec.m_count()) * spec.l_count(), CellStats{});
    const long long denom = 1000000;
    for (auto& c : grid.cells) {
        c.total = denom;
        c.correct = static_cast<long long>(std::llround(fill_rate * denom));
    }
    return grid;
}

}  // namespace

TEST_CASE("directional_signal: doubling panel says up everywhere") {
    const PricePanel panel = fixtures::make_panel(fixtures::geometric_prices(3, 12, 2.0));
    for (int m : {2, 5})
        for (int l : {1, 3})
            for (Direction d : directional_signal(panel, 8, m, l, kPolicy))
                CHECK(d == Direction::Up);
}

TEST_CASE("directional_signal: constant panel is all flat") {
    const PricePanel panel = fixtures::make_panel(fixtures::constant_prices(3, 12));
    for (Direction d : directional_signal(panel, 8, 4, 2, kPolicy)) CHECK(d == Direction::Flat);
}

TEST_CASE("directional_signal: split growth/decay system matches the sign oracle") {
    RealMatrix a = RealMatrix::Zero(2, 2);
    a(0, 0) = 1.05;  // growing company
    a(1, 1) = 0.90;  // decaying company
    RealVector x0(2);
    x0 << 100.0, 100.0;
    const PricePanel panel = fixtures::make_panel(fixtures::linear_system_prices(a, x0, 20));
    for (int t : {6, 10}) {
        for (int l : {1, 4}) {
            const auto signal = directional_signal(panel, t, 5, l, kPolicy);
            const RealVector now = panel.prices.col(t);
            const RealVector later = fixtures::advance(a, now, l);
            for (int n = 0; n < 2; ++n) {
                const Direction want =
                    later(n) > now(n) ? Direction::Up : Direction::Down;
                CHECK(signal[n] == want);
            }
        }
    }
}

TEST_CASE("evaluate_cell: doubling panel scores 100%") {
    const PricePanel panel = fixtures::make_panel(fixtures::geometric_prices(2, 15, 2.0));
    const CellStats stats = evaluate_cell(panel, 3, 2, {0, 14}, kPolicy);
    REQUIRE(stats.valid());
    CHECK(stats.rate() == 1.0);
    CHECK(stats.total == 2 * (15 - 3 - 2 + 1));
}

TEST_CASE("evaluate_cell: adversarial reversal scores 0%") {
    // Growth window ending at t = 4 makes the model forecast up; the realized
    // price at t + 2 is engineered below the day-4 price, so the single
    // scored day is wrong for the single company.
    const int m = 5, l = 2, t = 4;
    RealMatrix prices(1, 7);
    double p = 100.0;
    for (int j = 0; j <= t; ++j) {
        prices(0, j) = p;
        p *= 1.1;
    }
    prices(0, 5) = 60.0;
    prices(0, 6) = 50.0;  // day t + l, far below prices(0, 4)
    const PricePanel panel = fixtures::make_panel(prices);

    const CellStats stats = evaluate_cell(panel, m, l, {0, 6}, kPolicy);
    REQUIRE(stats.total == 1);
    CHECK(stats.correct == 0);
    CHECK(stats.rate() == 0.0);
}

TEST_CASE("evaluate_cell: constant panel has no scored pairs") {
    const PricePanel panel = fixtures::make_panel(fixtures::constant_prices(2, 20));
    const CellStats stats = evaluate_cell(panel, 4, 2, {0, 19}, kPolicy);
    CHECK(!stats.valid());
}

TEST_CASE("train_grid: doubling panel is 100% in every cell") {
    const PricePanel panel = fixtures::make_panel(fixtures::geometric_prices(2, 16, 2.0));
    const SuccessGrid grid = train_grid(panel, small_spec(2, 3, 1, 2), {0, 15});
    for (int m = 2; m <= 3; ++m)
        for (int l = 1; l <= 2; ++l) {
            REQUIRE(grid.cell(m, l).valid());
            CHECK(grid.cell(m, l).rate() == 1.0);
        }
}

TEST_CASE("train_grid: constant panel leaves every cell invalid") {
    const PricePanel panel = fixtures::make_panel(fixtures::constant_prices(2, 30));
    const SuccessGrid grid = train_grid(panel, small_spec(2, 4, 1, 2), {0, 29});
    for (const auto& c : grid.cells) CHECK(!c.valid());
    CHECK(!grid.has_valid_cell());
}

TEST_CASE("train_grid: equals the naive per-cell oracle on random walks") {
    const GridSpec spec = small_spec(2, 8, 1, 3);
    for (unsigned seed : {101u, 202u}) {
        const PricePanel panel =
            fixtures::make_panel(fixtures::random_walk_prices(5, 120, seed));
        const DaySpan span{0, panel.days() - 1};
        const SuccessGrid fast = train_grid(panel, spec, span);
        const SuccessGrid slow = oracle::naive_train_grid(panel, spec, span);
        for (int m = spec.m_min; m <= spec.m_max; ++m) {
            for (int l = spec.l_min; l <= spec.l_max; ++l) {
                CHECK(fast.cell(m, l).correct == slow.cell(m, l).correct);
                CHECK(fast.cell(m, l).total == slow.cell(m, l).total);
            }
        }
    }
}

TEST_CASE("train_grid: deterministic across runs") {
    const PricePanel panel = fixtures::make_panel(fixtures::random_walk_prices(4, 90, 7u));
    const GridSpec spec = small_spec(2, 6, 1, 3);
    const SuccessGrid a = train_grid(panel, spec, {0, 89});
    const SuccessGrid b = train_grid(panel, spec, {0, 89});
    for (size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].correct == b.cells[i].correct);
        CHECK(a.cells[i].total == b.cells[i].total);
    }
}

TEST_CASE("train_grid: rejects spans too short for the smallest cell") {
    const PricePanel panel = fixtures::make_panel(fixtures::random_walk_prices(2, 30, 3u));
    CHECK_THROWS_AS(train_grid(panel, small_spec(4, 6, 2, 3), {0, 5}), ValidationError);
}

TEST_CASE("find_hotspot: uniform grid centers on the tie-break cell") {
    const GridSpec spec = small_spec(2, 25, 1, 10);
    const SuccessGrid grid = handmade_grid(spec, 0.60);
    const auto spot = find_hotspot(grid);
    REQUIRE(spot.has_value());
    CHECK(spot->m == 2);
    CHECK(spot->l == 1);
    CHECK(std::abs(spot->neighborhood_mean - 0.60) <= 1e-12);
    CHECK(spot->qualified);
}

TEST_CASE("find_hotspot: isolated spike is rejected by its neighborhood") {
    const GridSpec spec = small_spec(2, 25, 1, 10);
    SuccessGrid grid = handmade_grid(spec, 0.40);
    grid.cell(10, 5) = {90, 100};
    const auto spot = find_hotspot(grid);
    REQUIRE(spot.has_value());
    CHECK(spot->m == 10);
    CHECK(spot->l == 5);
    const double want = (0.90 + 8 * 0.40) / 9.0;
    CHECK(std::abs(spot->neighborhood_mean - want) <= 1e-12);
    CHECK(!spot->qualified);
}

TEST_CASE("find_hotspot: qualifying plateau") {
    const GridSpec spec = small_spec(2, 25, 1, 10);
    SuccessGrid grid = handmade_grid(spec, 0.40);
    // 3x3 plateau at 0.56; the center cell sits one count above so the
    // max lands on (10,5) while the mean stays 0.56 to well inside 1e-12.
    const long long denom = 50000000000000;  // 5e13
    for (int m = 9; m <= 11; ++m)
        for (int l = 4; l <= 6; ++l) grid.cell(m, l) = {28000000000000, denom};
    grid.cell(10, 5).correct += 1;
    const auto spot = find_hotspot(grid);
    REQUIRE(spot.has_value());
    CHECK(spot->m == 10);
    CHECK(spot->l == 5);
    CHECK(std::abs(spot->neighborhood_mean - 0.56) <= 1e-12);
    CHECK(spot->qualified);
}

TEST_CASE("find_hotspot: no valid cells means no hotspot") {
    SuccessGrid grid;
    grid.spec = small_spec(2, 5, 1, 3);
    grid.cells.assign(static_cast<size_t>(grid.spec.m_count()) * grid.spec.l_count(),
                      CellStats{});
    CHECK(!find_hotspot(grid).has_value());
}

TEST_CASE("find_hotspot: boundary centers average their existing neighbors") {
    const GridSpec spec = small_spec(2, 25, 1, 10);
    SuccessGrid grid = handmade_grid(spec, 0.40);
    grid.cell(2, 1) = {90, 100};
    grid.cell(2, 2) = {60, 100};
    grid.cell(3, 1) = {60, 100};
    grid.cell(3, 2) = {60, 100};
    const auto spot = find_hotspot(grid);
    REQUIRE(spot.has_value());
    CHECK(spot->m == 2);
    CHECK(spot->l == 1);
    // Corner cell: only 4 cells exist in its 3x3 block.
    const double want = (0.90 + 3 * 0.60) / 4.0;
    CHECK(std::abs(spot->neighborhood_mean - want) <= 1e-12);
}

TEST_CASE("find_hotspot: invalid neighbors are left out of the mean") {
    const GridSpec spec = small_spec(2, 25, 1, 10);
    SuccessGrid grid = handmade_grid(spec, 0.40);
    grid.cell(10, 5) = {90, 100};
    grid.cell(9, 4) = {0, 0};   // invalid
    grid.cell(11, 6) = {0, 0};  // invalid
    const auto spot = find_hotspot(grid);
    REQUIRE(spot.has_value());
    const double want = (0.90 + 6 * 0.40) / 7.0;
    CHECK(std::abs(spot->neighborhood_mean - want) <= 1e-12);
}

TEST_CASE("find_hotspot: threshold comparison is strict") {
    // 0.5 stays exact through the averaging, so mean == threshold exactly.
    const GridSpec spec = small_spec(2, 10, 1, 5);
    const SuccessGrid grid = handmade_grid(spec, 0.5);
    const auto spot = find_hotspot(grid, 0.5);
    REQUIRE(spot.has_value());
    CHECK(spot->neighborhood_mean == 0.5);
    CHECK(!spot->qualified);  // mean == threshold does not qualify
}
