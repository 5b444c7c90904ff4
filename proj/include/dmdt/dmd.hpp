#pragma once

#include <vector>

#include "dmdt/linalg.hpp"
#include "dmdt/types.hpp"

namespace dmdt {

/// A contiguous block of daily price snapshots: one column per day,
/// one row per company. `start_index` locates the first column in the
/// parent panel's calendar; `dt` is the step between columns in days.
struct SnapshotWindow {
    RealMatrix data;      // N x M
    double dt = 1.0;
    int start_index = 0;

    int companies() const { return static_cast<int>(data.rows()); }
    int snapshots() const { return static_cast<int>(data.cols()); }
};

/// Best-fit linear evolution extracted from a snapshot window.
///
/// Each mode k is a fixed weighting over companies (column k of `modes`)
/// that evolves as exp(rates[k] * t). `eigenvalues[k]` is the one-step
/// multiplier; rates[k] = log(eigenvalues[k]) / dt on the principal branch.
/// `amplitudes` projects the first snapshot onto the modes, so the model
/// reconstructs the window from t = 0 at the first snapshot.
struct DmdModel {
    ComplexMatrix modes;        // N x K
    ComplexVector eigenvalues;  // K one-step multipliers
    ComplexVector rates;        // K per-day exponential rates
    ComplexVector amplitudes;   // K initial mode amplitudes
    int rank = 0;               // K = retained mode count
    double dt = 1.0;
    RealVector sigma_spectrum;  // all singular values of the first M-1 snapshots
    int svd_rank = 0;           // directions kept by the truncation policy
    int snapshot_count = 0;     // M

    int companies() const { return static_cast<int>(modes.rows()); }
};

/// Regresses the window onto a best-fit linear step operator and
/// diagonalizes it. Modes whose one-step multiplier has magnitude
/// below 1e-12 are dropped before rates are formed.
///
/// Throws ValidationError for windows with fewer than two snapshots and
/// NumericalError when the data has no usable rank.
DmdModel fit(const SnapshotWindow& window,
             const RankPolicy& policy = RankPolicy::threshold(1e-10));

/// Evaluates the modal solution `steps_ahead` days past the window's last
/// snapshot (time (M-1+steps_ahead)*dt from the first snapshot) and returns
/// the real part. `steps_ahead` may be fractional; 0 targets the last
/// snapshot and negative values down to 1-M reach back into the window.
RealVector predict(const DmdModel& model, double steps_ahead);

/// Diagnostics for spectrum plots.
struct SpectrumSummary {
    std::vector<double> energy_fractions;  // sigma_k / sum, length svd_rank, sums to 1
    ComplexVector rates;                   // per-day rates, as in the model
    RealMatrix mode_weights;               // N x K, |modes|
    std::vector<int> rate_magnitude_hist;  // counts of |rates[k]|, sums to K
    std::vector<double> hist_edges;        // bins + 1 edges
    int growth_mode_count = 0;             // modes with Re rate > 0
};

SpectrumSummary spectrum_summary(const DmdModel& model, int bins = 10);

}  // namespace dmdt
