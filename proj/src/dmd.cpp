#include "dmdt/dmd.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dmdt/errors.hpp"

namespace dmdt {

namespace {

constexpr double kDeadModeCutoff = 1e-12;   // |eigenvalue| below this is dropped
constexpr double kSigmaGuard = 1e-12;       // sigma below this * sigma_1 never inverted

}  // namespace

DmdModel fit(const SnapshotWindow& window, const RankPolicy& policy) {
    const int n = window.companies();
    const int m = window.snapshots();
    if (n < 1) throw ValidationError("fit: window has no companies");
    if (m < 2) throw ValidationError("fit: window needs at least 2 snapshots, got " +
                                     std::to_string(m));
    if (!(window.dt > 0.0)) throw ValidationError("fit: dt must be positive");
    if (!window.data.allFinite()) throw ValidationError("fit: non-finite window data");

    const RealMatrix past = window.data.leftCols(m - 1);
    const RealMatrix future = window.data.rightCols(m - 1);

    // Factor once at full rank; the whole spectrum feeds diagnostics, the
    // policy only narrows how much of it the step operator uses.
    const SvdResult full = svd(past, RankPolicy::full());
    const RealVector& all_sigma = full.sigma;
    const int full_rank = full.rank_used;

    int k = full_rank;
    switch (policy.mode) {
        case RankPolicy::Mode::Full:
            break;
        case RankPolicy::Mode::Fixed:
            if (policy.fixed_rank > full_rank)
                throw ValidationError("fit: fixed rank exceeds window rank bound");
            k = policy.fixed_rank;
            break;
        case RankPolicy::Mode::Threshold: {
            const double cut = policy.epsilon * all_sigma(0);
            k = 0;
            while (k < full_rank && all_sigma(k) >= cut && all_sigma(k) > 0.0) ++k;
            break;
        }
    }
    // Never invert directions that are numerically zero.
    const double guard = kSigmaGuard * all_sigma(0);
    while (k > 0 && (all_sigma(k - 1) <= guard || all_sigma(k - 1) == 0.0)) --k;
    if (k == 0) throw NumericalError("fit: data has no usable rank (all singular values ~ 0)");

    const RealMatrix u = full.u.leftCols(k);
    const RealMatrix v = full.v.leftCols(k);
    const RealVector sigma = all_sigma.head(k);

    // Reduced step operator: project the one-day map onto the kept directions.
    const RealMatrix reduced_op =
        u.transpose() * future * v * sigma.cwiseInverse().asDiagonal();

    EigResult pairs = eig(reduced_op.cast<Complex>());

    // Drop dead modes (|eigenvalue| ~ 0) so the log below stays finite.
    std::vector<int> keep;
    for (int i = 0; i < k; ++i)
        if (std::abs(pairs.values(i)) >= kDeadModeCutoff) keep.push_back(i);
    if (keep.empty()) throw NumericalError("fit: all modes degenerate (zero eigenvalues)");

    DmdModel model;
    model.rank = static_cast<int>(keep.size());
    model.dt = window.dt;
    model.sigma_spectrum = all_sigma;
    model.svd_rank = k;
    model.snapshot_count = m;

    model.eigenvalues.resize(model.rank);
    ComplexMatrix kept_vectors(k, model.rank);
    for (int j = 0; j < model.rank; ++j) {
        model.eigenvalues(j) = pairs.values(keep[j]);
        kept_vectors.col(j) = pairs.vectors.col(keep[j]);
    }
    model.modes = u.cast<Complex>() * kept_vectors;

    model.rates.resize(model.rank);
    for (int j = 0; j < model.rank; ++j)
        model.rates(j) = std::log(model.eigenvalues(j)) / window.dt;

    const ComplexVector first_snapshot = window.data.col(0).cast<Complex>();
    model.amplitudes = pseudo_inverse_solve(model.modes, first_snapshot);
    return model;
}

RealVector predict(const DmdModel& model, double steps_ahead) {
    if (steps_ahead < 1.0 - model.snapshot_count)
        throw ValidationError("predict: evaluation time precedes the window start");
    const double t = (model.snapshot_count - 1 + steps_ahead) * model.dt;

    ComplexVector scaled(model.rank);
    for (int k = 0; k < model.rank; ++k)
        scaled(k) = model.amplitudes(k) * std::exp(model.rates(k) * t);
    return (model.modes * scaled).real();
}

SpectrumSummary spectrum_summary(const DmdModel& model, int bins) {
    if (bins < 1) throw ValidationError("spectrum_summary: bins must be >= 1");

    SpectrumSummary out;
    out.rates = model.rates;
    out.mode_weights = model.modes.cwiseAbs();

    double total = 0.0;
    for (int i = 0; i < model.svd_rank; ++i) total += model.sigma_spectrum(i);
    out.energy_fractions.resize(model.svd_rank);
    for (int i = 0; i < model.svd_rank; ++i)
        out.energy_fractions[i] = model.sigma_spectrum(i) / total;

    double max_mag = 0.0;
    for (int k = 0; k < model.rank; ++k)
        max_mag = std::max(max_mag, std::abs(model.rates(k)));
    const double width = max_mag > 0.0 ? max_mag / bins : 1.0;

    out.hist_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) out.hist_edges[b] = b * width;
    out.rate_magnitude_hist.assign(bins, 0);
    for (int k = 0; k < model.rank; ++k) {
        int b = static_cast<int>(std::abs(model.rates(k)) / width);
        out.rate_magnitude_hist[std::clamp(b, 0, bins - 1)] += 1;
    }

    for (int k = 0; k < model.rank; ++k)
        if (model.rates(k).real() > 0.0) ++out.growth_mode_count;
    return out;
}

}  // namespace dmdt
