#include "dmdt/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "dmdt/errors.hpp"

namespace dmdt {

namespace {

constexpr double kPinvRelCutoff = 1e-12;

void require_finite(const RealMatrix& a, const char* what) {
    if (!a.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

}  // namespace

RankPolicy RankPolicy::fixed(int k) {
    if (k < 1) throw ValidationError("rank policy: fixed rank must be >= 1");
    return {Mode::Fixed, k, 0.0};
}

RankPolicy RankPolicy::threshold(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw ValidationError("rank policy: threshold must lie in (0, 1)");
    return {Mode::Threshold, 0, eps};
}

SvdResult svd(const RealMatrix& a, const RankPolicy& policy) {
    if (a.rows() < 1 || a.cols() < 1) throw ValidationError("svd: empty matrix");
    require_finite(a, "svd");

    const int full_rank = static_cast<int>(std::min(a.rows(), a.cols()));
    if (policy.mode == RankPolicy::Mode::Fixed && policy.fixed_rank > full_rank)
        throw ValidationError("svd: fixed rank " + std::to_string(policy.fixed_rank) +
                              " exceeds min dimension " + std::to_string(full_rank));

    Eigen::JacobiSVD<RealMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& all_sigma = dec.singularValues();

    int k = full_rank;
    switch (policy.mode) {
        case RankPolicy::Mode::Full:
            break;
        case RankPolicy::Mode::Fixed:
            k = policy.fixed_rank;
            break;
        case RankPolicy::Mode::Threshold: {
            const double cut = policy.epsilon * all_sigma(0);
            k = 0;
            while (k < full_rank && all_sigma(k) >= cut && all_sigma(k) > 0.0) ++k;
            break;
        }
    }

    SvdResult out;
    out.rank_used = k;
    out.u = dec.matrixU().leftCols(k);
    out.sigma = all_sigma.head(k);
    out.v = dec.matrixV().leftCols(k);
    return out;
}

EigResult eig(const ComplexMatrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw ValidationError("eig: matrix must be square and non-empty");
    if (!a.allFinite()) throw ValidationError("eig: non-finite entries");

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        ComplexMatrix resid = a * solver.eigenvectors() -
                              solver.eigenvectors() * solver.eigenvalues().asDiagonal();
        throw NumericalError("eig: QR iteration did not converge, residual norm " +
                             std::to_string(resid.norm()));
    }

    const int n = static_cast<int>(a.rows());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    const ComplexVector& vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        if (vals(i).real() != vals(j).real()) return vals(i).real() > vals(j).real();
        return vals(i).imag() > vals(j).imag();
    });

    EigResult out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        out.values(k) = vals(order[k]);
        ComplexVector col = solver.eigenvectors().col(order[k]);
        out.vectors.col(k) = col / col.norm();
    }
    return out;
}

ComplexVector pseudo_inverse_solve(const ComplexMatrix& a, const ComplexVector& rhs) {
    if (a.rows() != rhs.size())
        throw ValidationError("pseudo_inverse_solve: rhs length " + std::to_string(rhs.size()) +
                              " does not match matrix rows " + std::to_string(a.rows()));
    if (a.rows() < 1 || a.cols() < 1)
        throw ValidationError("pseudo_inverse_solve: empty matrix");
    if (!a.allFinite() || !rhs.allFinite())
        throw ValidationError("pseudo_inverse_solve: non-finite input");

    Eigen::JacobiSVD<ComplexMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = dec.singularValues();
    const double cut = kPinvRelCutoff * sigma(0);

    ComplexVector projected = dec.matrixU().adjoint() * rhs;
    for (int i = 0; i < sigma.size(); ++i)
        projected(i) = (sigma(i) > cut && sigma(i) > 0.0) ? projected(i) / sigma(i) : Complex(0, 0);
    return dec.matrixV() * projected;
}

}  // namespace dmdt
