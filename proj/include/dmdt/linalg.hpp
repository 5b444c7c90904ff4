#pragma once

#include "dmdt/types.hpp"

namespace dmdt {

/// How many singular directions to keep when factoring a snapshot matrix.
struct RankPolicy {
    enum class Mode { Full, Fixed, Threshold };

    Mode mode = Mode::Threshold;
    int fixed_rank = 0;       // Fixed only
    double epsilon = 1e-10;   // Threshold only: drop sigma_k < epsilon * sigma_1

    static RankPolicy full() { return {Mode::Full, 0, 0.0}; }
    static RankPolicy fixed(int k);
    static RankPolicy threshold(double eps);
};

/// Thin SVD a = u * diag(sigma) * v^T, truncated per policy.
struct SvdResult {
    RealMatrix u;       // rows x rank_used, orthonormal columns
    RealVector sigma;   // rank_used, descending, >= 0
    RealMatrix v;       // cols x rank_used, orthonormal columns
    int rank_used = 0;
};

SvdResult svd(const RealMatrix& a, const RankPolicy& policy = RankPolicy::full());

/// Eigenpairs of a square complex matrix, sorted by descending real part,
/// ties by descending imaginary part. Eigenvector columns have unit 2-norm.
struct EigResult {
    ComplexVector values;
    ComplexMatrix vectors;  // column k pairs with values[k]
};

EigResult eig(const ComplexMatrix& a);

/// Minimum-norm least-squares solution of a * x = rhs.
/// Singular values below 1e-12 * sigma_1 are treated as zero.
ComplexVector pseudo_inverse_solve(const ComplexMatrix& a, const ComplexVector& rhs);

}  // namespace dmdt
