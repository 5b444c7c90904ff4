#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dmdt {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

}  // namespace dmdt
