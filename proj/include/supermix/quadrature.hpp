#pragma once

#include <Eigen/Dense>
#include <utility>

namespace supermix {

// Gauss-Legendre nodes and weights on [a, b] (GSL fixed tables underneath).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b);

}  // namespace supermix
