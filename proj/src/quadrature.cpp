#include "supermix/quadrature.hpp"

#include <gsl/gsl_integration.h>
#include <stdexcept>

namespace supermix {

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("quadrature order must be positive");
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
    Eigen::VectorXd x(n), w(n);
    for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &x[i], &w[i], table);
    gsl_integration_glfixed_table_free(table);
    return {x, w};
}

}  // namespace supermix
