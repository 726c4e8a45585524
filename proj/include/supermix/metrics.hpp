#pragma once

#include <vector>

#include "supermix/certificate.hpp"
#include "supermix/kernels.hpp"
#include "supermix/measures.hpp"

namespace supermix {

// ||est||_1 - ||truth||_1 - int P d(est - truth); nonnegative whenever the
// certificate is valid (P <= 1 globally, P = 1 on the truth support).
// The certificate must be kind P built on the truth support.
double bregman_divergence(const DiscreteMeasure& estimate, const DiscreteMeasure& truth,
                          const Certificate& cert);

struct RegionSpec {
    std::vector<VectorXd> truth_support;
    double epsilon = 0.0;
};

struct RegionMasses {
    double neg_mass_total = 0.0;            // mu^-(R^d)
    double pos_mass_far = 0.0;              // mu^+(F(eps))
    std::vector<double> per_k_signed_near;  // mu(N_k(eps)) per truth atom
};

// closed balls: ties at exactly distance epsilon count as near. Throws
// std::invalid_argument when near regions overlap (epsilon >= Delta/2).
RegionMasses region_masses(const DiscreteMeasure& estimate, const RegionSpec& region);

struct RateQuantities {
    double rho_n = 0.0;         // 2^d m^(d/2) / sqrt(n)
    double c_m = 0.0;           // K^2 m^(-d/2) 2^(d/2) / inf sigma
    double product_bound = 0.0; // rho_n * c_m
};

// quantities under the 1/tau = 4m convention
RateQuantities rate_quantities(int K, int d, double m, int n, const MixingKernelSpec& mixing);

// default regularization rule kappa = factor * rho_n / C_m
double kappa_auto(int K, int d, double m, int n, const MixingKernelSpec& mixing,
                  double factor = 1.0);

struct SupportError {
    double hausdorff = 0.0;          // +inf sentinel when the estimate is empty
    double matched_weight_l1 = 0.0;  // l1 weight error over greedy-matched pairs
    int k_hat = 0;                   // cluster count after merge_close at Delta/4
};

SupportError support_error(const DiscreteMeasure& estimate, const DiscreteMeasure& truth);

}  // namespace supermix
