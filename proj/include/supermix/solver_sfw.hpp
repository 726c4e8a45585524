#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "supermix/fidelity.hpp"
#include "supermix/measures.hpp"

namespace supermix {

struct SfwConfig {
    double kappa = 0.01;
    int max_iters = 50;
    double dual_tol = 1e-3;
    int grid_points_per_dim = 512;
    // global search box for |eta|; when unset, derived from the data (sample
    // bounding box inflated by 3 noise spreads)
    std::optional<VectorXd> box_lo, box_hi;
    int lasso_max_iters = 5000;
    double lasso_tol = 1e-12;
    int slide_max_iters = 400;
    double slide_tol = 1e-13;
    int ascent_max_iters = 200;
    double prune_threshold = 1e-10;
    bool nonnegative = false;
};

struct SolveResult {
    DiscreteMeasure estimate{1};
    int iterations = 0;
    bool converged = false;
    double dual_sup = 0.0;  // max |eta| found at exit
    std::vector<double> objective_trace;  // regularized objective, non-increasing
    std::vector<int> support_trace;
};

// Line 3 of the greedy loop: coarse grid scan of |eta| over the search box,
// then sign-fixed gradient ascent with backtracking from the best cell.
// Returns (location, eta value there). Global optimality is not guaranteed.
std::pair<VectorXd, double> find_spike(const DataFit& data, const DiscreteMeasure& mu,
                                       double kappa, const SfwConfig& config);

// Proximal gradient (ISTA) on a -> F_N(a) + kappa ||a||_1 with the support
// fixed; step 1/L with L the row-sum bound on Q's spectrum.
VectorXd lasso_step(const FidelityCache& cache, double kappa, VectorXd a_init,
                    const SfwConfig& config);

// Joint local descent on (a, t): backtracking gradient steps on locations
// alternated with lasso refreshes of the amplitudes. Never increases the
// regularized objective.
std::pair<VectorXd, std::vector<VectorXd>> slide_step(const DataFit& data, VectorXd a_init,
                                                      std::vector<VectorXd> t_init,
                                                      double kappa, const SfwConfig& config);

SolveResult solve_sfw(const DataFit& data, const SfwConfig& config);

// default search box: data bounding box inflated by 3 noise spreads
std::pair<VectorXd, VectorXd> default_search_box(const DataFit& data);

}  // namespace supermix
