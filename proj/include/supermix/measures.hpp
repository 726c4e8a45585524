#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "supermix/kernels.hpp"

namespace supermix {

struct Atom {
    double weight = 0.0;
    VectorXd location;
};

// Signed atomic measure sum_i w_i delta_{t_i} on R^d. Atoms at bitwise-equal
// locations are merged on construction and zero weights dropped; atom order
// carries no meaning.
class DiscreteMeasure {
public:
    explicit DiscreteMeasure(int dim) : dim_(dim) {}
    DiscreteMeasure(int dim, std::vector<Atom> atoms);

    int dim() const { return dim_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    double total_mass() const;  // signed sum of weights

private:
    int dim_;
    std::vector<Atom> atoms_;
};

struct Sample {
    int dim = 1;
    std::vector<VectorXd> points;
    std::uint64_t seed = 0;  // 0 when externally loaded

    std::size_t size() const { return points.size(); }
};

double total_variation(const DiscreteMeasure& mu);

// (positive part, negated negative part); both nonnegative, disjoint supports
std::pair<DiscreteMeasure, DiscreteMeasure> jordan_decompose(const DiscreteMeasure& mu);

// min pairwise Euclidean distance; throws std::invalid_argument below 2 atoms
double min_separation(const DiscreteMeasure& mu);

// Single-linkage clustering at the given radius; each cluster collapses to
// (sum of weights, |weight|-weighted mean location).
DiscreteMeasure merge_close(const DiscreteMeasure& mu, double radius);

// n i.i.d. draws from the mixture truth * phi. truth must be a probability
// measure (throws std::invalid_argument otherwise). Deterministic given seed.
Sample sample_mixture(const DiscreteMeasure& truth, const MixingKernelSpec& kernel,
                      int n, std::uint64_t seed);

bool is_probability_measure(const DiscreteMeasure& mu, double tol = 1e-12);

}  // namespace supermix
