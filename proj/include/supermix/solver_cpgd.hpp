#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "supermix/fidelity.hpp"
#include "supermix/measures.hpp"

namespace supermix {

// Particle system (r_i, t_i) representing mu = (1/N) sum r_i^2 delta_{t_i}.
struct ParticleState {
    VectorXd r;                // nonnegative square-root weights
    std::vector<VectorXd> t;   // locations
    int step_index = 0;

    int count() const { return static_cast<int>(r.size()); }
    double mass(int i) const { return r[i] * r[i] / static_cast<double>(r.size()); }
    DiscreteMeasure measure(double prune_threshold = 0.0) const;
};

struct CpgdConfig {
    double kappa = 0.01;
    double alpha = 0.05;  // weight (mirror) step
    double beta = 1.0;    // position step
    int num_particles = 20;
    int num_steps = 2500;
    double r_init = 1.0;
    // explicit initial particles win over (box, seed) random init
    std::optional<ParticleState> init;
    std::optional<VectorXd> box_lo, box_hi;  // default: data bounding box
    std::uint64_t init_seed = 0;
    int record_every = 10;
    double final_prune_threshold = 1e-12;
};

// One mirror/gradient update. eta of the CURRENT measure is frozen and shared
// by all particles:
//   r_i <- r_i exp(2 alpha kappa (eta(t_i) - 1))
//   t_i <- t_i + beta kappa grad eta(t_i)
ParticleState cpgd_step(const DataFit& data, const ParticleState& state,
                        const CpgdConfig& config);

struct CpgdResult {
    DiscreteMeasure estimate{1};
    std::vector<ParticleState> trajectory;  // thinned by record_every
};

CpgdResult solve_cpgd(const DataFit& data, const CpgdConfig& config);

ParticleState init_particles(const DataFit& data, const CpgdConfig& config);

}  // namespace supermix
