#include "supermix/solver_cpgd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "supermix/rng.hpp"

namespace supermix {

DiscreteMeasure ParticleState::measure(double prune_threshold) const {
    const int d = t.empty() ? 1 : static_cast<int>(t.front().size());
    std::vector<Atom> atoms;
    for (int i = 0; i < count(); ++i) {
        const double w = mass(i);
        if (w <= prune_threshold) continue;
        atoms.push_back({w, t[i]});
    }
    return DiscreteMeasure(d, std::move(atoms));
}

ParticleState init_particles(const DataFit& data, const CpgdConfig& config) {
    if (config.init) {
        const ParticleState& s = *config.init;
        if (s.r.size() != static_cast<Eigen::Index>(s.t.size()))
            throw std::invalid_argument("initial particle state is inconsistent");
        for (const auto& ti : s.t)
            if (ti.size() != data.dim())
                throw std::invalid_argument("initial particle dimension mismatch");
        return s;
    }
    if (config.num_particles < 1) throw std::invalid_argument("need at least one particle");

    const int d = data.dim();
    VectorXd lo, hi;
    if (config.box_lo && config.box_hi) {
        lo = *config.box_lo;
        hi = *config.box_hi;
    } else {
        lo = VectorXd::Constant(d, std::numeric_limits<double>::infinity());
        hi = -lo;
        if (data.exact()) {
            for (const auto& a : data.truth().atoms()) {
                lo = lo.cwiseMin(a.location);
                hi = hi.cwiseMax(a.location);
            }
        } else {
            for (const auto& x : data.sample().points) {
                lo = lo.cwiseMin(x);
                hi = hi.cwiseMax(x);
            }
        }
        if (!lo.allFinite() || !hi.allFinite())
            throw std::invalid_argument("cannot derive a particle box from empty data");
    }
    if (lo.size() != d || hi.size() != d)
        throw std::invalid_argument("particle box dimension mismatch");

    Rng rng(config.init_seed);
    ParticleState state;
    state.r = VectorXd::Constant(config.num_particles, config.r_init);
    state.t.resize(config.num_particles);
    for (int i = 0; i < config.num_particles; ++i) {
        VectorXd p(d);
        for (int j = 0; j < d; ++j) p[j] = rng.uniform(lo[j], hi[j]);
        state.t[i] = std::move(p);
    }
    return state;
}

ParticleState cpgd_step(const DataFit& data, const ParticleState& state,
                        const CpgdConfig& config) {
    if (config.kappa <= 0.0) throw std::invalid_argument("cpgd_step: kappa must be positive");
    const EtaProfile profile(data, state.measure(), config.kappa);
    ParticleState next = state;
    next.step_index = state.step_index + 1;
    for (int i = 0; i < state.count(); ++i) {
        const double e = profile.value(state.t[i]);
        next.r[i] = state.r[i] * std::exp(2.0 * config.alpha * config.kappa * (e - 1.0));
        next.t[i] = state.t[i] + config.beta * config.kappa * profile.gradient(state.t[i]);
    }
    return next;
}

CpgdResult solve_cpgd(const DataFit& data, const CpgdConfig& config) {
    ParticleState state = init_particles(data, config);
    CpgdResult result;
    const int every = std::max(1, config.record_every);
    result.trajectory.push_back(state);
    for (int step = 1; step <= config.num_steps; ++step) {
        state = cpgd_step(data, state, config);
        if (step % every == 0 || step == config.num_steps) result.trajectory.push_back(state);
    }
    result.estimate = state.measure(config.final_prune_threshold);
    return result;
}

}  // namespace supermix
