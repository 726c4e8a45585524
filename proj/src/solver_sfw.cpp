#include "supermix/solver_sfw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace supermix {

namespace {

DiscreteMeasure make_measure(int dim, const VectorXd& a, const std::vector<VectorXd>& t) {
    std::vector<Atom> atoms;
    atoms.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) atoms.push_back({a[i], t[i]});
    return DiscreteMeasure(dim, std::move(atoms));
}

double l1_norm(const VectorXd& a) { return a.lpNorm<1>(); }

VectorXd clamp_to_box(VectorXd t, const VectorXd& lo, const VectorXd& hi) {
    for (int j = 0; j < t.size(); ++j) t[j] = std::clamp(t[j], lo[j], hi[j]);
    return t;
}

}  // namespace

std::pair<VectorXd, VectorXd> default_search_box(const DataFit& data) {
    const int d = data.dim();
    VectorXd lo = VectorXd::Constant(d, std::numeric_limits<double>::infinity());
    VectorXd hi = -lo;
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
        throw std::invalid_argument("cannot derive a search box from empty data");
    const double pad = 3.0 * data.corr().mixing().spread();
    lo.array() -= pad;
    hi.array() += pad;
    return {lo, hi};
}

std::pair<VectorXd, double> find_spike(const DataFit& data, const DiscreteMeasure& mu,
                                       double kappa, const SfwConfig& config) {
    const int d = data.dim();
    const EtaProfile profile(data, mu, kappa);
    VectorXd lo, hi;
    if (config.box_lo && config.box_hi) {
        lo = *config.box_lo;
        hi = *config.box_hi;
    } else {
        std::tie(lo, hi) = default_search_box(data);
    }
    if (lo.size() != d || hi.size() != d)
        throw std::invalid_argument("search box dimension mismatch");

    const long npd = config.grid_points_per_dim;
    long total = 1;
    for (int j = 0; j < d; ++j) {
        total *= npd;
        if (total > (1L << 26)) throw std::invalid_argument("spike search grid too large");
    }
    // objective at a candidate: eta for the nonnegative problem, |eta| otherwise
    auto score = [&](double v) { return config.nonnegative ? v : std::abs(v); };

    VectorXd best_t = lo;
    double best_eta = profile.value(lo);
    std::vector<long> idx(d, 0);
    VectorXd t(d);
    for (long c = 0; c < total; ++c) {
        for (int j = 0; j < d; ++j)
            t[j] = (npd == 1) ? lo[j] : lo[j] + (hi[j] - lo[j]) * idx[j] / double(npd - 1);
        const double v = profile.value(t);
        // strict > keeps the lexicographically smallest location on ties,
        // because the scan itself is lexicographic
        if (score(v) > score(best_eta)) {
            best_eta = v;
            best_t = t;
        }
        for (int j = 0; j < d; ++j) {
            if (++idx[j] < npd) break;
            idx[j] = 0;
        }
    }

    // sign-fixed gradient ascent with backtracking from the best cell
    const double sign = (config.nonnegative || best_eta >= 0.0) ? 1.0 : -1.0;
    VectorXd cur = best_t;
    double cur_val = sign * best_eta;
    double step = (hi - lo).maxCoeff() / std::max<long>(npd - 1, 1);
    for (int it = 0; it < config.ascent_max_iters; ++it) {
        const VectorXd g = sign * profile.gradient(cur);
        const double gn2 = g.squaredNorm();
        if (gn2 < 1e-30) break;
        bool accepted = false;
        while (step > 1e-16) {
            const VectorXd trial = clamp_to_box(cur + step * g, lo, hi);
            const double trial_val = sign * profile.value(trial);
            if (trial_val > cur_val + 1e-4 * step * gn2) {
                cur = trial;
                cur_val = trial_val;
                step *= 1.5;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return {cur, sign * cur_val};
}

VectorXd lasso_step(const FidelityCache& cache, double kappa, VectorXd a_init,
                    const SfwConfig& config) {
    const int n = static_cast<int>(cache.b.size());
    if (a_init.size() != n) throw std::invalid_argument("lasso_step: amplitude size mismatch");
    // Lipschitz bound on the quadratic part via the row-sum norm of Q
    const double L = cache.Q.cwiseAbs().rowwise().sum().maxCoeff();
    if (!(L > 0.0)) return a_init;
    const double step = 1.0 / L;
    VectorXd a = std::move(a_init);
    for (int it = 0; it < config.lasso_max_iters; ++it) {
        const VectorXd grad = cache.b + cache.Q * a;
        VectorXd next(n);
        for (int i = 0; i < n; ++i) {
            const double z = a[i] - step * grad[i];
            if (config.nonnegative)
                next[i] = std::max(0.0, z - step * kappa);
            else
                next[i] = std::copysign(std::max(0.0, std::abs(z) - step * kappa), z);
        }
        const double change = (next - a).lpNorm<Eigen::Infinity>();
        a = std::move(next);
        if (change <= config.lasso_tol) break;
    }
    return a;
}

std::pair<VectorXd, std::vector<VectorXd>> slide_step(const DataFit& data, VectorXd a_init,
                                                      std::vector<VectorXd> t_init, double kappa,
                                                      const SfwConfig& config) {
    const int d = data.dim();
    VectorXd a = std::move(a_init);
    std::vector<VectorXd> t = std::move(t_init);
    if (a.size() != static_cast<Eigen::Index>(t.size()))
        throw std::invalid_argument("slide_step: amplitude/location size mismatch");
    if (t.empty()) return {a, t};

    FidelityCache cache = build_cache(data, t);
    a = lasso_step(cache, kappa, a, config);
    double obj = objective(cache, a) + kappa * l1_norm(a);
    double gamma = 1.0;

    for (int it = 0; it < config.slide_max_iters; ++it) {
        // grad_{t_i} F = -a_i kappa grad eta(t_i) for the current measure
        const EtaProfile profile(data, make_measure(d, a, t), kappa);
        std::vector<VectorXd> dir(t.size());
        double g2 = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            dir[i] = a[i] * kappa * profile.gradient(t[i]);  // descent direction
            g2 += dir[i].squaredNorm();
        }
        if (g2 < 1e-30) break;

        bool moved = false;
        while (gamma > 1e-18) {
            std::vector<VectorXd> trial(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) trial[i] = t[i] + gamma * dir[i];
            FidelityCache trial_cache = build_cache(data, trial);
            const VectorXd trial_a = lasso_step(trial_cache, kappa, a, config);
            const double trial_obj = objective(trial_cache, trial_a) + kappa * l1_norm(trial_a);
            if (trial_obj < obj) {
                const double gain = obj - trial_obj;
                t = std::move(trial);
                a = trial_a;
                cache = std::move(trial_cache);
                obj = trial_obj;
                gamma *= 1.5;
                moved = true;
                // relative stagnation test: the objective can sit at the
                // kappa*TV scale, so an absolute floor would stop too early
                if (gain <= config.slide_tol * std::abs(obj)) return {a, t};
                break;
            }
            gamma *= 0.5;
        }
        if (!moved) break;
    }
    return {a, t};
}

SolveResult solve_sfw(const DataFit& data, const SfwConfig& config) {
    if (config.kappa <= 0.0) throw std::invalid_argument("solve_sfw: kappa must be positive");
    const int d = data.dim();
    SolveResult result;
    result.estimate = DiscreteMeasure(d);
    result.objective_trace.push_back(data.const_term());
    result.support_trace.push_back(0);

    VectorXd a(0);
    std::vector<VectorXd> t;

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        const DiscreteMeasure mu = make_measure(d, a, t);
        auto [t_star, eta_star] = find_spike(data, mu, config.kappa, config);
        result.dual_sup = config.nonnegative ? eta_star : std::abs(eta_star);
        if (result.dual_sup <= 1.0 + config.dual_tol) {
            result.converged = true;
            break;
        }
        bool duplicate = false;
        for (const auto& ti : t)
            if ((ti - t_star).norm() <= 1e-8) {
                duplicate = true;
                break;
            }
        if (duplicate) break;  // no progress possible; leave converged = false

        result.iterations = iter;
        t.push_back(t_star);
        a.conservativeResize(a.size() + 1);
        a[a.size() - 1] = 0.0;

        FidelityCache cache = build_cache(data, t);
        a = lasso_step(cache, config.kappa, a, config);
        std::tie(a, t) = slide_step(data, a, t, config.kappa, config);

        // prune negligible amplitudes
        VectorXd a_kept(a.size());
        std::vector<VectorXd> t_kept;
        int kept = 0;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (std::abs(a[i]) <= config.prune_threshold) continue;
            a_kept[kept++] = a[i];
            t_kept.push_back(t[i]);
        }
        a = a_kept.head(kept).eval();
        t = std::move(t_kept);

        double obj = data.const_term();
        if (!t.empty()) obj = objective(build_cache(data, t), a) + config.kappa * l1_norm(a);
        result.objective_trace.push_back(obj);
        result.support_trace.push_back(static_cast<int>(t.size()));
    }

    result.estimate = make_measure(d, a, t);
    if (!result.converged || result.dual_sup == 0.0) {
        auto [t_star, eta_star] = find_spike(data, result.estimate, config.kappa, config);
        (void)t_star;
        result.dual_sup = config.nonnegative ? eta_star : std::abs(eta_star);
        if (result.dual_sup <= 1.0 + config.dual_tol) result.converged = true;
    }
    return result;
}

}  // namespace supermix
