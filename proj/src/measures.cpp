#include "supermix/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "supermix/rng.hpp"

namespace supermix {

DiscreteMeasure::DiscreteMeasure(int dim, std::vector<Atom> atoms) : dim_(dim) {
    for (auto& a : atoms) {
        if (a.location.size() != dim_)
            throw std::invalid_argument("atom location has wrong dimension");
        if (a.weight == 0.0) continue;
        // exact bitwise location equality only; approximate merging is merge_close
        bool merged = false;
        for (auto& b : atoms_) {
            if (b.location == a.location) {
                b.weight += a.weight;
                merged = true;
                break;
            }
        }
        if (!merged) atoms_.push_back(std::move(a));
    }
    std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
}

double DiscreteMeasure::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight;
    return s;
}

double total_variation(const DiscreteMeasure& mu) {
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += std::abs(a.weight);
    return s;
}

std::pair<DiscreteMeasure, DiscreteMeasure> jordan_decompose(const DiscreteMeasure& mu) {
    std::vector<Atom> plus, minus;
    for (const auto& a : mu.atoms()) {
        if (a.weight > 0.0)
            plus.push_back(a);
        else
            minus.push_back({-a.weight, a.location});
    }
    return {DiscreteMeasure(mu.dim(), std::move(plus)), DiscreteMeasure(mu.dim(), std::move(minus))};
}

double min_separation(const DiscreteMeasure& mu) {
    const auto& atoms = mu.atoms();
    if (atoms.size() < 2)
        throw std::invalid_argument("min_separation needs at least 2 atoms");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            best = std::min(best, (atoms[i].location - atoms[j].location).norm());
    return best;
}

DiscreteMeasure merge_close(const DiscreteMeasure& mu, double radius) {
    if (radius < 0.0) throw std::invalid_argument("merge radius must be nonnegative");
    const auto& atoms = mu.atoms();
    const std::size_t n = atoms.size();
    // single-linkage via union-find
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if ((atoms[i].location - atoms[j].location).norm() <= radius)
                parent[find(i)] = find(j);

    std::vector<Atom> merged;
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i)
        if (find(i) == i) roots.push_back(i);
    for (std::size_t r : roots) {
        double w = 0.0, abs_w = 0.0;
        VectorXd loc = VectorXd::Zero(mu.dim());
        for (std::size_t i = 0; i < n; ++i) {
            if (find(i) != r) continue;
            w += atoms[i].weight;
            abs_w += std::abs(atoms[i].weight);
            loc += std::abs(atoms[i].weight) * atoms[i].location;
        }
        if (abs_w > 0.0) merged.push_back({w, loc / abs_w});
    }
    return DiscreteMeasure(mu.dim(), std::move(merged));
}

bool is_probability_measure(const DiscreteMeasure& mu, double tol) {
    for (const auto& a : mu.atoms())
        if (a.weight <= 0.0) return false;
    return std::abs(total_variation(mu) - 1.0) <= tol;
}

namespace {

VectorXd draw_noise(const MixingKernelSpec& kernel, Rng& rng) {
    const int d = kernel.dim;
    VectorXd x(d);
    switch (kernel.family) {
        case KernelFamily::Gaussian:
            for (int j = 0; j < d; ++j) x[j] = rng.gaussian();
            return x;
        case KernelFamily::TensorLaplace:
            for (int j = 0; j < d; ++j) x[j] = rng.laplace();
            return x;
        case KernelFamily::TensorCauchy:
            for (int j = 0; j < d; ++j) x[j] = rng.cauchy(kernel.alpha);
            return x;
        case KernelFamily::MultivariateCauchy: {
            // multivariate t with 1 dof: sqrt(alpha) Z / |T|
            for (int j = 0; j < d; ++j) x[j] = rng.gaussian();
            double t = rng.gaussian();
            while (t == 0.0) t = rng.gaussian();
            return std::sqrt(kernel.alpha) / std::abs(t) * x;
        }
        case KernelFamily::MultivariateLaplace: {
            // Gaussian scale mixture: X | W ~ N(0, W I), W ~ Exp(1)
            const double w = rng.exponential();
            for (int j = 0; j < d; ++j) x[j] = rng.gaussian();
            return std::sqrt(w) * x;
        }
        case KernelFamily::SuperSmooth:
            throw std::domain_error("cannot sample from the generic super-smooth family");
    }
    throw std::logic_error("unknown kernel family");
}

}  // namespace

Sample sample_mixture(const DiscreteMeasure& truth, const MixingKernelSpec& kernel, int n,
                      std::uint64_t seed) {
    if (truth.dim() != kernel.dim)
        throw std::invalid_argument("truth and kernel dimensions differ");
    if (!is_probability_measure(truth))
        throw std::invalid_argument("sample_mixture requires a probability measure");
    Rng rng(seed);
    Sample sample;
    sample.dim = truth.dim();
    sample.seed = seed;
    sample.points.reserve(n);
    const auto& atoms = truth.atoms();
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        double acc = 0.0;
        std::size_t k = atoms.size() - 1;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            acc += atoms[j].weight;
            if (u < acc) {
                k = j;
                break;
            }
        }
        sample.points.push_back(atoms[k].location + draw_noise(kernel, rng));
    }
    return sample;
}

}  // namespace supermix
