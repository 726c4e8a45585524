#include "supermix/kernels.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

namespace supermix {

namespace {

void check_dim(const MixingKernelSpec& spec, const VectorXd& x) {
    if (x.size() != spec.dim)
        throw std::invalid_argument("kernel dimension mismatch: expected " +
                                    std::to_string(spec.dim) + ", got " +
                                    std::to_string(x.size()));
}

double norm_j(const VectorXd& x, int j) {
    if (j == 1) return x.lpNorm<1>();
    if (j == 2) return x.norm();
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), j);
    return std::pow(s, 1.0 / j);
}

// z^nu K_nu(z) and its derivative -z^nu K_{nu-1}(z), for the multivariate
// Laplace density (Gaussian scale mixture with exponential mixing).
double bessel_profile(double nu, double z) { return std::pow(z, nu) * std::cyl_bessel_k(nu, z); }

}  // namespace

MixingKernelSpec MixingKernelSpec::gaussian(int d) { return {KernelFamily::Gaussian, d}; }
MixingKernelSpec MixingKernelSpec::tensor_laplace(int d) { return {KernelFamily::TensorLaplace, d}; }
MixingKernelSpec MixingKernelSpec::multivariate_cauchy(int d, double alpha) {
    return {KernelFamily::MultivariateCauchy, d, alpha};
}
MixingKernelSpec MixingKernelSpec::tensor_cauchy(int d, double alpha) {
    return {KernelFamily::TensorCauchy, d, alpha};
}
MixingKernelSpec MixingKernelSpec::multivariate_laplace(int d) {
    return {KernelFamily::MultivariateLaplace, d};
}
MixingKernelSpec MixingKernelSpec::super_smooth(int d, double alpha, double beta, int j) {
    return {KernelFamily::SuperSmooth, d, alpha, beta, j};
}

bool MixingKernelSpec::separable() const {
    switch (family) {
        case KernelFamily::Gaussian:
        case KernelFamily::TensorLaplace:
        case KernelFamily::TensorCauchy:
            return true;
        case KernelFamily::SuperSmooth:
            // exp(-alpha ||w||_j^beta) factorizes only when beta == j
            return static_cast<double>(norm_index) == beta;
        default:
            return false;
    }
}

double MixingKernelSpec::spectral_factor_1d(double w) const {
    switch (family) {
        case KernelFamily::Gaussian:
            return std::exp(-0.5 * w * w);
        case KernelFamily::TensorLaplace:
            return 1.0 / (1.0 + w * w);
        case KernelFamily::TensorCauchy:
            return std::exp(-alpha * std::abs(w));
        case KernelFamily::SuperSmooth:
            return std::exp(-alpha * std::pow(std::abs(w), beta));
        default:
            throw std::logic_error("spectral_factor_1d on non-separable family");
    }
}

double MixingKernelSpec::spread() const {
    switch (family) {
        case KernelFamily::Gaussian:
            return 1.0;
        case KernelFamily::TensorLaplace:
        case KernelFamily::MultivariateLaplace:
            return std::sqrt(2.0);
        case KernelFamily::MultivariateCauchy:
        case KernelFamily::TensorCauchy:
            return std::sqrt(alpha);  // scale parameter; no finite variance
        case KernelFamily::SuperSmooth:
            return 1.0 / std::max(1e-3, std::pow(alpha, 1.0 / beta));
    }
    return 1.0;
}

double spectral_density(const MixingKernelSpec& spec, const VectorXd& omega) {
    check_dim(spec, omega);
    switch (spec.family) {
        case KernelFamily::Gaussian:
            return std::exp(-0.5 * omega.squaredNorm());
        case KernelFamily::TensorLaplace: {
            double p = 1.0;
            for (int j = 0; j < omega.size(); ++j) p /= 1.0 + omega[j] * omega[j];
            return p;
        }
        case KernelFamily::MultivariateCauchy:
            return std::exp(-std::sqrt(spec.alpha) * omega.norm());
        case KernelFamily::TensorCauchy:
            return std::exp(-spec.alpha * omega.lpNorm<1>());
        case KernelFamily::MultivariateLaplace:
            return 2.0 / (2.0 + omega.squaredNorm());
        case KernelFamily::SuperSmooth:
            return std::exp(-spec.alpha * std::pow(norm_j(omega, spec.norm_index), spec.beta));
    }
    throw std::logic_error("unknown kernel family");
}

double mixing_density(const MixingKernelSpec& spec, const VectorXd& x) {
    check_dim(spec, x);
    const int d = spec.dim;
    switch (spec.family) {
        case KernelFamily::Gaussian:
            return std::pow(2.0 * M_PI, -0.5 * d) * std::exp(-0.5 * x.squaredNorm());
        case KernelFamily::TensorLaplace:
            return std::pow(0.5, d) * std::exp(-x.lpNorm<1>());
        case KernelFamily::MultivariateCauchy: {
            // F^{-1}[exp(-sqrt(alpha)||t||)]: multivariate Cauchy with scale sqrt(alpha)
            const double s2 = spec.alpha;
            const double c = std::tgamma(0.5 * (d + 1)) /
                             (std::tgamma(0.5) * std::pow(M_PI, 0.5 * d) * std::pow(s2, 0.5 * d));
            return c * std::pow(1.0 + x.squaredNorm() / s2, -0.5 * (d + 1));
        }
        case KernelFamily::TensorCauchy: {
            double p = 1.0;
            for (int j = 0; j < d; ++j)
                p *= spec.alpha / (M_PI * (x[j] * x[j] + spec.alpha * spec.alpha));
            return p;
        }
        case KernelFamily::MultivariateLaplace: {
            const double nu = 0.5 * (2.0 - d);
            const double r = x.norm();
            if (r == 0.0) {
                if (d == 1) return 1.0 / std::sqrt(2.0);
                // K_nu blows up at 0 for d >= 2 (integrable singularity)
                return std::numeric_limits<double>::infinity();
            }
            return std::pow(2.0, 1.0 - nu) * std::pow(2.0 * M_PI, -0.5 * d) *
                   bessel_profile(nu, std::sqrt(2.0) * r);
        }
        case KernelFamily::SuperSmooth:
            throw std::domain_error(
                "super-smooth family has no closed-form density; only sigma is used");
    }
    throw std::logic_error("unknown kernel family");
}

VectorXd mixing_gradient(const MixingKernelSpec& spec, const VectorXd& x) {
    check_dim(spec, x);
    const int d = spec.dim;
    VectorXd g(d);
    switch (spec.family) {
        case KernelFamily::Gaussian:
            return -mixing_density(spec, x) * x;
        case KernelFamily::TensorLaplace: {
            const double f = mixing_density(spec, x);
            for (int j = 0; j < d; ++j) {
                if (x[j] == 0.0)
                    throw std::domain_error("tensor-laplace gradient undefined at zero coordinate");
                g[j] = -f * (x[j] > 0 ? 1.0 : -1.0);
            }
            return g;
        }
        case KernelFamily::MultivariateCauchy: {
            const double f = mixing_density(spec, x);
            return -f * (d + 1.0) / (spec.alpha + x.squaredNorm()) * x;
        }
        case KernelFamily::TensorCauchy: {
            const double f = mixing_density(spec, x);
            for (int j = 0; j < d; ++j)
                g[j] = -f * 2.0 * x[j] / (x[j] * x[j] + spec.alpha * spec.alpha);
            return g;
        }
        case KernelFamily::MultivariateLaplace: {
            const double r = x.norm();
            if (r == 0.0)
                throw std::domain_error("multivariate-laplace gradient undefined at the origin");
            const double nu = 0.5 * (2.0 - d);
            const double z = std::sqrt(2.0) * r;
            // d/dz [z^nu K_nu(z)] = -z^nu K_{nu-1}(z)
            const double dprof = -std::pow(z, nu) * std::cyl_bessel_k(std::abs(nu - 1.0), z);
            const double c = std::pow(2.0, 1.0 - nu) * std::pow(2.0 * M_PI, -0.5 * d);
            return c * dprof * std::sqrt(2.0) / r * x;
        }
        case KernelFamily::SuperSmooth:
            throw std::domain_error("super-smooth family has no closed-form density gradient");
    }
    throw std::logic_error("unknown kernel family");
}

double fidelity_kernel(const FidelitySpec& spec, const VectorXd& x) {
    if (x.size() != spec.dim) throw std::invalid_argument("fidelity kernel dimension mismatch");
    double v = std::pow(spec.tau, -spec.dim);
    for (int j = 0; j < spec.dim; ++j) {
        const double u = M_PI * x[j] / spec.tau;
        v *= (std::abs(u) < 1e-8) ? 1.0 - u * u / 6.0 : std::sin(u) / u;
    }
    return v;
}

std::string family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::TensorLaplace: return "tensor-laplace";
        case KernelFamily::MultivariateCauchy: return "multivariate-cauchy";
        case KernelFamily::TensorCauchy: return "tensor-cauchy";
        case KernelFamily::MultivariateLaplace: return "multivariate-laplace";
        case KernelFamily::SuperSmooth: return "super-smooth";
    }
    return "?";
}

KernelFamily family_from_name(const std::string& name) {
    if (name == "gaussian") return KernelFamily::Gaussian;
    if (name == "tensor-laplace") return KernelFamily::TensorLaplace;
    if (name == "multivariate-cauchy") return KernelFamily::MultivariateCauchy;
    if (name == "tensor-cauchy") return KernelFamily::TensorCauchy;
    if (name == "multivariate-laplace") return KernelFamily::MultivariateLaplace;
    if (name == "super-smooth") return KernelFamily::SuperSmooth;
    throw std::invalid_argument("unknown kernel family: " + name);
}

MixingKernelSpec MixingKernelSpec::from_json(const nlohmann::json& j) {
    MixingKernelSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    spec.dim = j.at("dim").get<int>();
    if (j.contains("params")) {
        const auto& p = j["params"];
        if (p.contains("alpha")) spec.alpha = p["alpha"].get<double>();
        if (p.contains("beta")) spec.beta = p["beta"].get<double>();
        if (p.contains("j")) spec.norm_index = p["j"].get<int>();
    }
    if (spec.dim < 1) throw std::invalid_argument("kernel dim must be positive");
    return spec;
}

nlohmann::json MixingKernelSpec::to_json() const {
    return {{"family", family_name(family)},
            {"dim", dim},
            {"params", {{"alpha", alpha}, {"beta", beta}, {"j", norm_index}}}};
}

FidelitySpec FidelitySpec::from_json(const nlohmann::json& j) {
    FidelitySpec spec;
    spec.tau = j.at("tau").get<double>();
    spec.dim = j.at("dim").get<int>();
    if (j.contains("quad_points_per_dim"))
        spec.quad_points_per_dim = j["quad_points_per_dim"].get<int>();
    if (spec.tau <= 0) throw std::invalid_argument("tau must be positive");
    if (spec.quad_points_per_dim < 8)
        throw std::invalid_argument("quad_points_per_dim must be >= 8");
    return spec;
}

nlohmann::json FidelitySpec::to_json() const {
    return {{"tau", tau}, {"dim", dim}, {"quad_points_per_dim", quad_points_per_dim}};
}

}  // namespace supermix
