#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace supermix {

using Eigen::VectorXd;

enum class KernelFamily {
    Gaussian,            // sigma(w) = exp(-||w||_2^2 / 2)
    TensorLaplace,       // sigma(w) = prod 1/(1+w_j^2)
    MultivariateCauchy,  // sigma(w) = exp(-sqrt(alpha) ||w||_2)
    TensorCauchy,        // sigma(w) = exp(-alpha ||w||_1)
    MultivariateLaplace, // sigma(w) = 2/(2+||w||_2^2)
    SuperSmooth,         // sigma(w) = exp(-alpha ||w||_j^beta)
};

// The known mixing density phi together with its exact spectral density
// sigma = F[phi]. sigma is stored in closed form per family; all fidelity
// integrals are evaluated against sigma in the frequency domain.
struct MixingKernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    int dim = 1;
    double alpha = 1.0;  // Cauchy dispersion/scale, super-smooth rate
    double beta = 1.0;   // super-smooth exponent
    int norm_index = 2;  // super-smooth: which l^j norm

    static MixingKernelSpec gaussian(int d);
    static MixingKernelSpec tensor_laplace(int d);
    static MixingKernelSpec multivariate_cauchy(int d, double alpha);
    static MixingKernelSpec tensor_cauchy(int d, double alpha);
    static MixingKernelSpec multivariate_laplace(int d);
    static MixingKernelSpec super_smooth(int d, double alpha, double beta, int j);

    static MixingKernelSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    // true when sigma factorizes across coordinates
    bool separable() const;
    // 1-D spectral factor for separable families
    double spectral_factor_1d(double w) const;
    // crude spatial scale of the noise, used for default search boxes
    double spread() const;
};

double mixing_density(const MixingKernelSpec& spec, const VectorXd& x);
double spectral_density(const MixingKernelSpec& spec, const VectorXd& omega);
// throws std::domain_error at non-differentiable points (tensor-laplace with a
// zero coordinate, multivariate families at the origin)
VectorXd mixing_gradient(const MixingKernelSpec& spec, const VectorXd& x);

// Band-limited sinc fidelity kernel lambda_tau with frequency cutoff 1/tau;
// its spectral measure has density 2^-d on the box [-1/tau, 1/tau]^d.
struct FidelitySpec {
    double tau = 0.1;
    int dim = 1;
    // Gauss-Legendre order per dimension. Resolves phases u*omega up to
    // roughly |u| * cutoff ~ quad_points_per_dim; keep it above the largest
    // location-sample distance times 1/tau or zeta aliases to O(1) garbage.
    int quad_points_per_dim = 512;

    double cutoff() const { return 1.0 / tau; }

    static FidelitySpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// tau^-d prod_j sinc(pi x_j / tau)
double fidelity_kernel(const FidelitySpec& spec, const VectorXd& x);

std::string family_name(KernelFamily f);
KernelFamily family_from_name(const std::string& name);

}  // namespace supermix
