#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "supermix/kernels.hpp"
#include "supermix/measures.hpp"

namespace supermix {

using Eigen::MatrixXd;

// Frequency-domain evaluation of the correlation functions
//   xi   = lambda * phi        (data cross term)
//   zeta = lambda * phi * phi  (model Gram kernel)
// as integrals of sigma (resp. sigma^2) against the band-limited spectral
// measure, by Gauss-Legendre quadrature on [-1/tau, 1/tau]^d. Separable sigma
// uses per-dimension quadrature and products; otherwise the full tensor grid.
class CorrelationEvaluator {
public:
    // sigma_one = true replaces sigma by 1 (pure sinc test mode)
    CorrelationEvaluator(MixingKernelSpec mixing, FidelitySpec fidelity,
                         bool sigma_one = false);

    double xi(const VectorXd& u) const;
    double zeta(const VectorXd& u) const;
    VectorXd xi_gradient(const VectorXd& u) const;
    VectorXd zeta_gradient(const VectorXd& u) const;

    const MixingKernelSpec& mixing() const { return mixing_; }
    const FidelitySpec& fidelity() const { return fidelity_; }
    int dim() const { return fidelity_.dim; }

    // Tensor-product grid over the frequency box, shared by the spectral
    // representations below. node_count = quad_points_per_dim ^ d.
    int node_count() const { return static_cast<int>(tensor_nodes_.size()); }
    const std::vector<VectorXd>& tensor_nodes() const { return tensor_nodes_; }
    const VectorXd& weights_plain() const { return w_plain_; }    // 2^-d w_q
    const VectorXd& weights_sigma() const { return w_sigma_; }    // 2^-d w_q sigma
    const VectorXd& weights_sigma2() const { return w_sigma2_; }  // 2^-d w_q sigma^2

private:
    double integral(const VectorXd& u, bool squared) const;
    VectorXd integral_gradient(const VectorXd& u, bool squared) const;
    double sigma_at(const VectorXd& w) const;

    MixingKernelSpec mixing_;
    FidelitySpec fidelity_;
    bool sigma_one_;
    VectorXd nodes_1d_, weights_1d_;
    std::vector<VectorXd> tensor_nodes_;
    VectorXd w_plain_, w_sigma_, w_sigma2_;
};

// The data half of the fidelity term: either the empirical average over a
// sample, or its exact population counterpart computed from a truth measure
// ("exact-moment mode", isolating optimization error from statistical error).
class DataFit {
public:
    static DataFit empirical(std::shared_ptr<const CorrelationEvaluator> corr, Sample sample);
    static DataFit exact_moments(std::shared_ptr<const CorrelationEvaluator> corr,
                                 DiscreteMeasure truth);

    const CorrelationEvaluator& corr() const { return *corr_; }
    std::shared_ptr<const CorrelationEvaluator> corr_ptr() const { return corr_; }
    int dim() const { return corr_->dim(); }
    bool exact() const { return exact_; }
    const Sample& sample() const { return sample_; }
    const DiscreteMeasure& truth() const { return truth_; }

    // (1/n) sum_k xi(t - X_k), or sum_j a_j^0 zeta(t - t_j) in exact mode
    double data_xi(const VectorXd& t) const;
    VectorXd data_xi_gradient(const VectorXd& t) const;
    // (1/2) ||L fhat_n||^2 (resp. (1/2) ||L Phi mu0||^2)
    double const_term() const { return const_term_; }

    // spectral coefficients of data_xi on the tensor grid
    const VectorXd& spectral_cos() const { return dc_; }
    const VectorXd& spectral_sin() const { return ds_; }

private:
    DataFit(std::shared_ptr<const CorrelationEvaluator> corr, bool exact);

    std::shared_ptr<const CorrelationEvaluator> corr_;
    bool exact_;
    Sample sample_;
    DiscreteMeasure truth_{1};
    // spectral coefficients: data_xi(t) = sum_q [dc_q cos<t,w_q> + ds_q sin<t,w_q>]
    VectorXd dc_, ds_;
    double const_term_ = 0.0;
};

// b, Q expansion of F_N over a fixed support:
//   F_N(a) = const_term + a.b + a^T Q a / 2
struct FidelityCache {
    std::vector<VectorXd> support;
    VectorXd b;   // b_i = -(1/n) sum_k xi(X_k - t_i)
    MatrixXd Q;   // Q_ij = zeta(t_i - t_j), symmetric PSD
    double const_term = 0.0;
};

// throws std::invalid_argument on empty support
FidelityCache build_cache(const DataFit& data, const std::vector<VectorXd>& support);
// append one support point: one b entry, one Q row/column
void extend_cache(const DataFit& data, FidelityCache& cache, const VectorXd& t_new);

double objective(const FidelityCache& cache, const VectorXd& a);

// Dual function eta_mu = -grad F(mu) / kappa of a fixed measure, in spectral
// form so that repeated evaluation over grids costs O(node_count) per point.
class EtaProfile {
public:
    // throws std::invalid_argument if kappa <= 0
    EtaProfile(const DataFit& data, const DiscreteMeasure& mu, double kappa);

    double value(const VectorXd& t) const;
    VectorXd gradient(const VectorXd& t) const;

private:
    const DataFit* data_;
    double kappa_;
    VectorXd c_, s_;
};

// one-shot convenience wrappers
double eta(const DataFit& data, const DiscreteMeasure& mu, double kappa, const VectorXd& t);
VectorXd eta_gradient(const DataFit& data, const DiscreteMeasure& mu, double kappa,
                      const VectorXd& t);

}  // namespace supermix
