#pragma once

#include <Eigen/Dense>
#include <vector>

#include "supermix/kernels.hpp"

namespace supermix {

using Eigen::MatrixXd;

// sinc and its first two derivatives, with series branches near the origin
// where the closed forms are 0/0.
double sinc(double x);
double sinc_d1(double x);
double sinc_d2(double x);

// psi_m(x) = prod_j sinc(m x_j)^4: interpolates 1 at 0 with vanishing
// gradient, Hessian -(4/3) m^2 I_d, and Fourier support in [-4m, 4m]^d.
struct PsiEvaluator {
    double m = 1.0;
    int dim = 1;

    double value(const VectorXd& x) const;
    VectorXd gradient(const VectorXd& x) const;
    MatrixXd hessian(const VectorXd& x) const;
};

enum class CertificateKind { P, Q };  // interpolate all-ones vs a selector

// p(t) = sum_k alpha_k psi_m(t - t_k) + <beta_k, grad psi_m(t - t_k)>, with
// (alpha, beta) solving the K(d+1) interpolation system p(t_i) = target_i,
// grad p(t_i) = 0. The certificate itself is the square p^2.
struct Certificate {
    double m = 1.0;
    std::vector<VectorXd> support;
    VectorXd alpha;   // length K
    MatrixXd beta;    // K x d
    CertificateKind kind = CertificateKind::P;
    int selector = -1;  // k for kind Q

    int count() const { return static_cast<int>(support.size()); }
    int dim() const { return static_cast<int>(support.front().size()); }

    double p_value(const VectorXd& t) const;
    VectorXd p_gradient(const VectorXd& t) const;
    double value(const VectorXd& t) const;  // p(t)^2
};

// throws std::runtime_error when the interpolation system is numerically
// singular (condition estimate attached to the message)
Certificate build_certificate(const std::vector<VectorXd>& support, double m,
                              CertificateKind kind = CertificateKind::P, int selector = -1);

// c sqrt(K) d^(3/2) / min(delta, 1); warning threshold and default bandwidth
double admissible_bandwidth(int K, int d, double delta, double c = 1.0);

struct AuditReport {
    double max_interp_residual = 0.0;  // max |p(t_k) - target_k|
    double max_grad_residual = 0.0;    // max ||grad p(t_k)||_inf
    double grid_max = 0.0;             // max of p^2 over the audit grid
    double near_constant = 0.0;        // min (1 - P) / (m^2 dist^2) over near region
    double far_gap = 0.0;              // min (1 - P) over far region
    double epsilon = 0.0;
    bool bandwidth_warning = false;    // m below admissible threshold
};

struct AuditGrid {
    VectorXd lo, hi;
    int points_per_dim = 2001;
};

// epsilon <= 0 picks the default 1/(m d)
AuditReport audit_certificate(const Certificate& cert, const AuditGrid& grid,
                              double epsilon = 0.0);

// L2 norm of P = p^2 by composite Gauss-Legendre over the support bounding box
// inflated by half_width (default 40 d / m), panels sized to the oscillation.
double certificate_l2_norm(const Certificate& cert, double half_width = 0.0,
                           int points_per_panel = 8);

// ||P||_2 / sqrt(inf over [-4m,4m]^d of sigma^2 F[lambda]); requires the
// fidelity cutoff 1/tau >= 4m (throws std::invalid_argument otherwise)
double c0m_norm_bound(const Certificate& cert, const MixingKernelSpec& mixing,
                      const FidelitySpec& fidelity);

// inf of sigma over the box ||t||_inf <= radius (attained at a corner for the
// monotone families)
double sigma_box_inf(const MixingKernelSpec& mixing, double radius);

}  // namespace supermix
