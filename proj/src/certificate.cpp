#include "supermix/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "supermix/measures.hpp"
#include "supermix/quadrature.hpp"

namespace supermix {

double sinc(double x) {
    const double x2 = x * x;
    if (std::abs(x) < 1e-4) return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    return std::sin(x) / x;
}

double sinc_d1(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return x * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0);
    }
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}

double sinc_d2(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return -1.0 / 3.0 + x2 / 10.0 - x2 * x2 / 168.0;
    }
    const double x2 = x * x;
    return ((2.0 - x2) * std::sin(x) - 2.0 * x * std::cos(x)) / (x2 * x);
}

namespace {

// per-coordinate factor q(y) = sinc(m y)^4 and its first two derivatives
struct Factor {
    double q, dq, d2q;
};

Factor factor_at(double m, double y) {
    const double u = m * y;
    const double g = sinc(u);
    const double g1 = sinc_d1(u);
    const double g2 = sinc_d2(u);
    const double g_2 = g * g;
    Factor f;
    f.q = g_2 * g_2;
    f.dq = 4.0 * m * g_2 * g * g1;
    f.d2q = 4.0 * m * m * g_2 * (3.0 * g1 * g1 + g * g2);
    return f;
}

}  // namespace

double PsiEvaluator::value(const VectorXd& x) const {
    if (x.size() != dim) throw std::invalid_argument("psi dimension mismatch");
    double v = 1.0;
    for (int j = 0; j < dim; ++j) {
        const double g = sinc(m * x[j]);
        v *= g * g * g * g;
    }
    return v;
}

VectorXd PsiEvaluator::gradient(const VectorXd& x) const {
    if (x.size() != dim) throw std::invalid_argument("psi dimension mismatch");
    std::vector<Factor> f(dim);
    for (int j = 0; j < dim; ++j) f[j] = factor_at(m, x[j]);
    VectorXd g(dim);
    for (int j = 0; j < dim; ++j) {
        double p = f[j].dq;
        for (int l = 0; l < dim; ++l)
            if (l != j) p *= f[l].q;
        g[j] = p;
    }
    return g;
}

MatrixXd PsiEvaluator::hessian(const VectorXd& x) const {
    if (x.size() != dim) throw std::invalid_argument("psi dimension mismatch");
    std::vector<Factor> f(dim);
    for (int j = 0; j < dim; ++j) f[j] = factor_at(m, x[j]);
    MatrixXd h(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k <= j; ++k) {
            double p = (j == k) ? f[j].d2q : f[j].dq * f[k].dq;
            for (int l = 0; l < dim; ++l)
                if (l != j && l != k) p *= f[l].q;
            h(j, k) = p;
            h(k, j) = p;
        }
    }
    return h;
}

double Certificate::p_value(const VectorXd& t) const {
    const PsiEvaluator psi{m, dim()};
    double v = 0.0;
    for (int k = 0; k < count(); ++k) {
        const VectorXd u = t - support[k];
        v += alpha[k] * psi.value(u);
        v += beta.row(k).dot(psi.gradient(u));
    }
    return v;
}

VectorXd Certificate::p_gradient(const VectorXd& t) const {
    const PsiEvaluator psi{m, dim()};
    VectorXd g = VectorXd::Zero(dim());
    for (int k = 0; k < count(); ++k) {
        const VectorXd u = t - support[k];
        g += alpha[k] * psi.gradient(u);
        g += psi.hessian(u) * beta.row(k).transpose();
    }
    return g;
}

double Certificate::value(const VectorXd& t) const {
    const double p = p_value(t);
    return p * p;
}

Certificate build_certificate(const std::vector<VectorXd>& support, double m,
                              CertificateKind kind, int selector) {
    if (support.empty()) throw std::invalid_argument("certificate needs a nonempty support");
    if (m <= 0.0) throw std::invalid_argument("bandwidth m must be positive");
    const int K = static_cast<int>(support.size());
    const int d = static_cast<int>(support.front().size());
    for (const auto& t : support)
        if (t.size() != d) throw std::invalid_argument("support points have mixed dimensions");
    if (kind == CertificateKind::Q && (selector < 0 || selector >= K))
        throw std::invalid_argument("selector index out of range");

    const PsiEvaluator psi{m, d};
    const int n = K * (d + 1);
    // unknowns: [alpha_0..alpha_{K-1}, beta_0 (d), ..., beta_{K-1} (d)]
    MatrixXd A(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < K; ++i) {
        for (int k = 0; k < K; ++k) {
            const VectorXd u = support[i] - support[k];
            const double v = psi.value(u);
            const VectorXd g = psi.gradient(u);
            const MatrixXd h = psi.hessian(u);
            // value equation at t_i
            A(i, k) = v;
            A.block(i, K + k * d, 1, d) = g.transpose();
            // gradient equations at t_i
            A.block(K + i * d, k, d, 1) = g;
            A.block(K + i * d, K + k * d, d, d) = h;
        }
        rhs[i] = (kind == CertificateKind::P) ? 1.0 : (i == selector ? 1.0 : 0.0);
    }

    Eigen::FullPivLU<MatrixXd> lu(A);
    if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "certificate interpolation system is numerically singular (rank "
            << lu.rank() << " of " << n << "); atoms too close for bandwidth m=" << m;
        throw std::runtime_error(msg.str());
    }
    const Eigen::VectorXd sol = lu.solve(rhs);

    Certificate cert;
    cert.m = m;
    cert.support = support;
    cert.kind = kind;
    cert.selector = (kind == CertificateKind::Q) ? selector : -1;
    cert.alpha = sol.head(K);
    cert.beta.resize(K, d);
    for (int k = 0; k < K; ++k) cert.beta.row(k) = sol.segment(K + k * d, d).transpose();
    return cert;
}

double admissible_bandwidth(int K, int d, double delta, double c) {
    if (K < 1 || d < 1) throw std::invalid_argument("admissible_bandwidth: bad K or d");
    if (delta <= 0.0) throw std::invalid_argument("admissible_bandwidth: delta must be positive");
    return c * std::sqrt(static_cast<double>(K)) * std::pow(static_cast<double>(d), 1.5) /
           std::min(delta, 1.0);
}

AuditReport audit_certificate(const Certificate& cert, const AuditGrid& grid, double epsilon) {
    const int d = cert.dim();
    const int K = cert.count();
    if (grid.lo.size() != d || grid.hi.size() != d)
        throw std::invalid_argument("audit grid dimension mismatch");
    if (grid.points_per_dim < 2) throw std::invalid_argument("audit grid too coarse");

    AuditReport report;
    report.epsilon = (epsilon > 0.0) ? epsilon : 1.0 / (cert.m * d);

    for (int k = 0; k < K; ++k) {
        const double target =
            (cert.kind == CertificateKind::P) ? 1.0 : (k == cert.selector ? 1.0 : 0.0);
        report.max_interp_residual =
            std::max(report.max_interp_residual, std::abs(cert.p_value(cert.support[k]) - target));
        report.max_grad_residual = std::max(
            report.max_grad_residual, cert.p_gradient(cert.support[k]).lpNorm<Eigen::Infinity>());
    }

    if (K >= 2) {
        double delta = std::numeric_limits<double>::infinity();
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j)
                delta = std::min(delta, (cert.support[i] - cert.support[j]).norm());
        report.bandwidth_warning = cert.m < admissible_bandwidth(K, d, delta);
    }

    const long npd = grid.points_per_dim;
    long total = 1;
    for (int j = 0; j < d; ++j) {
        total *= npd;
        if (total > (1L << 26)) throw std::invalid_argument("audit grid too large");
    }

    double near_const = std::numeric_limits<double>::infinity();
    double far_gap = std::numeric_limits<double>::infinity();
    std::vector<long> idx(d, 0);
    VectorXd t(d);
    for (long c = 0; c < total; ++c) {
        for (int j = 0; j < d; ++j)
            t[j] = grid.lo[j] + (grid.hi[j] - grid.lo[j]) * idx[j] / double(npd - 1);
        const double P = cert.value(t);
        report.grid_max = std::max(report.grid_max, P);
        double dist = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k) dist = std::min(dist, (t - cert.support[k]).norm());
        if (dist <= report.epsilon) {
            // below m*dist ~ 1e-6 the quadratic gap sits under the
            // interpolation round-off and the ratio is meaningless
            if (cert.m * dist > 1e-6)
                near_const = std::min(near_const, (1.0 - P) / (cert.m * cert.m * dist * dist));
        } else {
            far_gap = std::min(far_gap, 1.0 - P);
        }
        for (int j = 0; j < d; ++j) {
            if (++idx[j] < npd) break;
            idx[j] = 0;
        }
    }
    report.near_constant = near_const;
    report.far_gap = far_gap;
    return report;
}

double certificate_l2_norm(const Certificate& cert, double half_width, int points_per_panel) {
    const int d = cert.dim();
    if (points_per_panel < 2) throw std::invalid_argument("points_per_panel must be >= 2");
    if (half_width <= 0.0) half_width = 40.0 * d / cert.m;

    // per-dimension composite Gauss-Legendre nodes, panels of width 1/(2m)
    const double panel = 0.5 / cert.m;
    std::vector<VectorXd> nodes(d), weights(d);
    for (int j = 0; j < d; ++j) {
        double lo = cert.support.front()[j], hi = lo;
        for (const auto& t : cert.support) {
            lo = std::min(lo, t[j]);
            hi = std::max(hi, t[j]);
        }
        lo -= half_width;
        hi += half_width;
        const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel)));
        nodes[j].resize(panels * points_per_panel);
        weights[j].resize(panels * points_per_panel);
        const double h = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            auto [x, w] = gauss_legendre(points_per_panel, lo + p * h, lo + (p + 1) * h);
            nodes[j].segment(p * points_per_panel, points_per_panel) = x;
            weights[j].segment(p * points_per_panel, points_per_panel) = w;
        }
    }

    long total = 1;
    for (int j = 0; j < d; ++j) {
        total *= nodes[j].size();
        if (total > (1L << 26)) throw std::invalid_argument("certificate norm grid too large");
    }
    double acc = 0.0;
    std::vector<long> idx(d, 0);
    VectorXd t(d);
    for (long c = 0; c < total; ++c) {
        double w = 1.0;
        for (int j = 0; j < d; ++j) {
            t[j] = nodes[j][idx[j]];
            w *= weights[j][idx[j]];
        }
        const double P = cert.value(t);
        acc += w * P * P;
        for (int j = 0; j < d; ++j) {
            if (++idx[j] < nodes[j].size()) break;
            idx[j] = 0;
        }
    }
    return std::sqrt(acc);
}

double sigma_box_inf(const MixingKernelSpec& mixing, double radius) {
    if (radius < 0.0) throw std::invalid_argument("sigma_box_inf: negative radius");
    // all supported families are decreasing in each |omega_j|, so the infimum
    // over the sup-norm box sits at a corner
    VectorXd corner = VectorXd::Constant(mixing.dim, radius);
    return spectral_density(mixing, corner);
}

double c0m_norm_bound(const Certificate& cert, const MixingKernelSpec& mixing,
                      const FidelitySpec& fidelity) {
    if (mixing.dim != cert.dim() || fidelity.dim != cert.dim())
        throw std::invalid_argument("c0m_norm_bound dimension mismatch");
    if (fidelity.cutoff() < 4.0 * cert.m)
        throw std::invalid_argument("c0m_norm_bound requires cutoff 1/tau >= 4m");
    const double inf_sigma = sigma_box_inf(mixing, 4.0 * cert.m);
    if (inf_sigma <= 0.0) throw std::runtime_error("sigma vanishes on the certificate band");
    const double norm = certificate_l2_norm(cert);
    return norm * std::pow(2.0, 0.5 * cert.dim()) / inf_sigma;
}

}  // namespace supermix
