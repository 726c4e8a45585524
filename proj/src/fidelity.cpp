#include "supermix/fidelity.hpp"

#include <cmath>
#include <stdexcept>

#include "supermix/quadrature.hpp"

namespace supermix {

CorrelationEvaluator::CorrelationEvaluator(MixingKernelSpec mixing, FidelitySpec fidelity,
                                           bool sigma_one)
    : mixing_(std::move(mixing)), fidelity_(std::move(fidelity)), sigma_one_(sigma_one) {
    if (mixing_.dim != fidelity_.dim)
        throw std::invalid_argument("mixing and fidelity dimensions differ");
    const int d = fidelity_.dim;
    const int q = fidelity_.quad_points_per_dim;
    const double c = fidelity_.cutoff();
    std::tie(nodes_1d_, weights_1d_) = gauss_legendre(q, -c, c);

    const long total = static_cast<long>(std::pow(q, d));
    if (total > (1L << 22))
        throw std::invalid_argument("tensor quadrature grid too large; lower "
                                    "quad_points_per_dim or dim");
    tensor_nodes_.reserve(total);
    w_plain_.resize(total);
    w_sigma_.resize(total);
    w_sigma2_.resize(total);
    const double box_scale = std::pow(0.5, d);
    std::vector<int> idx(d, 0);
    for (long k = 0; k < total; ++k) {
        VectorXd node(d);
        double w = box_scale;
        for (int j = 0; j < d; ++j) {
            node[j] = nodes_1d_[idx[j]];
            w *= weights_1d_[idx[j]];
        }
        const double s = sigma_at(node);
        tensor_nodes_.push_back(std::move(node));
        w_plain_[k] = w;
        w_sigma_[k] = w * s;
        w_sigma2_[k] = w * s * s;
        for (int j = 0; j < d; ++j) {
            if (++idx[j] < q) break;
            idx[j] = 0;
        }
    }
}

double CorrelationEvaluator::sigma_at(const VectorXd& w) const {
    return sigma_one_ ? 1.0 : spectral_density(mixing_, w);
}

double CorrelationEvaluator::integral(const VectorXd& u, bool squared) const {
    if (u.size() != dim()) throw std::invalid_argument("correlation argument dimension mismatch");
    if (sigma_one_ || mixing_.separable()) {
        double prod = 1.0;
        for (int j = 0; j < dim(); ++j) {
            double acc = 0.0;
            for (int i = 0; i < nodes_1d_.size(); ++i) {
                double f = sigma_one_ ? 1.0 : mixing_.spectral_factor_1d(nodes_1d_[i]);
                if (squared) f *= f;
                acc += weights_1d_[i] * f * std::cos(u[j] * nodes_1d_[i]);
            }
            prod *= 0.5 * acc;
        }
        return prod;
    }
    const VectorXd& wv = squared ? w_sigma2_ : w_sigma_;
    double acc = 0.0;
    for (int q = 0; q < node_count(); ++q) acc += wv[q] * std::cos(u.dot(tensor_nodes_[q]));
    return acc;
}

VectorXd CorrelationEvaluator::integral_gradient(const VectorXd& u, bool squared) const {
    if (u.size() != dim()) throw std::invalid_argument("correlation argument dimension mismatch");
    const int d = dim();
    VectorXd g(d);
    if (sigma_one_ || mixing_.separable()) {
        VectorXd vals(d), ders(d);
        for (int j = 0; j < d; ++j) {
            double v = 0.0, dv = 0.0;
            for (int i = 0; i < nodes_1d_.size(); ++i) {
                double f = sigma_one_ ? 1.0 : mixing_.spectral_factor_1d(nodes_1d_[i]);
                if (squared) f *= f;
                v += weights_1d_[i] * f * std::cos(u[j] * nodes_1d_[i]);
                dv -= weights_1d_[i] * f * nodes_1d_[i] * std::sin(u[j] * nodes_1d_[i]);
            }
            vals[j] = 0.5 * v;
            ders[j] = 0.5 * dv;
        }
        for (int j = 0; j < d; ++j) {
            double p = ders[j];
            for (int l = 0; l < d; ++l)
                if (l != j) p *= vals[l];
            g[j] = p;
        }
        return g;
    }
    const VectorXd& wv = squared ? w_sigma2_ : w_sigma_;
    g.setZero();
    for (int q = 0; q < node_count(); ++q) {
        const double s = wv[q] * std::sin(u.dot(tensor_nodes_[q]));
        g -= s * tensor_nodes_[q];
    }
    return g;
}

double CorrelationEvaluator::xi(const VectorXd& u) const { return integral(u, false); }
double CorrelationEvaluator::zeta(const VectorXd& u) const { return integral(u, true); }
VectorXd CorrelationEvaluator::xi_gradient(const VectorXd& u) const {
    return integral_gradient(u, false);
}
VectorXd CorrelationEvaluator::zeta_gradient(const VectorXd& u) const {
    return integral_gradient(u, true);
}

DataFit::DataFit(std::shared_ptr<const CorrelationEvaluator> corr, bool exact)
    : corr_(std::move(corr)), exact_(exact) {}

DataFit DataFit::empirical(std::shared_ptr<const CorrelationEvaluator> corr, Sample sample) {
    if (sample.dim != corr->dim())
        throw std::invalid_argument("sample dimension does not match evaluator");
    DataFit fit(corr, false);
    const int nq = corr->node_count();
    fit.dc_ = VectorXd::Zero(nq);
    fit.ds_ = VectorXd::Zero(nq);
    const double n = static_cast<double>(sample.size());
    if (n > 0) {
        const auto& nodes = corr->tensor_nodes();
        for (int q = 0; q < nq; ++q) {
            double cs = 0.0, sn = 0.0;
            for (const auto& x : sample.points) {
                const double phase = x.dot(nodes[q]);
                cs += std::cos(phase);
                sn += std::sin(phase);
            }
            cs /= n;
            sn /= n;
            fit.dc_[q] = corr->weights_sigma()[q] * cs;
            fit.ds_[q] = corr->weights_sigma()[q] * sn;
            fit.const_term_ += 0.5 * corr->weights_plain()[q] * (cs * cs + sn * sn);
        }
    }
    fit.sample_ = std::move(sample);
    return fit;
}

DataFit DataFit::exact_moments(std::shared_ptr<const CorrelationEvaluator> corr,
                               DiscreteMeasure truth) {
    if (truth.dim() != corr->dim())
        throw std::invalid_argument("truth dimension does not match evaluator");
    DataFit fit(corr, true);
    const int nq = corr->node_count();
    fit.dc_ = VectorXd::Zero(nq);
    fit.ds_ = VectorXd::Zero(nq);
    const auto& nodes = corr->tensor_nodes();
    for (int q = 0; q < nq; ++q) {
        double cs = 0.0, sn = 0.0;
        for (const auto& a : truth.atoms()) {
            const double phase = a.location.dot(nodes[q]);
            cs += a.weight * std::cos(phase);
            sn += a.weight * std::sin(phase);
        }
        fit.dc_[q] = corr->weights_sigma2()[q] * cs;
        fit.ds_[q] = corr->weights_sigma2()[q] * sn;
        fit.const_term_ += 0.5 * corr->weights_sigma2()[q] * (cs * cs + sn * sn);
    }
    fit.sample_.dim = corr->dim();
    fit.truth_ = std::move(truth);
    return fit;
}

double DataFit::data_xi(const VectorXd& t) const {
    const auto& nodes = corr_->tensor_nodes();
    double acc = 0.0;
    for (int q = 0; q < corr_->node_count(); ++q) {
        const double phase = t.dot(nodes[q]);
        acc += dc_[q] * std::cos(phase) + ds_[q] * std::sin(phase);
    }
    return acc;
}

VectorXd DataFit::data_xi_gradient(const VectorXd& t) const {
    const auto& nodes = corr_->tensor_nodes();
    VectorXd g = VectorXd::Zero(t.size());
    for (int q = 0; q < corr_->node_count(); ++q) {
        const double phase = t.dot(nodes[q]);
        g += (-dc_[q] * std::sin(phase) + ds_[q] * std::cos(phase)) * nodes[q];
    }
    return g;
}

FidelityCache build_cache(const DataFit& data, const std::vector<VectorXd>& support) {
    if (support.empty()) throw std::invalid_argument("build_cache: empty support");
    if (!data.exact() && data.sample().size() == 0)
        throw std::invalid_argument("build_cache: empty sample");
    FidelityCache cache;
    cache.const_term = data.const_term();
    const int n = static_cast<int>(support.size());
    cache.b.resize(n);
    cache.Q.resize(n, n);
    cache.support = support;
    const auto& corr = data.corr();
    for (int i = 0; i < n; ++i) {
        cache.b[i] = -data.data_xi(support[i]);
        for (int j = 0; j <= i; ++j) {
            const double z = corr.zeta(support[i] - support[j]);
            cache.Q(i, j) = z;
            cache.Q(j, i) = z;
        }
    }
    return cache;
}

void extend_cache(const DataFit& data, FidelityCache& cache, const VectorXd& t_new) {
    const int n = static_cast<int>(cache.support.size());
    cache.support.push_back(t_new);
    cache.b.conservativeResize(n + 1);
    cache.b[n] = -data.data_xi(t_new);
    cache.Q.conservativeResize(n + 1, n + 1);
    const auto& corr = data.corr();
    for (int j = 0; j <= n; ++j) {
        const double z = corr.zeta(t_new - cache.support[j]);
        cache.Q(n, j) = z;
        cache.Q(j, n) = z;
    }
}

double objective(const FidelityCache& cache, const VectorXd& a) {
    if (a.size() != cache.b.size())
        throw std::invalid_argument("objective: amplitude length mismatch");
    return cache.const_term + a.dot(cache.b) + 0.5 * a.dot(cache.Q * a);
}

EtaProfile::EtaProfile(const DataFit& data, const DiscreteMeasure& mu, double kappa)
    : data_(&data), kappa_(kappa) {
    if (kappa <= 0.0) throw std::invalid_argument("eta requires kappa > 0");
    const auto& corr = data.corr();
    const auto& nodes = corr.tensor_nodes();
    const int nq = corr.node_count();
    c_.resize(nq);
    s_.resize(nq);
    for (int q = 0; q < nq; ++q) {
        double cs = 0.0, sn = 0.0;
        for (const auto& a : mu.atoms()) {
            const double phase = a.location.dot(nodes[q]);
            cs += a.weight * std::cos(phase);
            sn += a.weight * std::sin(phase);
        }
        // data term minus the smoothed model term
        c_[q] = -corr.weights_sigma2()[q] * cs;
        s_[q] = -corr.weights_sigma2()[q] * sn;
    }
    c_ += data_->spectral_cos();
    s_ += data_->spectral_sin();
}

double EtaProfile::value(const VectorXd& t) const {
    const auto& nodes = data_->corr().tensor_nodes();
    double acc = 0.0;
    for (int q = 0; q < c_.size(); ++q) {
        const double phase = t.dot(nodes[q]);
        acc += c_[q] * std::cos(phase) + s_[q] * std::sin(phase);
    }
    return acc / kappa_;
}

VectorXd EtaProfile::gradient(const VectorXd& t) const {
    const auto& nodes = data_->corr().tensor_nodes();
    VectorXd g = VectorXd::Zero(t.size());
    for (int q = 0; q < c_.size(); ++q) {
        const double phase = t.dot(nodes[q]);
        g += (-c_[q] * std::sin(phase) + s_[q] * std::cos(phase)) * nodes[q];
    }
    return g / kappa_;
}

double eta(const DataFit& data, const DiscreteMeasure& mu, double kappa, const VectorXd& t) {
    return EtaProfile(data, mu, kappa).value(t);
}

VectorXd eta_gradient(const DataFit& data, const DiscreteMeasure& mu, double kappa,
                      const VectorXd& t) {
    return EtaProfile(data, mu, kappa).gradient(t);
}

}  // namespace supermix
