#include "supermix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "supermix/certificate.hpp"

namespace supermix {

double bregman_divergence(const DiscreteMeasure& estimate, const DiscreteMeasure& truth,
                          const Certificate& cert) {
    if (cert.kind != CertificateKind::P)
        throw std::invalid_argument("bregman_divergence needs a kind-P certificate");
    if (estimate.dim() != truth.dim() || estimate.dim() != cert.dim())
        throw std::invalid_argument("bregman_divergence dimension mismatch");
    double div = total_variation(estimate) - total_variation(truth);
    for (const auto& a : estimate.atoms()) div -= a.weight * cert.value(a.location);
    for (const auto& a : truth.atoms()) div += a.weight * cert.value(a.location);
    return div;
}

RegionMasses region_masses(const DiscreteMeasure& estimate, const RegionSpec& region) {
    const auto& centers = region.truth_support;
    if (centers.empty()) throw std::invalid_argument("region_masses: empty truth support");
    if (region.epsilon < 0.0) throw std::invalid_argument("region_masses: negative epsilon");
    if (centers.size() >= 2) {
        double delta = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < centers.size(); ++i)
            for (std::size_t j = i + 1; j < centers.size(); ++j)
                delta = std::min(delta, (centers[i] - centers[j]).norm());
        if (region.epsilon >= 0.5 * delta)
            throw std::invalid_argument("region_masses: near regions overlap");
    }

    RegionMasses out;
    out.per_k_signed_near.assign(centers.size(), 0.0);
    for (const auto& a : estimate.atoms()) {
        if (a.weight < 0.0) out.neg_mass_total -= a.weight;
        std::size_t best = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const double d = (a.location - centers[k]).norm();
            if (d < dist) {
                dist = d;
                best = k;
            }
        }
        if (dist <= region.epsilon)
            out.per_k_signed_near[best] += a.weight;
        else if (a.weight > 0.0)
            out.pos_mass_far += a.weight;
    }
    return out;
}

RateQuantities rate_quantities(int K, int d, double m, int n, const MixingKernelSpec& mixing) {
    if (K < 1 || d < 1 || n < 1 || m <= 0.0)
        throw std::invalid_argument("rate_quantities: bad arguments");
    if (mixing.dim != d) throw std::invalid_argument("rate_quantities: dimension mismatch");
    const double inf_sigma = sigma_box_inf(mixing, 4.0 * m);
    if (inf_sigma <= 0.0) throw std::runtime_error("sigma vanishes on the band");
    RateQuantities rq;
    rq.rho_n = std::pow(2.0, d) * std::pow(m, 0.5 * d) / std::sqrt(static_cast<double>(n));
    rq.c_m = static_cast<double>(K) * K * std::pow(m, -0.5 * d) * std::pow(2.0, 0.5 * d) /
             inf_sigma;
    rq.product_bound = rq.rho_n * rq.c_m;
    return rq;
}

double kappa_auto(int K, int d, double m, int n, const MixingKernelSpec& mixing, double factor) {
    const RateQuantities rq = rate_quantities(K, d, m, n, mixing);
    return factor * rq.rho_n / rq.c_m;
}

SupportError support_error(const DiscreteMeasure& estimate, const DiscreteMeasure& truth) {
    if (truth.empty()) throw std::invalid_argument("support_error: empty truth");
    if (!estimate.empty() && estimate.dim() != truth.dim())
        throw std::invalid_argument("support_error: dimension mismatch");

    const double radius =
        (truth.size() >= 2) ? 0.25 * min_separation(truth) : 0.0;
    const DiscreteMeasure merged = merge_close(estimate, radius);

    SupportError err;
    err.k_hat = static_cast<int>(merged.size());
    if (merged.empty()) {
        err.hausdorff = std::numeric_limits<double>::infinity();
        err.matched_weight_l1 = total_variation(truth);
        return err;
    }

    // Hausdorff distance between supports
    double h = 0.0;
    for (const auto& a : merged.atoms()) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& b : truth.atoms()) d = std::min(d, (a.location - b.location).norm());
        h = std::max(h, d);
    }
    for (const auto& b : truth.atoms()) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& a : merged.atoms()) d = std::min(d, (a.location - b.location).norm());
        h = std::max(h, d);
    }
    err.hausdorff = h;

    // greedy matching on distance, closest pairs first; unmatched atoms on
    // either side contribute their full weight
    std::vector<bool> used_est(merged.size(), false), used_truth(truth.size(), false);
    const std::size_t pairs = std::min(merged.size(), truth.size());
    double l1 = 0.0;
    for (std::size_t p = 0; p < pairs; ++p) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < merged.size(); ++i) {
            if (used_est[i]) continue;
            for (std::size_t j = 0; j < truth.size(); ++j) {
                if (used_truth[j]) continue;
                const double d =
                    (merged.atoms()[i].location - truth.atoms()[j].location).norm();
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_est[bi] = true;
        used_truth[bj] = true;
        l1 += std::abs(merged.atoms()[bi].weight - truth.atoms()[bj].weight);
    }
    for (std::size_t i = 0; i < merged.size(); ++i)
        if (!used_est[i]) l1 += std::abs(merged.atoms()[i].weight);
    for (std::size_t j = 0; j < truth.size(); ++j)
        if (!used_truth[j]) l1 += std::abs(truth.atoms()[j].weight);
    err.matched_weight_l1 = l1;
    return err;
}

}  // namespace supermix
