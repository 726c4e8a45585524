#include "doctest.h"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "supermix/fidelity.hpp"
#include "supermix/quadrature.hpp"
#include "supermix/rng.hpp"

using namespace supermix;

namespace {

VectorXd vec1(double x) {
    VectorXd v(1);
    v[0] = x;
    return v;
}

double gauss_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// band-limited sinc: (1/2) int_{-c}^{c} cos(u w) dw
double band_sinc(double u, double cutoff) {
    if (std::abs(u) < 1e-12) return cutoff;
    return std::sin(u * cutoff) / u;
}

// spatial-domain oracle for xi = band_sinc * gauss_pdf (convolution), by
// composite Gauss-Legendre; independent of the frequency-domain code path
double xi_spatial(double u, double tau) {
    const double R = 12.0, panel = 0.15;
    const int panels = static_cast<int>(std::ceil(2.0 * R / panel));
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        auto [x, w] = gauss_legendre(10, u - R + p * panel, u - R + (p + 1) * panel);
        for (int i = 0; i < x.size(); ++i)
            acc += w[i] * band_sinc(x[i], 1.0 / tau) * gauss_pdf(u - x[i]);
    }
    return acc;
}

// zeta = xi * gauss_pdf: the second (outer) quadrature of the double integral
double zeta_spatial(double u, double tau) {
    const double R = 12.0, panel = 0.5;
    const int panels = static_cast<int>(std::ceil(2.0 * R / panel));
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        auto [y, w] = gauss_legendre(10, -R + p * panel, -R + (p + 1) * panel);
        for (int i = 0; i < y.size(); ++i)
            acc += w[i] * xi_spatial(u - y[i], tau) * gauss_pdf(y[i]);
    }
    return acc;
}

std::shared_ptr<CorrelationEvaluator> gaussian_corr(double tau, int quad = 512) {
    FidelitySpec fid;
    fid.tau = tau;
    fid.dim = 1;
    fid.quad_points_per_dim = quad;
    return std::make_shared<CorrelationEvaluator>(MixingKernelSpec::gaussian(1), fid);
}

}  // namespace

TEST_CASE("xi(0) and zeta(0) match gaussian error-function closed forms") {
    for (double tau : {0.1, 0.25}) {
        auto corr = gaussian_corr(tau);
        const double c = 1.0 / tau;
        const double xi0 = std::sqrt(M_PI / 2.0) * std::erf(c / std::sqrt(2.0));
        const double zeta0 = 0.5 * std::sqrt(M_PI) * std::erf(c);
        CHECK(corr->xi(vec1(0.0)) == doctest::Approx(xi0).epsilon(1e-8));
        CHECK(corr->zeta(vec1(0.0)) == doctest::Approx(zeta0).epsilon(1e-8));
    }
}

TEST_CASE("xi and zeta match the spatial-domain convolution oracle") {
    const double tau = 0.25;
    auto corr = gaussian_corr(tau);
    for (double u : {0.0, 0.35, 1.0, 2.4}) {
        CHECK(corr->xi(vec1(u)) == doctest::Approx(xi_spatial(u, tau)).epsilon(1e-8));
        CHECK(corr->zeta(vec1(u)) == doctest::Approx(zeta_spatial(u, tau)).epsilon(1e-7));
    }
}

TEST_CASE("correlations are even and peaked at zero") {
    auto corr = gaussian_corr(0.1);
    for (double u : {0.4, 1.7, 6.3}) {
        CHECK(corr->xi(vec1(u)) == doctest::Approx(corr->xi(vec1(-u))));
        CHECK(corr->zeta(vec1(u)) == doctest::Approx(corr->zeta(vec1(-u))));
        CHECK(corr->xi(vec1(u)) < corr->xi(vec1(0.0)));
    }
}

TEST_CASE("correlation gradients match finite differences (separable and tensor paths)") {
    const double h = 1e-6;

    FidelitySpec fid2;
    fid2.tau = 0.5;
    fid2.dim = 2;
    fid2.quad_points_per_dim = 64;
    CorrelationEvaluator sep(MixingKernelSpec::gaussian(2), fid2);
    CorrelationEvaluator tensor(MixingKernelSpec::multivariate_laplace(2), fid2);

    VectorXd u(2);
    u << 0.8, -0.3;
    for (const CorrelationEvaluator* corr : {&sep, &tensor}) {
        const VectorXd gx = corr->xi_gradient(u);
        const VectorXd gz = corr->zeta_gradient(u);
        for (int j = 0; j < 2; ++j) {
            VectorXd up = u, um = u;
            up[j] += h;
            um[j] -= h;
            CHECK(gx[j] == doctest::Approx((corr->xi(up) - corr->xi(um)) / (2 * h)).epsilon(1e-6));
            CHECK(gz[j] ==
                  doctest::Approx((corr->zeta(up) - corr->zeta(um)) / (2 * h)).epsilon(1e-6));
        }
    }
}

TEST_CASE("empirical data term agrees with the direct xi average") {
    auto corr = gaussian_corr(0.25);
    DiscreteMeasure truth(1, {{0.5, vec1(-2.0)}, {0.5, vec1(1.5)}});
    Sample sample = sample_mixture(truth, corr->mixing(), 25, 4);
    DataFit data = DataFit::empirical(corr, sample);
    for (double t : {-2.1, 0.0, 1.4}) {
        double direct = 0.0;
        for (const auto& x : sample.points) direct += corr->xi(vec1(t) - x);
        direct /= sample.points.size();
        CHECK(data.data_xi(vec1(t)) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("exact-moment data term agrees with the zeta sum") {
    auto corr = gaussian_corr(0.25);
    DiscreteMeasure truth(1, {{0.3, vec1(-2.0)}, {0.7, vec1(1.5)}});
    DataFit data = DataFit::exact_moments(corr, truth);
    for (double t : {-2.1, 0.3, 1.4}) {
        double direct = 0.0;
        for (const auto& a : truth.atoms()) direct += a.weight * corr->zeta(vec1(t) - a.location);
        CHECK(data.data_xi(vec1(t)) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("empirical const term matches the pairwise band-sinc closed form") {
    const double tau = 0.25;
    auto corr = gaussian_corr(tau);
    DiscreteMeasure truth(1, {{1.0, vec1(0.5)}});
    Sample sample = sample_mixture(truth, corr->mixing(), 15, 2);
    DataFit data = DataFit::empirical(corr, sample);
    const double n = sample.points.size();
    double pairwise = 0.0;
    for (const auto& xk : sample.points)
        for (const auto& xl : sample.points) pairwise += band_sinc(xk[0] - xl[0], 1.0 / tau);
    CHECK(data.const_term() == doctest::Approx(pairwise / (2.0 * n * n)).epsilon(1e-10));
}

TEST_CASE("objective from (b, Q) matches the spatial double-quadrature oracle") {
    const double tau = 0.25;
    auto corr = gaussian_corr(tau);
    DiscreteMeasure truth(1, {{0.4, vec1(-2.0)}, {0.3, vec1(0.5)}, {0.3, vec1(3.0)}});
    Sample sample = sample_mixture(truth, corr->mixing(), 20, 9);
    DataFit data = DataFit::empirical(corr, sample);

    std::vector<VectorXd> support = {vec1(-2.0), vec1(0.5), vec1(3.0)};
    FidelityCache cache = build_cache(data, support);
    VectorXd a(3);
    a << 0.3, -0.2, 0.4;
    const double ours = objective(cache, a);

    const double n = sample.points.size();
    double oracle = 0.0;
    for (const auto& xk : sample.points)
        for (const auto& xl : sample.points)
            oracle += band_sinc(xk[0] - xl[0], 1.0 / tau) / (2.0 * n * n);
    for (int i = 0; i < 3; ++i) {
        double bi = 0.0;
        for (const auto& xk : sample.points) bi -= xi_spatial(support[i][0] - xk[0], tau);
        oracle += a[i] * bi / n;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            oracle += 0.5 * a[i] * a[j] * zeta_spatial(support[i][0] - support[j][0], tau);

    CHECK(ours == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("extend_cache reproduces build_cache") {
    auto corr = gaussian_corr(0.25);
    DiscreteMeasure truth(1, {{1.0, vec1(0.0)}});
    DataFit data = DataFit::exact_moments(corr, truth);
    std::vector<VectorXd> base = {vec1(-1.0), vec1(0.4)};
    FidelityCache grown = build_cache(data, base);
    extend_cache(data, grown, vec1(2.2));
    FidelityCache full = build_cache(data, {vec1(-1.0), vec1(0.4), vec1(2.2)});
    CHECK((grown.Q - full.Q).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK((grown.b - full.b).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("cache construction validates inputs") {
    auto corr = gaussian_corr(0.25);
    DataFit data = DataFit::exact_moments(corr, DiscreteMeasure(1, {{1.0, vec1(0.0)}}));
    CHECK_THROWS_AS(build_cache(data, {}), std::invalid_argument);
    FidelityCache cache = build_cache(data, {vec1(0.0)});
    VectorXd wrong(2);
    wrong << 1.0, 2.0;
    CHECK_THROWS_AS(objective(cache, wrong), std::invalid_argument);
}

TEST_CASE("eta matches its defining formula and finite differences") {
    auto corr = gaussian_corr(0.25);
    DiscreteMeasure truth(1, {{0.6, vec1(-1.0)}, {0.4, vec1(2.0)}});
    Sample sample = sample_mixture(truth, corr->mixing(), 30, 6);
    DataFit data = DataFit::empirical(corr, sample);
    DiscreteMeasure mu(1, {{0.5, vec1(-1.1)}, {-0.1, vec1(0.7)}});
    const double kappa = 0.05;
    EtaProfile profile(data, mu, kappa);

    for (double t : {-1.3, 0.0, 2.2}) {
        double direct = data.data_xi(vec1(t));
        for (const auto& a : mu.atoms()) direct -= a.weight * corr->zeta(vec1(t) - a.location);
        direct /= kappa;
        CHECK(profile.value(vec1(t)) == doctest::Approx(direct).epsilon(1e-10));

        const double h = 1e-6;
        const double fd = (profile.value(vec1(t + h)) - profile.value(vec1(t - h))) / (2 * h);
        CHECK(profile.gradient(vec1(t))[0] == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK_THROWS_AS(EtaProfile(data, mu, 0.0), std::invalid_argument);
}

TEST_CASE("eta of the exact-moment truth vanishes on the support") {
    auto corr = gaussian_corr(0.1);
    DiscreteMeasure truth(1, {{0.36, vec1(-13.1)}, {0.52, vec1(-0.9)}, {0.12, vec1(14.0)}});
    DataFit data = DataFit::exact_moments(corr, truth);
    for (const auto& a : truth.atoms())
        CHECK(eta(data, truth, 1e-6, a.location) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("Q is positive semidefinite across random instances") {
    Rng rng(123);
    for (int inst = 0; inst < 20; ++inst) {
        const int d = 1 + static_cast<int>(rng.raw() % 2);
        FidelitySpec fid;
        fid.tau = rng.uniform(0.15, 0.5);
        fid.dim = d;
        fid.quad_points_per_dim = 96;
        const MixingKernelSpec mixing = (inst % 2 == 0)
                                            ? MixingKernelSpec::gaussian(d)
                                            : MixingKernelSpec::multivariate_laplace(d);
        CorrelationEvaluator corr(mixing, fid);
        const int k = 2 + static_cast<int>(rng.raw() % 4);
        std::vector<VectorXd> support;
        for (int i = 0; i < k; ++i) {
            VectorXd t(d);
            for (int j = 0; j < d; ++j) t[j] = rng.uniform(-4.0, 4.0);
            support.push_back(t);
        }
        MatrixXd Q(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) Q(i, j) = corr.zeta(support[i] - support[j]);
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Q);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}
