#include "doctest.h"

#include <cmath>

#include "supermix/measures.hpp"

using namespace supermix;

namespace {
VectorXd vec1(double x) {
    VectorXd v(1);
    v[0] = x;
    return v;
}
}  // namespace

TEST_CASE("constructor merges bitwise-equal locations and drops zero weights") {
    DiscreteMeasure mu(1, {{0.3, vec1(1.0)}, {0.2, vec1(1.0)}, {0.0, vec1(2.0)}, {0.5, vec1(3.0)}});
    CHECK(mu.size() == 2);
    CHECK(mu.atoms()[0].weight == doctest::Approx(0.5));
    CHECK(mu.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("constructor drops atoms that cancel exactly") {
    DiscreteMeasure mu(1, {{0.3, vec1(1.0)}, {-0.3, vec1(1.0)}});
    CHECK(mu.empty());
}

TEST_CASE("wrong-dimension atom throws") {
    VectorXd v2(2);
    v2 << 1.0, 2.0;
    CHECK_THROWS_AS(DiscreteMeasure(1, {{1.0, v2}}), std::invalid_argument);
}

TEST_CASE("total variation and jordan decomposition") {
    DiscreteMeasure mu(1, {{0.7, vec1(0.0)}, {-0.2, vec1(1.0)}});
    CHECK(total_variation(mu) == doctest::Approx(0.9));
    auto [plus, minus] = jordan_decompose(mu);
    CHECK(plus.total_mass() == doctest::Approx(0.7));
    CHECK(minus.total_mass() == doctest::Approx(0.2));
    CHECK(minus.atoms()[0].weight > 0.0);
}

TEST_CASE("min_separation") {
    DiscreteMeasure mu(1, {{0.36, vec1(-13.1)}, {0.52, vec1(-0.9)}, {0.12, vec1(14.0)}});
    CHECK(min_separation(mu) == doctest::Approx(12.2));
    DiscreteMeasure single(1, {{1.0, vec1(0.0)}});
    CHECK_THROWS_AS(min_separation(single), std::invalid_argument);
}

TEST_CASE("merge_close uses single linkage and |w|-weighted means") {
    DiscreteMeasure mu(1, {{0.5, vec1(0.0)}, {0.25, vec1(0.4)}, {0.25, vec1(0.8)}, {1.0, vec1(5.0)}});
    // 0.0-0.4 and 0.4-0.8 are within 0.5 but 0.0-0.8 is not: single linkage
    // still joins all three
    DiscreteMeasure merged = merge_close(mu, 0.5);
    CHECK(merged.size() == 2);
    double w0 = merged.atoms()[0].weight;
    CHECK(((w0 == doctest::Approx(1.0)) || (w0 == doctest::Approx(1.0))));
    for (const auto& a : merged.atoms()) {
        if (a.weight == doctest::Approx(1.0) && std::abs(a.location[0]) < 2.0)
            CHECK(a.location[0] == doctest::Approx(0.3));  // (0.5*0 + 0.25*0.4 + 0.25*0.8)
    }
    CHECK_THROWS_AS(merge_close(mu, -1.0), std::invalid_argument);
}

TEST_CASE("merge_close with radius zero keeps distinct atoms") {
    DiscreteMeasure mu(1, {{0.5, vec1(0.0)}, {0.5, vec1(1.0)}});
    CHECK(merge_close(mu, 0.0).size() == 2);
}

TEST_CASE("is_probability_measure") {
    DiscreteMeasure good(1, {{0.4, vec1(0.0)}, {0.6, vec1(1.0)}});
    DiscreteMeasure bad_sign(1, {{1.5, vec1(0.0)}, {-0.5, vec1(1.0)}});
    DiscreteMeasure bad_mass(1, {{0.4, vec1(0.0)}});
    CHECK(is_probability_measure(good));
    CHECK_FALSE(is_probability_measure(bad_sign));
    CHECK_FALSE(is_probability_measure(bad_mass));
}

TEST_CASE("sampling is deterministic in the seed") {
    DiscreteMeasure truth(1, {{0.36, vec1(-13.1)}, {0.52, vec1(-0.9)}, {0.12, vec1(14.0)}});
    auto kernel = MixingKernelSpec::gaussian(1);
    Sample a = sample_mixture(truth, kernel, 50, 7);
    Sample b = sample_mixture(truth, kernel, 50, 7);
    Sample c = sample_mixture(truth, kernel, 50, 8);
    REQUIRE(a.points.size() == 50);
    for (int i = 0; i < 50; ++i) CHECK(a.points[i] == b.points[i]);
    bool any_diff = false;
    for (int i = 0; i < 50; ++i) any_diff = any_diff || (a.points[i] != c.points[i]);
    CHECK(any_diff);
}

TEST_CASE("sampling requires a probability measure") {
    DiscreteMeasure not_prob(1, {{0.5, vec1(0.0)}});
    CHECK_THROWS_AS(sample_mixture(not_prob, MixingKernelSpec::gaussian(1), 10, 0),
                    std::invalid_argument);
}

TEST_CASE("gaussian mixture sample means track component locations") {
    DiscreteMeasure truth(1, {{1.0, vec1(3.0)}});
    Sample s = sample_mixture(truth, MixingKernelSpec::gaussian(1), 20000, 3);
    double mean = 0.0, var = 0.0;
    for (const auto& x : s.points) mean += x[0];
    mean /= s.points.size();
    for (const auto& x : s.points) var += (x[0] - mean) * (x[0] - mean);
    var /= s.points.size();
    CHECK(mean == doctest::Approx(3.0).epsilon(0.02));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("multivariate laplace sample has unit coordinate variance") {
    // Exp(1) scale mixture of gaussians: Var = E[W] = 1 per coordinate
    DiscreteMeasure truth(2, {{1.0, (VectorXd(2) << 0.0, 0.0).finished()}});
    Sample s = sample_mixture(truth, MixingKernelSpec::multivariate_laplace(2), 40000, 5);
    double var = 0.0;
    for (const auto& x : s.points) var += x.squaredNorm();
    var /= (2.0 * s.points.size());
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}
