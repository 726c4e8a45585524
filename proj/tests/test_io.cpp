#include "doctest.h"

#include <sstream>

#include "supermix/io.hpp"

using namespace supermix;

namespace {
VectorXd vec1(double x) {
    VectorXd v(1);
    v[0] = x;
    return v;
}
}  // namespace

TEST_CASE("measure JSON round trip preserves full precision") {
    DiscreteMeasure mu(1, {{0.36, vec1(-13.1)}, {0.52, vec1(-0.9)}, {0.12, vec1(14.0)}});
    DiscreteMeasure back = io::measure_from_json(io::measure_to_json(mu));
    REQUIRE(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(back.atoms()[i].weight == mu.atoms()[i].weight);
        CHECK(back.atoms()[i].location == mu.atoms()[i].location);
    }
}

TEST_CASE("measure CSV has a header and one row per atom") {
    DiscreteMeasure mu(2, {{0.5, (VectorXd(2) << 1.0, -2.0).finished()}});
    std::ostringstream out;
    io::measure_to_csv(mu, out);
    CHECK(out.str() == "weight,x1,x2\n0.5,1,-2\n");
}

TEST_CASE("sample CSV round trip") {
    Sample sample;
    sample.dim = 2;
    sample.points = {(VectorXd(2) << 0.25, -1.5).finished(),
                     (VectorXd(2) << 3.125, 0.0078125).finished()};
    std::ostringstream out;
    io::sample_to_csv(sample, out);
    std::istringstream in(out.str());
    Sample back = io::sample_from_csv(in);
    REQUIRE(back.dim == 2);
    REQUIRE(back.points.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(back.points[i] == sample.points[i]);
}

TEST_CASE("empty sample CSV keeps the header") {
    Sample sample;
    sample.dim = 1;
    std::ostringstream out;
    io::sample_to_csv(sample, out);
    CHECK(out.str() == "x1\n");
    std::istringstream in(out.str());
    CHECK(io::sample_from_csv(in).points.empty());
}

TEST_CASE("solve result JSON carries the trace") {
    SolveResult result;
    result.estimate = DiscreteMeasure(1, {{1.0, vec1(0.5)}});
    result.iterations = 2;
    result.converged = true;
    result.dual_sup = 1.0005;
    result.objective_trace = {3.0, 1.0, 0.5};
    result.support_trace = {0, 1, 1};
    auto j = io::solve_result_to_json(result);
    CHECK(j["iterations"] == 2);
    CHECK(j["converged"] == true);
    CHECK(j["objective_trace"].size() == 3);
    std::ostringstream out;
    io::objective_trace_to_csv(result, out);
    CHECK(out.str().substr(0, 33) == "iteration,objective,support_size\n");
}

TEST_CASE("trajectory CSV lists step, particle, mass, coordinates") {
    ParticleState s;
    s.r = VectorXd::Constant(2, 1.0);
    s.t = {vec1(0.0), vec1(2.0)};
    s.step_index = 10;
    std::ostringstream out;
    io::trajectory_to_csv({s}, out);
    CHECK(out.str() == "step,particle_id,mass,x1\n10,0,0.5,0\n10,1,0.5,2\n");
}

TEST_CASE("config hash is stable and key-order independent") {
    nlohmann::json a = {{"kappa", 0.01}, {"n", 200}};
    nlohmann::json b = {{"n", 200}, {"kappa", 0.01}};
    nlohmann::json c = {{"n", 201}, {"kappa", 0.01}};
    CHECK(io::config_hash(a) == io::config_hash(b));
    CHECK(io::config_hash(a) != io::config_hash(c));
    CHECK(io::config_hash(a).size() == 16);
}

TEST_CASE("audit report JSON fields") {
    AuditReport report;
    report.grid_max = 1.0;
    report.bandwidth_warning = true;
    auto j = io::audit_report_to_json(report);
    CHECK(j["grid_max"] == 1.0);
    CHECK(j["bandwidth_warning"] == true);
}
