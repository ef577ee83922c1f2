#include "eie/boundary_fit.hpp"

#include "eie/conductivity.hpp"
#include "eie/errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace eie;
using eie::test::constant_factors;
using eie::test::exact_factors;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FormalPowerSet trivial_powers(int rays, int nodes, int n_max) {
    const RayLattice lat(rays, nodes);
    const auto pair0 = build_pair(constant_factors(), 0, lat);
    const auto pair1 = build_pair(constant_factors(), 1, lat);
    return formal_powers(pair0, pair1, n_max);
}

TraceSet sampled_traces(const std::vector<std::function<double(double)>>& fns, int rays) {
    TraceSet set;
    for (std::size_t k = 0; k < fns.size(); ++k) {
        BoundaryTrace t(rays);
        for (int r = 0; r < rays; ++r) t[r] = fns[k](kTwoPi * r / rays);
        set.traces.push_back(std::move(t));
        set.provenance.push_back({static_cast<int>(k), 0});
    }
    return set;
}

} // namespace

TEST_CASE("boundary traces of the trivial conductivity are Fourier modes") {
    const auto set = boundary_traces(trivial_powers(64, 501, 2));
    REQUIRE(set.traces.size() == 5);
    CHECK(set.provenance[0].n == 0);
    CHECK(set.provenance[0].coeff == 0);
    CHECK(set.provenance[3].n == 1);
    CHECK(set.provenance[3].coeff == 1);

    for (int r = 0; r < 64; ++r) {
        const double theta = kTwoPi * r / 64;
        CHECK(set.traces[0][r] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(set.traces[1][r] == doctest::Approx(std::cos(theta)).epsilon(1e-4));
        CHECK(set.traces[2][r] == doctest::Approx(std::cos(2 * theta)).epsilon(1e-4));
        CHECK(set.traces[3][r] == doctest::Approx(-std::sin(theta)).epsilon(1e-4));
        CHECK(set.traces[4][r] == doctest::Approx(-std::sin(2 * theta)).epsilon(1e-4));
    }
}

TEST_CASE("N = 10 yields exactly 21 traces and no zero trace") {
    const auto set = boundary_traces(trivial_powers(32, 201, 10));
    CHECK(set.traces.size() == 21);
    for (const auto& t : set.traces) {
        double norm = 0.0;
        for (double v : t) norm = std::max(norm, std::abs(v));
        CHECK(norm > 0.1); // the identically-zero Re Z^(0)(i) was omitted
    }
}

TEST_CASE("circle inner product") {
    const int r_count = 128;
    BoundaryTrace ones(r_count, 1.0), cosine(r_count), sine(r_count);
    for (int r = 0; r < r_count; ++r) {
        cosine[r] = std::cos(kTwoPi * r / r_count);
        sine[r] = std::sin(kTwoPi * r / r_count);
    }
    CHECK(inner_product(ones, ones) == doctest::Approx(kTwoPi).epsilon(1e-14));
    CHECK(inner_product(cosine, cosine) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
    CHECK(std::abs(inner_product(cosine, sine)) < 1e-13);
    CHECK_THROWS_AS(inner_product(ones, BoundaryTrace(3, 1.0)), ValidationError);
}

TEST_CASE("orthonormalization of the classical family") {
    const auto set = sampled_traces(
        {[](double) { return 1.0; }, [](double t) { return std::cos(t); },
         [](double t) { return -std::sin(t); }},
        128);
    const auto sys = orthonormalize(set);
    REQUIRE(sys.members.size() == 3);
    CHECK(sys.dropped.empty());
    CHECK(!sys.ill_conditioned);

    const double pi = std::numbers::pi;
    for (int r = 0; r < 128; ++r) {
        const double theta = kTwoPi * r / 128;
        CHECK(sys.members[0][r] == doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(1e-10));
        CHECK(sys.members[1][r] ==
              doctest::Approx(std::cos(theta) / std::sqrt(pi)).epsilon(1e-9));
        CHECK(sys.members[2][r] ==
              doctest::Approx(-std::sin(theta) / std::sqrt(pi)).epsilon(1e-9));
    }
    CHECK(gram_defect(sys) < 1e-12);
}

TEST_CASE("orthonormalization is idempotent") {
    const auto factors = exact_factors(catalog_entry("exp"));
    const RayLattice lat(200, 301);
    const auto pair0 = build_pair(factors, 0, lat);
    const auto pair1 = build_pair(factors, 1, lat);
    const auto set = boundary_traces(formal_powers(pair0, pair1, 5));
    const auto sys = orthonormalize(set);
    CHECK(gram_defect(sys) < 1e-10);

    TraceSet again{sys.members, sys.provenance};
    const auto sys2 = orthonormalize(again);
    REQUIRE(sys2.members.size() == sys.members.size());
    for (std::size_t k = 0; k < sys.members.size(); ++k)
        for (std::size_t r = 0; r < sys.members[k].size(); ++r)
            CHECK(sys2.members[k][r] == doctest::Approx(sys.members[k][r]).epsilon(1e-10));
}

TEST_CASE("degenerate traces are dropped and reported") {
    auto set = sampled_traces(
        {[](double t) { return std::cos(t); }, [](double t) { return std::cos(t); },
         [](double t) { return std::sin(t); }},
        64);
    const auto sys = orthonormalize(set);
    CHECK(sys.members.size() == 2);
    REQUIRE(sys.dropped.size() == 1);
    CHECK(sys.dropped[0] == 1);
    CHECK(!sys.ill_conditioned); // a single drop is the expected degeneracy

    auto worse = sampled_traces({[](double t) { return std::cos(t); },
                                 [](double t) { return std::cos(t); },
                                 [](double t) { return 2.0 * std::cos(t); }},
                                64);
    CHECK(orthonormalize(worse).ill_conditioned);
}

TEST_CASE("trace evaluation by periodic spline") {
    const int r_count = 1000;
    BoundaryTrace cosine(r_count), constant(r_count, 3.25);
    for (int r = 0; r < r_count; ++r) cosine[r] = std::cos(kTwoPi * r / r_count);

    CHECK(std::abs(evaluate_trace(cosine, 0.37) - std::cos(0.37)) < 1e-9);
    CHECK(evaluate_trace(constant, 1.234) == doctest::Approx(3.25).epsilon(1e-13));
    const double theta_r = kTwoPi * 123 / r_count;
    CHECK(evaluate_trace(cosine, theta_r) == doctest::Approx(cosine[123]).epsilon(1e-13));
}

TEST_CASE("collocation fit recovers an in-span condition") {
    const auto set = boundary_traces(trivial_powers(200, 501, 2));
    const auto sys = orthonormalize(set);
    const auto fit = collocation_fit(sys, [](double t) { return std::cos(t); });

    // cos(theta) is the second member up to normalization sqrt(pi).
    REQUIRE(fit.alpha.size() == 5);
    CHECK(fit.alpha[1] == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-5));
    for (std::size_t k : {std::size_t(0), std::size_t(2), std::size_t(3), std::size_t(4)})
        CHECK(std::abs(fit.alpha[k]) < 1e-4);
    CHECK(fit.error < 1e-4);
    for (double r : fit.collocation_residuals) CHECK(std::abs(r) < 1e-10);
    CHECK(!fit.ill_conditioned);
}

TEST_CASE("zero condition gives a zero fit") {
    const auto set = boundary_traces(trivial_powers(64, 201, 3));
    const auto sys = orthonormalize(set);
    const auto fit = collocation_fit(sys, [](double) { return 0.0; });
    for (double a : fit.alpha) CHECK(a == 0.0);
    CHECK(fit.error == 0.0);
}

TEST_CASE("absolute error closed forms") {
    const auto set = boundary_traces(trivial_powers(64, 201, 2));
    const auto sys = orthonormalize(set);
    const std::vector<double> zero(sys.members.size(), 0.0);
    const double c = -2.5;
    CHECK(absolute_error(sys, zero, [c](double) { return c; }) ==
          doctest::Approx(std::abs(c) * std::sqrt(kTwoPi)).epsilon(1e-12));
    CHECK_THROWS_AS(absolute_error(sys, {1.0}, [](double) { return 0.0; }), ValidationError);
}

TEST_CASE("least-squares mode over all samples") {
    const auto set = boundary_traces(trivial_powers(128, 301, 2));
    const auto sys = orthonormalize(set);
    FitOptions opts;
    opts.least_squares_all_samples = true;
    const auto fit = collocation_fit(sys, [](double t) { return std::cos(t); }, opts);
    CHECK(fit.used_least_squares);
    CHECK(fit.alpha[1] == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-5));
    CHECK(fit.error < 1e-4);
}

TEST_CASE("singular collocation falls back to least squares with a flag") {
    // Two identical members make the collocation matrix exactly singular.
    OrthonormalSystem sys;
    BoundaryTrace t(32);
    for (int r = 0; r < 32; ++r) t[r] = std::cos(kTwoPi * r / 32);
    sys.members = {t, t};
    sys.provenance = {{0, 0}, {1, 0}};
    sys.combination = {{1.0, 0.0}, {0.0, 1.0}};
    sys.input_provenance = {{0, 0}, {1, 0}};
    const auto fit = collocation_fit(sys, [](double u) { return std::cos(u); });
    CHECK(fit.ill_conditioned);
    CHECK(fit.used_least_squares);
    CHECK(fit.alpha.size() == 2);
    CHECK(fit.error < 1e-3); // the span still contains the condition
}

TEST_CASE("error is invariant under a rigid rotation of the grid") {
    auto build_error = [&](double delta) {
        std::vector<std::function<double(double)>> fns;
        fns.push_back([delta](double t) { return 1.0; });
        for (int n = 1; n <= 5; ++n) {
            fns.push_back([n, delta](double t) { return std::cos(n * (t + delta)); });
            fns.push_back([n, delta](double t) { return std::sin(n * (t + delta)); });
        }
        const auto sys = orthonormalize(sampled_traces(fns, 1000));
        return collocation_fit(sys, [delta](double t) {
                   const double u = t + delta;
                   return std::exp(std::cos(u)) - 0.4 * std::sin(7.0 * u);
               })
            .error;
    };
    const double e0 = build_error(0.0);
    const double e1 = build_error(0.7321);
    CHECK(e0 > 1e-6); // the condition is genuinely out of span
    CHECK(eie::test::rel_diff(e0, e1) < 1e-6);
}

TEST_CASE("interior reconstruction is consistent with the boundary combination") {
    const auto factors = exact_factors(catalog_entry("exp"));
    const RayLattice lat(64, 301);
    const auto pair0 = build_pair(factors, 0, lat);
    const auto pair1 = build_pair(factors, 1, lat);
    const auto powers = formal_powers(pair0, pair1, 4);
    const auto sys = orthonormalize(boundary_traces(powers));
    const auto& model = catalog_entry("exp");
    const auto fit = collocation_fit(sys, [&](double t) { return boundary_condition(model, t); });

    const int ray = 5;
    const Complex z = lat.node(ray, lat.nodes_per_ray - 1);
    const double from_traces = [&] {
        double v = 0.0;
        for (std::size_t k = 0; k < sys.members.size(); ++k)
            v += fit.alpha[k] * sys.members[k][ray];
        return v;
    }();
    const double reconstructed =
        reconstruct_at(sys, fit.alpha, factors, z, lat.nodes_per_ray, 0);
    CHECK(reconstructed == doctest::Approx(from_traces).epsilon(1e-8));
}
