#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spreadtime/model.hpp"
#include "test_support.hpp"

using namespace spreadtime;

TEST_CASE("effective_rate is the plain product") {
    CHECK(effective_rate(2.0e-3, 0.5, 0.5) == doctest::Approx(5.0e-4).epsilon(1e-14));
    CHECK(effective_rate(0.37, 1.0, 1.0) == 0.37); // identity case is exact
    // psi from 2 neighbors and 1.15 expected contacts per transfer
    const double psi = (1.0 / 1.15) / 2.0;
    CHECK(effective_rate(1.0e-3, 1.0, psi) == doctest::Approx(4.348e-4).epsilon(1e-4));
}

TEST_CASE("effective_rate rejects bad arguments") {
    CHECK_THROWS_AS(effective_rate(-1.0, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(effective_rate(1.0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(effective_rate(1.0, 0.5, 1.5), std::invalid_argument);
}

TEST_CASE("effective_rates scales columns by susceptibility") {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{5, 1.0, 0.5, 1});
    spec.groups.push_back(GroupProfile{5, 1.0, 1.0, 0});
    spec.rates = RateMatrix::constant(2, 2.0);
    const auto eff = effective_rates(spec);
    CHECK(eff.rates.at(0, 0) == doctest::Approx(1.0));
    CHECK(eff.rates.at(1, 0) == doctest::Approx(1.0));
    CHECK(eff.rates.at(0, 1) == doctest::Approx(2.0));
    CHECK(eff.rates.at(1, 1) == doctest::Approx(2.0));

    // K=1 with unit probabilities is unchanged.
    const auto same = effective_rates(homogeneous_spec(10, 1.0, 1));
    CHECK(same.rates.at(0, 0) == 1.0);
}

TEST_CASE("effective_rates agrees with the scalar form entrywise") {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{3, 0.7, 0.9, 1});
    spec.groups.push_back(GroupProfile{4, 0.4, 0.6, 0});
    spec.rates = RateMatrix(2);
    spec.rates.at(0, 0) = 1.5;
    spec.rates.at(0, 1) = 2.5;
    spec.rates.at(1, 0) = 0.5;
    spec.rates.at(1, 1) = 3.0;
    const auto eff = effective_rates(spec);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            CHECK(eff.rates.at(a, b) ==
                  doctest::Approx(effective_rate(spec.rates.at(a, b), spec.groups[a].infectivity,
                                                 spec.groups[b].susceptibility)));
}

TEST_CASE("effective_rates is monotone in infectivity and susceptibility") {
    std::mt19937_64 rng(420);
    std::uniform_real_distribution<double> prob(0.05, 0.95);
    for (int trial = 0; trial < 50; ++trial) {
        NetworkSpec spec = testing::random_spec(rng);
        for (auto& g : spec.groups) {
            g.infectivity = prob(rng);
            g.susceptibility = prob(rng);
        }
        const auto base = effective_rates(spec);
        NetworkSpec bumped = spec;
        auto& touched = bumped.groups[trial % bumped.group_count()];
        if (trial % 2 == 0)
            touched.infectivity = std::min(1.0, touched.infectivity * 1.2);
        else
            touched.susceptibility = std::min(1.0, touched.susceptibility * 1.2);
        const auto more = effective_rates(bumped);
        for (std::size_t a = 0; a < spec.group_count(); ++a)
            for (std::size_t b = 0; b < spec.group_count(); ++b)
                CHECK(more.rates.at(a, b) >= base.rates.at(a, b));
    }
}

TEST_CASE("validate_spec accepts a plain homogeneous spec") {
    CHECK(validate_spec(homogeneous_spec(10, 1.0, 1)).ok());
}

TEST_CASE("validate_spec flags degenerate reachability") {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{5, 1.0, 1.0, 1});
    spec.groups.push_back(GroupProfile{5, 1.0, 1.0, 0});
    spec.rates = RateMatrix(2);
    spec.rates.at(0, 0) = 1.0;
    spec.rates.at(1, 0) = 1.0; // column for group 2 stays zero
    const auto report = validate_spec(spec);
    REQUIRE_FALSE(report.ok());
    CHECK(report.joined().find("degenerate reachability") != std::string::npos);
}

TEST_CASE("validate_spec requires at least one seed") {
    auto spec = homogeneous_spec(10, 1.0, 0);
    const auto report = validate_spec(spec);
    REQUIRE_FALSE(report.ok());
    CHECK(report.joined().find("seed") != std::string::npos);
}

TEST_CASE("validate_spec reports every violation at once") {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{0, 2.0, 0.5, 0});
    spec.rates = RateMatrix(2); // wrong dimension, all zero
    const auto report = validate_spec(spec);
    CHECK(report.violations.size() >= 3);
}

TEST_CASE("fair_rate_matrix reduces to the homogeneous matrix at (1,1)") {
    const auto rates = fair_rate_matrix(0.37, {25, 25}, 1.0, 1.0);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) CHECK(rates.at(a, b) == doctest::Approx(0.37));
}

TEST_CASE("fair_rate_matrix reproduces the measured taxi rates") {
    // gamma ratios taken from the published heterogeneous estimates
    const double g1 = 7.17 / 3.72, g2 = 1.93 / 3.72;
    const auto rates = fair_rate_matrix(4.14e-4, {50, 50}, g1, g2);
    CHECK(rates.at(0, 0) == doctest::Approx(7.17e-4).epsilon(5e-3));
    CHECK(rates.at(1, 1) == doctest::Approx(1.93e-4).epsilon(5e-3));
    CHECK(rates.at(0, 1) == doctest::Approx(3.72e-4).epsilon(5e-3));
    CHECK(rates.at(1, 0) == rates.at(0, 1));
}

TEST_CASE("fair_rate_matrix satisfies the average-rate constraint") {
    const auto rates = fair_rate_matrix(1.0, {20, 20}, 3.0, 0.2);
    CHECK(average_pair_rate(rates, {20, 20}) == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> gamma_pick(0.0, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double g1 = gamma_pick(rng), g2 = gamma_pick(rng);
        const auto r = fair_rate_matrix(0.25, {10, 10}, g1, g2);
        CHECK(average_pair_rate(r, {10, 10}) == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("fair_rate_matrix rejects bad inputs") {
    CHECK_THROWS_AS(fair_rate_matrix(1.0, {10, 20}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fair_rate_matrix(0.0, {10, 10}, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fair_rate_matrix(1.0, {1, 1}, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("special_case_rates matches the closed expressions") {
    const auto uniform = special_case_rates(1.0, 1.0);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) CHECK(uniform.at(a, b) == doctest::Approx(1.0));

    const auto skewed = special_case_rates(1.0, 2.0);
    CHECK(skewed.at(0, 0) == doctest::Approx(4.0 / 3.0));
    CHECK(skewed.at(1, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(skewed.at(0, 1) == doctest::Approx(1.0));

    CHECK_THROWS_AS(special_case_rates(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("special_case_rates keeps the midpoint and constraint identities") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> gamma_pick(1.0, 12.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double gamma = gamma_pick(rng);
        const auto rates = special_case_rates(0.8, gamma);
        CHECK(rates.at(0, 1) ==
              doctest::Approx((rates.at(0, 0) + rates.at(1, 1)) / 2.0).epsilon(1e-12));
        CHECK(average_pair_rate(rates, {15, 15}) == doctest::Approx(0.8).epsilon(1e-12));
    }
}

TEST_CASE("spec JSON round trip") {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{50, 1.0, 0.4348, 1});
    spec.groups.push_back(GroupProfile{50, 0.9, 1.0, 0});
    spec.rates = RateMatrix(2);
    spec.rates.at(0, 0) = 7.17e-4;
    spec.rates.at(0, 1) = 3.72e-4;
    spec.rates.at(1, 0) = 3.72e-4;
    spec.rates.at(1, 1) = 1.93e-4;

    const auto text = spec_to_json_string(spec, 2);
    const auto back = spec_from_json_string(text);
    REQUIRE(back.group_count() == 2);
    CHECK(back.groups[0].susceptibility == doctest::Approx(0.4348));
    CHECK(back.groups[1].infectivity == doctest::Approx(0.9));
    CHECK(back.rates.at(1, 1) == doctest::Approx(1.93e-4));

    CHECK_THROWS_AS(spec_from_json_string("{not json"), ValidationError);
    CHECK_THROWS_AS(spec_from_json_string(R"({"groups":[],"rates":[],"rate_units":"per_day"})"),
                    ValidationError);
}
