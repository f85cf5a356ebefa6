#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spreadtime/sim.hpp"
#include "spreadtime/trace.hpp"

using namespace spreadtime;

namespace {

NetworkSpec table_spec() {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{50, 1.0, 1.0, 1});
    spec.groups.push_back(GroupProfile{50, 1.0, 1.0, 0});
    spec.rates = RateMatrix(2);
    spec.rates.at(0, 0) = 7.17e-4;
    spec.rates.at(0, 1) = 3.72e-4;
    spec.rates.at(1, 0) = 3.72e-4;
    spec.rates.at(1, 1) = 1.93e-4;
    return spec;
}

} // namespace

TEST_CASE("parse_trace handles empty input and round trips") {
    std::istringstream empty("node_a,node_b,start_s,end_s\n");
    CHECK(parse_trace(empty).records.empty());

    std::vector<ContactRecord> one = {{"a", "b", 10.0, 40.0}};
    std::ostringstream out;
    write_trace(out, one);
    std::istringstream back(out.str());
    const auto parsed = parse_trace(back);
    REQUIRE(parsed.records.size() == 1);
    CHECK(parsed.records[0].node_a == "a");
    CHECK(parsed.records[0].end_s == doctest::Approx(40.0));
    CHECK(parsed.warnings.empty());
}

TEST_CASE("parse_trace reports the offending line") {
    std::istringstream bad("node_a,node_b,start_s,end_s\n# comment\na,b,5,oops\n");
    try {
        parse_trace(bad);
        FAIL("expected TraceParseError");
    } catch (const TraceParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("end_s") != std::string::npos);
    }

    std::istringstream self("node_a,node_b,start_s,end_s\na,a,5,6\n");
    CHECK_THROWS_AS(parse_trace(self), TraceParseError);
    std::istringstream reversed("node_a,node_b,start_s,end_s\na,b,6,5\n");
    CHECK_THROWS_AS(parse_trace(reversed), TraceParseError);
}

TEST_CASE("a large disjoint trace round-trips with its count preserved") {
    std::vector<ContactRecord> records;
    records.reserve(1000);
    for (int i = 0; i < 1000; ++i) {
        const std::string a = "n" + std::to_string(i % 40);
        const std::string b = "m" + std::to_string(i % 25);
        records.push_back({a, b, i * 1000.0, i * 1000.0 + 30.0});
    }
    std::ostringstream out;
    write_trace(out, records);
    std::istringstream in(out.str());
    const auto parsed = parse_trace(in);
    CHECK(parsed.records.size() == 1000);
    CHECK(parsed.warnings.empty());
}

TEST_CASE("parse_trace merges overlapping duplicates with a warning") {
    std::istringstream in(
        "node_a,node_b,start_s,end_s\n"
        "a,b,0,100\n"
        "b,a,50,200\n"
        "a,b,300,400\n");
    const auto result = parse_trace(in);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].start_s == 0.0);
    CHECK(result.records[0].end_s == 200.0);
    CHECK(result.records[1].start_s == 300.0);
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("merged") != std::string::npos);
}

TEST_CASE("pairwise_rates is contacts over horizon") {
    std::vector<ContactRecord> records;
    for (int day = 0; day < 28; ++day)
        records.push_back({"a", "b", day * 86400.0, day * 86400.0 + 60.0});
    const auto rates = pairwise_rates(records, 28.0 * 86400.0);
    CHECK(rates.at(make_pair_key("a", "b")) == doctest::Approx(1.0 / 24.0));
    CHECK(rates.count(make_pair_key("a", "c")) == 0); // zero-contact pair absent
    CHECK_THROWS_AS(pairwise_rates(records, 0.0), std::invalid_argument);
}

TEST_CASE("group_rate_matrix on hand-built traces") {
    std::map<std::string, int> grouping = {{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}};
    const double horizon = 3600.0; // one hour

    // All contacts within group 0: the off-diagonal stays zero.
    std::vector<ContactRecord> intra = {{"a", "b", 0, 10}, {"a", "b", 100, 110}};
    const auto m = group_rate_matrix(intra, grouping, horizon);
    CHECK(m.at(0, 0) == doctest::Approx(2.0)); // 2 contacts / 1 pair / 1 h
    CHECK(m.at(0, 1) == 0.0);
    CHECK(m.at(1, 0) == 0.0);
    CHECK(m.at(1, 1) == 0.0);

    // A single cross contact spreads over the 4 ordered cross pairs.
    std::vector<ContactRecord> cross = {{"a", "c", 0, 10}};
    const auto x = group_rate_matrix(cross, grouping, horizon);
    CHECK(x.at(0, 1) == doctest::Approx(0.25));
    CHECK(x.at(1, 0) == doctest::Approx(0.25));

    std::vector<ContactRecord> unmapped = {{"a", "z", 0, 10}};
    CHECK_THROWS_AS(group_rate_matrix(unmapped, grouping, horizon), std::invalid_argument);

    // Single-group grouping gives the scalar mean rate.
    std::map<std::string, int> one = {{"a", 0}, {"b", 0}, {"c", 0}};
    const auto scalar = group_rate_matrix(intra, one, horizon);
    CHECK(scalar.at(0, 0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("susceptibility_estimate follows the geometric-retry model") {
    TraceStats stats;
    stats.avg_neighbors = 1.0;
    stats.durations_sorted = {100.0, 200.0, 300.0};
    CHECK(susceptibility_estimate(stats, 50.0) == 1.0);

    // 20 of 23 contacts long enough: p = 1/1.15; two neighbors halve it.
    TraceStats paper;
    paper.avg_neighbors = 2.0;
    for (int i = 0; i < 3; ++i) paper.durations_sorted.push_back(10.0);
    for (int i = 0; i < 20; ++i) paper.durations_sorted.push_back(120.0);
    CHECK(susceptibility_estimate(paper, 90.0) == doctest::Approx(0.4348).epsilon(1e-3));

    CHECK_THROWS_AS(susceptibility_estimate(paper, 500.0), NoFeasibleTransfer);
    TraceStats lonely;
    lonely.avg_neighbors = 0.0;
    lonely.durations_sorted = {10.0};
    CHECK_THROWS_AS(susceptibility_estimate(lonely, 5.0), std::invalid_argument);
}

TEST_CASE("susceptibility_estimate is monotone in transfer time and neighbors") {
    TraceStats stats;
    stats.avg_neighbors = 1.5;
    for (int i = 1; i <= 100; ++i) stats.durations_sorted.push_back(i * 10.0);
    double prev = 2.0;
    for (double tt : {10.0, 200.0, 500.0, 900.0}) {
        const double psi = susceptibility_estimate(stats, tt);
        CHECK(psi <= prev);
        prev = psi;
    }
    TraceStats crowded = stats;
    crowded.avg_neighbors = 3.0;
    CHECK(susceptibility_estimate(crowded, 200.0) <
          susceptibility_estimate(stats, 200.0));
}

TEST_CASE("intercontact_stats distinguishes periodic from exponential gaps") {
    std::vector<ContactRecord> periodic;
    for (int i = 0; i < 50; ++i) periodic.push_back({"a", "b", i * 600.0, i * 600.0 + 30.0});
    const auto p = intercontact_stats(periodic, make_pair_key("a", "b"));
    CHECK(p.mean_gap_s == doctest::Approx(600.0));
    CHECK(p.cv == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.gap_count == 49);

    auto stream = rng::substream(2718, 0);
    std::vector<ContactRecord> expo;
    double t = 0.0;
    for (int i = 0; i < 1000; ++i) {
        t += stream.next_exponential(1.0 / 300.0);
        expo.push_back({"a", "b", t, t + 5.0});
    }
    const auto e = intercontact_stats(expo, make_pair_key("a", "b"));
    CHECK(e.cv >= 0.9);
    CHECK(e.cv <= 1.1);

    std::vector<ContactRecord> single = {{"a", "b", 0.0, 1.0}};
    CHECK_THROWS_AS(intercontact_stats(single, make_pair_key("a", "b")),
                    std::invalid_argument);
}

TEST_CASE("compute_stats counts neighbors event-weighted") {
    // b is in contact with a and c simultaneously; a and c never overlap.
    std::vector<ContactRecord> records = {
        {"a", "b", 0.0, 100.0},
        {"b", "c", 50.0, 150.0},
    };
    const auto stats = compute_stats(records);
    CHECK(stats.contact_counts.at("b") == 2);
    CHECK(stats.contact_counts.at("a") == 1);
    // Four endpoint events: a sees 1, b sees 2 (twice), c sees 1.
    CHECK(stats.avg_neighbors == doctest::Approx(1.5));
    CHECK(stats.durations_sorted.size() == 2);
}

TEST_CASE("generate_trace is deterministic and honors zero rates") {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{5, 1.0, 1.0, 1});
    spec.groups.push_back(GroupProfile{5, 1.0, 1.0, 0});
    spec.rates = RateMatrix(2);
    spec.rates.at(0, 0) = 50.0; // only intra-group-0 contacts
    const double horizon = 10.0 * 3600.0;

    const auto a = generate_trace(spec, horizon, {}, 7);
    const auto b = generate_trace(spec, horizon, {}, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].node_a == b[i].node_a);
        CHECK(a[i].start_s == b[i].start_s);
    }
    const auto grouping = default_grouping(spec);
    for (const auto& r : a) {
        CHECK(grouping.at(r.node_a) == 0);
        CHECK(grouping.at(r.node_b) == 0);
    }

    // Expected count: 10 pairs x 50/h x 10 h = 5000, within 3 sigma.
    const double expected = 10.0 * 50.0 * 10.0;
    CHECK(std::abs(static_cast<double>(a.size()) - expected) <= 3.0 * std::sqrt(expected));
}

TEST_CASE("estimation loop recovers the generating matrix") {
    const auto spec = table_spec();
    const double horizon = 4.0 * 672.0 * 3600.0; // long horizon tightens the estimate
    const auto records = generate_trace(spec, horizon, {}, 424242);
    const auto recovered = group_rate_matrix(records, default_grouping(spec), horizon);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(recovered.at(i, j) ==
                  doctest::Approx(spec.rates.at(i, j)).epsilon(0.05));
}

TEST_CASE("estimation error shrinks roughly like the square root of the horizon") {
    const auto spec = table_spec();
    auto rms_error = [&](double horizon_s, std::uint64_t seed) {
        const auto records = generate_trace(spec, horizon_s, {}, seed);
        const auto recovered = group_rate_matrix(records, default_grouping(spec), horizon_s);
        double acc = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                const double rel =
                    (recovered.at(i, j) - spec.rates.at(i, j)) / spec.rates.at(i, j);
                acc += rel * rel;
            }
        return std::sqrt(acc / 4.0);
    };
    // Average a few seeds so the ratio is stable enough for a factor-2 band.
    double short_err = 0.0, long_err = 0.0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        short_err += rms_error(672.0 * 3600.0, seed);
        long_err += rms_error(16.0 * 672.0 * 3600.0, seed);
    }
    const double ratio = short_err / long_err; // expect about sqrt(16) = 4
    CHECK(ratio > 2.0);
    CHECK(ratio < 8.0);
}

TEST_CASE("grouping files round trip") {
    std::map<std::string, int> grouping = {{"n0", 0}, {"n1", 0}, {"n2", 1}};
    std::ostringstream out;
    write_grouping(out, grouping);
    std::istringstream in(out.str());
    CHECK(parse_grouping(in) == grouping);
}
