#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hyshift/errors.hpp"
#include "hyshift/weights.hpp"

using namespace hyshift;

namespace {

const std::string kData = HYSHIFT_TEST_DATA;

// Pairwise summation of log|w_(k+1)| .. log|w_(k+n)|, the reference for the
// left-to-right accumulation in window_log.
double tree_sum(const WeightSequence& w, Index lo, Index hi) {
    if (hi - lo == 1) return w.log_at(hi);
    if (hi == lo) return 0.0;
    const Index mid = lo + (hi - lo) / 2;
    return tree_sum(w, lo, mid) + tree_sum(w, mid, hi);
}

std::vector<std::string> family_specs() {
    return {"const:2",         "const:0.3",    "periodic:[3,0.5]",           "evper:[1,9,0.1]:[2,0.25,4]",
            "linear",          "geom:1.01",    "table:" + kData + "/table_mixed.csv", "blocks:2:0.5",
            "dips:2",          "periodic:[0.5,8]"};
}

}  // namespace

TEST_CASE("parse: named families") {
    const auto c = parse_weight_spec("const:2");
    CHECK(c.family() == WeightFamily::Constant);
    for (Index k : {1, 2, 17, 1000}) CHECK(c.magnitude_at(k) == doctest::Approx(2.0));

    const auto lin = parse_weight_spec("linear");
    CHECK(lin.family() == WeightFamily::Linear);
    CHECK(lin.magnitude_at(7) == doctest::Approx(7.0));

    const auto per = parse_weight_spec("periodic:[3,0.5]");
    CHECK(per.family() == WeightFamily::Periodic);
    CHECK(per.magnitude_at(1) == doctest::Approx(3.0));
    CHECK(per.magnitude_at(2) == doctest::Approx(0.5));
    CHECK(per.magnitude_at(3) == doctest::Approx(3.0));
    CHECK(per.magnitude_at(100) == doctest::Approx(0.5));

    const auto g = parse_weight_spec("geom:3");
    CHECK(g.log_at(4) == doctest::Approx(4 * std::log(3.0)));
}

TEST_CASE("parse: eventually periodic agrees with its period past the prefix") {
    const auto w = parse_weight_spec("evper:[5,7]:[2,0.25,4]");
    CHECK(w.family() == WeightFamily::EventuallyPeriodic);
    CHECK(w.magnitude_at(1) == doctest::Approx(5.0));
    CHECK(w.magnitude_at(2) == doctest::Approx(7.0));
    const double period[] = {2, 0.25, 4};
    for (Index k = 3; k < 300; ++k) CHECK(w.magnitude_at(k) == doctest::Approx(period[(k - 3) % 3]));

    // an empty prefix is plain periodic behaviour
    const auto e = parse_weight_spec("evper:[]:[2,3]");
    CHECK(e.magnitude_at(1) == doctest::Approx(2.0));
    CHECK(e.magnitude_at(4) == doctest::Approx(3.0));
}

TEST_CASE("parse: table with a tail rule") {
    const auto w = parse_weight_spec("table:" + kData + "/table_mixed.csv");
    CHECK(w.family() == WeightFamily::Table);
    CHECK(w.magnitude_at(1) == doctest::Approx(3.0));
    CHECK(w.magnitude_at(3) == doctest::Approx(0.25));
    CHECK(w.magnitude_at(4) == doctest::Approx(2.0));
    CHECK(w.magnitude_at(50) == doctest::Approx(2.0));
}

TEST_CASE("parse: generators") {
    const auto b = parse_weight_spec("blocks:2:0.5");
    // hi on [1,2), [4,8), [16,32); lo elsewhere
    for (Index k : {1, 4, 7, 16, 31, 64}) CHECK(b.magnitude_at(k) == doctest::Approx(2.0));
    for (Index k : {2, 3, 8, 15, 32, 63}) CHECK(b.magnitude_at(k) == doctest::Approx(0.5));

    const auto d = parse_weight_spec("dips:2");
    CHECK(d.magnitude_at(1) == doctest::Approx(1.0));
    CHECK(d.magnitude_at(2) == doctest::Approx(0.5));
    CHECK(d.magnitude_at(8) == doctest::Approx(0.125));
    CHECK(d.magnitude_at(3) == doctest::Approx(2.0));
    CHECK(d.magnitude_at(1000) == doctest::Approx(2.0));
}

TEST_CASE("parse: bilateral sides") {
    const auto w = parse_weight_spec("bilateral:const:2:periodic:[0.5,0.25]");
    CHECK(w.is_bilateral());
    CHECK(w.magnitude_at(1) == doctest::Approx(2.0));
    CHECK(w.magnitude_at(0) == doctest::Approx(0.5));   // nonpos(1)
    CHECK(w.magnitude_at(-1) == doctest::Approx(0.25));  // nonpos(2)
    CHECK(w.magnitude_at(-2) == doctest::Approx(0.5));
    CHECK(w.valid(-1000000));
}

TEST_CASE("parse: errors name a position") {
    auto position_of = [](const std::string& spec) -> long {
        try {
            parse_weight_spec(spec);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(position_of("cosnt:2") == 0);
    CHECK(position_of("const:") == 6);
    CHECK(position_of("const:2x") == 7);
    CHECK(position_of("periodic:[1,2") >= 12);
    CHECK(position_of("periodic:[]") >= 9);
    CHECK(position_of("bilateral:const:2") >= 17);
    CHECK(position_of("table:/nonexistent/file.csv") >= 0);
    CHECK(position_of("") == 0);

    CHECK_THROWS_AS(parse_weight_spec("const:0"), std::domain_error);
    CHECK_THROWS_AS(parse_weight_spec("periodic:[1,0,2]"), std::domain_error);
    CHECK_THROWS_AS(parse_weight_spec("const:2").log_at(0), std::domain_error);
}

TEST_CASE("window_log: examples") {
    CHECK(window_log(parse_weight_spec("const:2"), 3, 5) == doctest::Approx(3 * std::log(2.0)));
    CHECK(window_log(parse_weight_spec("linear"), 2, 3) == doctest::Approx(std::log(20.0)));
    const auto one = parse_weight_spec("const:1");
    for (Index n : {1, 5, 40})
        for (Index k : {0, 3, 99}) CHECK(window_log(one, n, k) == 0.0);
    CHECK_THROWS_AS(window_log(one, 2, -1), std::domain_error);
    CHECK_THROWS_AS(window_log(one, -1, 3), std::domain_error);
}

TEST_CASE("cumulative_sup_log: examples") {
    const auto two = cumulative_sup_log(parse_weight_spec("const:2"), 100);
    CHECK(two.horizon_log == doctest::Approx(100 * std::log(2.0)));
    CHECK(two.log_value == kInf);
    CHECK(two.status == Status::Exact);

    const auto one = cumulative_sup_log(parse_weight_spec("const:1"), 100);
    CHECK(one.log_value == 0.0);
    CHECK(one.status == Status::Exact);

    const auto per = cumulative_sup_log(parse_weight_spec("periodic:[3,0.5]"), 100);
    CHECK(per.horizon_log == doctest::Approx(50 * std::log(3.0) + 49 * std::log(0.5)));
    CHECK(per.arg == 99);
    CHECK(per.log_value == kInf);
    CHECK(per.certified());

    // negative drift: the sup is reached inside the first period
    const auto neg = cumulative_sup_log(parse_weight_spec("periodic:[3,0.2]"), 100);
    CHECK(neg.log_value == doctest::Approx(std::log(3.0)));
    CHECK(neg.status == Status::Exact);

    CHECK_THROWS_AS(cumulative_sup_log(parse_weight_spec("bilateral:const:2:const:2"), 10), std::domain_error);
}

TEST_CASE("partial_sum_trend: drift classification") {
    CHECK(partial_sum_trend(parse_weight_spec("const:2")) == SumTrend::PlusInfinity);
    CHECK(partial_sum_trend(parse_weight_spec("const:1")) == SumTrend::Bounded);
    CHECK(partial_sum_trend(parse_weight_spec("const:0.5")) == SumTrend::MinusInfinity);
    CHECK(partial_sum_trend(parse_weight_spec("periodic:[2,0.5]")) == SumTrend::Bounded);
    CHECK(partial_sum_trend(parse_weight_spec("blocks:2:0.5")) == SumTrend::Oscillating);
    CHECK(partial_sum_trend(parse_weight_spec("blocks:4:4")) == SumTrend::PlusInfinity);
    CHECK(partial_sum_trend(parse_weight_spec("dips:2")) == SumTrend::PlusInfinity);
    // sum log v = log n! outgrows n log j for every j
    LogModel row;
    row.first = 0;
    row.slope = std::log(50.0);
    CHECK(partial_sum_trend(parse_weight_spec("linear"), &row) == SumTrend::PlusInfinity);
    row.slope = std::log(2.0);
    CHECK(partial_sum_trend(parse_weight_spec("const:2"), &row) == SumTrend::Bounded);
}

TEST_CASE("property: window additivity on random triples") {
    std::mt19937_64 rng(20261018);
    std::uniform_int_distribution<Index> len(0, 40), start(0, 500);
    for (const auto& spec : family_specs()) {
        CAPTURE(spec);
        const auto w = parse_weight_spec(spec);
        for (int t = 0; t < 1000; ++t) {
            const Index n1 = len(rng), n2 = len(rng), k = start(rng);
            const double whole = window_log(w, n1 + n2, k);
            const double parts = window_log(w, n1, k) + window_log(w, n2, k + n1);
            CHECK(std::fabs(whole - parts) <= 1e-12 * static_cast<double>(n1 + n2 + 1) * (1 + std::fabs(whole)));
        }
    }
}

TEST_CASE("property: period shift invariance") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Index> len(1, 30), start(0, 400);
    const std::vector<std::pair<std::string, Index>> cases = {
        {"periodic:[3,0.5]", 2}, {"periodic:[0.5,8]", 2}, {"periodic:[1.5,0.2,7,0.9,1.1]", 5}, {"const:0.7", 1}};
    for (const auto& [spec, p] : cases) {
        CAPTURE(spec);
        const auto w = parse_weight_spec(spec);
        for (int t = 0; t < 200; ++t) {
            const Index n = len(rng), k = start(rng);
            CHECK(window_log(w, n, k) == doctest::Approx(window_log(w, n, k + p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: left-to-right against pairwise summation") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Index> len(1, 512), start(0, 2000);
    for (const auto& spec : family_specs()) {
        CAPTURE(spec);
        const auto w = parse_weight_spec(spec);
        for (int t = 0; t < 100; ++t) {
            const Index n = len(rng), k = start(rng);
            CHECK(std::fabs(window_log(w, n, k) - tree_sum(w, k, k + n)) <= 1e-9);
        }
    }
}

TEST_CASE("property: render round-trip") {
    auto specs = family_specs();
    specs.push_back("bilateral:const:2:const:0.5");
    specs.push_back("bilateral:linear:periodic:[0.5,3]");
    specs.push_back("evper:[0.123456789,2e-3]:[1e5]");
    for (const auto& spec : specs) {
        CAPTURE(spec);
        const auto w = parse_weight_spec(spec);
        const auto again = parse_weight_spec(w.render());
        CHECK(again.render() == w.render());
        CHECK(again.family() == w.family());
        const Index lo = w.is_bilateral() ? -50 : 1;
        for (Index k = lo; k <= 200; ++k) CHECK(again.log_at(k) == w.log_at(k));
    }
}
