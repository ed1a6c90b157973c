#include "doctest.h"

#include <cmath>
#include <string>

#include "hyshift/errors.hpp"
#include "hyshift/spaces.hpp"

using namespace hyshift;

namespace {

const std::string kData = HYSHIFT_TEST_DATA;

const ConditionWitness* find_witness(const ConditionReport& r, int j, int m) {
    for (const auto& w : r.witnesses)
        if (w.j == j && w.m == m) return &w;
    return nullptr;
}

}  // namespace

TEST_CASE("log_a: presets") {
    CHECK(parse_space_spec("entire").log_a(2, 3) == doctest::Approx(3 * std::log(2.0)));
    CHECK(parse_space_spec("rapid").log_a(3, 2) == doctest::Approx(3 * std::log(2.0)));
    CHECK(parse_space_spec("lp:2").log_a(7, 11) == 0.0);
    CHECK(parse_space_spec("c0").log_a(1, 5) == 0.0);
    CHECK(parse_space_spec("entire").log_a(1, 40) == 0.0);
    CHECK(parse_space_spec("entire").index_base() == 0);
    CHECK(parse_space_spec("rapid").index_base() == 1);
}

TEST_CASE("log_a: weighted spaces use v^(1/p) in every row") {
    const auto s = parse_space_spec("lpv:2:periodic:[4,9]");
    CHECK(s.kind() == SpaceKind::LpV);
    for (int j : {1, 2, 5})
        for (Index k = 1; k < 40; ++k) CHECK(s.log_a(j, k) == doctest::Approx(0.5 * std::log(k % 2 ? 4.0 : 9.0)));
    const auto c = parse_space_spec("c0v:geom:2");
    CHECK(c.is_c0_norm());
    CHECK(c.log_a(3, 5) == doctest::Approx(5 * std::log(2.0)));
}

TEST_CASE("log_a: invalid indices") {
    CHECK_THROWS_AS(parse_space_spec("lp:2").log_a(0, 1), std::domain_error);
    CHECK_THROWS_AS(parse_space_spec("lp:2").log_a(1, 0), std::domain_error);
    CHECK_THROWS_AS(parse_space_spec("entire").log_a(1, -1), std::domain_error);
    CHECK_NOTHROW(parse_space_spec("bi-lp:2").log_a(1, -7));
}

TEST_CASE("parse_space_spec: forms and errors") {
    CHECK(parse_space_spec("lp:1").p() == 1.0);
    CHECK(parse_space_spec("bi-c0").bilateral());
    CHECK(parse_space_spec("bi-lpv:2:bilateral:const:2:const:3").bilateral());
    CHECK(parse_space_spec("rapid").render() == "rapid");

    auto position_of = [](const std::string& spec) -> long {
        try {
            parse_space_spec(spec);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(position_of("lq:2") == 0);
    CHECK(position_of("lp") >= 2);
    CHECK(position_of("lp:x") == 3);
    CHECK(position_of("c0:3") >= 2);
    CHECK(position_of("lpv:2:cosnt:3") >= 6);
    CHECK(position_of("bi-lpv:2:const:3") >= 0);  // bilateral space needs a bilateral weight
    CHECK(position_of("kothe:/no/such/file") >= 0);
    CHECK_THROWS_AS(parse_space_spec("lp:0.5"), std::domain_error);
}

TEST_CASE("kothe files") {
    const auto frac = parse_space_spec("kothe:" + kData + "/kothe_frac_power.csv");
    CHECK(frac.kind() == SpaceKind::KotheLp);
    for (int j : {1, 2, 5})
        for (Index k : {1, 7, 100}) CHECK(frac.log_a(j, k) == doctest::Approx((1.0 - 1.0 / j) * std::log(double(k))));

    const auto hand = parse_space_spec("kothe:" + kData + "/kothe_entire.csv");
    const auto entire = parse_space_spec("entire");
    for (int j = 1; j <= 6; ++j)
        for (Index k = 0; k < 30; ++k) CHECK(hand.log_a(j, k) == doctest::Approx(entire.log_a(j, k)));

    const auto c0g = parse_space_spec("kothe:" + kData + "/kothe_c0_gamma.csv");
    CHECK(c0g.is_c0_norm());
    CHECK(c0g.log_a(3, 4) == doctest::Approx(0.5 * 4 + 3));

    CHECK_THROWS_AS(parse_space_spec("kothe:" + kData + "/kothe_decreasing.csv"), std::domain_error);
}

TEST_CASE("property: row monotonicity on every preset") {
    const char* specs[] = {"lp:2", "c0", "lpv:1:linear", "c0v:periodic:[2,0.5]", "entire", "rapid"};
    for (const char* spec : specs) {
        CAPTURE(spec);
        const auto s = parse_space_spec(spec);
        for (int j = 1; j < 12; ++j)
            for (Index k = s.index_base(); k < 300; ++k) CHECK(s.log_a(j, k) <= s.log_a(j + 1, k));
    }
    const auto frac = parse_space_spec("kothe:" + kData + "/kothe_frac_power.csv");
    for (int j = 1; j < 12; ++j)
        for (Index k = 1; k < 300; ++k) CHECK(frac.log_a(j, k) <= frac.log_a(j + 1, k) + 1e-15);
}

TEST_CASE("row(j) agrees with log_a") {
    const char* specs[] = {"lp:2", "lpv:2:evper:[3]:[2,5]", "entire", "rapid"};
    for (const char* spec : specs) {
        CAPTURE(spec);
        const auto s = parse_space_spec(spec);
        for (int j = 1; j <= 5; ++j) {
            const auto row = s.row(j);
            REQUIRE(row.has_value());
            for (Index k = s.index_base(); k < 100; ++k) CHECK(row->at(k) == doctest::Approx(s.log_a(j, k)));
        }
    }
}

TEST_CASE("condition B: entire with the canonical witness 2jm") {
    const auto r = check_condition_B(parse_space_spec("entire"), 1);
    CHECK(r.holds == Tri::Holds);
    for (int j = 1; j <= 3; ++j)
        for (int m = 1; m <= 3; ++m) {
            const auto* w = find_witness(r, j, m);
            REQUIRE(w != nullptr);
            CHECK(w->m_j == 2 * j * m);
            CHECK(w->certified);
        }
}

TEST_CASE("condition B: single-norm spaces hold with m_j = j") {
    const char* specs[] = {"lp:2", "c0", "lpv:2:linear"};
    for (const char* spec : specs) {
        CAPTURE(spec);
        const auto r = check_condition_B(parse_space_spec(spec), 1);
        CHECK(r.holds == Tri::Holds);
        for (const auto& w : r.witnesses) CHECK(w.m_j == w.j);
        for (const auto& w : r.witnesses) CHECK(w.grid_max_log <= 1e-12);
    }
}

TEST_CASE("condition B: k^(1-1/j) has no admissible m_j") {
    const auto s = parse_space_spec("kothe:" + kData + "/kothe_frac_power.csv");
    for (int J : {1, 2, 4}) {
        CAPTURE(J);
        const auto r = check_condition_B(s, J);
        CHECK(r.holds != Tri::Holds);
    }
    CHECK(check_condition_B(s, 1).holds == Tri::FailsAtWitness);
}

TEST_CASE("condition B: rapid holds") {
    const auto r = check_condition_B(parse_space_spec("rapid"), 1);
    CHECK(r.holds == Tri::Holds);
    for (const auto& w : r.witnesses) CHECK(w.m_j == w.m + w.j);
}

TEST_CASE("sufficient condition") {
    const auto rapid = check_condition_B_sufficient(parse_space_spec("rapid"));
    CHECK(rapid.holds == Tri::Holds);
    for (const auto& w : rapid.witnesses) CHECK(w.m_j == 2 * w.j);

    const auto entire = check_condition_B_sufficient(parse_space_spec("entire"));
    CHECK(entire.holds == Tri::Holds);
    for (const auto& w : entire.witnesses) CHECK(w.m_j == (w.j == 1 ? 1 : w.j * w.j));

    const auto frac = check_condition_B_sufficient(parse_space_spec("kothe:" + kData + "/kothe_frac_power.csv"));
    CHECK(frac.holds == Tri::FailsAtWitness);
}

TEST_CASE("Schwartz-type condition") {
    CHECK(check_schwartz_condition(parse_space_spec("entire"), 1).holds == Tri::Holds);
    CHECK(check_schwartz_condition(parse_space_spec("rapid"), 1).holds == Tri::Holds);
    CHECK(check_schwartz_condition(parse_space_spec("lpv:2:linear"), 1).holds == Tri::FailsAtWitness);
    CHECK(check_schwartz_condition(parse_space_spec("lp:2"), 1).holds == Tri::FailsAtWitness);
}

TEST_CASE("property: certified reports are stable under a doubled horizon") {
    const char* specs[] = {"lp:2", "entire", "rapid", "c0v:linear"};
    for (const char* spec : specs) {
        CAPTURE(spec);
        const auto s = parse_space_spec(spec);
        ConditionHorizons h;
        const auto a = check_condition_B(s, 1, h);
        h.k_horizon *= 2;
        const auto b = check_condition_B(s, 1, h);
        CHECK(a.holds == b.holds);
        REQUIRE(a.witnesses.size() == b.witnesses.size());
        for (std::size_t i = 0; i < a.witnesses.size(); ++i) CHECK(a.witnesses[i].m_j == b.witnesses[i].m_j);
    }
}

TEST_CASE("presets list") {
    const auto p = space_presets();
    CHECK(p.size() >= 7);
}
