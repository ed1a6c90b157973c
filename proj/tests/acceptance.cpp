// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hyshift/cli.hpp"
#include "hyshift/criteria.hpp"
#include "hyshift/dynamics.hpp"
#include "hyshift/spaces.hpp"
#include "hyshift/suites.hpp"
#include "hyshift/weights.hpp"

using namespace hyshift;
using Json = nlohmann::json;

namespace {

// Tolerances
constexpr double kLogTol = 1e-9;          // log-domain comparisons
constexpr double kDecayLog = -20.0;       // "below e^-20"
constexpr Index kDecayBy = 512;
constexpr double kAnchorRel = 1e-9;
constexpr double kWitnessSeconds = 5.0;
constexpr Index kBilateralHorizon = 1000;
const double kLog2 = std::log(2.0);

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

struct Cli {
    int code = -1;
    Json report;
    std::string err;
};

Cli cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Cli c;
    c.code = run(args, out, err);
    c.err = err.str();
    try {
        c.report = Json::parse(out.str());
    } catch (const std::exception&) {
        c.report = Json();
    }
    return c;
}

double as_log(const Json& v) {
    if (v.is_string()) return v.get<std::string>() == "inf" ? INFINITY : -INFINITY;
    return v.get<double>();
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

Check rolewicz() {
    Check o;
    const auto c = cli({"analyze", "--weights", "const:2", "--space", "lp:2"});
    o.require(c.code == 0, "exit code " + std::to_string(c.code));
    o.require(c.report.value("outcome", "") == "NoSubspace", "outcome is not NoSubspace");
    o.require(c.report.contains("certificate") && c.report["certificate"].contains("block"), "no pumped certificate");
    if (!o.pass) return o;
    const auto& rows = c.report["certificate"]["growth"]["rows"];
    o.require(rows.size() == 64, "expected 64 growth constants");
    const auto w = parse_weight_spec("const:2");
    double worst = 0.0;
    for (const auto& r : rows) {
        const Index n = r["n"].get<Index>();
        const double logCn = as_log(r["log_C_n"]);
        const Index E = r["E_n"].get<Index>();
        // direct tail evaluation on e_k, k >= E_n + n
        double direct = INFINITY;
        for (Index k = E; k <= E + 256; ++k) direct = std::min(direct, window_log(w, n, k));
        worst = std::max({worst, std::fabs(logCn - n * kLog2), std::fabs(direct - logCn)});
    }
    o.require(worst < kLogTol, "log C_n mismatch " + num(worst));
    if (o.pass) o.detail = "C_n = 2^n for n <= 64, max log diff " + num(worst);
    return o;
}

Check differentiation() {
    Check o;
    const auto c = cli({"analyze", "--weights", "linear", "--space", "entire"});
    o.require(c.code == 0, "exit code " + std::to_string(c.code));
    o.require(c.report.value("outcome", "") == "HasSubspace", "outcome is not HasSubspace");
    const auto w = parse_weight_spec("linear");
    const auto s = parse_space_spec("entire");
    double worst = -INFINITY;
    for (Index n = 1; n <= 32; ++n) {
        const double at = criterion_log(w, s, 1, 2, n, kDecayBy);
        worst = std::max(worst, at);
        const auto t = tail_inf(w, s, 1, 2, n, 0, 1024);
        o.require(t.status == Status::Exact && t.log_value == -INFINITY,
                  "n=" + std::to_string(n) + " tail not certified to decay");
    }
    o.require(worst < kDecayLog, "value at k=512 is only below e^" + num(worst));
    if (o.pass) o.detail = "m=2, largest log value at k=512 is " + num(worst) + ", certified -inf tails";
    return o;
}

Check poly_d() {
    Check o;
    const auto c = cli({"poly", "--weights", "linear", "--space", "entire", "--poly", "1,1,1"});
    o.require(c.code == 0, "exit code " + std::to_string(c.code));
    const auto& h = c.report["hypotheses"];
    o.require(c.report.value("outcome", "") == "HasSubspace", "verdict is not HasSubspace");
    o.require(h.value("condition_B", "") == "Holds", "condition (B) not established");
    o.require(h.value("zero_infimum", false), "zero infimum not certified");
    o.require(h.value("constant_term_at_most_1", false), "|c0| <= 1 not recorded");
    o.require(h.value("row_ratio_to_zero", false) && h.value("row_ratio_m", 0) == 2, "a_1k/a_2k -> 0 not certified");
    const auto B = check_condition_B(parse_space_spec("entire"), 1);
    for (const auto& wt : B.witnesses) o.require(wt.m_j == 2 * wt.j * wt.m, "witness m_j differs from 2jm");
    for (const auto& v : c.report["criterion_values"])
        o.require(v["status"] == "Exact" && as_log(v["inf_log"]) == -INFINITY, "inf = 0 not certified for every n");
    if (o.pass) o.detail = "condition (B) with m_j = 2jm, inf = 0 certified, |c0| = 1, a_1k/a_2k -> 0";
    return o;
}

Check identity_plus_shift() {
    Check o;
    const auto c = cli({"poly", "--weights", "dips:2", "--space", "lp:2", "--poly", "1,1", "--nmax", "16"});
    o.require(c.code == 0, "exit code " + std::to_string(c.code));
    o.require(c.report.value("outcome", "") == "HasSubspace", "verdict is not HasSubspace");
    o.require(c.report["criterion_values"].size() == 16, "expected 16 inf-certificates");
    for (const auto& v : c.report["criterion_values"])
        o.require(v["status"] == "Exact" && as_log(v["inf_log"]) == -INFINITY, "inf-certificate missing");
    // brute force over k <= 2^14: minima sit on windows across a power of two
    const auto w = parse_weight_spec("dips:2");
    constexpr Index K = Index(1) << 14;
    for (Index n = 1; n <= 16 && o.pass; ++n) {
        double best = INFINITY;
        Index arg = 0;
        for (Index k = 1; k + n <= K; ++k) {
            const double v = window_log(w, n, k);
            if (v < best) {
                best = v;
                arg = k;
            }
        }
        Index top = 1;
        while (top * 2 <= arg + n) top *= 2;
        o.require(arg < top, "n=" + std::to_string(n) + " minimum not at a power of two");
        const double i = std::log2(static_cast<double>(top));
        o.require(best <= (n - 1 - i) * kLog2 + kLogTol, "n=" + std::to_string(n) + " window above 2^(n-1-i)");
    }
    if (o.pass) o.detail = "n <= 16 certified; brute-force minima cross 2^i with value <= 2^(n-1-i)";
    return o;
}

Check bilateral() {
    Check o;
    const auto c = cli({"analyze", "--weights", "bilateral:const:2:const:0.5", "--space", "bi-lp:2"});
    o.require(c.code == 0, "exit code " + std::to_string(c.code));
    o.require(c.report.value("outcome", "") == "HasSubspace", "outcome is not HasSubspace");
    const auto w = parse_weight_spec("bilateral:const:2:const:0.5");
    const auto& ev = c.report["bilateral_evidence"];
    o.require(!ev.empty(), "no product evidence");
    for (const auto& e : ev) {
        const Index j = e["j"].get<Index>();
        const Index n = e["hit_n"].get<Index>();
        o.require(n >= 1 && n <= kBilateralHorizon, "j=" + std::to_string(j) + " products not verified");
        if (!o.pass) break;
        // recompute both products directly at horizon 10^3
        double back = 0.0, fwd = 0.0;
        for (Index v = 0; v < kBilateralHorizon; ++v) back += w.log_at(j - v);
        for (Index v = 1; v <= kBilateralHorizon; ++v) fwd += w.log_at(j + v);
        o.require(back < -std::log(1e6) && fwd > std::log(1e6), "direct products disagree at j=" + std::to_string(j));
    }
    if (o.pass) o.detail = "backward products -> 0 and forward -> inf for " + std::to_string(ev.size()) + " indices";
    return o;
}

Check oracle_condn() {
    Check o;
    const auto a = verify_condn(7, 200);
    const auto b = verify_prop44(7, 100);
    o.require(a.ok(), "condn " + std::to_string(a.passed) + "/200" + (a.failures.empty() ? "" : ": " + a.failures[0]));
    o.require(b.ok(), "prop44 " + std::to_string(b.passed) + "/100" + (b.failures.empty() ? "" : ": " + b.failures[0]));
    if (o.pass) o.detail = "condn 200/200, prop44 100/100 agreements";
    return o;
}

Check cert_transform() {
    Check o;
    const auto r = verify_certtransform(7, 50);
    o.require(r.ok(), std::to_string(r.passed) + "/50" + (r.failures.empty() ? "" : ": " + r.failures[0]));
    if (o.pass) o.detail = "50 families, tail minima >= log C_n for n <= 64";
    return o;
}

Check divergence() {
    Check o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = parse_weight_spec("const:2");
    const auto s = parse_space_spec("lp:2");
    const auto v = subspace_verdict(w, s);
    o.require(v.growth.has_value(), "no growth certificate");
    if (!o.pass) return o;
    const auto d = build_divergence_witness(*v.growth, w, s, 12, 1000);
    const auto rows = orbit_table(d.x, w, s, d.J, 1000);
    Index bad = 0;
    for (const auto& r : rows) {
        if (r.n == 0) continue;
        // band n: j in (k_(n-1), k_n]
        const double bound = d.predicted(r.n);
        if (bound > 0 && r.log_value < std::log(bound) - kLogTol) {
            bad = r.n;
            break;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(bad == 0, "band bound fails at j=" + std::to_string(bad));
    o.require(verify_divergence_witness(d, w, s) == 0, "library verification disagrees");
    o.require(secs < kWitnessSeconds, "took " + num(secs) + " s");
    if (o.pass) o.detail = "12 stages, bands hold for all j <= 1000 in " + num(secs) + " s";
    return o;
}

Check poly_orbit() {
    Check o;
    const auto r = verify_polyorbit(7, 100);
    o.require(r.ok(), std::to_string(r.passed) + "/100" + (r.failures.empty() ? "" : ": " + r.failures[0]));
    if (o.pass) o.detail = "100 cases within relative 1e-9";
    return o;
}

Check anchor() {
    Check o;
    const std::vector<std::pair<std::string, std::string>> pairs = {{"const:2", "lp:2"},
                                                                    {"periodic:[3,0.5]", "c0"},
                                                                    {"linear", "entire"},
                                                                    {"geom:1.05", "rapid"},
                                                                    {"evper:[4]:[0.5,2]", "lpv:2:geom:0.8"}};
    double worst = 0.0;
    for (const auto& [ws, ss] : pairs) {
        const auto w = parse_weight_spec(ws);
        const auto s = parse_space_spec(ss);
        const int m = s.rows_equal() ? 1 : 2;
        for (Index n = 1; n <= 32; ++n)
            for (Index k = s.index_base(); k < s.index_base() + 256; ++k) {
                const auto e = TruncatedVector::basis(n + k, 1.0, s.index_base());
                const double lhs = log_seminorm(apply_shift(e, w, n), s, 1) - log_seminorm(e, s, m);
                const double rhs = criterion_log(w, s, 1, m, n, k);
                // relative difference of the multiplicative values
                worst = std::max(worst, std::fabs(std::expm1(lhs - rhs)));
            }
    }
    o.require(worst <= kAnchorRel, "relative difference " + num(worst));
    if (o.pass) o.detail = "five pairs on a 32x256 grid, max relative difference " + num(worst);
    return o;
}

Check boundary() {
    Check o;
    const auto c = cli({"analyze", "--weights", "const:1", "--space", "lp:2"});
    o.require(c.code == 0, "exit code " + std::to_string(c.code));
    o.require(c.report.value("outcome", "") == "NotHypercyclic", "outcome " + c.report.value("outcome", "?"));
    o.require(c.report.contains("theta"), "theta missing");
    if (!o.pass) return o;
    o.require(c.report["theta"]["log_value"].is_number() && c.report["theta"]["log_value"].get<double>() == 0.0,
              "theta log is not exactly 0");
    o.require(c.report["theta"]["status"] == "Exact", "theta is not Exact");
    if (o.pass) o.detail = "NotHypercyclic, theta = 1 (log 0, Exact)";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"Rolewicz shift", rolewicz},
        {"differentiation operator", differentiation},
        {"P(D) hypotheses", poly_d},
        {"I+B_w with dips", identity_plus_shift},
        {"bilateral shift", bilateral},
        {"equivalence oracles", oracle_condn},
        {"certificate transform", cert_transform},
        {"divergence witness", divergence},
        {"polynomial orbits", poly_orbit},
        {"basis-vector anchor", anchor},
        {"boundary behaviour", boundary},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("%s %2zu %-26s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
