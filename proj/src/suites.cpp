#include "hyshift/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hyshift/criteria.hpp"
#include "hyshift/dynamics.hpp"
#include "hyshift/spaces.hpp"
#include "hyshift/weights.hpp"

namespace hyshift {

namespace {

constexpr std::size_t kMaxFailureLines = 20;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<double> random_moduli(Rng& rng, int len, double log_lo, double log_hi) {
    std::vector<double> v(static_cast<std::size_t>(len));
    for (auto& x : v) x = std::exp(uniform(rng, log_lo, log_hi));
    return v;
}

WeightSequence random_evper(Rng& rng) {
    const int prefix = uniform_int(rng, 0, 8);
    const int period = uniform_int(rng, 1, 8);
    auto pre = random_moduli(rng, prefix, -2.0, 2.0);
    auto per = random_moduli(rng, period, -2.0, 2.0);
    return WeightSequence::eventually_periodic(std::move(pre), std::move(per));
}

SuiteResult start(const char* name, std::uint64_t seed, int count) {
    SuiteResult r;
    r.name = name;
    r.seed = seed;
    r.count = count;
    return r;
}

void record(SuiteResult& r, int i, const std::string& what) {
    if (r.failures.size() < kMaxFailureLines) r.failures.push_back("case " + std::to_string(i) + ": " + what);
}

// One equivalence case: both sides must be decided and equal.
void tally_condn(SuiteResult& r, int i, const CondNReport& rep, const std::string& label) {
    if (rep.lhs == Tri::UnknownAtHorizon || rep.rhs == Tri::UnknownAtHorizon) {
        ++r.undecided;
        record(r, i, label + " undecided (lhs " + to_string(rep.lhs) + ", rhs " + to_string(rep.rhs) + ")");
    } else if (!rep.agree || rep.lhs != rep.rhs) {
        record(r, i, label + " disagreement: " + rep.note);
    } else {
        ++r.passed;
    }
}

}  // namespace

SuiteResult verify_condn(std::uint64_t seed, int count) {
    SuiteResult r = start("condn", seed, count);
    Rng rng(seed);
    const SpaceModel s = SpaceModel::lp(2.0);
    for (int i = 0; i < count; ++i) {
        const WeightSequence w = random_evper(rng);
        tally_condn(r, i, condN_check(w, s, 1, 1, 32, 1024), w.render());
    }
    return r;
}

SuiteResult verify_prop44(std::uint64_t seed, int count) {
    SuiteResult r = start("prop44", seed, count);
    Rng rng(seed);
    const SpaceModel spaces[] = {SpaceModel::entire(), SpaceModel::rapid()};
    for (int i = 0; i < count; ++i) {
        const WeightSequence w = random_evper(rng);
        const SpaceModel& s = spaces[i % 2];
        const int J = uniform_int(rng, 1, 3);
        tally_condn(r, i, condN_check(w, s, J, 4, 32, 1024), w.render() + " on " + s.render() + " J=" + std::to_string(J));
    }
    return r;
}

SuiteResult verify_certtransform(std::uint64_t seed, int count) {
    SuiteResult r = start("certtransform", seed, count);
    Rng rng(seed);
    const SpaceModel s = SpaceModel::lp(2.0);
    constexpr int kAttempts = 64;
    constexpr int kOrders = 64;
    constexpr double kTol = 1e-9;
    for (int i = 0; i < count; ++i) {
        // draw until a block certificate exists
        std::optional<WeightSequence> w;
        std::optional<BlockCertificate> block;
        for (int a = 0; a < kAttempts && !block; ++a) {
            const int period = uniform_int(rng, 1, 8);
            w = WeightSequence::periodic(random_moduli(rng, period, -1.0, 2.0));
            block = theta(*w, s, 1, 1, 32, 1024).block;
        }
        if (!block) {
            ++r.undecided;
            record(r, i, "no family with a block certificate");
            continue;
        }
        try {
            const GrowthCertificate g = blockcert_to_growthcert(*block, *w, s, kOrders);
            // Independent oracle: periodic windows repeat, so one period past E
            // suffices; scan a generous multiple of it with direct sums.
            bool ok = true;
            for (Index n = 1; n <= kOrders && ok; ++n) {
                const Index E = g.E_at(n);
                double lo = kInf;
                for (Index k = E; k < E + 64; ++k) {
                    double sum = 0.0;
                    for (Index v = 1; v <= n; ++v) sum += w->log_at(k + v);
                    lo = std::min(lo, sum);
                }
                const double target = g.log_Cn[static_cast<std::size_t>(n - 1)];
                if (lo < target - kTol || g.tail_min[static_cast<std::size_t>(n - 1)] < target - kTol) {
                    std::ostringstream msg;
                    msg << w->render() << " n=" << n << " tail " << lo << " < log C_n " << target;
                    record(r, i, msg.str());
                    ok = false;
                }
            }
            if (ok) ++r.passed;
        } catch (const std::exception& e) {
            record(r, i, w->render() + ": " + e.what());
        }
    }
    return r;
}

SuiteResult verify_polyorbit(std::uint64_t seed, int count) {
    SuiteResult r = start("polyorbit", seed, count);
    Rng rng(seed);
    constexpr double kRel = 1e-9;
    for (int i = 0; i < count; ++i) {
        const int d = uniform_int(rng, 1, 4);
        const int n = uniform_int(rng, 1, 8);
        std::vector<double> P(static_cast<std::size_t>(d) + 1);
        const bool integer = uniform_int(rng, 0, 1) == 1;
        for (auto& c : P) c = integer ? uniform_int(rng, -3, 3) : uniform(rng, -2.0, 2.0);
        if (P.back() == 0.0) P.back() = 1.0;

        const WeightSequence w = WeightSequence::periodic(random_moduli(rng, uniform_int(rng, 1, 6), -0.7, 0.7));
        const int support = uniform_int(rng, 1, 128);
        std::vector<Index> idx(256);
        for (Index k = 0; k < 256; ++k) idx[static_cast<std::size_t>(k)] = k + 1;
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<std::pair<Index, double>> pairs;
        for (int t = 0; t < support; ++t) pairs.emplace_back(idx[static_cast<std::size_t>(t)], uniform(rng, -1.0, 1.0));
        const TruncatedVector x = TruncatedVector::from_pairs(pairs);

        try {
            const TruncatedVector a = apply_poly(x, w, P, n, PolyMode::Expanded);
            const TruncatedVector b = apply_poly(x, w, P, n, PolyMode::Iterated);
            double scale = 0.0, diff = 0.0;
            for (const auto& e : a.entries()) {
                scale = std::max(scale, std::fabs(e.value()));
                diff = std::max(diff, std::fabs(e.value() - b.at(e.index)));
            }
            for (const auto& e : b.entries()) {
                scale = std::max(scale, std::fabs(e.value()));
                diff = std::max(diff, std::fabs(e.value() - a.at(e.index)));
            }
            if (diff <= kRel * scale) {
                ++r.passed;
            } else {
                std::ostringstream msg;
                msg << "d=" << d << " n=" << n << " relative difference " << diff / scale;
                record(r, i, msg.str());
            }
        } catch (const std::exception& e) {
            record(r, i, e.what());
        }
    }
    return r;
}

std::vector<std::string> suite_names() { return {"condn", "prop44", "certtransform", "polyorbit"}; }

SuiteResult run_suite(const std::string& name, std::uint64_t seed, int count) {
    if (name == "condn") return verify_condn(seed, count > 0 ? count : 200);
    if (name == "prop44") return verify_prop44(seed, count > 0 ? count : 100);
    if (name == "certtransform") return verify_certtransform(seed, count > 0 ? count : 50);
    if (name == "polyorbit") return verify_polyorbit(seed, count > 0 ? count : 100);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace hyshift
