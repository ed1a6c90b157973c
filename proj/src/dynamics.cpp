#include "hyshift/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyshift {

namespace {

// sign * exp(l) for the pair (s1, l1) + (s2, l2); sign 0 means zero.
std::pair<int, double> signed_log_add(int s1, double l1, int s2, double l2) {
    if (s1 == 0) return {s2, l2};
    if (s2 == 0) return {s1, l1};
    const double hi = std::max(l1, l2), lo = std::min(l1, l2);
    const int s_hi = l1 >= l2 ? s1 : s2;
    if (s1 == s2) return {s1, hi + std::log1p(std::exp(lo - hi))};
    if (lo == hi) return {0, -kInf};
    return {s_hi, hi + std::log1p(-std::exp(lo - hi))};
}

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

double Entry::value() const { return sign * std::exp(log_abs); }

TruncatedVector TruncatedVector::basis(Index k, double coef, Index index_base) {
    return from_pairs({{k, coef}}, index_base);
}

TruncatedVector TruncatedVector::from_pairs(const std::vector<std::pair<Index, double>>& pairs, Index index_base,
                                            bool bilateral) {
    TruncatedVector x(index_base, bilateral);
    std::vector<std::pair<Index, double>> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto [k, c] = sorted[i];
        if (i > 0 && sorted[i - 1].first == k) throw std::domain_error("duplicate index " + std::to_string(k));
        if (!bilateral && k < index_base) throw std::domain_error("index " + std::to_string(k) + " below the base");
        if (!std::isfinite(c)) throw std::domain_error("coefficient must be finite");
        if (c == 0.0) continue;
        x.entries_.push_back({k, sign_of(c), std::log(std::fabs(c))});
    }
    return x;
}

Index TruncatedVector::min_index() const {
    if (entries_.empty()) throw std::domain_error("empty vector has no support");
    return entries_.front().index;
}

Index TruncatedVector::max_index() const {
    if (entries_.empty()) throw std::domain_error("empty vector has no support");
    return entries_.back().index;
}

double TruncatedVector::at(Index k) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& e, Index key) { return e.index < key; });
    return it != entries_.end() && it->index == k ? it->value() : 0.0;
}

std::vector<std::pair<Index, double>> TruncatedVector::pairs() const {
    std::vector<std::pair<Index, double>> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.emplace_back(e.index, e.value());
    return out;
}

bool TruncatedVector::any_huge() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.huge(); });
}

void TruncatedVector::add(Index k, int sign, double log_abs) {
    if (sign == 0 || log_abs == -kInf) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& e, Index key) { return e.index < key; });
    if (it == entries_.end() || it->index != k) {
        entries_.insert(it, Entry{k, sign, log_abs});
        return;
    }
    const auto [s, l] = signed_log_add(it->sign, it->log_abs, sign, log_abs);
    if (s == 0)
        entries_.erase(it);
    else {
        it->sign = s;
        it->log_abs = l;
    }
}

void TruncatedVector::add(const TruncatedVector& other, int sign, double log_scale) {
    for (const auto& e : other.entries_) add(e.index, e.sign * sign, e.log_abs + log_scale);
}

TruncatedVector apply_shift(const TruncatedVector& x, const WeightSequence& w, Index n) {
    if (n < 0) throw std::domain_error("shift power must be non-negative");
    if (n == 0) return x;
    TruncatedVector out(x.index_base(), x.bilateral());
    std::vector<Entry> moved;
    moved.reserve(x.entries().size());
    for (const auto& e : x.entries()) {
        const Index k = e.index - n;
        if (!x.bilateral() && k < x.index_base()) continue;
        moved.push_back({k, e.sign, e.log_abs + window_log(w, n, k)});
    }
    out.assign_sorted(std::move(moved));
    return out;
}

double log_seminorm(const TruncatedVector& x, const SpaceModel& s, int j) {
    if (j < 1) throw std::domain_error("seminorm index j must be positive");
    if (x.empty()) return -kInf;
    std::vector<double> t;
    t.reserve(x.entries().size());
    for (const auto& e : x.entries()) t.push_back(e.log_abs + s.log_a(j, e.index));
    const double hi = *std::max_element(t.begin(), t.end());
    if (s.is_c0_norm()) return hi;
    const double p = s.p();
    double acc = 0.0;
    for (double v : t) acc += std::exp(p * (v - hi));
    return hi + std::log(acc) / p;
}

double seminorm(const TruncatedVector& x, const SpaceModel& s, int j) { return std::exp(log_seminorm(x, s, j)); }

std::vector<OrbitRow> orbit_table(const TruncatedVector& x, const WeightSequence& w, const SpaceModel& s, int j,
                                  Index horizon) {
    if (horizon < 0) throw std::domain_error("horizon must be non-negative");
    std::vector<OrbitRow> rows;
    rows.reserve(static_cast<std::size_t>(horizon) + 1);
    TruncatedVector y = x;
    for (Index n = 0; n <= horizon; ++n) {
        OrbitRow r;
        r.n = n;
        r.log_value = log_seminorm(y, s, j);
        r.value = std::exp(r.log_value);
        r.huge = r.log_value > kHugeLog || y.any_huge();
        rows.push_back(r);
        if (n < horizon) y = apply_shift(y, w, 1);
    }
    return rows;
}

PolyPower poly_power(const std::vector<double>& P, Index n) {
    if (n < 1) throw std::domain_error("polynomial power n must be at least 1");
    std::vector<double> base = P;
    while (!base.empty() && base.back() == 0.0) base.pop_back();
    if (base.size() < 2) throw std::domain_error("P must have degree at least 1");
    PolyPower out;
    out.base = base;
    out.n = n;

    const bool integer = std::all_of(base.begin(), base.end(), [](double c) {
        return std::isfinite(c) && c == std::trunc(c) && std::fabs(c) < 9.2e18;
    });
    out.integer_exact = integer;
    if (integer) {
        using I = __int128;
        std::vector<I> b(base.size()), cur{1};
        for (std::size_t i = 0; i < base.size(); ++i) b[i] = static_cast<I>(static_cast<long long>(base[i]));
        I K = 0;
        for (Index k = 1; k <= n; ++k) {
            std::vector<I> next(cur.size() + b.size() - 1, 0);
            for (std::size_t i = 0; i < cur.size(); ++i)
                for (std::size_t q = 0; q < b.size(); ++q) {
                    I prod;
                    if (__builtin_mul_overflow(cur[i], b[q], &prod) ||
                        __builtin_add_overflow(next[i + q], prod, &next[i + q]))
                        throw std::domain_error("coefficients of P^n overflow 128-bit integers; use a smaller n*d");
                }
            cur = std::move(next);
            for (I c : cur) K = std::max(K, c < 0 ? -c : c);
        }
        for (I c : cur) out.coeffs.push_back(static_cast<long double>(c));
        out.K = static_cast<long double>(K);
        return out;
    }
    std::vector<long double> cur{1.0L};
    long double K = 0;
    for (Index k = 1; k <= n; ++k) {
        std::vector<long double> next(cur.size() + base.size() - 1, 0.0L);
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t q = 0; q < base.size(); ++q) next[i + q] += cur[i] * static_cast<long double>(base[q]);
        cur = std::move(next);
        for (long double c : cur) {
            if (!std::isfinite(static_cast<double>(c)))
                throw std::domain_error("coefficients of P^n overflow; use a smaller n*d");
            K = std::max(K, c < 0 ? -c : c);
        }
    }
    out.coeffs = std::move(cur);
    out.K = K;
    return out;
}

namespace {

// sum_i c_i B^i x
TruncatedVector combine_powers(const TruncatedVector& x, const WeightSequence& w,
                               const std::vector<long double>& coeffs) {
    TruncatedVector out(x.index_base(), x.bilateral());
    TruncatedVector y = x;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i > 0) y = apply_shift(y, w, 1);
        const long double c = coeffs[i];
        if (c != 0) out.add(y, c > 0 ? 1 : -1, static_cast<double>(std::log(c > 0 ? c : -c)));
        if (y.empty()) break;
    }
    return out;
}

}  // namespace

TruncatedVector apply_poly(const TruncatedVector& x, const WeightSequence& w, const std::vector<double>& P, Index n,
                           PolyMode mode) {
    if (mode == PolyMode::Expanded) return combine_powers(x, w, poly_power(P, n).coeffs);
    const PolyPower one = poly_power(P, 1);
    TruncatedVector y = x;
    for (Index k = 0; k < n; ++k) y = combine_powers(y, w, one.coeffs);
    return y;
}

TruncatedVector right_inverse(const TruncatedVector& y, const WeightSequence& w, Index n) {
    if (n < 0) throw std::domain_error("shift power must be non-negative");
    TruncatedVector out(y.index_base(), y.bilateral());
    std::vector<Entry> moved;
    moved.reserve(y.entries().size());
    for (const auto& e : y.entries()) moved.push_back({e.index + n, e.sign, e.log_abs - window_log(w, n, e.index)});
    out.assign_sorted(std::move(moved));
    return out;
}

PrefixResult build_hypercyclic_prefix(const WeightSequence& w, const SpaceModel& s,
                                      const std::vector<TruncatedVector>& targets, const std::vector<Index>& times,
                                      int j) {
    if (targets.empty() || targets.size() != times.size())
        throw std::domain_error("need one time per target and at least one target");
    PrefixResult out;
    out.z = TruncatedVector::for_space(s);
    std::vector<TruncatedVector> blocks;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (times[i] < 1) throw std::domain_error("times must be positive");
        if (i > 0 && times[i] <= times[i - 1]) throw std::domain_error("times must be strictly increasing");
        if (targets[i].empty()) throw std::domain_error("targets must be non-zero");
        blocks.push_back(right_inverse(targets[i], w, times[i]));
        if (i > 0 && blocks[i].min_index() <= blocks[i - 1].max_index())
            throw std::domain_error("insufficient spacing between targets " + std::to_string(i - 1) + " and " +
                                    std::to_string(i) + ": block " + std::to_string(i) + " starts at " +
                                    std::to_string(blocks[i].min_index()) + " but block " + std::to_string(i - 1) +
                                    " ends at " + std::to_string(blocks[i - 1].max_index()));
        out.z.add(blocks[i]);
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        TruncatedVector diff = apply_shift(out.z, w, times[i]);
        diff.add(targets[i], -1);
        out.errors.push_back(diff.empty() ? 0.0 : seminorm(diff, s, j));
    }
    out.smallness = seminorm(out.z, s, j);
    return out;
}

double DivergenceWitness::predicted(Index j) const {
    if (schedule.empty() || j <= schedule.front()) return 0.0;
    for (std::size_t n = 1; n < schedule.size(); ++n)
        if (j <= schedule[n]) return static_cast<double>(n);
    return static_cast<double>(schedule.size() - 1);
}

DivergenceWitness build_divergence_witness(const GrowthCertificate& g, const WeightSequence& w, const SpaceModel& s,
                                           int stages, Index horizon) {
    constexpr int kMaxStages = 1000;
    if (stages < 1 || stages > kMaxStages)
        throw std::domain_error("stages must lie in [1, " + std::to_string(kMaxStages) + "]");
    if (horizon < 1) throw std::domain_error("horizon must be positive");
    if (!(g.log_C > 0.0) || g.m < 1) throw std::domain_error("growth certificate needs C > 1");
    if (!g.sound()) throw std::domain_error("growth certificate fails re-verification");
    if (w.is_bilateral() || s.bilateral()) throw std::domain_error("divergence witness needs a unilateral shift");

    // least j >= 1 with log C_j >= t
    auto first_j = [&](double t) {
        const double q = std::max(0.0, std::ceil((t + g.log_K) / g.log_C - 1e-12));
        Index j = std::max<Index>(1, static_cast<Index>(q) * g.m);
        while (g.log_C_at(j) < t) ++j;
        while (j > 1 && g.log_C_at(j - 1) >= t) --j;
        return j;
    };

    DivergenceWitness d;
    d.J = g.J;
    d.horizon = horizon;
    for (int n = 0; n <= stages; ++n) d.schedule.push_back(first_j(3.0 * std::log(n + 1.0)) - 1);

    // Every stage index clears the tail start for all j <= horizon, and the
    // stages sit at distinct indices so their orbits never overlap.
    const Index E = g.E_at(horizon);
    d.x = TruncatedVector::for_space(s);
    for (int n = 1; n <= stages; ++n) {
        const Index k = E + horizon + n;
        d.x.add(k, 1, -2.0 * std::log(static_cast<double>(n)) - s.log_a(g.J, k));
    }
    return d;
}

Index verify_divergence_witness(const DivergenceWitness& d, const WeightSequence& w, const SpaceModel& s) {
    const auto rows = orbit_table(d.x, w, s, d.J, d.horizon);
    for (const auto& r : rows) {
        if (r.n == 0) continue;
        const double bound = d.predicted(r.n);
        if (bound > 0 && r.log_value < std::log(bound) - 1e-9) return r.n;
    }
    return 0;
}

}  // namespace hyshift
