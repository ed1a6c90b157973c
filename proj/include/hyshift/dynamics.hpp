#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hyshift/criteria.hpp"
#include "hyshift/spaces.hpp"
#include "hyshift/weights.hpp"

namespace hyshift {

// Magnitudes beyond this log are outside the double exponent range.
inline constexpr double kHugeLog = 700.0;

// One coefficient stored as sign and log-magnitude, so factorial-scale
// products stay representable.
struct Entry {
    Index index = 0;
    int sign = 1;
    double log_abs = 0.0;

    double value() const;
    bool huge() const { return log_abs > kHugeLog || log_abs < -kHugeLog; }
};

// Finitely supported vector, sorted by index with no zero entries.
class TruncatedVector {
public:
    explicit TruncatedVector(Index index_base = 1, bool bilateral = false)
        : base_(index_base), bilateral_(bilateral) {}

    static TruncatedVector basis(Index k, double coef = 1.0, Index index_base = 1);
    // Duplicate indices, non-finite coefficients or indices below the base throw.
    static TruncatedVector from_pairs(const std::vector<std::pair<Index, double>>& pairs, Index index_base = 1,
                                      bool bilateral = false);
    static TruncatedVector for_space(const SpaceModel& s) { return TruncatedVector(s.index_base(), s.bilateral()); }

    Index index_base() const { return base_; }
    bool bilateral() const { return bilateral_; }
    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    Index min_index() const;
    Index max_index() const;

    double at(Index k) const;
    std::vector<std::pair<Index, double>> pairs() const;
    bool any_huge() const;

    // Signed log-domain accumulation: this += sign * exp(log_abs) e_k.
    void add(Index k, int sign, double log_abs);
    void add(const TruncatedVector& other, int sign = 1, double log_scale = 0.0);

    // Builds from already sorted, distinct entries.
    void assign_sorted(std::vector<Entry> entries) { entries_ = std::move(entries); }

private:
    Index base_;
    bool bilateral_;
    std::vector<Entry> entries_;
};

// B_w^n x: the coefficient at k becomes prod_{v=1..n} |w_(k+v)| * x_(k+n);
// indices below the base vanish for unilateral vectors.
TruncatedVector apply_shift(const TruncatedVector& x, const WeightSequence& w, Index n);

double log_seminorm(const TruncatedVector& x, const SpaceModel& s, int j);
double seminorm(const TruncatedVector& x, const SpaceModel& s, int j);

struct OrbitRow {
    Index n = 0;
    double log_value = 0.0;
    double value = 0.0;
    bool huge = false;
};

// Seminorms of B_w^n x for n = 0..horizon.
std::vector<OrbitRow> orbit_table(const TruncatedVector& x, const WeightSequence& w, const SpaceModel& s, int j,
                                  Index horizon);

struct PolyPower {
    std::vector<double> base;
    Index n = 0;
    std::vector<long double> coeffs;  // c_i^(n), i = 0..n d
    long double K = 0;                // max_{k <= n, i <= k d} |c_i^(k)|
    bool integer_exact = false;
};

// Convolution power P^n. Integer inputs are computed exactly in 128-bit
// arithmetic (overflow throws); other inputs in long double.
PolyPower poly_power(const std::vector<double>& P, Index n);

enum class PolyMode { Expanded, Iterated };

TruncatedVector apply_poly(const TruncatedVector& x, const WeightSequence& w, const std::vector<double>& P, Index n,
                           PolyMode mode);

// x with B_w^n x = y: coefficient of e_(k+n) is y_k / prod_{v=1..n} |w_(k+v)|.
TruncatedVector right_inverse(const TruncatedVector& y, const WeightSequence& w, Index n);

struct PrefixResult {
    TruncatedVector z;
    std::vector<double> errors;  // seminorm of B^(n_i) z - y_i
    double smallness = 0.0;      // seminorm of z
};

PrefixResult build_hypercyclic_prefix(const WeightSequence& w, const SpaceModel& s,
                                      const std::vector<TruncatedVector>& targets, const std::vector<Index>& times,
                                      int j = 1);

struct DivergenceWitness {
    TruncatedVector x;
    std::vector<Index> schedule;  // k_0, k_1, ..., k_stages
    int J = 1;
    Index horizon = 0;

    // Lower bound for the p_J seminorm of B_w^j x.
    double predicted(Index j) const;
};

DivergenceWitness build_divergence_witness(const GrowthCertificate& g, const WeightSequence& w, const SpaceModel& s,
                                           int stages, Index horizon = 1000);

// First j <= horizon where the orbit falls below the predicted bound (0 if none).
Index verify_divergence_witness(const DivergenceWitness& d, const WeightSequence& w, const SpaceModel& s);

}  // namespace hyshift
