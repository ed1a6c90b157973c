#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyshift/certified.hpp"
#include "hyshift/log_model.hpp"

namespace hyshift {

enum class WeightFamily {
    Constant,
    Periodic,
    EventuallyPeriodic,
    Linear,     // w_k = k
    Geometric,  // w_k = r^k
    Table,      // explicit moduli, then a tail rule evaluated at the same index
    Blocks,     // hi on [4^i, 2*4^i), lo on [2*4^i, 4^(i+1))
    Dips,       // c except |w_(2^i)| = 2^(-i)
    Bilateral,
};

// Weight moduli |w_k|. Unilateral sequences are defined for k >= 1; bilateral
// sequences for every integer k, with w_k = pos(k) for k >= 1 and
// w_k = nonpos(1 - k) for k <= 0.
class WeightSequence {
public:
    static WeightSequence constant(double c);
    static WeightSequence periodic(std::vector<double> values);
    static WeightSequence eventually_periodic(std::vector<double> prefix, std::vector<double> period);
    static WeightSequence linear();
    static WeightSequence geometric(double r);
    static WeightSequence table(std::vector<double> values, WeightSequence tail, std::string path);
    static WeightSequence blocks(double hi, double lo);
    static WeightSequence dips(double c);
    static WeightSequence bilateral(WeightSequence pos, WeightSequence nonpos);

    WeightFamily family() const { return family_; }
    bool is_bilateral() const { return family_ == WeightFamily::Bilateral; }

    // Smallest valid index (1 for unilateral sequences).
    Index first_index() const;
    bool valid(Index k) const;

    double log_at(Index k) const;
    double magnitude_at(Index k) const;

    // Exact structure for the families that admit one (not Blocks/Dips/Bilateral).
    const std::optional<LogModel>& model() const { return model_; }

    // Generator parameters: Blocks -> {hi, lo}; Dips -> {c}.
    const std::vector<double>& params() const { return params_; }
    const WeightSequence& positive_side() const;
    const WeightSequence& nonpositive_side() const;

    // Spec text that parses back to this sequence.
    std::string render() const;

private:
    WeightFamily family_ = WeightFamily::Constant;
    std::optional<LogModel> model_;
    std::vector<double> params_;
    std::vector<double> values_;
    std::vector<double> period_;
    std::string path_;
    std::shared_ptr<const WeightSequence> tail_;
    std::shared_ptr<const WeightSequence> pos_;
    std::shared_ptr<const WeightSequence> neg_;
};

// Weight-spec mini-language:
//   const:<x> | linear | geom:<r> | periodic:[v1,...] | evper:[p1,...]:[v1,...]
//   | table:<path> | blocks:<hi>:<lo> | dips:<c> | bilateral:<pos>:<nonpos>
WeightSequence parse_weight_spec(std::string_view spec);

// Sum of log|w_(k+1)| ... log|w_(k+n)|, accumulated left to right.
double window_log(const WeightSequence& w, Index n, Index k);

// sup over 1 <= n <= horizon of the partial sums sum_{v<=n} log|w_v|.
// log_value is the sup over all n when the family certifies it, otherwise the
// horizon maximum with status HorizonOnly.
CertifiedValue cumulative_sup_log(const WeightSequence& w, Index horizon);

// Long-run behaviour of g(n) = sum_{v<=n} log|w_v| - row(n), where `row` is an
// optional log-sequence (a Köthe row log a_(j,n)). Oscillating means
// limsup = +inf and liminf = -inf.
enum class SumTrend { PlusInfinity, MinusInfinity, Bounded, Oscillating, Unknown };
SumTrend partial_sum_trend(const WeightSequence& w, const LogModel* row = nullptr);

const char* to_string(SumTrend t);

}  // namespace hyshift
