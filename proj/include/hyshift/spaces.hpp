#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyshift/log_model.hpp"
#include "hyshift/weights.hpp"

namespace hyshift {

enum class SpaceKind { Lp, C0, LpV, C0V, KotheLp, KotheC0 };

// Row coefficient c0 + c1*j + c2*log(j) + c3/j.
struct RowCoef {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;

    double at(int j) const;
    bool constant_in_j() const { return c1 == 0.0 && c2 == 0.0 && c3 == 0.0; }
    bool bounded_in_j() const { return c1 == 0.0 && c2 == 0.0; }
    // sup over j >= 1 and whether it is attained; only meaningful when bounded_in_j().
    double sup_over_j(bool* attained) const;
};

// Canonical condition-(B) witness attached to a preset.
enum class WitnessRule { None, SameRow, TwiceProduct, SumRows };

// A sequence space given by its Köthe matrix
//
//   log a_(j,k) = base(k) + alpha(j)*k + beta(j)*log(k) + gamma(j)
//
// where base is shared by all rows (the weight v of l^p(v)). Bilateral spaces
// carry a bilateral weight v instead and have equal rows.
class SpaceModel {
public:
    static SpaceModel lp(double p, bool bilateral = false);
    static SpaceModel c0(bool bilateral = false);
    static SpaceModel lpv(double p, WeightSequence v);
    static SpaceModel c0v(WeightSequence v);
    static SpaceModel entire();
    static SpaceModel rapid();
    static SpaceModel kothe(double p, bool c0_norm, Index base, RowCoef alpha, RowCoef beta, RowCoef gamma,
                            std::string path);

    SpaceKind kind() const { return kind_; }
    bool bilateral() const { return bilateral_; }
    bool is_c0_norm() const { return c0_norm_; }
    double p() const { return p_; }
    Index index_base() const { return index_base_; }
    bool valid_index(Index k) const { return bilateral_ || k >= index_base_; }

    double log_a(int j, Index k) const;

    // Row j as a structured log-sequence; empty when the shared weight has no
    // exact structure (or for bilateral spaces).
    std::optional<LogModel> row(int j) const;

    const RowCoef& alpha() const { return alpha_; }
    const RowCoef& beta() const { return beta_; }
    const RowCoef& gamma() const { return gamma_; }
    const std::optional<LogModel>& base_model() const { return base_; }

    // All rows coincide (single-norm spaces: l^p, c0, l^p(v), c0(v)).
    bool rows_equal() const { return alpha_.constant_in_j() && beta_.constant_in_j() && gamma_.constant_in_j(); }
    // a_(j,k) does not depend on k (l^p, c0).
    bool rows_constant_in_k() const;

    WitnessRule witness_rule() const { return rule_; }
    int canonical_witness(int j, int m) const;

    std::string render() const { return spec_; }

private:
    SpaceKind kind_ = SpaceKind::Lp;
    bool bilateral_ = false;
    bool c0_norm_ = false;
    double p_ = 1.0;
    Index index_base_ = 1;
    std::optional<WeightSequence> v_;
    std::optional<LogModel> base_;
    RowCoef alpha_, beta_, gamma_;
    WitnessRule rule_ = WitnessRule::SameRow;
    std::string spec_;
};

// Space-spec mini-language:
//   lp:<p> | c0 | lpv:<p>:<weight-spec> | c0v:<weight-spec> | entire | rapid
//   | kothe:<path>, and the prefix bi- for bilateral l^p, c0, l^p(v), c0(v).
SpaceModel parse_space_spec(std::string_view spec);

// Built-in presets with a one-line description each.
std::vector<std::pair<std::string, std::string>> space_presets();

enum class Tri { Holds, FailsAtWitness, UnknownAtHorizon };
const char* to_string(Tri t);

struct ConditionWitness {
    int j = 0;
    int m = 0;         // 0 when the condition has no m parameter
    int m_j = 0;       // 0 when none was found
    bool certified = false;
    // max over the sampled grid of the log ratio (finite evidence)
    double grid_max_log = 0.0;
};

struct ConditionReport {
    Tri holds = Tri::UnknownAtHorizon;
    int J = 1;
    std::vector<ConditionWitness> witnesses;
    std::string note;
};

struct ConditionHorizons {
    int j_max = 8;
    int m_max = 8;
    int n_max = 32;
    Index k_horizon = 1024;
};

// sup_{n>=0} limsup_k a_(j,k) a_(m,n+k) / (a_(J,k) a_(m_j,n+k)) < inf for every
// j, m in the grid, with the least (or canonical) admissible m_j.
ConditionReport check_condition_B(const SpaceModel& space, int J, const ConditionHorizons& h = {});

// a_(j,k) <= a_(j,k+1) and sup_k a_(j,k)^2 / a_(m_j,k) < inf.
ConditionReport check_condition_B_sufficient(const SpaceModel& space, int m_map_max = 128,
                                             Index k_horizon = 1024, int j_max = 8);

// As condition (B) but requiring the ratio to tend to 0 for every n >= 0.
ConditionReport check_schwartz_condition(const SpaceModel& space, int J, const ConditionHorizons& h = {});

}  // namespace hyshift
