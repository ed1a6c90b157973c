#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyshift/certified.hpp"
#include "hyshift/spaces.hpp"
#include "hyshift/weights.hpp"

namespace hyshift {

struct Horizons {
    int n_max = 32;
    Index k_horizon = 1024;
    int m_max = 8;
    int j_max = 8;
};

// Criterion integrand
//   f(n, k) = sum_{v=1..n} log|w_(k+v)| + log a_(J,k) - log a_(m,n+k)
double criterion_log(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index k);

// inf_{k >= N} f(n, k). log_value is the inf over all k >= N when certified;
// horizon_log / arg describe the scan over [N, k_horizon].
CertifiedValue tail_inf(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index N,
                        Index k_horizon);

// liminf_k f(n, k) (= sup_N inf_{k >= N} f(n, k)); HorizonOnly when the
// structure does not decide it.
CertifiedValue tail_liminf(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index k_horizon);

// inf_{k >= N} of a_(J,.)-weighted window quantity maximised over window lengths 1..n.
CertifiedValue window_max_inf(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index N,
                              Index k_horizon);

// inf_{k >= N} f_(J,J)(m, k) >= log C with C > 1.
struct BlockCertificate {
    double log_C = 0.0;
    Index m = 1;  // window length
    Index N = 1;  // tail start
    int J = 1;
    int j = 1;  // seminorm of the target row
    // certified inf_{k >= N} f_(J,j)(b, k) for 0 <= b < m (finite); used to pump
    std::vector<double> bridges;
};

// C_n = C^floor(n/m) / K, valid on tails k >= E_n = N + m - 1.
struct GrowthCertificate {
    double log_C = 0.0;
    Index m = 1;
    Index N = 1;
    int J = 1;
    double log_K = 0.0;
    bool K_certified = true;
    std::vector<double> log_Cn;       // index n - 1, n = 1..count
    std::vector<double> tail_min;     // direct inf_{k >= E_n} f_(J,J)(n, k)
    std::vector<Status> tail_status;

    double log_C_at(Index n) const { return static_cast<double>(n / m) * log_C - log_K; }
    Index E_at(Index /*n*/) const { return N + m - 1; }
    bool sound(double tol = 1e-9) const;
};

// Re-verifies the certificate on [N, N + k_check] and derives the growth
// constants for n = 1..count. C <= 1 or a failed re-verification throws.
GrowthCertificate blockcert_to_growthcert(const BlockCertificate& cert, const WeightSequence& w,
                                          const SpaceModel& s, int count = 64, Index k_check = 4096);

struct ThetaResult {
    CertifiedValue theta;
    std::vector<CertifiedValue> per_n;  // tail_inf at N = index base for n = 1..n_max
    std::optional<BlockCertificate> block;
    int J = 1;
    int m = 1;
};

// sup_n inf_{k >= index_base} f(n, k).
ThetaResult theta(const WeightSequence& w, const SpaceModel& s, int J, int m, int n_max, Index k_horizon);

enum class Hyper { Hypercyclic, NotHypercyclic, Unknown };
const char* to_string(Hyper h);

struct HyperResult {
    Hyper result = Hyper::Unknown;
    bool certified = false;
    std::vector<SumTrend> trends;  // per row j = 1..j_max
    std::string note;
};

// For every j <= j_max: liminf_n [log a_(j,n) - sum_{v<=n} log|w_v|] = -inf.
HyperResult hypercyclicity_test(const WeightSequence& w, const SpaceModel& s, int j_max, Index horizon);

enum class Outcome { HasSubspace, NoSubspace, NotHypercyclic, UnknownAtHorizon, Boundary };
const char* to_string(Outcome o);

struct BilateralEvidence {
    Index j = 0;
    // first n <= horizon with backward sum <= -tau and forward sum >= tau (0: none)
    Index hit_n = 0;
    double min_backward = 0.0;  // min over n of sum_{v<n} log|u_(j-v)|
    double max_forward = 0.0;   // max over n of sum_{v=1..n} log|u_(j+v)|
};

struct Verdict {
    Outcome outcome = Outcome::UnknownAtHorizon;
    int J = 1;
    int m = 0;  // witness m for HasSubspace
    std::optional<ConditionReport> condition_B;
    std::optional<HyperResult> hyper;
    std::vector<ThetaResult> thetas;  // m = 1..m_max (as far as evaluated)
    std::optional<BlockCertificate> block;
    std::optional<GrowthCertificate> growth;
    std::vector<BilateralEvidence> bilateral;
    bool certified = false;
    std::vector<std::string> notes;
};

Verdict subspace_verdict(const WeightSequence& w, const SpaceModel& s, const Horizons& h = {}, int J = 1);
Verdict bilateral_verdict(const WeightSequence& w, const SpaceModel& s, Index horizon = 1000);

struct CondNReport {
    Tri lhs = Tri::UnknownAtHorizon;
    Tri rhs = Tri::UnknownAtHorizon;
    bool agree = true;
    std::string note;
};

// Both sides of the equivalence
//   for all m: sup_n liminf_k f_(J,m)(n, k) > 0   <=>   for all m: theta_(J,m) = +inf
// with m ranging over 1..m_max (only m = J matters for single-norm spaces).
CondNReport condN_check(const WeightSequence& w, const SpaceModel& s, int J, int m_max, int n_max,
                        Index k_horizon);

struct PolyCheck {
    Verdict verdict;
    Tri condition_B = Tri::UnknownAtHorizon;
    bool zero_inf = false;    // some m certifies inf_k f(n, k) = -inf for every n
    int zero_inf_m = 0;
    std::vector<CertifiedValue> zero_inf_values;  // n = 1..n_max for that m
    bool small_constant = false;  // |c0| <= 1
    bool row_ratio_to_zero = false;
    int ratio_m = 0;
    bool criterion_premise_established = false;
};

PolyCheck poly_hypothesis_check(const WeightSequence& w, const SpaceModel& s, const std::vector<double>& P,
                                const Horizons& h = {}, int J = 1);

}  // namespace hyshift
