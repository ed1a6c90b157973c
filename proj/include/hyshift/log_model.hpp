#pragma once

#include <cstdint>
#include <vector>

namespace hyshift {

using Index = std::int64_t;

// Absolute tolerance used when deciding the sign of a structural coefficient
// (slopes, drifts). Values inside the band are treated as exactly zero.
inline constexpr double kStructTol = 1e-12;

// Structured log-sequence k -> log s_k:
//
//   log s_k = prefix[k - first]                                   first <= k < tail_start()
//   log s_k = period[(k - anchor) mod p] + slope*k
//             + log_coef*log(k) + offset                          k >= tail_start()
//
// Every exactly-analysable family (constant, periodic, eventually periodic,
// w_k = k, w_k = r^k, Köthe rows j^k and k^j) is an instance.
struct LogModel {
    Index first = 1;
    std::vector<double> prefix;
    std::vector<double> period{0.0};
    Index anchor = 1;
    double slope = 0.0;
    double log_coef = 0.0;
    double offset = 0.0;

    Index tail_start() const { return first + static_cast<Index>(prefix.size()); }
    Index period_length() const { return static_cast<Index>(period.size()); }

    double at(Index k) const;
    double periodic_part(Index k) const;

    double period_min() const;
    double period_max() const;
    double period_mean() const;

    bool has_log_term() const { return log_coef != 0.0; }
    bool is_zero() const;

    LogModel scaled(double factor) const;
};

}  // namespace hyshift
