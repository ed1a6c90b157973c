#include "hyshift/log_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hyshift {

double LogModel::periodic_part(Index k) const {
    const Index p = period_length();
    Index r = (k - anchor) % p;
    if (r < 0) r += p;
    return period[static_cast<std::size_t>(r)];
}

double LogModel::at(Index k) const {
    if (k < first) throw std::domain_error("index below the first valid index");
    if (k < tail_start()) return prefix[static_cast<std::size_t>(k - first)];
    double v = periodic_part(k) + offset;
    if (slope != 0.0) v += slope * static_cast<double>(k);
    if (log_coef != 0.0) v += log_coef * std::log(static_cast<double>(k));
    return v;
}

double LogModel::period_min() const { return *std::min_element(period.begin(), period.end()); }
double LogModel::period_max() const { return *std::max_element(period.begin(), period.end()); }

double LogModel::period_mean() const {
    return std::accumulate(period.begin(), period.end(), 0.0) / static_cast<double>(period.size());
}

bool LogModel::is_zero() const {
    auto zero = [](double v) { return v == 0.0; };
    return slope == 0.0 && log_coef == 0.0 && offset == 0.0 &&
           std::all_of(prefix.begin(), prefix.end(), zero) &&
           std::all_of(period.begin(), period.end(), zero);
}

LogModel LogModel::scaled(double factor) const {
    LogModel out = *this;
    for (double& v : out.prefix) v *= factor;
    for (double& v : out.period) v *= factor;
    out.slope *= factor;
    out.log_coef *= factor;
    out.offset *= factor;
    return out;
}

}  // namespace hyshift
