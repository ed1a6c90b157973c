#pragma once

#include <vector>

#include "hyshift/certified.hpp"
#include "hyshift/log_model.hpp"

namespace hyshift {

// f(k) = sum_i coef_i * model_i(k + shift_i), a finite combination of shifted
// structured log-sequences. Window sums, Köthe rows and their differences are
// all of this form.
struct TailTerm {
    const LogModel* model = nullptr;
    Index shift = 0;
    double coef = 1.0;
};

struct TailShape {
    std::vector<TailTerm> terms;

    // Smallest k at which every term is defined.
    Index domain_start() const;
    // Smallest k at which every term is in its periodic-plus-trend regime.
    Index regime_start() const;
    double at(Index k) const;
    // Coefficients of k and log k in the long run.
    double linear_coef() const;
    double log_coef() const;
    TailShape negated() const;
};

// Exact inf_{k >= N} f(k) when the shape admits it: -inf for decaying shapes,
// the attained minimum for growing ones (scan until a monotone lower bound
// clears the running minimum), the minimum over one joint period when the
// shape is periodic. Otherwise HorizonOnly with the scanned minimum.
CertifiedValue shape_tail_inf(const TailShape& f, Index N, Index scan_cap = Index{1} << 22);
CertifiedValue shape_tail_sup(const TailShape& f, Index N, Index scan_cap = Index{1} << 22);

// liminf_k f(k): -inf or +inf by trend, otherwise the minimum of the joint
// periodic part plus the constant term.
CertifiedValue shape_liminf(const TailShape& f);

}  // namespace hyshift
