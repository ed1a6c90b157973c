#include "hyshift/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hyshift {

namespace {

constexpr Index kMaxJointPeriod = 1 << 20;
// Values scanned for evidence when the inf is -inf by decay.
constexpr Index kEvidenceScan = 256;

int sgn(double v) { return v > kStructTol ? 1 : (v < -kStructTol ? -1 : 0); }

}  // namespace

Index TailShape::domain_start() const {
    Index s = std::numeric_limits<Index>::min();
    for (const auto& t : terms) s = std::max(s, t.model->first - t.shift);
    return s;
}

Index TailShape::regime_start() const {
    Index s = std::numeric_limits<Index>::min();
    for (const auto& t : terms) s = std::max(s, t.model->tail_start() - t.shift);
    return s;
}

double TailShape::at(Index k) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.coef * t.model->at(k + t.shift);
    return v;
}

double TailShape::linear_coef() const {
    double a = 0.0;
    for (const auto& t : terms) a += t.coef * t.model->slope;
    return a;
}

double TailShape::log_coef() const {
    double b = 0.0;
    for (const auto& t : terms) b += t.coef * t.model->log_coef;
    return b;
}

TailShape TailShape::negated() const {
    TailShape out = *this;
    for (auto& t : out.terms) t.coef = -t.coef;
    return out;
}

CertifiedValue shape_tail_inf(const TailShape& f, Index N, Index scan_cap) {
    if (f.terms.empty()) throw std::domain_error("empty tail shape");
    CertifiedValue out;
    const Index start = std::max(N, f.domain_start());
    const Index regime = std::max(start, f.regime_start());
    const double A = f.linear_coef();
    const double B = f.log_coef();

    auto scan = [&](Index from, Index to, double& best, Index& arg) {
        for (Index k = from; k < to; ++k) {
            const double v = f.at(k);
            if (v < best) {
                best = v;
                arg = k;
            }
        }
    };

    double best = kInf;
    Index arg = start;

    if (sgn(A) < 0 || (sgn(A) == 0 && sgn(B) < 0)) {
        scan(start, std::max(regime, start + kEvidenceScan), best, arg);
        out.horizon_log = best;
        out.arg = arg;
        out.horizon = std::max(regime, start + kEvidenceScan) - 1;
        out.log_value = -kInf;
        out.status = Status::Exact;
        out.note = "tail decays";
        return out;
    }

    // Joint period of the periodic parts and their constant and correction data.
    Index L = 1;
    double c = 0.0, neg_corr = 0.0;
    bool has_corr = false, has_neg_corr = false;
    for (const auto& t : f.terms) {
        const Index p = t.model->period_length();
        L = std::lcm(L, p);
        if (L > kMaxJointPeriod) break;
        c += t.coef * (t.model->slope * static_cast<double>(t.shift) + t.model->offset);
        // coef * log_coef * (log(k + shift) - log k) lies between 0 and coef * log_coef * shift / k
        const double w = t.coef * t.model->log_coef * static_cast<double>(t.shift);
        if (w != 0.0) has_corr = true;
        if (w < 0.0) {
            neg_corr += w;
            has_neg_corr = true;
        }
    }
    if (L > kMaxJointPeriod) {
        scan(start, std::min(start + scan_cap, regime + scan_cap), best, arg);
        out.log_value = out.horizon_log = best;
        out.arg = arg;
        out.horizon = start + scan_cap;
        out.status = Status::HorizonOnly;
        out.note = "joint period too long";
        return out;
    }
    double pf_min = kInf;
    for (Index k = regime; k < regime + L; ++k) {
        double v = 0.0;
        for (const auto& t : f.terms) v += t.coef * t.model->periodic_part(k + t.shift);
        pf_min = std::min(pf_min, v);
    }
    const bool flat = sgn(A) == 0 && sgn(B) == 0;
    // Monotone lower bound on the regime: f(k) >= lower(k).
    auto lower = [&](Index k) {
        const double kd = static_cast<double>(k);
        double v = pf_min + c + neg_corr / kd;
        if (!flat) v += A * kd + B * std::log(kd);
        return v;
    };

    scan(start, regime + L, best, arg);
    Index k = regime + L;

    if (flat) {
        // f = periodic + c + o(1); the liminf is pf_min + c.
        const double limit = pf_min + c;
        if (!has_corr || !has_neg_corr) {
            out.log_value = std::min(best, limit);
            out.status = Status::Exact;
        } else {
            const Index stop = k + scan_cap;
            while (k < stop && (best >= limit || lower(k) < best)) {
                scan(k, k + L, best, arg);
                k += L;
            }
            out.log_value = best;
            out.status = best < limit && lower(k) >= best ? Status::Exact : Status::HorizonOnly;
        }
        out.horizon_log = best;
        out.arg = arg;
        out.horizon = k - 1;
        return out;
    }

    // Growth: lower(k) increases once A + B/k >= 0.
    Index mono_from = regime;
    if (sgn(A) > 0 && B < 0) mono_from = std::max(regime, static_cast<Index>(std::ceil(-B / A)) + 1);
    const Index stop = k + scan_cap;
    while (k < stop && (k < mono_from || lower(k) < best)) {
        scan(k, k + L, best, arg);
        k += L;
    }
    out.horizon_log = best;
    out.arg = arg;
    out.horizon = k - 1;
    out.log_value = best;
    out.status = (k >= mono_from && lower(k) >= best) ? Status::Exact : Status::HorizonOnly;
    if (out.status == Status::Exact) out.note = "minimum attained; tail grows";
    return out;
}

CertifiedValue shape_liminf(const TailShape& f) {
    if (f.terms.empty()) throw std::domain_error("empty tail shape");
    CertifiedValue out;
    out.status = Status::Exact;
    const int a = sgn(f.linear_coef());
    const int b = sgn(f.log_coef());
    if (a != 0 || b != 0) {
        out.log_value = out.horizon_log = (a < 0 || (a == 0 && b < 0)) ? -kInf : kInf;
        return out;
    }
    Index L = 1;
    double c = 0.0;
    for (const auto& t : f.terms) {
        L = std::lcm(L, t.model->period_length());
        if (L > kMaxJointPeriod) {
            out.status = Status::HorizonOnly;
            out.note = "joint period too long";
            return out;
        }
        c += t.coef * (t.model->slope * static_cast<double>(t.shift) + t.model->offset);
    }
    const Index regime = f.regime_start();
    double pf_min = kInf;
    for (Index k = regime; k < regime + L; ++k) {
        double v = 0.0;
        for (const auto& t : f.terms) v += t.coef * t.model->periodic_part(k + t.shift);
        if (v < pf_min) {
            pf_min = v;
            out.arg = k;
        }
    }
    out.log_value = out.horizon_log = pf_min + c;
    out.horizon = L;
    return out;
}

CertifiedValue shape_tail_sup(const TailShape& f, Index N, Index scan_cap) {
    CertifiedValue v = shape_tail_inf(f.negated(), N, scan_cap);
    v.log_value = -v.log_value;
    v.horizon_log = -v.horizon_log;
    return v;
}

}  // namespace hyshift
