#include "hyshift/criteria.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hyshift/tail.hpp"

namespace hyshift {

namespace {

int sgn(double v) { return v > kStructTol ? 1 : (v < -kStructTol ? -1 : 0); }

void require_unilateral(const WeightSequence& w, const SpaceModel& s) {
    if (w.is_bilateral() || s.bilateral())
        throw std::domain_error("unilateral weights and space required; use bilateral_verdict for bilateral shifts");
}

void require_rows(int J, int m) {
    if (J < 1 || m < 1) throw std::domain_error("row indices must be positive");
}

// Structured pieces of f_(J,m)(n, .), kept alive while shapes point into them.
struct Structured {
    LogModel W, rowJ, rowM;

    TailShape shape(Index n) const {
        TailShape f;
        f.terms.reserve(static_cast<std::size_t>(n) + 2);
        for (Index v = 1; v <= n; ++v) f.terms.push_back({&W, v, 1.0});
        f.terms.push_back({&rowJ, 0, 1.0});
        f.terms.push_back({&rowM, n, -1.0});
        return f;
    }

    bool has_log_terms() const { return W.log_coef != 0.0 || rowJ.log_coef != 0.0 || rowM.log_coef != 0.0; }

    // A(n) = n a1 + a0 and B(n) = n b1 + b0 are the k and log k coefficients.
    double a1() const { return W.slope; }
    double a0() const { return rowJ.slope - rowM.slope; }
    double b1() const { return W.log_coef; }
    double b0() const { return rowJ.log_coef - rowM.log_coef; }

    // A(n) = B(n) = 0 for every n: f(n, .) is periodic up to o(1).
    bool flat_all_n() const { return sgn(a1()) == 0 && sgn(a0()) == 0 && sgn(b1()) == 0 && sgn(b0()) == 0; }

    Index joint_period() const {
        return std::lcm(W.period_length(), std::lcm(rowJ.period_length(), rowM.period_length()));
    }
};

std::optional<Structured> structured(const WeightSequence& w, const SpaceModel& s, int J, int m) {
    if (!w.model()) return std::nullopt;
    auto rj = s.row(J);
    auto rm = s.row(m);
    if (!rj || !rm) return std::nullopt;
    return Structured{*w.model(), *rj, *rm};
}

bool decays(double A, double B) { return sgn(A) < 0 || (sgn(A) == 0 && sgn(B) < 0); }

// f(n, .) decays to -inf for every n >= 1.
bool decay_all_n(const Structured& st) {
    const double a1 = st.a1(), a0 = st.a0(), b1 = st.b1(), b0 = st.b0();
    const bool asymptotic =
        sgn(a1) < 0 || (sgn(a1) == 0 && (sgn(a0) < 0 || (sgn(a0) == 0 && (sgn(b1) < 0 || (sgn(b1) == 0 && sgn(b0) < 0)))));
    if (!asymptotic) return false;
    double lim = 2.0;
    if (sgn(a1) != 0) lim = std::max(lim, std::fabs(a0 / a1) + 2.0);
    if (sgn(b1) != 0) lim = std::max(lim, std::fabs(b0 / b1) + 2.0);
    const Index n_lim = static_cast<Index>(std::min(lim, 1e6));
    for (Index n = 1; n <= n_lim; ++n) {
        const double nd = static_cast<double>(n);
        if (!decays(nd * a1 + a0, nd * b1 + b0)) return false;
    }
    return true;
}

// Blocks and dips generators carry no LogModel; on spaces whose rows do not
// depend on k their windows are still decided exactly.
bool named_on_flat_rows(const WeightSequence& w, const SpaceModel& s) {
    return (w.family() == WeightFamily::Blocks || w.family() == WeightFamily::Dips) && s.rows_constant_in_k();
}

double row_gap(const SpaceModel& s, int J, int m) { return s.log_a(J, s.index_base()) - s.log_a(m, s.index_base()); }

// inf_k and liminf_k of f(n, .) for named generators on flat rows.
CertifiedValue named_window_bound(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n) {
    CertifiedValue v;
    v.status = Status::Exact;
    if (w.family() == WeightFamily::Dips) {
        v.log_value = -kInf;
        v.note = "windows through 2^i carry 2^-i";
    } else {
        const double g = std::min(std::log(w.params()[0]), std::log(w.params()[1]));
        v.log_value = static_cast<double>(n) * g + row_gap(s, J, m);
        v.note = "window inside a long block";
    }
    return v;
}

struct Scan {
    double best = kInf;
    Index arg = 0;
};

Scan scan_criterion(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index from, Index to) {
    Scan out;
    if (from > to) return out;
    double win = window_log(w, n, from);
    for (Index k = from; k <= to; ++k) {
        if ((k - from) % 256 == 0)
            win = window_log(w, n, k);  // bounds rounding drift
        else
            win += w.log_at(k + n) - w.log_at(k);
        const double v = win + s.log_a(J, k) - s.log_a(m, n + k);
        if (v < out.best) {
            out.best = v;
            out.arg = k;
        }
    }
    return out;
}

}  // namespace

const char* to_string(Hyper h) {
    switch (h) {
        case Hyper::Hypercyclic: return "Hypercyclic";
        case Hyper::NotHypercyclic: return "NotHypercyclic";
        case Hyper::Unknown: return "Unknown";
    }
    return "?";
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::HasSubspace: return "HasSubspace";
        case Outcome::NoSubspace: return "NoSubspace";
        case Outcome::NotHypercyclic: return "NotHypercyclic";
        case Outcome::UnknownAtHorizon: return "UnknownAtHorizon";
        case Outcome::Boundary: return "Boundary";
    }
    return "?";
}

double criterion_log(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index k) {
    require_rows(J, m);
    if (n < 0) throw std::domain_error("window length must be non-negative");
    return window_log(w, n, k) + s.log_a(J, k) - s.log_a(m, n + k);
}

CertifiedValue tail_inf(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index N,
                        Index k_horizon) {
    require_unilateral(w, s);
    require_rows(J, m);
    if (n < 1) throw std::domain_error("window length n must be at least 1");
    N = std::max(N, s.index_base());
    k_horizon = std::max(k_horizon, N);

    const Scan sc = scan_criterion(w, s, J, m, n, N, k_horizon);
    CertifiedValue out;
    out.horizon_log = sc.best;
    out.arg = sc.arg;
    out.horizon = k_horizon;
    out.log_value = sc.best;
    out.status = Status::HorizonOnly;

    if (auto st = structured(w, s, J, m)) {
        const CertifiedValue c = shape_tail_inf(st->shape(n), N);
        if (c.certified()) {
            out.log_value = c.log_value;
            out.status = c.status;
            out.note = c.note;
            if (c.log_value < out.horizon_log) out.arg = c.arg;
        }
    } else if (named_on_flat_rows(w, s)) {
        const CertifiedValue c = named_window_bound(w, s, J, m, n);
        out.log_value = c.log_value;
        out.status = c.status;
        out.note = c.note;
    }
    return out;
}

CertifiedValue tail_liminf(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index k_horizon) {
    require_unilateral(w, s);
    require_rows(J, m);
    if (n < 1) throw std::domain_error("window length n must be at least 1");
    if (auto st = structured(w, s, J, m)) {
        CertifiedValue c = shape_liminf(st->shape(n));
        if (c.certified()) return c;
    } else if (named_on_flat_rows(w, s)) {
        return named_window_bound(w, s, J, m, n);
    }
    const Index from = std::max(s.index_base(), k_horizon / 2);
    const Scan sc = scan_criterion(w, s, J, m, n, from, std::max(from, k_horizon));
    CertifiedValue out;
    out.log_value = out.horizon_log = sc.best;
    out.arg = sc.arg;
    out.horizon = k_horizon;
    out.status = Status::HorizonOnly;
    return out;
}

CertifiedValue window_max_inf(const WeightSequence& w, const SpaceModel& s, int J, int m, Index n, Index N,
                              Index k_horizon) {
    require_unilateral(w, s);
    require_rows(J, m);
    if (n < 1) throw std::domain_error("window length n must be at least 1");
    N = std::max(N, s.index_base());
    k_horizon = std::max(k_horizon, N);

    auto g = [&](Index k) {
        double best = -kInf, win = 0.0;
        for (Index i = 1; i <= n; ++i) {
            win += w.log_at(k + i);
            best = std::max(best, win + s.log_a(J, k) - s.log_a(m, i + k));
        }
        return best;
    };
    auto scan = [&](Index from, Index to, Scan& sc) {
        for (Index k = from; k <= to; ++k) {
            const double v = g(k);
            if (v < sc.best) {
                sc.best = v;
                sc.arg = k;
            }
        }
    };

    Scan sc;
    scan(N, k_horizon, sc);
    CertifiedValue out;
    out.log_value = out.horizon_log = sc.best;
    out.arg = sc.arg;
    out.horizon = k_horizon;
    out.status = Status::HorizonOnly;

    auto st = structured(w, s, J, m);
    if (!st) return out;
    std::vector<TailShape> shapes;
    std::vector<CertifiedValue> lim;
    for (Index i = 1; i <= n; ++i) {
        shapes.push_back(st->shape(i));
        lim.push_back(shape_liminf(shapes.back()));
        if (!lim.back().certified()) return out;
    }
    const bool all_decay = std::all_of(lim.begin(), lim.end(), [](const CertifiedValue& c) { return c.log_value == -kInf; });
    if (all_decay) {
        out.log_value = -kInf;
        out.status = Status::Exact;
        out.note = "every window length decays";
        return out;
    }
    const auto grow = std::find_if(lim.begin(), lim.end(), [](const CertifiedValue& c) { return c.log_value == kInf; });
    if (grow != lim.end()) {
        // g >= f(i, .) -> +inf: the inf of g is attained once the tail of f(i, .) clears it.
        const TailShape& fi = shapes[static_cast<std::size_t>(grow - lim.begin())];
        Index K = std::max(k_horizon, fi.regime_start()) + 1;
        scan(k_horizon + 1, K - 1, sc);
        for (int round = 0; round < 24; ++round) {
            const CertifiedValue t = shape_tail_inf(fi, K);
            if (t.certified() && t.log_value >= sc.best) {
                out.log_value = sc.best;
                out.arg = sc.arg;
                out.status = Status::Exact;
                out.note = "inf attained before a growing window length dominates";
                return out;
            }
            scan(K, 2 * K - 1, sc);
            K *= 2;
        }
        return out;
    }
    const bool all_flat = std::all_of(lim.begin(), lim.end(), [](const CertifiedValue& c) { return std::isfinite(c.log_value); });
    if (all_flat && !st->has_log_terms()) {
        // every window length is periodic past the regime
        Index regime = N;
        for (const auto& f : shapes) regime = std::max(regime, f.regime_start());
        const Index L = st->joint_period();
        Scan exact;
        scan(N, regime + L, exact);
        out.log_value = exact.best;
        out.arg = exact.arg;
        out.status = Status::Exact;
        out.note = "exact over one joint period";
    }
    return out;
}

namespace {

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HYSHIFT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min(hw, static_cast<unsigned>(v));
    }
    return hw;
}

// Runs body(i) for i in [0, count); each index writes only its own slot.
template <class Body>
void parallel_for(int count, Body body) {
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(count, 1)));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

constexpr double kPositive = 1e-12;
constexpr Index kMaxTailStart = Index{1} << 22;

// liminf_k f(n, .) for n = 1..L + 1 on a flat structure; empty when undecided.
std::vector<double> flat_liminfs(const Structured& st, Index count) {
    std::vector<double> out;
    for (Index n = 1; n <= count; ++n) {
        const CertifiedValue c = shape_liminf(st.shape(n));
        if (!c.certified()) return {};
        out.push_back(c.log_value);
    }
    return out;
}

// Window lengths worth trying for a block certificate.
std::vector<Index> block_candidates(const Structured& stJJ, int n_max) {
    std::vector<Index> out;
    for (Index n = 1; n <= n_max; ++n) out.push_back(n);
    const Index L = stJJ.joint_period();
    if (L > 4096) return out;
    const auto lim = flat_liminfs(stJJ, L + 1);
    if (lim.empty()) return out;
    const double D = lim[static_cast<std::size_t>(L)] - lim[0];
    for (Index r = 1; r <= L; ++r) {
        const double v = lim[static_cast<std::size_t>(r - 1)];
        if (v > kPositive) {
            out.push_back(r);
        } else if (sgn(D) > 0) {
            const double q = std::floor((kPositive - v) / D) + 1.0;
            if (q < 1e5) out.push_back(r + static_cast<Index>(q) * L);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<BlockCertificate> find_block(const WeightSequence& w, const SpaceModel& s, int J, int m, int n_max) {
    if (named_on_flat_rows(w, s)) {
        if (w.family() != WeightFamily::Blocks) return std::nullopt;
        const double g = std::min(std::log(w.params()[0]), std::log(w.params()[1]));
        if (g <= kPositive) return std::nullopt;
        BlockCertificate b;
        b.log_C = g;
        b.m = 1;
        b.N = s.index_base();
        b.J = J;
        b.j = m;
        b.bridges = {row_gap(s, J, m)};
        return b;
    }
    auto stJJ = structured(w, s, J, J);
    auto stJm = structured(w, s, J, m);
    if (!stJJ || !stJm) return std::nullopt;
    for (Index n0 : block_candidates(*stJJ, n_max)) {
        const TailShape block = stJJ->shape(n0);
        const CertifiedValue lim = shape_liminf(block);
        if (!lim.certified() || !(lim.log_value > kPositive)) continue;
        const Index base = s.index_base();
        std::optional<CertifiedValue> found;
        Index N = base;
        std::vector<Index> tails{base};
        for (Index c = std::max<Index>({base, block.regime_start() + 1, 1}); c <= kMaxTailStart; c *= 2)
            tails.push_back(c);
        for (Index at : tails) {
            const CertifiedValue c = shape_tail_inf(block, at);
            if (c.certified() && c.log_value > kPositive) {
                found = c;
                N = at;
                break;
            }
        }
        if (!found) continue;
        BlockCertificate cert;
        cert.log_C = found->log_value;
        cert.m = n0;
        cert.N = N;
        cert.J = J;
        cert.j = m;
        bool ok = true;
        for (Index b = 0; b < n0 && ok; ++b) {
            const CertifiedValue c = shape_tail_inf(stJm->shape(b), N);
            ok = c.certified() && std::isfinite(c.log_value);
            if (ok) cert.bridges.push_back(c.log_value);
        }
        if (ok) return cert;
    }
    return std::nullopt;
}

// theta = +inf for one m extends to every m.
bool all_m_follow(const WeightSequence& w, const SpaceModel& s) {
    if (s.rows_equal()) return true;
    if (!w.model()) return false;
    const LogModel& W = *w.model();
    if (sgn(W.slope) > 0) return true;
    return sgn(W.slope) == 0 && sgn(W.log_coef) > 0 && s.alpha().constant_in_j();
}

}  // namespace

ThetaResult theta(const WeightSequence& w, const SpaceModel& s, int J, int m, int n_max, Index k_horizon) {
    require_unilateral(w, s);
    require_rows(J, m);
    if (n_max < 1) throw std::domain_error("n_max must be positive");
    ThetaResult res;
    res.J = J;
    res.m = m;
    const Index base = s.index_base();
    for (Index n = 1; n <= n_max; ++n) res.per_n.push_back(tail_inf(w, s, J, m, n, base, k_horizon));

    CertifiedValue& th = res.theta;
    th.horizon = k_horizon;
    th.horizon_log = -kInf;
    for (std::size_t i = 0; i < res.per_n.size(); ++i) {
        if (res.per_n[i].horizon_log > th.horizon_log) {
            th.horizon_log = res.per_n[i].horizon_log;
            th.arg = static_cast<Index>(i + 1);
        }
    }
    th.log_value = th.horizon_log;
    th.status = Status::HorizonOnly;

    auto st = structured(w, s, J, m);
    if ((st && decay_all_n(*st)) || (named_on_flat_rows(w, s) && w.family() == WeightFamily::Dips)) {
        th.log_value = -kInf;
        th.status = Status::Exact;
        th.note = "every window length decays";
        return res;
    }
    if (auto b = find_block(w, s, J, m, n_max)) {
        res.block = b;
        th.log_value = kInf;
        th.status = Status::Exact;
        th.note = "pumped block certificate";
        return res;
    }
    if (named_on_flat_rows(w, s)) {
        // blocks with min(log hi, log lo) <= 0: the sup over n sits at n = 1
        const CertifiedValue v = named_window_bound(w, s, J, m, 1);
        th.log_value = v.log_value;
        th.status = Status::Exact;
        th.arg = 1;
        th.note = "sup attained at n = 1";
        return res;
    }
    if (st && st->flat_all_n()) {
        const Index L = st->joint_period();
        if (L > 4096) return res;
        const auto lim = flat_liminfs(*st, L + 1);
        if (lim.empty()) return res;
        const double D = lim[static_cast<std::size_t>(L)] - lim[0];
        if (sgn(D) > 0) return res;
        if (!st->has_log_terms()) {
            // inf_k f(n + L, .) = inf_k f(n, .) + D once n clears every prefix
            const Index n1 = std::max<Index>(
                1, std::max({st->W.tail_start(), st->rowJ.tail_start(), st->rowM.tail_start()}) - base + 1);
            double best = -kInf;
            Index arg = 1;
            for (Index n = 1; n <= n1 + L; ++n) {
                const CertifiedValue v = n <= n_max ? res.per_n[static_cast<std::size_t>(n - 1)]
                                                    : tail_inf(w, s, J, m, n, base, k_horizon);
                if (v.status != Status::Exact) return res;
                if (v.log_value > best) {
                    best = v.log_value;
                    arg = n;
                }
            }
            th.log_value = best;
            th.arg = arg;
            th.status = Status::Exact;
            th.note = "drift per joint period is non-positive";
        } else {
            th.log_value = *std::max_element(lim.begin(), lim.begin() + L);
            th.status = Status::UpperBounded;
            th.note = "bounded by the largest liminf over one joint period";
        }
    }
    return res;
}

bool GrowthCertificate::sound(double tol) const {
    for (std::size_t i = 0; i < log_Cn.size() && i < tail_min.size(); ++i)
        if (tail_min[i] < log_Cn[i] - tol) return false;
    return true;
}

GrowthCertificate blockcert_to_growthcert(const BlockCertificate& cert, const WeightSequence& w, const SpaceModel& s,
                                          int count, Index k_check) {
    require_unilateral(w, s);
    if (!(cert.log_C > 0.0) || !std::isfinite(cert.log_C))
        throw std::domain_error("invalid certificate: C must be a finite constant greater than 1");
    if (cert.m < 1 || cert.N < s.index_base()) throw std::domain_error("invalid certificate: bad window or tail index");
    const int J = cert.J;
    for (Index k = cert.N; k <= cert.N + k_check; ++k) {
        if (criterion_log(w, s, J, J, cert.m, k) < cert.log_C - 1e-9)
            throw std::domain_error("invalid certificate: block inequality fails at k=" + std::to_string(k));
    }
    GrowthCertificate g;
    g.log_C = cert.log_C;
    g.m = cert.m;
    g.N = cert.N;
    g.J = J;
    double log_K = 0.0;
    auto stJJ = structured(w, s, J, J);
    for (Index r = 1; r < cert.m; ++r) {
        double sup = -kInf;
        bool exact = false;
        if (stJJ) {
            const CertifiedValue c = shape_tail_sup(stJJ->shape(r), cert.N);
            if (c.certified()) {
                sup = c.log_value;
                exact = true;
            }
        } else if (named_on_flat_rows(w, s) && w.family() == WeightFamily::Blocks) {
            sup = static_cast<double>(r) * std::max(std::log(w.params()[0]), std::log(w.params()[1]));
            exact = true;
        }
        if (!exact) {
            for (Index k = cert.N; k <= cert.N + k_check; ++k) sup = std::max(sup, criterion_log(w, s, J, J, r, k));
            g.K_certified = false;
        }
        if (sup == kInf) throw std::domain_error("invalid certificate: short windows are unbounded on the tail");
        log_K = std::max(log_K, sup);
    }
    g.log_K = log_K;
    for (Index n = 1; n <= count; ++n) {
        g.log_Cn.push_back(g.log_C_at(n));
        const Index E = g.E_at(n);
        const CertifiedValue t = tail_inf(w, s, J, J, n, E, E + k_check);
        g.tail_min.push_back(t.certified() ? t.log_value : t.horizon_log);
        g.tail_status.push_back(t.status);
    }
    return g;
}

HyperResult hypercyclicity_test(const WeightSequence& w, const SpaceModel& s, int j_max, Index horizon) {
    if (w.is_bilateral() || s.bilateral())
        throw std::domain_error("bilateral shift: use bilateral_verdict for the hypercyclicity test");
    if (j_max < 1 || horizon < 1) throw std::domain_error("j_max and horizon must be positive");
    HyperResult out;
    bool all_plus = true, any_minus = false;
    for (int j = 1; j <= j_max; ++j) {
        SumTrend t = SumTrend::Unknown;
        if (auto row = s.row(j)) {
            t = partial_sum_trend(w, &*row);
        } else if (s.rows_constant_in_k()) {
            t = partial_sum_trend(w);
        }
        out.trends.push_back(t);
        if (t != SumTrend::PlusInfinity && t != SumTrend::Oscillating) all_plus = false;
        if (t == SumTrend::MinusInfinity || t == SumTrend::Bounded) any_minus = true;
    }
    if (any_minus) {
        out.result = Hyper::NotHypercyclic;
        out.certified = true;
        out.note = "partial sums stay bounded above against some row";
    } else if (all_plus) {
        out.result = Hyper::Hypercyclic;
        out.certified = true;
        out.note = "partial sums outgrow every row";
    } else {
        // finite evidence only
        double worst = kInf;
        for (int j = 1; j <= j_max; ++j) {
            double sum = 0.0, best = -kInf;
            for (Index n = 1; n <= horizon; ++n) {
                sum += w.log_at(n);
                best = std::max(best, sum - s.log_a(j, n));
            }
            worst = std::min(worst, best);
        }
        out.result = Hyper::Unknown;
        out.note = "trend undecided; smallest max over rows of partial sum minus row at horizon: " + std::to_string(worst);
    }
    return out;
}

Verdict bilateral_verdict(const WeightSequence& w, const SpaceModel& s, Index horizon) {
    if (!w.is_bilateral()) throw std::domain_error("bilateral_verdict needs bilateral weights");
    if (!s.bilateral()) throw std::domain_error("bilateral_verdict needs a bilateral (bi-) space");
    if (horizon < 1) throw std::domain_error("horizon must be positive");
    Verdict v;
    // Conjugating by the row weights turns the space into l^p(Z) or c0(Z).
    auto u = [&](Index k) { return w.log_at(k) + s.log_a(1, k - 1) - s.log_a(1, k); };
    const double tau = std::log(1e6);

    bool all_hit = true;
    for (Index j = -2; j <= 2; ++j) {
        BilateralEvidence e;
        e.j = j;
        double back = 0.0, fwd = 0.0;
        e.min_backward = kInf;
        e.max_forward = -kInf;
        for (Index n = 1; n <= horizon; ++n) {
            back += u(j - n + 1);
            fwd += u(j + n);
            e.min_backward = std::min(e.min_backward, back);
            e.max_forward = std::max(e.max_forward, fwd);
            if (e.hit_n == 0 && back <= -tau && fwd >= tau) e.hit_n = n;
        }
        if (e.hit_n == 0) all_hit = false;
        v.bilateral.push_back(e);
    }

    if (s.kind() == SpaceKind::Lp || s.kind() == SpaceKind::C0) {
        const SumTrend pos = partial_sum_trend(w.positive_side());
        const SumTrend neg = partial_sum_trend(w.nonpositive_side());
        if (pos == SumTrend::PlusInfinity && neg == SumTrend::MinusInfinity) {
            v.outcome = Outcome::HasSubspace;
            v.certified = true;
            v.notes.push_back("forward products tend to +inf and backward products to 0");
            return v;
        }
        if (pos == SumTrend::MinusInfinity || pos == SumTrend::Bounded || neg == SumTrend::PlusInfinity ||
            neg == SumTrend::Bounded) {
            v.outcome = Outcome::NotHypercyclic;
            v.certified = true;
            v.notes.push_back(neg == SumTrend::PlusInfinity || neg == SumTrend::Bounded
                                  ? "backward products never tend to 0"
                                  : "forward products stay bounded");
            return v;
        }
    }
    if (all_hit) {
        v.outcome = Outcome::HasSubspace;
        v.notes.push_back("hypercyclicity witnessed for j in [-2, 2] within the horizon");
    } else {
        v.outcome = Outcome::UnknownAtHorizon;
        v.notes.push_back("no common time with small backward and large forward products within the horizon");
    }
    return v;
}

Verdict subspace_verdict(const WeightSequence& w, const SpaceModel& s, const Horizons& h, int J) {
    if (w.is_bilateral() || s.bilateral()) return bilateral_verdict(w, s, std::max<Index>(h.k_horizon, 1000));
    if (h.n_max < 1 || h.k_horizon < 1 || h.m_max < 1 || h.j_max < 1)
        throw std::domain_error("horizons must be positive");
    Verdict v;
    v.J = J;
    if (!s.rows_equal()) {
        v.condition_B = check_condition_B(s, J, {h.j_max, h.m_max, h.n_max, h.k_horizon});
        if (v.condition_B->holds != Tri::Holds) {
            v.outcome = Outcome::UnknownAtHorizon;
            v.notes.push_back("condition (B) unverified");
            return v;
        }
    }
    v.hyper = hypercyclicity_test(w, s, h.j_max, h.k_horizon);

    std::vector<int> ms;
    if (s.rows_equal())
        ms.push_back(J);
    else
        for (int m = 1; m <= h.m_max; ++m) ms.push_back(m);
    v.thetas.resize(ms.size());
    parallel_for(static_cast<int>(ms.size()), [&](int i) {
        v.thetas[static_cast<std::size_t>(i)] = theta(w, s, J, ms[static_cast<std::size_t>(i)], h.n_max, h.k_horizon);
    });

    if (v.hyper->result == Hyper::NotHypercyclic) {
        v.outcome = Outcome::NotHypercyclic;
        v.certified = true;
        v.notes.push_back(v.hyper->note);
        return v;
    }
    for (const auto& t : v.thetas) {
        if (t.theta.certified() && t.theta.log_value <= kStructTol &&
            (t.theta.status == Status::Exact || t.theta.status == Status::UpperBounded)) {
            if (v.hyper->result == Hyper::Hypercyclic) {
                v.outcome = Outcome::HasSubspace;
                v.m = t.m;
                v.certified = true;
            } else {
                v.outcome = Outcome::UnknownAtHorizon;
                v.m = t.m;
                v.notes.push_back("theta <= 1 certified but hypercyclicity is not");
            }
            return v;
        }
    }
    const bool all_inf = std::all_of(v.thetas.begin(), v.thetas.end(), [](const ThetaResult& t) {
        return t.theta.certified() && t.theta.log_value == kInf && t.block;
    });
    if (all_inf && all_m_follow(w, s)) {
        v.outcome = Outcome::NoSubspace;
        v.certified = true;
        v.block = v.thetas.front().block;
        v.growth = blockcert_to_growthcert(*v.block, w, s, 64, std::min<Index>(4096, std::max<Index>(h.k_horizon, 64)));
        v.notes.push_back("pumped block certificate gives theta = +inf for every m");
        return v;
    }
    for (const auto& t : v.thetas) {
        if (!t.theta.certified() && std::fabs(t.theta.log_value) <= 1e-9) {
            v.outcome = Outcome::Boundary;
            v.m = t.m;
            v.notes.push_back("theta within 1e-9 of 1 without structural certification");
            return v;
        }
    }
    v.outcome = Outcome::UnknownAtHorizon;
    v.notes.push_back("no certified theta <= 1 for m <= m_max and no pumped certificate");
    return v;
}

namespace {

// sup_n liminf_k f_(J,m)(n, k) > 0, decided over all n when the structure allows.
Tri lhs_for(const WeightSequence& w, const SpaceModel& s, int J, int m, int n_max) {
    if (named_on_flat_rows(w, s)) {
        if (w.family() == WeightFamily::Dips) return Tri::FailsAtWitness;
        const double g = std::min(std::log(w.params()[0]), std::log(w.params()[1]));
        const double gap = row_gap(s, J, m);
        if (g > kPositive) return Tri::Holds;
        return g + gap > kPositive ? Tri::Holds : Tri::FailsAtWitness;
    }
    auto st = structured(w, s, J, m);
    if (!st) return Tri::UnknownAtHorizon;
    bool decided = true;
    for (Index n = 1; n <= n_max; ++n) {
        const CertifiedValue c = shape_liminf(st->shape(n));
        if (!c.certified()) {
            decided = false;
            continue;
        }
        if (c.log_value > kPositive) return Tri::Holds;
    }
    if (decay_all_n(*st)) return Tri::FailsAtWitness;
    if (decided && st->flat_all_n()) {
        const Index L = st->joint_period();
        if (L > 4096) return Tri::UnknownAtHorizon;
        const auto lim = flat_liminfs(*st, L + 1);
        if (lim.empty()) return Tri::UnknownAtHorizon;
        const double D = lim[static_cast<std::size_t>(L)] - lim[0];
        if (sgn(D) > 0) return Tri::Holds;
        for (Index r = 0; r < L; ++r)
            if (lim[static_cast<std::size_t>(r)] > kPositive) return Tri::Holds;
        return Tri::FailsAtWitness;
    }
    return Tri::UnknownAtHorizon;
}

Tri rhs_for(const WeightSequence& w, const SpaceModel& s, int J, int m, int n_max, Index k_horizon) {
    const ThetaResult t = theta(w, s, J, m, n_max, k_horizon);
    if (!t.theta.certified()) return Tri::UnknownAtHorizon;
    if (t.theta.log_value == kInf) return Tri::Holds;
    return Tri::FailsAtWitness;
}

Tri for_all(const std::vector<Tri>& v, bool covers_all) {
    if (std::any_of(v.begin(), v.end(), [](Tri t) { return t == Tri::FailsAtWitness; })) return Tri::FailsAtWitness;
    if (covers_all && std::all_of(v.begin(), v.end(), [](Tri t) { return t == Tri::Holds; })) return Tri::Holds;
    return Tri::UnknownAtHorizon;
}

}  // namespace

CondNReport condN_check(const WeightSequence& w, const SpaceModel& s, int J, int m_max, int n_max, Index k_horizon) {
    require_unilateral(w, s);
    require_rows(J, 1);
    if (m_max < 1 || n_max < 1) throw std::domain_error("m_max and n_max must be positive");
    std::vector<int> ms;
    if (s.rows_equal())
        ms.push_back(J);
    else
        for (int m = 1; m <= m_max; ++m) ms.push_back(m);
    std::vector<Tri> lhs(ms.size()), rhs(ms.size());
    parallel_for(static_cast<int>(ms.size()), [&](int i) {
        const auto u = static_cast<std::size_t>(i);
        lhs[u] = lhs_for(w, s, J, ms[u], n_max);
        rhs[u] = rhs_for(w, s, J, ms[u], n_max, k_horizon);
    });
    CondNReport out;
    const bool covers = all_m_follow(w, s);
    out.lhs = for_all(lhs, covers);
    out.rhs = for_all(rhs, covers);
    out.agree = out.lhs == Tri::UnknownAtHorizon || out.rhs == Tri::UnknownAtHorizon || out.lhs == out.rhs;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (lhs[i] != Tri::UnknownAtHorizon && rhs[i] != Tri::UnknownAtHorizon && lhs[i] != rhs[i]) {
            out.note += "m=" + std::to_string(ms[i]) + ": sides differ; ";
        }
    }
    return out;
}

PolyCheck poly_hypothesis_check(const WeightSequence& w, const SpaceModel& s, const std::vector<double>& P,
                                const Horizons& h, int J) {
    require_unilateral(w, s);
    std::vector<double> coeffs = P;
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.size() < 2) throw std::domain_error("P must be a non-constant polynomial");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw std::domain_error("polynomial coefficients must be finite");

    PolyCheck out;
    Verdict& v = out.verdict;
    v.J = J;
    if (s.rows_equal()) {
        out.condition_B = Tri::Holds;
    } else {
        v.condition_B = check_condition_B(s, J, {h.j_max, h.m_max, h.n_max, h.k_horizon});
        out.condition_B = v.condition_B->holds;
    }

    std::vector<int> ms;
    if (s.rows_equal())
        ms.push_back(J);
    else
        for (int m = 1; m <= h.m_max; ++m) ms.push_back(m);
    for (int m : ms) {
        auto st = structured(w, s, J, m);
        const bool all_n = (st && decay_all_n(*st)) || (named_on_flat_rows(w, s) && w.family() == WeightFamily::Dips);
        if (!all_n) continue;
        out.zero_inf = true;
        out.zero_inf_m = m;
        for (Index n = 1; n <= h.n_max; ++n)
            out.zero_inf_values.push_back(tail_inf(w, s, J, m, n, s.index_base(), h.k_horizon));
        break;
    }

    out.small_constant = std::fabs(coeffs[0]) <= 1.0;
    for (int m : ms) {
        auto st = structured(w, s, J, m);
        if (!st) continue;
        const TailShape ratio = st->shape(0);
        if (decays(ratio.linear_coef(), ratio.log_coef())) {
            out.row_ratio_to_zero = true;
            out.ratio_m = m;
            break;
        }
    }

    const bool single_norm = (s.kind() == SpaceKind::Lp || s.kind() == SpaceKind::C0);
    const bool one_plus_t = coeffs.size() == 2 && coeffs[0] == 1.0 && coeffs[1] == 1.0;
    out.criterion_premise_established =
        (s.render() == "entire" && w.family() == WeightFamily::Linear) || (single_norm && one_plus_t);

    const bool ok = out.condition_B == Tri::Holds && out.zero_inf && (out.small_constant || out.row_ratio_to_zero);
    if (ok) {
        v.outcome = Outcome::HasSubspace;
        v.m = out.zero_inf_m;
        v.certified = out.criterion_premise_established;
        if (!out.criterion_premise_established)
            v.notes.push_back("assumes P(B_w) satisfies the Hypercyclicity Criterion");
    } else {
        v.outcome = Outcome::UnknownAtHorizon;
        if (out.condition_B != Tri::Holds) v.notes.push_back("condition (B) unverified");
        if (!out.zero_inf) v.notes.push_back("no m certifies a zero infimum for every n");
        if (!out.small_constant && !out.row_ratio_to_zero)
            v.notes.push_back("|c0| > 1 and no m certifies a_(J,k) / a_(m,k) -> 0");
    }
    return out;
}

}  // namespace hyshift
