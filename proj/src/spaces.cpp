#include "hyshift/spaces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hyshift/errors.hpp"

namespace hyshift {

namespace {

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

LogModel zero_model(Index first) {
    LogModel m;
    m.first = first;
    m.anchor = first;
    return m;
}

void check_p(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::domain_error("norm exponent p must lie in [1, inf)");
}

// Interval sign test with the structural tolerance.
int sgn(double v) { return v > kStructTol ? 1 : (v < -kStructTol ? -1 : 0); }

// Pointwise log of the ratio a_(j,k) a_(m,n+k) / (a_(J,k) a_(mj,n+k)).
double log_ratio(const SpaceModel& s, int J, int j, int m, int mj, Index n, Index k) {
    return s.log_a(j, k) + s.log_a(m, n + k) - s.log_a(J, k) - s.log_a(mj, n + k);
}

double grid_max(const SpaceModel& s, int J, int j, int m, int mj, int n_max, Index k_horizon) {
    double best = -kInf;
    for (Index n = 0; n <= n_max; ++n)
        for (Index k = std::max<Index>(s.index_base(), n + 1); k <= k_horizon; ++k)
            best = std::max(best, log_ratio(s, J, j, m, mj, n, k));
    return best;
}

// Outcome of the exponent comparison for one candidate m_j.
bool admissible(const SpaceModel& s, int J, int j, int m, int mj, bool strict) {
    const double A = s.alpha().at(j) + s.alpha().at(m) - s.alpha().at(J) - s.alpha().at(mj);
    const double B = s.beta().at(j) + s.beta().at(m) - s.beta().at(J) - s.beta().at(mj);
    if (sgn(A) < 0) return true;
    if (sgn(A) > 0) return false;
    if (sgn(B) < 0) return true;
    if (sgn(B) > 0) return false;
    // Ratio tends to exp((alpha_m - alpha_mj) n + const): bounded in n, never 0.
    return !strict && s.alpha().at(m) <= s.alpha().at(mj) + kStructTol;
}

// `value - coef(mj)` stays strictly positive for every mj >= 1 (non-negative
// when `or_zero`).
bool always_positive(double value, const RowCoef& coef, bool or_zero = false) {
    if (!coef.bounded_in_j()) return false;
    bool attained = false;
    const double gap = value - coef.sup_over_j(&attained);
    return sgn(gap) > 0 || (sgn(gap) == 0 && (!attained || or_zero));
}

// No m_j >= 1 at all can make the pair (j, m) admissible. In the strict form
// a ratio tending to a positive constant already disqualifies.
bool certainly_inadmissible(const SpaceModel& s, int J, int j, int m, bool strict) {
    const double ca = s.alpha().at(j) + s.alpha().at(m) - s.alpha().at(J);
    const double cb = s.beta().at(j) + s.beta().at(m) - s.beta().at(J);
    if (always_positive(ca, s.alpha())) return true;
    if (s.alpha().constant_in_j() && sgn(ca - s.alpha().c0) == 0) return always_positive(cb, s.beta(), strict);
    return false;
}

ConditionReport ratio_condition(const SpaceModel& s, int J, const ConditionHorizons& h, bool strict) {
    if (J < 1 || h.j_max < 1 || h.m_max < 1 || h.n_max < 0 || h.k_horizon < 1)
        throw std::domain_error("condition parameters must be positive");
    ConditionReport rep;
    rep.J = J;
    bool all_found = true, any_failed = false;
    for (int m = 1; m <= h.m_max; ++m) {
        for (int j = 1; j <= h.j_max; ++j) {
            ConditionWitness w;
            w.j = j;
            w.m = m;
            if (s.bilateral()) {
                // equal rows: the ratio is identically 1
                w.m_j = j;
                w.certified = !strict;
            } else {
                const int canon = s.canonical_witness(j, m);
                if (canon > 0 && admissible(s, J, j, m, canon, strict)) {
                    w.m_j = canon;
                } else {
                    for (int c = 1; c <= h.m_max; ++c)
                        if (admissible(s, J, j, m, c, strict)) {
                            w.m_j = c;
                            break;
                        }
                }
                w.certified = w.m_j > 0;
            }
            if (!w.certified) {
                all_found = false;
                if (s.bilateral() || certainly_inadmissible(s, J, j, m, strict)) any_failed = true;
            }
            if (!s.bilateral())
                w.grid_max_log = grid_max(s, J, j, m, w.m_j > 0 ? w.m_j : h.m_max, h.n_max, h.k_horizon);
            rep.witnesses.push_back(w);
        }
    }
    if (any_failed) {
        rep.holds = Tri::FailsAtWitness;
        rep.note = strict ? "some (j, m) has no m_j with ratio tending to 0"
                          : "some (j, m) has no m_j with bounded ratio";
    } else if (all_found && (s.witness_rule() != WitnessRule::None || s.rows_equal())) {
        rep.holds = Tri::Holds;
    } else {
        rep.holds = Tri::UnknownAtHorizon;
        rep.note = all_found ? "exponent comparison passes on the (j, m) grid only"
                             : "no admissible m_j within m_max";
    }
    return rep;
}

// Row j is non-decreasing in k: 1 proven, -1 refuted on the sample, 0 unknown.
int row_monotone(const SpaceModel& s, int j, Index k_horizon) {
    for (Index k = s.index_base(); k < k_horizon; ++k)
        if (s.log_a(j, k + 1) < s.log_a(j, k) - 1e-12) return -1;
    auto row = s.row(j);
    if (!row) return 0;
    if (row->period_length() == 1 && row->slope >= 0.0 && row->log_coef >= 0.0 &&
        row->tail_start() + 1 <= k_horizon)
        return 1;
    return 0;
}

}  // namespace

double RowCoef::at(int j) const {
    double v = c0;
    if (c1 != 0.0) v += c1 * j;
    if (c2 != 0.0) v += c2 * std::log(static_cast<double>(j));
    if (c3 != 0.0) v += c3 / j;
    return v;
}

double RowCoef::sup_over_j(bool* attained) const {
    if (c3 > 0.0) {
        if (attained) *attained = true;
        return c0 + c3;
    }
    if (attained) *attained = c3 == 0.0;
    return c0;
}

SpaceModel SpaceModel::lp(double p, bool bilateral) {
    check_p(p);
    SpaceModel s;
    s.kind_ = SpaceKind::Lp;
    s.p_ = p;
    s.bilateral_ = bilateral;
    s.base_ = zero_model(1);
    s.spec_ = std::string(bilateral ? "bi-" : "") + "lp:" + fmt(p);
    if (bilateral) s.base_.reset();
    return s;
}

SpaceModel SpaceModel::c0(bool bilateral) {
    SpaceModel s;
    s.kind_ = SpaceKind::C0;
    s.c0_norm_ = true;
    s.bilateral_ = bilateral;
    s.base_ = zero_model(1);
    s.spec_ = bilateral ? "bi-c0" : "c0";
    if (bilateral) s.base_.reset();
    return s;
}

SpaceModel SpaceModel::lpv(double p, WeightSequence v) {
    check_p(p);
    SpaceModel s;
    s.kind_ = SpaceKind::LpV;
    s.p_ = p;
    s.bilateral_ = v.is_bilateral();
    if (v.model()) s.base_ = v.model()->scaled(1.0 / p);
    s.spec_ = std::string(s.bilateral_ ? "bi-" : "") + "lpv:" + fmt(p) + ":" + v.render();
    s.v_ = std::move(v);
    return s;
}

SpaceModel SpaceModel::c0v(WeightSequence v) {
    SpaceModel s;
    s.kind_ = SpaceKind::C0V;
    s.c0_norm_ = true;
    s.bilateral_ = v.is_bilateral();
    if (v.model()) s.base_ = *v.model();
    s.spec_ = std::string(s.bilateral_ ? "bi-" : "") + "c0v:" + v.render();
    s.v_ = std::move(v);
    return s;
}

SpaceModel SpaceModel::entire() {
    SpaceModel s;
    s.kind_ = SpaceKind::KotheLp;
    s.index_base_ = 0;
    s.base_ = zero_model(0);
    s.alpha_.c2 = 1.0;  // a_(j,k) = j^k
    s.rule_ = WitnessRule::TwiceProduct;
    s.spec_ = "entire";
    return s;
}

SpaceModel SpaceModel::rapid() {
    SpaceModel s;
    s.kind_ = SpaceKind::KotheLp;
    s.index_base_ = 1;
    s.base_ = zero_model(1);
    s.beta_.c1 = 1.0;  // a_(j,k) = k^j
    s.rule_ = WitnessRule::SumRows;
    s.spec_ = "rapid";
    return s;
}

SpaceModel SpaceModel::kothe(double p, bool c0_norm, Index base, RowCoef alpha, RowCoef beta, RowCoef gamma,
                             std::string path) {
    if (!c0_norm) check_p(p);
    if (base != 0 && base != 1) throw std::domain_error("Köthe index base must be 0 or 1");
    if (base == 0 && (beta.c0 != 0.0 || beta.c1 != 0.0 || beta.c2 != 0.0 || beta.c3 != 0.0))
        throw std::domain_error("log(k) row terms need index base 1");
    SpaceModel s;
    s.kind_ = c0_norm ? SpaceKind::KotheC0 : SpaceKind::KotheLp;
    s.c0_norm_ = c0_norm;
    s.p_ = c0_norm ? 1.0 : p;
    s.index_base_ = base;
    s.base_ = zero_model(base);
    s.alpha_ = alpha;
    s.beta_ = beta;
    s.gamma_ = gamma;
    s.rule_ = s.rows_equal() ? WitnessRule::SameRow : WitnessRule::None;
    s.spec_ = "kothe:" + path;
    // a_(j,k) <= a_(j+1,k) on a sample grid
    for (int j = 1; j < 16; ++j)
        for (Index k = base; k <= 256; ++k)
            if (s.log_a(j + 1, k) < s.log_a(j, k) - 1e-9)
                throw std::domain_error("Köthe rows must be non-decreasing in j (fails at j=" + std::to_string(j) +
                                        ", k=" + std::to_string(k) + ")");
    return s;
}

double SpaceModel::log_a(int j, Index k) const {
    if (j < 1) throw std::domain_error("row index j must be positive");
    if (!valid_index(k)) throw std::domain_error("index " + std::to_string(k) + " out of range for " + spec_);
    double v = 0.0;
    if (v_) {
        v = v_->log_at(k);
        if (!c0_norm_) v /= p_;
    }
    const double a = alpha_.at(j), b = beta_.at(j), g = gamma_.at(j);
    if (a != 0.0) v += a * static_cast<double>(k);
    if (b != 0.0) v += b * std::log(static_cast<double>(k));
    return v + g;
}

std::optional<LogModel> SpaceModel::row(int j) const {
    if (j < 1) throw std::domain_error("row index j must be positive");
    if (bilateral_ || !base_) return std::nullopt;
    LogModel r = *base_;
    const double a = alpha_.at(j), b = beta_.at(j), g = gamma_.at(j);
    for (std::size_t i = 0; i < r.prefix.size(); ++i) {
        const double k = static_cast<double>(r.first + static_cast<Index>(i));
        r.prefix[i] += a * k + (b != 0.0 ? b * std::log(k) : 0.0) + g;
    }
    r.slope += a;
    r.log_coef += b;
    r.offset += g;
    return r;
}

bool SpaceModel::rows_constant_in_k() const {
    const bool flat_rows = alpha_.c0 == 0.0 && alpha_.constant_in_j() && beta_.c0 == 0.0 && beta_.constant_in_j();
    if (!flat_rows) return false;
    if (v_) return false;
    return true;
}

int SpaceModel::canonical_witness(int j, int m) const {
    switch (rule_) {
        case WitnessRule::SameRow: return j;
        case WitnessRule::TwiceProduct: return 2 * j * m;
        case WitnessRule::SumRows: return m + j;
        case WitnessRule::None: break;
    }
    return 0;
}

namespace {

RowCoef parse_coef(const std::vector<std::string>& cells, const std::string& path, int line_no) {
    if (cells.size() < 2 || cells.size() > 5)
        throw ParseError("expected 1 to 4 coefficients in '" + path + "' line " + std::to_string(line_no), 0);
    double c[4] = {0, 0, 0, 0};
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const std::string& t = cells[i];
        auto res = std::from_chars(t.data(), t.data() + t.size(), c[i - 1]);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(c[i - 1]))
            throw ParseError("bad number '" + t + "' in '" + path + "' line " + std::to_string(line_no), 0);
    }
    return RowCoef{c[0], c[1], c[2], c[3]};
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        auto b = cell.find_first_not_of(" \t");
        auto e = cell.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return out;
}

// Parametric Köthe file:
//   norm,lp,<p> | norm,c0
//   base,<0|1>
//   alpha,<c0>[,<c1>[,<c2>[,<c3>]]]   (likewise beta, gamma)
// giving log a_(j,k) = alpha(j) k + beta(j) log k + gamma(j) with
// coef(j) = c0 + c1 j + c2 log j + c3 / j.
SpaceModel load_kothe(const std::string& path, std::size_t at) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open Köthe file '" + path + "'", at);
    double p = 1.0;
    bool c0 = false;
    Index base = 1;
    RowCoef alpha, beta, gamma;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv(line);
        const std::string& key = cells[0];
        if (key == "norm") {
            if (cells.size() == 2 && cells[1] == "c0") {
                c0 = true;
            } else if (cells.size() == 3 && cells[1] == "lp") {
                auto res = std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), p);
                if (res.ec != std::errc()) throw ParseError("bad norm exponent in '" + path + "'", at);
            } else {
                throw ParseError("bad norm line in '" + path + "' line " + std::to_string(line_no), at);
            }
        } else if (key == "base") {
            if (cells.size() != 2 || (cells[1] != "0" && cells[1] != "1"))
                throw ParseError("base must be 0 or 1 in '" + path + "'", at);
            base = cells[1] == "0" ? 0 : 1;
        } else if (key == "alpha") {
            alpha = parse_coef(cells, path, line_no);
        } else if (key == "beta") {
            beta = parse_coef(cells, path, line_no);
        } else if (key == "gamma") {
            gamma = parse_coef(cells, path, line_no);
        } else {
            throw ParseError("unknown key '" + key + "' in '" + path + "' line " + std::to_string(line_no), at);
        }
    }
    return SpaceModel::kothe(p, c0, base, alpha, beta, gamma, path);
}

double parse_p(std::string_view text, std::size_t at) {
    double p = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), p);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParseError("expected a norm exponent", at);
    return p;
}

}  // namespace

SpaceModel parse_space_spec(std::string_view spec) {
    std::size_t offset = 0;
    bool bi = false;
    if (spec.substr(0, 3) == "bi-") {
        bi = true;
        offset = 3;
    }
    std::string_view rest = spec.substr(offset);
    const auto colon = rest.find(':');
    std::string_view name = rest.substr(0, colon);
    std::string_view arg = colon == std::string_view::npos ? std::string_view() : rest.substr(colon + 1);
    const std::size_t arg_at = offset + (colon == std::string_view::npos ? rest.size() : colon + 1);
    auto need_arg = [&] {
        if (colon == std::string_view::npos) throw ParseError("expected ':' after '" + std::string(name) + "'", arg_at);
    };
    auto no_arg = [&] {
        if (colon != std::string_view::npos) throw ParseError("unexpected argument", arg_at);
    };
    auto weight = [&](std::string_view text, std::size_t at) {
        try {
            WeightSequence v = parse_weight_spec(text);
            if (v.is_bilateral() != bi)
                throw ParseError(bi ? "bilateral space needs a bilateral weight" : "bilateral weight needs a bi- space",
                                 at);
            return v;
        } catch (const ParseError& e) {
            throw ParseError(std::string("in weight: ") + e.what(), at + e.position());
        }
    };

    if (name == "lp") {
        need_arg();
        return SpaceModel::lp(parse_p(arg, arg_at), bi);
    }
    if (name == "c0") {
        no_arg();
        return SpaceModel::c0(bi);
    }
    if (name == "lpv") {
        need_arg();
        const auto c2 = arg.find(':');
        if (c2 == std::string_view::npos) throw ParseError("expected lpv:<p>:<weight-spec>", arg_at);
        const double p = parse_p(arg.substr(0, c2), arg_at);
        return SpaceModel::lpv(p, weight(arg.substr(c2 + 1), arg_at + c2 + 1));
    }
    if (name == "c0v") {
        need_arg();
        return SpaceModel::c0v(weight(arg, arg_at));
    }
    if (!bi) {
        if (name == "entire") {
            no_arg();
            return SpaceModel::entire();
        }
        if (name == "rapid") {
            no_arg();
            return SpaceModel::rapid();
        }
        if (name == "kothe") {
            need_arg();
            if (arg.empty()) throw ParseError("expected a Köthe file path", arg_at);
            return load_kothe(std::string(arg), arg_at);
        }
    }
    throw ParseError("unknown space '" + std::string(spec) + "'", offset);
}

std::vector<std::pair<std::string, std::string>> space_presets() {
    return {
        {"lp:<p>", "l^p, a_(j,k) = 1"},
        {"c0", "c0, a_(j,k) = 1"},
        {"lpv:<p>:<weight-spec>", "weighted l^p, a_(j,k) = v_k^(1/p)"},
        {"c0v:<weight-spec>", "weighted c0, a_(j,k) = v_k"},
        {"entire", "entire functions, a_(j,k) = j^k, k >= 0"},
        {"rapid", "rapidly decreasing sequences, a_(j,k) = k^j, k >= 1"},
        {"kothe:<path>", "parametric Köthe matrix from a file"},
        {"bi-lp:<p> | bi-c0 | bi-lpv:<p>:<w> | bi-c0v:<w>", "bilateral counterparts over Z"},
    };
}

const char* to_string(Tri t) {
    switch (t) {
        case Tri::Holds: return "Holds";
        case Tri::FailsAtWitness: return "FailsAtWitness";
        case Tri::UnknownAtHorizon: return "UnknownAtHorizon";
    }
    return "?";
}

ConditionReport check_condition_B(const SpaceModel& space, int J, const ConditionHorizons& h) {
    return ratio_condition(space, J, h, false);
}

ConditionReport check_schwartz_condition(const SpaceModel& space, int J, const ConditionHorizons& h) {
    return ratio_condition(space, J, h, true);
}

ConditionReport check_condition_B_sufficient(const SpaceModel& space, int m_map_max, Index k_horizon, int j_max) {
    if (m_map_max < 1 || k_horizon < 1 || j_max < 1) throw std::domain_error("condition parameters must be positive");
    ConditionReport rep;
    if (space.bilateral()) {
        rep.holds = Tri::UnknownAtHorizon;
        rep.note = "sufficient condition is stated for unilateral spaces";
        return rep;
    }
    const RowCoef& al = space.alpha();
    const RowCoef& be = space.beta();
    const auto& base = space.base_model();
    bool all_found = true, any_failed = false, all_monotone_proven = true;
    for (int j = 1; j <= j_max; ++j) {
        ConditionWitness w;
        w.j = j;
        const int mono = row_monotone(space, j, k_horizon);
        if (mono < 0) any_failed = true;
        if (mono != 1) all_monotone_proven = false;
        // 2 log a_(j,k) - log a_(mj,k) = S k + L log k + bounded
        const double base_slope = base ? base->slope : 0.0;
        const double base_log = base ? base->log_coef : 0.0;
        for (int c = 1; c <= m_map_max && base; ++c) {
            const double S = 2 * al.at(j) - al.at(c) + base_slope;
            const double L = 2 * be.at(j) - be.at(c) + base_log;
            if (sgn(S) < 0 || (sgn(S) == 0 && sgn(L) <= 0)) {
                w.m_j = c;
                break;
            }
        }
        w.certified = w.m_j > 0;
        const int mj = w.m_j > 0 ? w.m_j : m_map_max;
        double best = -kInf;
        for (Index k = space.index_base(); k <= k_horizon; ++k)
            best = std::max(best, 2 * space.log_a(j, k) - space.log_a(mj, k));
        w.grid_max_log = best;
        if (!w.certified) {
            all_found = false;
            if (base) {
                const double s0 = 2 * al.at(j) + base_slope;
                const double l0 = 2 * be.at(j) + base_log;
                if (always_positive(s0, al) ||
                    (al.constant_in_j() && sgn(s0 - al.c0) == 0 && always_positive(l0, be)))
                    any_failed = true;
            }
        }
        rep.witnesses.push_back(w);
    }
    if (any_failed) {
        rep.holds = Tri::FailsAtWitness;
        rep.note = "a row is not monotone in k or no m_j bounds a_(j,k)^2 / a_(m_j,k)";
    } else if (all_found && all_monotone_proven &&
               (space.witness_rule() == WitnessRule::TwiceProduct || space.witness_rule() == WitnessRule::SumRows ||
                space.rows_equal())) {
        rep.holds = Tri::Holds;
    } else {
        rep.holds = Tri::UnknownAtHorizon;
        rep.note = all_found ? "verified on the sampled rows only" : "no m_j within m_map_max";
    }
    return rep;
}

}  // namespace hyshift
