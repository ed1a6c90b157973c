#include "hyshift/weights.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "hyshift/errors.hpp"

namespace hyshift {

namespace {

double checked_log(double v) {
    if (!(std::isfinite(v)) || v == 0.0) throw std::domain_error("weight modulus must be finite and non-zero");
    return std::log(std::fabs(v));
}

std::vector<double> logs_of(const std::vector<double>& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(checked_log(v));
    return out;
}

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += fmt(values[i]);
    }
    return out + "]";
}

// floor(log2 k) for k >= 1
int ilog2(Index k) { return 63 - std::countl_zero(static_cast<std::uint64_t>(k)); }

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : text_(text) {}

    WeightSequence parse_all() {
        WeightSequence w = parse_one();
        if (pos_ != text_.size()) fail("unexpected trailing input '" + std::string(text_.substr(pos_)) + "'");
        return w;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    std::string_view word() {
        std::size_t end = pos_;
        while (end < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[end])) || text_[end] == '-'))
            ++end;
        std::string_view w = text_.substr(pos_, end - pos_);
        if (w.empty()) fail("expected a weight family name");
        pos_ = end;
        return w;
    }

    void expect(char c) {
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    double number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double v = 0.0;
        auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc() || res.ptr == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return v;
    }

    double modulus() {
        std::size_t at = pos_;
        double v = number();
        if (v == 0.0 || !std::isfinite(v)) {
            throw std::domain_error("zero or non-finite weight at position " + std::to_string(at));
        }
        return v;
    }

    std::vector<double> list(bool allow_empty = false) {
        expect('[');
        std::vector<double> out;
        if (pos_ < text_.size() && text_[pos_] == ']') {
            if (!allow_empty) fail("empty list");
            ++pos_;
            return out;
        }
        for (;;) {
            out.push_back(modulus());
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            break;
        }
        expect(']');
        return out;
    }

    WeightSequence parse_one() {
        std::size_t start = pos_;
        std::string_view name = word();
        if (name == "const") {
            expect(':');
            return WeightSequence::constant(modulus());
        }
        if (name == "linear") return WeightSequence::linear();
        if (name == "geom") {
            expect(':');
            return WeightSequence::geometric(modulus());
        }
        if (name == "periodic") {
            expect(':');
            return WeightSequence::periodic(list());
        }
        if (name == "evper") {
            expect(':');
            auto prefix = list(true);
            expect(':');
            auto period = list();
            return WeightSequence::eventually_periodic(std::move(prefix), std::move(period));
        }
        if (name == "blocks") {
            expect(':');
            double hi = modulus();
            expect(':');
            double lo = modulus();
            return WeightSequence::blocks(hi, lo);
        }
        if (name == "dips") {
            expect(':');
            return WeightSequence::dips(modulus());
        }
        if (name == "table") {
            expect(':');
            std::size_t end = text_.find(':', pos_);
            if (end == std::string_view::npos) end = text_.size();
            std::string path(text_.substr(pos_, end - pos_));
            if (path.empty()) fail("expected a table path");
            std::size_t at = pos_;
            pos_ = end;
            return load_table(path, at);
        }
        if (name == "bilateral") {
            expect(':');
            WeightSequence pos = parse_one();
            if (pos.is_bilateral()) fail("nested bilateral spec");
            expect(':');
            WeightSequence neg = parse_one();
            if (neg.is_bilateral()) fail("nested bilateral spec");
            return WeightSequence::bilateral(std::move(pos), std::move(neg));
        }
        pos_ = start;
        fail("unknown weight family '" + std::string(name) + "'");
    }

    static WeightSequence load_table(const std::string& path, std::size_t at) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open table '" + path + "'", at);
        std::string line;
        std::optional<WeightSequence> tail;
        std::vector<double> values;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            if (line.rfind("tail=", 0) == 0) {
                tail = SpecParser(std::string_view(line).substr(5)).parse_all();
                if (tail->is_bilateral()) throw ParseError("bilateral tail rule in '" + path + "'", at);
                continue;
            }
            double v = 0.0;
            auto res = std::from_chars(line.data(), line.data() + line.size(), v);
            if (res.ec != std::errc() || res.ptr != line.data() + line.size())
                throw ParseError("bad modulus '" + line + "' in table '" + path + "'", at);
            values.push_back(v);
        }
        if (!tail) throw ParseError("table '" + path + "' has no tail= rule", at);
        return WeightSequence::table(std::move(values), std::move(*tail), path);
    }
};

}  // namespace

const char* to_string(Status s) {
    switch (s) {
        case Status::Exact: return "Exact";
        case Status::LowerBounded: return "LowerBounded";
        case Status::UpperBounded: return "UpperBounded";
        case Status::HorizonOnly: return "HorizonOnly";
    }
    return "?";
}

const char* to_string(SumTrend t) {
    switch (t) {
        case SumTrend::PlusInfinity: return "PlusInfinity";
        case SumTrend::MinusInfinity: return "MinusInfinity";
        case SumTrend::Bounded: return "Bounded";
        case SumTrend::Oscillating: return "Oscillating";
        case SumTrend::Unknown: return "Unknown";
    }
    return "?";
}

WeightSequence WeightSequence::constant(double c) {
    WeightSequence w;
    w.family_ = WeightFamily::Constant;
    w.params_ = {c};
    LogModel m;
    m.period = {checked_log(c)};
    w.model_ = m;
    return w;
}

WeightSequence WeightSequence::periodic(std::vector<double> values) {
    if (values.empty()) throw std::domain_error("periodic weights need at least one value");
    WeightSequence w;
    w.family_ = WeightFamily::Periodic;
    LogModel m;
    m.period = logs_of(values);
    w.values_ = std::move(values);
    w.model_ = m;
    return w;
}

WeightSequence WeightSequence::eventually_periodic(std::vector<double> prefix, std::vector<double> period) {
    if (period.empty()) throw std::domain_error("eventually periodic weights need a non-empty period");
    WeightSequence w;
    w.family_ = WeightFamily::EventuallyPeriodic;
    LogModel m;
    m.prefix = logs_of(prefix);
    m.period = logs_of(period);
    m.anchor = m.tail_start();
    w.values_ = std::move(prefix);
    w.period_ = std::move(period);
    w.model_ = m;
    return w;
}

WeightSequence WeightSequence::linear() {
    WeightSequence w;
    w.family_ = WeightFamily::Linear;
    LogModel m;
    m.log_coef = 1.0;
    w.model_ = m;
    return w;
}

WeightSequence WeightSequence::geometric(double r) {
    WeightSequence w;
    w.family_ = WeightFamily::Geometric;
    w.params_ = {r};
    LogModel m;
    m.slope = checked_log(r);
    w.model_ = m;
    return w;
}

WeightSequence WeightSequence::table(std::vector<double> values, WeightSequence tail, std::string path) {
    if (tail.is_bilateral()) throw std::domain_error("table tail rule must be unilateral");
    WeightSequence w;
    w.family_ = WeightFamily::Table;
    w.path_ = std::move(path);
    std::vector<double> logs = logs_of(values);
    w.values_ = std::move(values);
    if (tail.model()) {
        LogModel m = *tail.model();
        const Index table_end = 1 + static_cast<Index>(logs.size());
        std::vector<double> prefix = logs;
        for (Index k = table_end; k < m.tail_start(); ++k) prefix.push_back(m.at(k));
        m.first = 1;
        m.prefix = std::move(prefix);
        w.model_ = m;
    }
    w.tail_ = std::make_shared<const WeightSequence>(std::move(tail));
    return w;
}

WeightSequence WeightSequence::blocks(double hi, double lo) {
    checked_log(hi);
    checked_log(lo);
    WeightSequence w;
    w.family_ = WeightFamily::Blocks;
    w.params_ = {hi, lo};
    return w;
}

WeightSequence WeightSequence::dips(double c) {
    checked_log(c);
    WeightSequence w;
    w.family_ = WeightFamily::Dips;
    w.params_ = {c};
    return w;
}

WeightSequence WeightSequence::bilateral(WeightSequence pos, WeightSequence nonpos) {
    if (pos.is_bilateral() || nonpos.is_bilateral()) throw std::domain_error("bilateral sides must be unilateral");
    WeightSequence w;
    w.family_ = WeightFamily::Bilateral;
    w.pos_ = std::make_shared<const WeightSequence>(std::move(pos));
    w.neg_ = std::make_shared<const WeightSequence>(std::move(nonpos));
    return w;
}

const WeightSequence& WeightSequence::positive_side() const {
    if (!pos_) throw std::domain_error("not a bilateral weight sequence");
    return *pos_;
}

const WeightSequence& WeightSequence::nonpositive_side() const {
    if (!neg_) throw std::domain_error("not a bilateral weight sequence");
    return *neg_;
}

Index WeightSequence::first_index() const {
    return is_bilateral() ? std::numeric_limits<Index>::min() : 1;
}

bool WeightSequence::valid(Index k) const { return is_bilateral() || k >= 1; }

double WeightSequence::log_at(Index k) const {
    if (!valid(k)) throw std::domain_error("weight index " + std::to_string(k) + " out of range");
    switch (family_) {
        case WeightFamily::Bilateral:
            return k >= 1 ? pos_->log_at(k) : neg_->log_at(1 - k);
        case WeightFamily::Table:
            if (k <= static_cast<Index>(values_.size())) return checked_log(values_[static_cast<std::size_t>(k - 1)]);
            return tail_->log_at(k);
        case WeightFamily::Blocks:
            return std::log(ilog2(k) % 2 == 0 ? params_[0] : params_[1]);
        case WeightFamily::Dips:
            if ((k & (k - 1)) == 0) return -static_cast<double>(ilog2(k)) * std::log(2.0);
            return std::log(params_[0]);
        default:
            return model_->at(k);
    }
}

double WeightSequence::magnitude_at(Index k) const { return std::exp(log_at(k)); }

std::string WeightSequence::render() const {
    switch (family_) {
        case WeightFamily::Constant: return "const:" + fmt(params_[0]);
        case WeightFamily::Periodic: return "periodic:" + fmt_list(values_);
        case WeightFamily::EventuallyPeriodic: return "evper:" + fmt_list(values_) + ":" + fmt_list(period_);
        case WeightFamily::Linear: return "linear";
        case WeightFamily::Geometric: return "geom:" + fmt(params_[0]);
        case WeightFamily::Table: return "table:" + path_;
        case WeightFamily::Blocks: return "blocks:" + fmt(params_[0]) + ":" + fmt(params_[1]);
        case WeightFamily::Dips: return "dips:" + fmt(params_[0]);
        case WeightFamily::Bilateral: return "bilateral:" + pos_->render() + ":" + neg_->render();
    }
    return {};
}

WeightSequence parse_weight_spec(std::string_view spec) { return SpecParser(spec).parse_all(); }

double window_log(const WeightSequence& w, Index n, Index k) {
    if (n < 0) throw std::domain_error("window length must be non-negative");
    if (!w.valid(k + 1)) throw std::domain_error("window start " + std::to_string(k) + " out of range");
    double sum = 0.0;
    for (Index v = 1; v <= n; ++v) sum += w.log_at(k + v);
    return sum;
}

SumTrend partial_sum_trend(const WeightSequence& w, const LogModel* row) {
    if (w.is_bilateral()) return SumTrend::Unknown;
    const bool row_bounded = !row || (row->slope == 0.0 && row->log_coef == 0.0);
    auto sign = [](double v) { return v > kStructTol ? 1 : (v < -kStructTol ? -1 : 0); };

    if (w.family() == WeightFamily::Blocks) {
        if (!row_bounded) return SumTrend::Unknown;
        const double h = std::log(w.params()[0]);
        const double l = std::log(w.params()[1]);
        // Values at the ends of hi runs grow like 4^i (2h + l), at the ends of lo runs like 4^i (h + 2l).
        const int a = sign(2 * h + l);
        const int b = sign(h + 2 * l);
        if (a == 0 || b == 0) return SumTrend::Unknown;
        if (a > 0 && b > 0) return SumTrend::PlusInfinity;
        if (a < 0 && b < 0) return SumTrend::MinusInfinity;
        return SumTrend::Oscillating;
    }
    if (w.family() == WeightFamily::Dips) {
        if (!row_bounded) return SumTrend::Unknown;
        // n log c dominates the (log2 n)^2 loss from the dips unless c <= 1.
        return std::log(w.params()[0]) > kStructTol ? SumTrend::PlusInfinity : SumTrend::MinusInfinity;
    }
    if (!w.model()) return SumTrend::Unknown;

    const LogModel& m = *w.model();
    const double row_slope = row ? row->slope : 0.0;
    const double row_log = row ? row->log_coef : 0.0;
    // Stirling: sum log v = n log n - n + (1/2) log n + O(1).
    const double coef[] = {
        m.slope / 2,                                                       // n^2
        m.log_coef,                                                        // n log n
        m.slope / 2 + m.offset + m.period_mean() - m.log_coef - row_slope, // n
        m.log_coef / 2 - row_log,                                          // log n
    };
    for (double c : coef) {
        int s = sign(c);
        if (s > 0) return SumTrend::PlusInfinity;
        if (s < 0) return SumTrend::MinusInfinity;
    }
    return SumTrend::Bounded;
}

CertifiedValue cumulative_sup_log(const WeightSequence& w, Index horizon) {
    if (w.is_bilateral()) throw std::domain_error("cumulative_sup_log needs unilateral weights; use bilateral_verdict");
    if (horizon < 1) throw std::domain_error("horizon must be positive");
    CertifiedValue out;
    out.horizon = horizon;
    double s = 0.0;
    out.horizon_log = -kInf;
    for (Index n = 1; n <= horizon; ++n) {
        s += w.log_at(n);
        if (s > out.horizon_log) {
            out.horizon_log = s;
            out.arg = n;
        }
    }
    out.log_value = out.horizon_log;

    const SumTrend trend = partial_sum_trend(w);
    if (trend == SumTrend::PlusInfinity || trend == SumTrend::Oscillating) {
        out.log_value = kInf;
        out.status = Status::Exact;
        out.note = "partial sums diverge to +inf";
        return out;
    }
    const auto& model = w.model();
    if (model && model->slope == 0.0 && model->log_coef == 0.0 &&
        (trend == SumTrend::Bounded || trend == SumTrend::MinusInfinity)) {
        // Past the prefix, S(n + p) = S(n) + (period sum) <= S(n): the sup is
        // reached before tail_start + p.
        const Index last = model->tail_start() + model->period_length();
        double sup = -kInf, acc = 0.0;
        Index arg = 0;
        for (Index n = 1; n <= std::max(last, horizon); ++n) {
            acc += w.log_at(n);
            if (acc > sup) {
                sup = acc;
                arg = n;
            }
        }
        (void)arg;
        out.log_value = sup;
        out.status = Status::Exact;
        return out;
    }
    out.status = Status::HorizonOnly;
    return out;
}

}  // namespace hyshift
