#include "hyshift/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hyshift/criteria.hpp"
#include "hyshift/dynamics.hpp"
#include "hyshift/errors.hpp"
#include "hyshift/report.hpp"
#include "hyshift/spaces.hpp"
#include "hyshift/suites.hpp"
#include "hyshift/weights.hpp"

namespace hyshift {

namespace {

struct RunConfig {
    std::string weights = "const:2";
    std::string space = "lp:2";
    Horizons h;
    int J = 1;
    int m = 1;
    int row = 1;
    std::string format = "json";
    std::uint64_t seed = 1;
    int count = 0;
    std::string out;
    std::string poly;
    std::string vector;
    std::string targets;
    std::string times;
    std::string suite;
    int stages = 8;
    Index horizon = 0;  // 0: command default
};

// Spec errors carry the flag and the token they stopped at.
std::string token_at(const std::string& spec, std::size_t pos) {
    if (pos >= spec.size()) return "<end>";
    std::size_t end = spec.find_first_of(":,[]", pos + 1);
    return spec.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

WeightSequence weights_from(const std::string& spec) {
    try {
        return parse_weight_spec(spec);
    } catch (const ParseError& e) {
        throw std::invalid_argument("--weights: " + std::string(e.what()) + " (near '" + token_at(spec, e.position()) +
                                    "' in '" + spec + "')");
    } catch (const std::domain_error& e) {
        throw std::invalid_argument("--weights '" + spec + "': " + e.what());
    }
}

SpaceModel space_from(const std::string& spec) {
    try {
        return parse_space_spec(spec);
    } catch (const ParseError& e) {
        throw std::invalid_argument("--space: " + std::string(e.what()) + " (near '" + token_at(spec, e.position()) +
                                    "' in '" + spec + "')");
    } catch (const std::domain_error& e) {
        throw std::invalid_argument("--space '" + spec + "': " + e.what());
    }
}

double number_from(const std::string& flag, const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != tok.size() || !std::isfinite(v))
        throw std::invalid_argument(flag + ": bad number '" + tok + "'");
    return v;
}

Index index_from(const std::string& flag, const std::string& tok) {
    const double v = number_from(flag, tok);
    if (v != std::floor(v)) throw std::invalid_argument(flag + ": bad index '" + tok + "'");
    return static_cast<Index>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

std::vector<double> poly_from(const std::string& spec) {
    if (spec.empty()) throw std::invalid_argument("--poly: coefficients c0,c1,... are required");
    std::vector<double> P;
    for (const auto& tok : split(spec, ',')) P.push_back(number_from("--poly", tok));
    return P;
}

// "k:c,k:c" or bare indices (coefficient 1).
TruncatedVector vector_from(const std::string& flag, const std::string& spec, const SpaceModel& s) {
    std::vector<std::pair<Index, double>> pairs;
    for (const auto& tok : split(spec, ',')) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos)
            pairs.emplace_back(index_from(flag, tok), 1.0);
        else
            pairs.emplace_back(index_from(flag, tok.substr(0, colon)), number_from(flag, tok.substr(colon + 1)));
    }
    try {
        return TruncatedVector::from_pairs(pairs, s.index_base(), s.bilateral());
    } catch (const std::domain_error& e) {
        throw std::invalid_argument(flag + " '" + spec + "': " + e.what());
    }
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

Json header(const std::string& command, const RunConfig& c) {
    return {{"schema", kSchemaVersion},
            {"command", command},
            {"weights", c.weights},
            {"space", c.space},
            {"horizons", {{"n_max", c.h.n_max}, {"k_horizon", c.h.k_horizon}, {"m_max", c.h.m_max}, {"j_max", c.h.j_max}}}};
}

int outcome_exit(Outcome o) {
    return o == Outcome::UnknownAtHorizon || o == Outcome::Boundary ? kExitUndecided : kExitOk;
}

void criterion_csv(std::ostream& os, const Json& values) {
    os << "n,inf_log,status,argmin_k\n";
    for (const auto& v : values) {
        const auto& l = v["inf_log"];
        os << v["n"].get<long long>() << ','
           << (l.is_string() ? l.get<std::string>() : l.is_null() ? "nan" : csv_number(l.get<double>())) << ','
           << v["status"].get<std::string>() << ',' << v["argmin_k"].get<long long>() << '\n';
    }
}

std::string log_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "nan";
    return csv_number(v.get<double>());
}

int cmd_analyze(const RunConfig& c, std::ostream& os) {
    const WeightSequence w = weights_from(c.weights);
    const SpaceModel s = space_from(c.space);
    const Verdict v = subspace_verdict(w, s, c.h, c.J);
    Json j = header("analyze", c);
    j.update(to_json(v));
    if (c.format == "json") {
        os << j.dump(2) << '\n';
    } else if (c.format == "csv") {
        criterion_csv(os, j.value("criterion_values", Json::array()));
    } else {
        os << "weights  " << c.weights << "\nspace    " << c.space << "\noutcome  " << to_string(v.outcome)
           << (v.certified ? " (certified)" : "") << '\n';
        if (j.contains("theta"))
            os << "theta    log " << log_text(j["theta"]["log_value"]) << " [" << j["theta"]["status"].get<std::string>()
               << "]\n";
        if (v.block)
            os << "block    C = " << csv_number(std::exp(v.block->log_C)) << ", m = " << v.block->m
               << ", N = " << v.block->N << '\n';
        if (v.m > 0) os << "witness  m = " << v.m << '\n';
        for (const auto& n : v.notes) os << "note     " << n << '\n';
    }
    return outcome_exit(v.outcome);
}

int cmd_table(const RunConfig& c, std::ostream& os) {
    const WeightSequence w = weights_from(c.weights);
    const SpaceModel s = space_from(c.space);
    const Index base = s.index_base();
    if (c.format == "csv") {
        os << "n,k,log_value\n";
        for (Index n = 1; n <= c.h.n_max; ++n)
            for (Index k = base; k <= c.h.k_horizon; ++k)
                os << n << ',' << k << ',' << csv_number(criterion_log(w, s, c.J, c.m, n, k)) << '\n';
        return kExitOk;
    }
    Json rows = Json::array();
    Json infs = Json::array();
    for (Index n = 1; n <= c.h.n_max; ++n) {
        Json vals = Json::array();
        for (Index k = base; k <= c.h.k_horizon; ++k) vals.push_back(log_number(criterion_log(w, s, c.J, c.m, n, k)));
        rows.push_back({{"n", n}, {"k_start", base}, {"log_values", vals}});
        Json inf = to_json(tail_inf(w, s, c.J, c.m, n, base, c.h.k_horizon));
        inf["n"] = n;
        infs.push_back(inf);
    }
    Json j = header("table", c);
    j["J"] = c.J;
    j["m"] = c.m;
    j["grid"] = rows;
    j["tail_inf"] = infs;
    if (c.format == "json") {
        os << j.dump(2) << '\n';
    } else {
        for (const auto& inf : infs)
            os << "n=" << inf["n"].get<long long>() << "  inf log " << log_text(inf["log_value"]) << "  ["
               << inf["status"].get<std::string>() << ", argmin k=" << inf["arg"].get<long long>() << "]\n";
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& os) {
    const WeightSequence w = weights_from(c.weights);
    const SpaceModel s = space_from(c.space);
    if (c.vector.empty()) throw std::invalid_argument("--vector is required (e.g. 5:1)");
    const TruncatedVector x = vector_from("--vector", c.vector, s);
    const Index horizon = c.horizon > 0 ? c.horizon : 10;
    const auto rows = orbit_table(x, w, s, c.row, horizon);
    if (c.format == "csv") {
        os << "n,value\n";
        for (const auto& r : rows) os << r.n << ',' << csv_number(r.value) << '\n';
    } else if (c.format == "json") {
        Json j = header("simulate", c);
        j["vector"] = to_json(x);
        j["row"] = c.row;
        Json arr = Json::array();
        for (const auto& r : rows)
            arr.push_back({{"n", r.n}, {"value", log_number(r.value)}, {"log_value", log_number(r.log_value)}, {"huge", r.huge}});
        j["orbit"] = arr;
        os << j.dump(2) << '\n';
    } else {
        for (const auto& r : rows) os << std::setw(6) << r.n << "  " << csv_number(r.value) << (r.huge ? "  (huge)" : "") << '\n';
    }
    return kExitOk;
}

int cmd_witness(const RunConfig& c, std::ostream& os, std::ostream& err) {
    const WeightSequence w = weights_from(c.weights);
    const SpaceModel s = space_from(c.space);
    const Verdict v = subspace_verdict(w, s, c.h, c.J);
    if (!v.growth) {
        err << "no growth certificate (outcome " << to_string(v.outcome) << "); a witness needs a NoSubspace verdict\n";
        return kExitUndecided;
    }
    const Index horizon = c.horizon > 0 ? c.horizon : 1000;
    const DivergenceWitness d = build_divergence_witness(*v.growth, w, s, c.stages, horizon);
    const Index bad = verify_divergence_witness(d, w, s);
    if (c.format == "csv") {
        os << "j,value,predicted\n";
        for (const auto& r : orbit_table(d.x, w, s, d.J, horizon))
            os << r.n << ',' << csv_number(r.value) << ',' << csv_number(d.predicted(r.n)) << '\n';
    } else if (c.format == "json") {
        Json j = header("witness", c);
        j["stages"] = c.stages;
        j["witness"] = to_json(d);
        j["growth_certificate"] = to_json(*v.growth);
        j["verified"] = bad == 0;
        j["first_violation"] = bad;
        os << j.dump(2) << '\n';
    } else {
        os << "stages    " << c.stages << "\nschedule ";
        for (auto k : d.schedule) os << ' ' << k;
        os << "\nverified  " << (bad == 0 ? "yes" : "no, first violation at j = " + std::to_string(bad)) << " (j <= "
           << horizon << ")\n";
    }
    return bad == 0 ? kExitOk : kExitError;
}

int cmd_prefix(const RunConfig& c, std::ostream& os) {
    const WeightSequence w = weights_from(c.weights);
    const SpaceModel s = space_from(c.space);
    if (c.targets.empty() || c.times.empty())
        throw std::invalid_argument("--targets (e.g. '1;1,2') and --times (e.g. 10,20) are required");
    std::vector<TruncatedVector> targets;
    for (const auto& t : split(c.targets, ';')) targets.push_back(vector_from("--targets", t, s));
    std::vector<Index> times;
    for (const auto& t : split(c.times, ',')) times.push_back(index_from("--times", t));
    const PrefixResult p = build_hypercyclic_prefix(w, s, targets, times, c.row);
    if (c.format == "json") {
        Json j = header("prefix", c);
        j["times"] = times;
        j["z"] = to_json(p.z);
        Json errs = Json::array();
        for (double e : p.errors) errs.push_back(log_number(e));
        j["errors"] = errs;
        j["smallness"] = log_number(p.smallness);
        os << j.dump(2) << '\n';
    } else if (c.format == "csv") {
        os << "target,time,error\n";
        for (std::size_t i = 0; i < p.errors.size(); ++i) os << i + 1 << ',' << times[i] << ',' << csv_number(p.errors[i]) << '\n';
    } else {
        for (std::size_t i = 0; i < p.errors.size(); ++i)
            os << "target " << i + 1 << " at n = " << times[i] << ": error " << csv_number(p.errors[i]) << '\n';
        os << "norm of z: " << csv_number(p.smallness) << '\n';
    }
    return kExitOk;
}

int cmd_poly(const RunConfig& c, std::ostream& os) {
    const WeightSequence w = weights_from(c.weights);
    const SpaceModel s = space_from(c.space);
    const std::vector<double> P = poly_from(c.poly);
    const PolyCheck pc = poly_hypothesis_check(w, s, P, c.h, c.J);

    // expanded against iterated powers on a test vector
    double worst = 0.0;
    const int d = static_cast<int>(P.size()) - 1;
    if (!w.is_bilateral() && d >= 1) {
        const Index top = s.index_base() + 64;
        const TruncatedVector x = c.vector.empty() ? TruncatedVector::from_pairs({{top - 1, 1.0}, {top, -0.5}}, s.index_base())
                                                   : vector_from("--vector", c.vector, s);
        for (Index n = 1; n <= 8 && n * d <= 32; ++n) {
            const TruncatedVector a = apply_poly(x, w, P, n, PolyMode::Expanded);
            const TruncatedVector b = apply_poly(x, w, P, n, PolyMode::Iterated);
            double scale = 0.0, diff = 0.0;
            for (const auto& e : a.entries()) {
                scale = std::max(scale, std::fabs(e.value()));
                diff = std::max(diff, std::fabs(e.value() - b.at(e.index)));
            }
            for (const auto& e : b.entries()) diff = std::max(diff, std::fabs(e.value() - a.at(e.index)));
            if (scale > 0) worst = std::max(worst, diff / scale);
        }
    }
    constexpr double kOrbitTol = 1e-9;
    const bool orbit_ok = worst <= kOrbitTol;

    if (c.format == "json") {
        Json j = header("poly", c);
        j["poly"] = P;
        j.update(to_json(pc));
        j["outcome"] = to_string(pc.verdict.outcome);
        j["orbit_equivalence"] = {{"max_relative_difference", worst}, {"agree", orbit_ok}};
        os << j.dump(2) << '\n';
    } else if (c.format == "csv") {
        criterion_csv(os, to_json(pc)["criterion_values"]);
    } else {
        os << "outcome             " << to_string(pc.verdict.outcome) << "\ncondition B         "
           << to_string(pc.condition_B) << "\nzero infimum        " << (pc.zero_inf ? "yes, m = " + std::to_string(pc.zero_inf_m) : "no")
           << "\n|c0| <= 1           " << (pc.small_constant ? "yes" : "no") << "\nrow ratio -> 0      "
           << (pc.row_ratio_to_zero ? "yes, m = " + std::to_string(pc.ratio_m) : "no") << "\ncriterion premise   "
           << (pc.criterion_premise_established ? "established" : "assumed") << "\norbit equivalence   "
           << csv_number(worst) << '\n';
    }
    if (!orbit_ok) return kExitError;
    return outcome_exit(pc.verdict.outcome);
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
    const SuiteResult r = run_suite(c.suite, c.seed, c.count);
    if (c.format == "json") {
        Json j = {{"schema", kSchemaVersion}, {"command", "verify"}, {"suite", r.name},   {"seed", r.seed},
                  {"count", r.count},         {"passed", r.passed},  {"undecided", r.undecided}, {"ok", r.ok()},
                  {"failures", r.failures}};
        os << j.dump(2) << '\n';
    } else if (c.format == "csv") {
        os << "suite,seed,count,passed,undecided\n"
           << r.name << ',' << r.seed << ',' << r.count << ',' << r.passed << ',' << r.undecided << '\n';
    } else {
        os << r.name << ": " << r.passed << '/' << r.count << " agreements";
        if (r.undecided) os << " (" << r.undecided << " undecided)";
        os << '\n';
        for (const auto& f : r.failures) os << "  " << f << '\n';
    }
    return r.ok() ? kExitOk : kExitError;
}

int cmd_presets(const RunConfig& c, std::ostream& os) {
    const std::vector<std::pair<std::string, std::string>> weights = {
        {"const:<x>", "w_k = x"},
        {"linear", "w_k = k"},
        {"geom:<r>", "w_k = r^k"},
        {"periodic:[v1,...]", "periodic moduli"},
        {"evper:[p1,...]:[v1,...]", "finite prefix, then periodic"},
        {"table:<path>", "explicit moduli from a file, then a tail rule"},
        {"blocks:<hi>:<lo>", "hi on [4^i, 2*4^i), lo on [2*4^i, 4^(i+1))"},
        {"dips:<c>", "c except |w_(2^i)| = 2^(-i)"},
        {"bilateral:<pos>:<nonpos>", "pos(k) for k >= 1, nonpos(1 - k) for k <= 0"},
    };
    const auto spaces = space_presets();
    if (c.format == "json") {
        Json j = {{"schema", kSchemaVersion}, {"command", "presets"}};
        for (const auto& [k, v] : weights) j["weights"].push_back({{"spec", k}, {"description", v}});
        for (const auto& [k, v] : spaces) j["spaces"].push_back({{"spec", k}, {"description", v}});
        os << j.dump(2) << '\n';
    } else if (c.format == "csv") {
        os << "kind,spec,description\n";
        for (const auto& [k, v] : weights) os << "weights,\"" << k << "\",\"" << v << "\"\n";
        for (const auto& [k, v] : spaces) os << "space,\"" << k << "\",\"" << v << "\"\n";
    } else {
        os << "weights\n";
        for (const auto& [k, v] : weights) os << "  " << std::left << std::setw(28) << k << v << '\n';
        os << "spaces\n";
        for (const auto& [k, v] : spaces) os << "  " << std::left << std::setw(28) << k << v << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Hypercyclic subspaces of weighted backward shifts", "hyshift"};
    app.require_subcommand(1, 1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--weights", c.weights, "weight spec")->capture_default_str();
        sub->add_option("--space", c.space, "space spec")->capture_default_str();
        sub->add_option("--nmax", c.h.n_max, "largest window length")->check(CLI::PositiveNumber);
        sub->add_option("--khorizon", c.h.k_horizon, "scan horizon in k")->check(CLI::PositiveNumber);
        sub->add_option("--mmax", c.h.m_max, "largest row m")->check(CLI::PositiveNumber);
        sub->add_option("--jmax", c.h.j_max, "largest row j")->check(CLI::PositiveNumber);
        sub->add_option("--J", c.J, "row J")->check(CLI::PositiveNumber);
        sub->add_option("--format", c.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--out", c.out, "write the report to a file");
    };

    auto* analyze = app.add_subcommand("analyze", "decide whether a hypercyclic subspace exists");
    common(analyze);
    auto* table = app.add_subcommand("table", "criterion values over the (n, k) grid");
    common(table);
    table->add_option("--m", c.m, "row m")->check(CLI::PositiveNumber);
    auto* simulate = app.add_subcommand("simulate", "seminorms along the orbit of a finite vector");
    common(simulate);
    simulate->add_option("--vector", c.vector, "index:coef pairs, comma separated");
    simulate->add_option("--row", c.row, "seminorm row")->check(CLI::PositiveNumber);
    simulate->add_option("--horizon", c.horizon, "last power")->check(CLI::PositiveNumber);
    auto* witness = app.add_subcommand("witness", "divergence witness from a growth certificate");
    common(witness);
    witness->add_option("--stages", c.stages, "number of stages")->check(CLI::Range(1, 1000));
    witness->add_option("--horizon", c.horizon, "verification horizon")->check(CLI::PositiveNumber);
    auto* prefix = app.add_subcommand("prefix", "finite prefix of a hypercyclic vector");
    common(prefix);
    prefix->add_option("--targets", c.targets, "target vectors separated by ';'");
    prefix->add_option("--times", c.times, "increasing visit times");
    prefix->add_option("--row", c.row, "seminorm row")->check(CLI::PositiveNumber);
    auto* poly = app.add_subcommand("poly", "hypotheses for P(B_w) and orbit equivalence");
    common(poly);
    poly->add_option("--poly", c.poly, "coefficients c0,c1,...");
    poly->add_option("--vector", c.vector, "test vector for the orbit check");
    auto* verify = app.add_subcommand("verify", "randomized oracle suites");
    verify->add_option("suite", c.suite, "condn, prop44, certtransform or polyorbit")
        ->required()
        ->check(CLI::IsMember(suite_names()));
    verify->add_option("--seed", c.seed, "random seed")->capture_default_str();
    verify->add_option("--count", c.count, "number of cases")->check(CLI::PositiveNumber);
    verify->add_option("--format", c.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    verify->add_option("--out", c.out, "write the report to a file");
    auto* presets = app.add_subcommand("presets", "list built-in weight and space specs");
    presets->add_option("--format", c.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    presets->add_option("--out", c.out, "write the report to a file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    std::ostringstream report;
    report.imbue(std::locale::classic());
    int code = kExitError;
    try {
        if (*analyze) code = cmd_analyze(c, report);
        else if (*table) code = cmd_table(c, report);
        else if (*simulate) code = cmd_simulate(c, report);
        else if (*witness) code = cmd_witness(c, report, err);
        else if (*prefix) code = cmd_prefix(c, report);
        else if (*poly) code = cmd_poly(c, report);
        else if (*verify) code = cmd_verify(c, report);
        else if (*presets) code = cmd_presets(c, report);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    if (c.out.empty()) {
        out << report.str();
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f || !(f << report.str())) {
            err << "error: cannot write '" << c.out << "'\n";
            return kExitError;
        }
    }
    return code;
}

}  // namespace hyshift
