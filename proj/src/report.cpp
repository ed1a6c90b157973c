#include "hyshift/report.hpp"

#include <cmath>

namespace hyshift {

Json log_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    return v;
}

Json to_json(const CertifiedValue& v) {
    Json j = {
        {"log_value", log_number(v.log_value)},
        {"status", to_string(v.status)},
        {"horizon_log", log_number(v.horizon_log)},
        {"arg", v.arg},
        {"horizon", v.horizon},
    };
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

Json to_json(const ConditionReport& r) {
    Json ws = Json::array();
    for (const auto& w : r.witnesses) {
        ws.push_back({{"j", w.j},
                      {"m", w.m},
                      {"m_j", w.m_j},
                      {"certified", w.certified},
                      {"grid_max_log", log_number(w.grid_max_log)}});
    }
    Json j = {{"holds", to_string(r.holds)}, {"J", r.J}, {"witnesses", ws}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json to_json(const BlockCertificate& c) {
    Json bridges = Json::array();
    for (double b : c.bridges) bridges.push_back(log_number(b));
    return {{"log_C", c.log_C}, {"C", std::exp(c.log_C)}, {"m", c.m}, {"N", c.N},
            {"J", c.J},         {"j", c.j},                {"bridges_log", bridges}};
}

Json to_json(const GrowthCertificate& g) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < g.log_Cn.size(); ++i) {
        rows.push_back({{"n", i + 1},
                        {"log_C_n", log_number(g.log_Cn[i])},
                        {"E_n", g.E_at(static_cast<Index>(i + 1))},
                        {"tail_min_log", log_number(g.tail_min[i])},
                        {"status", to_string(g.tail_status[i])}});
    }
    return {{"log_C", g.log_C},
            {"m", g.m},
            {"N", g.N},
            {"J", g.J},
            {"log_K", g.log_K},
            {"K", std::exp(g.log_K)},
            {"K_certified", g.K_certified},
            {"closed_form", "C_n = C^floor(n/m) / K"},
            {"sound", g.sound()},
            {"rows", rows}};
}

Json to_json(const ThetaResult& t) {
    Json values = Json::array();
    for (std::size_t i = 0; i < t.per_n.size(); ++i) {
        const auto& v = t.per_n[i];
        values.push_back({{"n", i + 1},
                          {"inf_log", log_number(v.log_value)},
                          {"horizon_inf_log", log_number(v.horizon_log)},
                          {"status", to_string(v.status)},
                          {"argmin_k", v.arg}});
    }
    Json j = {{"J", t.J}, {"m", t.m}, {"theta", to_json(t.theta)}, {"criterion_values", values}};
    if (t.block) j["block_certificate"] = to_json(*t.block);
    return j;
}

Json to_json(const HyperResult& h) {
    Json trends = Json::array();
    for (auto t : h.trends) trends.push_back(to_string(t));
    return {{"result", to_string(h.result)}, {"certified", h.certified}, {"row_trends", trends}, {"note", h.note}};
}

Json to_json(const Verdict& v) {
    Json j = {{"outcome", to_string(v.outcome)}, {"J", v.J}, {"certified", v.certified}, {"notes", v.notes}};
    if (v.m > 0) j["m"] = v.m;
    if (v.condition_B) j["condition_B"] = to_json(*v.condition_B);
    if (v.hyper) j["hypercyclicity"] = to_json(*v.hyper);
    if (!v.thetas.empty()) {
        Json ts = Json::array();
        for (const auto& t : v.thetas) ts.push_back(to_json(t));
        j["thetas"] = ts;
        // the witness m (or the first evaluated) supplies the headline values
        const ThetaResult* head = &v.thetas.front();
        for (const auto& t : v.thetas)
            if (t.m == v.m) head = &t;
        j["theta"] = to_json(head->theta);
        j["criterion_values"] = to_json(*head)["criterion_values"];
    }
    Json cert = Json::object();
    if (v.block) cert["block"] = to_json(*v.block);
    if (v.growth) cert["growth"] = to_json(*v.growth);
    if (!cert.empty()) j["certificate"] = cert;
    if (!v.bilateral.empty()) {
        Json ev = Json::array();
        for (const auto& e : v.bilateral)
            ev.push_back({{"j", e.j},
                          {"hit_n", e.hit_n},
                          {"min_backward_log", log_number(e.min_backward)},
                          {"max_forward_log", log_number(e.max_forward)}});
        j["bilateral_evidence"] = ev;
    }
    return j;
}

Json to_json(const CondNReport& r) {
    return {{"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)}, {"agree", r.agree}, {"note", r.note}};
}

Json to_json(const PolyCheck& p) {
    Json values = Json::array();
    for (std::size_t i = 0; i < p.zero_inf_values.size(); ++i) {
        const auto& v = p.zero_inf_values[i];
        values.push_back({{"n", i + 1},
                          {"inf_log", log_number(v.log_value)},
                          {"horizon_inf_log", log_number(v.horizon_log)},
                          {"status", to_string(v.status)},
                          {"argmin_k", v.arg}});
    }
    return {{"verdict", to_json(p.verdict)},
            {"hypotheses",
             {{"condition_B", to_string(p.condition_B)},
              {"zero_infimum", p.zero_inf},
              {"zero_infimum_m", p.zero_inf_m},
              {"constant_term_at_most_1", p.small_constant},
              {"row_ratio_to_zero", p.row_ratio_to_zero},
              {"row_ratio_m", p.ratio_m},
              {"criterion_premise", p.criterion_premise_established ? "established" : "assumed"}}},
            {"criterion_values", values}};
}

Json to_json(const TruncatedVector& x) {
    Json arr = Json::array();
    for (const auto& e : x.entries()) {
        Json item = Json::array({e.index, e.value()});
        if (e.huge()) item.push_back({{"sign", e.sign}, {"log_abs", e.log_abs}});
        arr.push_back(item);
    }
    return arr;
}

Json to_json(const DivergenceWitness& d) {
    return {{"x", to_json(d.x)}, {"schedule", d.schedule}, {"J", d.J}, {"horizon", d.horizon}};
}

}  // namespace hyshift
