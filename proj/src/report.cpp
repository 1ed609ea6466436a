#include "report.hpp"

#include <cmath>

namespace ruledlab::cli {

namespace detail {

void Warnings::add(const std::string& message) {
    if (counts_[message]++ == 0) order_.push_back(message);
}

json Warnings::number(double x, const std::string& what) {
    if (std::isfinite(x)) return x == 0.0 ? 0.0 : x;
    add(what + " is not finite; written as null");
    return nullptr;
}

json Warnings::number(const std::optional<double>& x, const std::string& what) {
    if (!x) {
        add(what + " is undefined; written as null");
        return nullptr;
    }
    return number(*x, what);
}

json Warnings::vec(const Vec3& v, const std::string& what) {
    if (!v.finite()) {
        add(what + " is not finite; written as null");
        return nullptr;
    }
    return json::array({finite_or_null(v.x1), finite_or_null(v.x2), finite_or_null(v.x3)});
}

json Warnings::vec(const std::optional<Vec3>& v, const std::string& what) {
    if (!v) {
        add(what + " is undefined; written as null");
        return nullptr;
    }
    return vec(*v, what);
}

json Warnings::to_json() const {
    json out = json::array();
    for (const auto& m : order_) {
        const std::size_t n = counts_.at(m);
        out.push_back(n > 1 ? m + " (" + std::to_string(n) + " occurrences)" : m);
    }
    return out;
}

json finite_or_null(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x == 0.0 ? 0.0 : x;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

using detail::finite_or_null;
using json = nlohmann::ordered_json;

json to_json(const verify::SuiteConfig& cfg) {
    json fam = json::array();
    for (auto f : cfg.families) fam.push_back(transversal::to_string(f));
    return json{{"k1_values", cfg.k1_values},
                {"k2_values", cfg.k2_values},
                {"theta_values", cfg.theta_values},
                {"angle_values", cfg.angle_values},
                {"families", fam},
                {"branch", transversal::to_string(cfg.branch)},
                {"tuned_theta", cfg.tuned_theta},
                {"tolerance", cfg.tolerance},
                {"coincidence_tolerance", cfg.coincidence_tolerance},
                {"margin", cfg.margin},
                {"s_range", {cfg.s0, cfg.s1}},
                {"step", cfg.step}};
}

json to_json(const verify::SuiteReport& report) {
    const verify::Summary s = report.summary();
    json out;
    out["summary"] = {{"total", s.total},
                      {"passed", s.passed},
                      {"failed", s.failed},
                      {"skipped", s.skipped},
                      {"discrepancies", s.discrepancies},
                      {"errored", s.errored}};
    json cases = json::array();
    for (const auto& c : report.cases) {
        json j;
        j["index"] = c.index;
        j["suite"] = c.suite;
        j["check"] = c.check;
        j["family"] = c.family.empty() ? json(nullptr) : json(c.family);
        json params = json::object();
        for (const auto& [k, v] : c.parameters) params[k] = finite_or_null(v);
        j["parameters"] = params;
        json exprs = json::object();
        for (const auto& [k, v] : c.expressions) exprs[k] = v;
        j["expressions"] = exprs;
        j["forward_residual"] = c.forward_residual ? finite_or_null(*c.forward_residual) : json(nullptr);
        j["backward_residual"] = c.backward_residual ? finite_or_null(*c.backward_residual) : json(nullptr);
        json values = json::object();
        for (const auto& [k, v] : c.values) values[k] = finite_or_null(v);
        j["values"] = values;
        j["verdict"] = verify::to_string(c.verdict);
        j["reason"] = c.reason;
        cases.push_back(std::move(j));
    }
    out["cases"] = std::move(cases);
    return out;
}

json to_json(const transversal::ConditionReport& report) {
    json crit = json::array();
    for (const auto& c : report.criteria) {
        crit.push_back({{"name", c.name},
                        {"evaluated", c.evaluated},
                        {"holds", c.holds},
                        {"max_abs", finite_or_null(c.max_abs)},
                        {"min_abs", finite_or_null(c.min_abs)}});
    }
    return json{{"consistent", report.consistent},
                {"criteria", crit},
                {"discrepancies", report.discrepancies},
                {"notes", report.notes}};
}

}  // namespace ruledlab::cli
