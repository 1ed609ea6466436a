#include "ruledlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>

#include "ruledlab/error.hpp"

namespace ruledlab::verify {

using transversal::Branch;
using transversal::ConditionReport;
using transversal::Criterion;
using transversal::Family;
using transversal::TransversalSpec;

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Skipped: return "skipped";
        case Verdict::Discrepancy: return "discrepancy";
        case Verdict::Errored: return "errored";
    }
    return "?";
}

void SuiteConfig::validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
    if (k1_values.empty() || k2_values.empty() || theta_values.empty() || angle_values.empty()) {
        bad("suite grids must be non-empty");
    }
    if (families.empty()) bad("no families selected");
    if (!(tolerance > 0.0) || !(coincidence_tolerance > 0.0)) bad("tolerances must be positive");
    if (!(margin > 0.0)) bad("margin must be positive");
    if (!(s1 > s0)) bad("empty s range");
    if (!(step > 0.0)) bad("step must be positive");
    for (double k : k1_values) {
        if (!(k > 0.0)) bad("k1 values must be positive");
    }
}

Summary SuiteReport::summary() const {
    Summary s;
    s.total = cases.size();
    for (const auto& c : cases) {
        switch (c.verdict) {
            case Verdict::Pass: ++s.passed; break;
            case Verdict::Fail: ++s.failed; break;
            case Verdict::Skipped: ++s.skipped; break;
            case Verdict::Discrepancy: ++s.discrepancies; break;
            case Verdict::Errored: ++s.errored; break;
        }
    }
    return s;
}

void SuiteReport::append(SuiteReport other) {
    for (auto& c : other.cases) {
        c.index = cases.size();
        cases.push_back(std::move(c));
    }
}

std::vector<double> theta_grid(const SuiteConfig& cfg, double k1, double k2) {
    std::vector<double> out = cfg.theta_values;
    if (cfg.tuned_theta) {
        auto add = [&](double r) {
            if (!(std::abs(r) < 1.0)) return;
            const double t = std::atanh(r);
            for (double x : out) {
                if (std::abs(x - t) < 1e-12) return;
            }
            out.push_back(t);
        };
        if (k2 != 0.0) add(k1 / k2);
        add(k2 / k1);
    }
    return out;
}

namespace {

constexpr double kBandFactor = 10.0;
constexpr double kDriftOffset = 0.1;
constexpr double kDriftSlope = 0.1;
constexpr double kGammaOffset = 0.5;
constexpr double kGammaSlope = 0.3;
constexpr double kBetaGuard = 0.2;
constexpr std::size_t kMinSteps = 200;

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return x < 0.0 ? "(" + std::string(buf) + ")" : std::string(buf);
}

// (s - s0) as text.
std::string local_s(double s0) { return s0 == 0.0 ? "s" : "(s - " + num(s0) + ")"; }

struct Instance {
    std::string k1, k2, theta;
    double s0, s1, step;

    synth::SampledSurface build(const Tolerances& tol) const {
        return synth::synthesize_surface(synth::IntrinsicData::from_strings(k1, k2, theta, s0, s1, step), tol);
    }
};

Instance base_instance(const SuiteConfig& cfg, double k1, double k2, const std::string& theta) {
    return {num(k1), num(k2), theta, cfg.s0, cfg.s1, cfg.step};
}

// Shrinks the s-range so an angle with derivative bounded by `slope` stays within `half_width`.
void fit_window(Instance& inst, double slope, double half_width) {
    if (slope > 0.0) inst.s1 = std::min(inst.s1, inst.s0 + half_width / slope);
    inst.step = std::min(inst.step, (inst.s1 - inst.s0) / static_cast<double>(kMinSteps));
}

bool structural(ErrorCode c) {
    switch (c) {
        case ErrorCode::CylindricalRuling:
        case ErrorCode::DegenerateDenominator:
        case ErrorCode::TrivialRuling:
        case ErrorCode::NullDerivative:
            return true;
        default:
            return false;
    }
}

bool band_agree(double a, double b, double tol) {
    return (a <= tol && b <= tol) || (a >= kBandFactor * tol && b >= kBandFactor * tol);
}

Tolerances tolerances(const SuiteConfig& cfg) {
    Tolerances t;
    t.general_eps = cfg.tolerance;
    return t;
}

class Builder {
public:
    explicit Builder(std::string suite) : suite_(std::move(suite)) {}

    void run(CaseRecord rec, const std::function<void(CaseRecord&)>& body) {
        rec.suite = suite_;
        rec.index = report_.cases.size();
        try {
            body(rec);
        } catch (const Error& e) {
            rec.verdict = structural(e.code()) ? Verdict::Skipped : Verdict::Errored;
            rec.reason = e.what();
        } catch (const std::exception& e) {
            rec.verdict = Verdict::Errored;
            rec.reason = e.what();
        }
        auto finite = [](const std::optional<double>& x) { return !x || std::isfinite(*x); };
        bool ok = finite(rec.forward_residual) && finite(rec.backward_residual);
        for (const auto& [k, v] : rec.values) ok = ok && std::isfinite(v);
        if (!ok && rec.verdict != Verdict::Errored) {
            rec.verdict = Verdict::Errored;
            rec.reason = "non-finite residual";
        }
        report_.cases.push_back(std::move(rec));
    }

    SuiteReport take() { return std::move(report_); }

private:
    std::string suite_;
    SuiteReport report_;
};

std::string family_name(Family f) { return transversal::to_string(f); }

TransversalSpec make_spec(Family f, const std::string& angle, Branch b) {
    return TransversalSpec{f, expr::ScalarFunction(angle), b};
}

const Criterion& need(const ConditionReport& r, const std::string& name) {
    const Criterion* c = r.find(name);
    if (!c) throw Error(ErrorCode::InvalidArgument, "missing criterion " + name);
    return *c;
}

// --- striction suite -----------------------------------------------------------------------

void judge_predicate(CaseRecord& rec, const ruled::PredicateResult& p, double tol) {
    rec.values.emplace_back("geometric_residual", p.geometric_residual);
    if (p.curvature_residual) rec.values.emplace_back("curvature_residual", *p.curvature_residual);
    if (!p.curvature_residual) {
        rec.verdict = Verdict::Skipped;
        rec.reason = "curvature ratio undefined";
    } else if (!p.satisfiable) {
        rec.verdict = Verdict::Skipped;
        rec.reason = "curvature condition unsatisfiable: ratio outside the range of tanh";
    } else if (band_agree(p.geometric_residual, *p.curvature_residual, tol)) {
        rec.verdict = Verdict::Pass;
    } else {
        rec.verdict = Verdict::Fail;
        rec.reason = p.agree ? "residuals inside the ambiguity band" : "geometric and curvature sides disagree";
    }
}

}  // namespace

SuiteReport run_striction_suite(const SuiteConfig& cfg) {
    cfg.validate();
    const Tolerances tol = tolerances(cfg);
    Builder out("striction");
    for (double k1 : cfg.k1_values) {
        for (double k2 : cfg.k2_values) {
            for (double th : theta_grid(cfg, k1, k2)) {
                for (int drift = 0; drift < 2; ++drift) {
                    const std::string theta =
                        drift ? num(th + kDriftOffset) + " + " + num(kDriftSlope) + "*" + local_s(cfg.s0) : num(th);
                    std::optional<ruled::PredicateReport> preds;
                    std::exception_ptr failure;
                    try {
                        const auto surf = base_instance(cfg, k1, k2, theta).build(tol);
                        preds = ruled::striction_predicates(surf.frames(), tol);
                    } catch (const std::exception&) {
                        failure = std::current_exception();
                    }
                    const std::pair<const char*, const ruled::PredicateResult* (*)(const ruled::PredicateReport&)>
                        checks[] = {
                            {"asymptotic_striction_predicate", [](const ruled::PredicateReport& r) { return &r.asymptotic; }},
                            {"geodesic_striction_predicate", [](const ruled::PredicateReport& r) { return &r.geodesic; }},
                            {"line_of_curvature_striction_predicate",
                             [](const ruled::PredicateReport& r) { return &r.line_of_curvature; }},
                        };
                    for (const auto& [name, pick] : checks) {
                        CaseRecord rec;
                        rec.check = name;
                        rec.parameters = {{"k1", k1}, {"k2", k2}, {"theta0", th}, {"theta_drift", drift ? kDriftSlope : 0.0}};
                        rec.expressions = {{"theta", theta}};
                        out.run(std::move(rec), [&](CaseRecord& r) {
                            if (failure) std::rethrow_exception(failure);
                            judge_predicate(r, *pick(*preds), cfg.tolerance);
                        });
                    }
                }
            }
        }
    }
    return out.take();
}

// --- coincidence suite ---------------------------------------------------------------------

namespace {

struct AngleInstance {
    Instance base;
    std::string angle;
};

double beta_half_width(double c) { return std::min(c, std::numbers::pi / 2 - c) - kBetaGuard; }

// Coincidence-maintaining angle on a constant theta (forward), its violated twin (backward),
// and a coincidence-maintaining angle on a drifting theta.
struct CoincidenceInstances {
    std::optional<AngleInstance> forward;
    std::optional<AngleInstance> backward;
    std::optional<AngleInstance> drift;
    std::string unavailable;
};

CoincidenceInstances coincidence_instances(const SuiteConfig& cfg, Family fam, double k1, double k2, double th,
                                           double a0) {
    CoincidenceInstances ci;
    const std::string ls = local_s(cfg.s0);
    const double len = cfg.s1 - cfg.s0;
    const double thv0 = th + kDriftOffset;
    const double thv1 = thv0 + kDriftSlope * len;
    const std::string theta_v = num(thv0) + " + " + num(kDriftSlope) + "*" + ls;
    switch (fam) {
        case Family::Alpha: {
            auto linear = [&](double slope) {
                AngleInstance ai{base_instance(cfg, k1, k2, num(th)), ""};
                const double start = a0 + std::max(0.0, -slope) * len;
                ai.angle = num(start) + " + " + num(slope) + "*" + ls;
                return ai;
            };
            const double m = std::tanh(th) * k2 - k1;
            ci.forward = linear(m);
            ci.backward = linear(m + cfg.margin);
            // alpha' = tanh(theta(s)) k2 - k1, integrated in closed form
            const double lo = std::min(std::tanh(thv0) * k2 - k1, std::tanh(thv1) * k2 - k1);
            const double start = a0 + std::max(0.0, -lo) * len;
            AngleInstance v{base_instance(cfg, k1, k2, theta_v), ""};
            v.angle = num(start) + " + " + num(k2 / kDriftSlope) + "*(log(cosh(" + theta_v + ")) - " +
                      num(std::log(std::cosh(thv0))) + ") - " + num(k1) + "*" + ls;
            ci.drift = v;
            break;
        }
        case Family::Beta: {
            const double w = beta_half_width(a0);
            if (w <= 0.0) {
                ci.unavailable = "beta start outside (0, pi/2)";
                break;
            }
            if (std::abs(std::tanh(th)) <= cfg.tolerance) {
                ci.unavailable = "coincidence needs (beta' + k2) sinh(theta) = k1 cosh(theta), impossible at theta = 0";
            } else {
                const double m = k1 / std::tanh(th) - k2;
                for (double slope : {m, m + cfg.margin}) {
                    AngleInstance ai{base_instance(cfg, k1, k2, num(th)), ""};
                    fit_window(ai.base, std::max(std::abs(m), std::abs(m + cfg.margin)), w);
                    ai.angle = num(a0) + " + " + num(slope) + "*" + ls;
                    (slope == m ? ci.forward : ci.backward) = ai;
                }
            }
            // beta' = k1 coth(theta(s)) - k2
            const double hi = std::max(std::abs(k1 / std::tanh(thv0) - k2), std::abs(k1 / std::tanh(thv1) - k2));
            AngleInstance v{base_instance(cfg, k1, k2, theta_v), ""};
            fit_window(v.base, hi, w);
            v.angle = num(a0) + " + " + num(k1 / kDriftSlope) + "*(log(sinh(" + theta_v + ")) - " +
                      num(std::log(std::sinh(thv0))) + ") - " + num(k2) + "*" + ls;
            ci.drift = v;
            break;
        }
        case Family::Gamma: {
            ci.forward = AngleInstance{base_instance(cfg, k1, k2, num(th)), num(a0)};
            ci.backward = AngleInstance{base_instance(cfg, k1, k2, num(th)),
                                        num(th + kGammaOffset) + " + " + num(cfg.margin) + "*" + ls};
            if (cfg.branch == Branch::TimelikeRuling) {
                ci.drift = AngleInstance{base_instance(cfg, k1, k2, theta_v), theta_v};
            }
            break;
        }
    }
    return ci;
}

struct SpecialValues {
    double geometric;
    std::optional<double> condition;
};

// Curvature side of the asymptotic / geodesic / line-of-curvature specializations.
struct Specializations {
    SpecialValues asymptotic, geodesic, line_of_curvature;
};

Specializations specializations(const synth::SampledSurface& surf, const TransversalSpec& spec,
                                const Tolerances& tol) {
    const auto preds = ruled::striction_predicates(surf.frames(), tol);
    Specializations out{{preds.asymptotic.geometric_residual, 0.0},
                        {preds.geodesic.geometric_residual, 0.0},
                        {preds.line_of_curvature.geometric_residual, 0.0}};
    const auto& d = surf.data();
    double asym = 0.0, loc = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool asym_ok = true, loc_ok = true, geo_ok = true;
    for (const auto& f : surf.frames()) {
        const double s = f.s;
        const double k1 = d.k1(s), k2 = d.k2(s);
        const double ang = spec.angle(s), dang = spec.angle.derivative(s);
        double fitted = 0.0;
        switch (spec.kind) {
            case Family::Alpha:
                asym = std::max(asym, std::abs(dang));
                if (k2 == 0.0) geo_ok = false;
                else fitted = (dang + k1) / k2;
                loc = std::max(loc, std::abs(dang - (k2 * k2 - k1 * k1) / k1));
                break;
            case Family::Beta:
                asym = std::max(asym, std::abs(dang));
                if (dang + k2 == 0.0) geo_ok = false;
                else fitted = k1 / (dang + k2);
                if (k2 == 0.0) loc_ok = false;
                else loc = std::max(loc, std::abs(dang - (k1 * k1 - k2 * k2) / k2));
                break;
            case Family::Gamma: {
                const bool tl = spec.branch == Branch::TimelikeRuling;
                const double ratio = tl ? std::tanh(ang) : 1.0 / std::tanh(ang);
                if (k2 == 0.0) asym_ok = false;
                else asym = std::max(asym, std::abs(k1 / k2 - ratio));
                fitted = ratio;
                loc = std::max(loc, std::abs(k2 / k1 - ratio));
                break;
            }
        }
        lo = std::min(lo, fitted);
        hi = std::max(hi, fitted);
    }
    out.asymptotic.condition = asym_ok ? std::optional<double>(asym) : std::nullopt;
    out.geodesic.condition = geo_ok ? std::optional<double>(hi - lo) : std::nullopt;
    out.line_of_curvature.condition = loc_ok ? std::optional<double>(loc) : std::nullopt;
    return out;
}

}  // namespace

SuiteReport run_coincidence_suite(const SuiteConfig& cfg) {
    cfg.validate();
    const Tolerances tol = tolerances(cfg);
    const double ctol = cfg.coincidence_tolerance;
    Builder out("coincidence");
    for (Family fam : cfg.families) {
        for (double k1 : cfg.k1_values) {
            for (double k2 : cfg.k2_values) {
                for (double th : theta_grid(cfg, k1, k2)) {
                    for (double a0 : cfg.angle_values) {
                        const CoincidenceInstances ci = coincidence_instances(cfg, fam, k1, k2, th, a0);
                        const std::vector<std::pair<std::string, double>> params{
                            {"k1", k1}, {"k2", k2}, {"theta0", th}, {"angle0", a0}};

                        CaseRecord rec;
                        rec.check = family_name(fam) + "_coincidence";
                        rec.family = family_name(fam);
                        rec.parameters = params;
                        out.run(std::move(rec), [&](CaseRecord& r) {
                            if (!ci.forward || !ci.backward) {
                                r.verdict = Verdict::Skipped;
                                r.reason = ci.unavailable;
                                return;
                            }
                            r.expressions = {{"angle_forward", ci.forward->angle},
                                             {"angle_backward", ci.backward->angle}};
                            const auto fs = ci.forward->base.build(tol);
                            const auto fwd = transversal::coincidence_condition(
                                fs, make_spec(fam, ci.forward->angle, cfg.branch), ctol, tol);
                            const auto bs = ci.backward->base.build(tol);
                            const auto bwd = transversal::coincidence_condition(
                                bs, make_spec(fam, ci.backward->angle, cfg.branch), ctol, tol);
                            const Criterion& fc = need(fwd, "condition_residual");
                            const Criterion& fv = need(fwd, "oracle_strictional_distance");
                            const Criterion& bc = need(bwd, "condition_residual");
                            const Criterion& bv = need(bwd, "oracle_strictional_distance");
                            if (!fc.evaluated || !fv.evaluated || !bc.evaluated || !bv.evaluated) {
                                r.verdict = Verdict::Skipped;
                                r.reason = "closed form or oracle undefined on the instance";
                                return;
                            }
                            r.forward_residual = fc.max_abs;
                            r.backward_residual = bc.min_abs;
                            r.values = {{"forward_max_abs_v", fv.max_abs},
                                        {"backward_min_abs_v", bv.min_abs},
                                        {"backward_max_abs_v", bv.max_abs}};
                            const bool forward_ok = fc.holds && fv.holds;
                            const bool backward_ok = !bc.holds && bv.max_abs >= kBandFactor * ctol;
                            if (!forward_ok || !backward_ok) {
                                r.verdict = Verdict::Fail;
                                r.reason = !forward_ok ? "tuned instance does not coincide"
                                                       : "violated instance does not separate";
                                return;
                            }
                            std::vector<std::string> notes = fwd.discrepancies;
                            notes.insert(notes.end(), bwd.discrepancies.begin(), bwd.discrepancies.end());
                            if (!notes.empty()) {
                                r.verdict = Verdict::Discrepancy;
                                r.reason = notes.front();
                            }
                        });

                        const std::pair<const char*, SpecialValues Specializations::*> kinds[] = {
                            {"_asymptotic_specialization", &Specializations::asymptotic},
                            {"_geodesic_specialization", &Specializations::geodesic},
                            {"_line_of_curvature_specialization", &Specializations::line_of_curvature},
                        };
                        std::vector<std::pair<std::string, const AngleInstance*>> insts;
                        if (fam != Family::Gamma && ci.forward) insts.emplace_back("forward", &*ci.forward);
                        if (ci.drift) insts.emplace_back("drift", &*ci.drift);
                        std::vector<std::pair<std::string, Specializations>> evaluated;
                        std::exception_ptr failure;
                        try {
                            for (const auto& [label, ai] : insts) {
                                const auto surf = ai->base.build(tol);
                                const auto spec = make_spec(fam, ai->angle, cfg.branch);
                                const auto co = transversal::coincidence_condition(surf, spec, ctol, tol);
                                if (!need(co, "oracle_strictional_distance").evaluated) {
                                    throw Error(ErrorCode::CylindricalRuling,
                                                "transversal striction undefined on the " + label + " instance");
                                }
                                if (!need(co, "oracle_strictional_distance").holds) {
                                    throw Error(ErrorCode::InvalidArgument,
                                                label + " instance does not keep the striction curves together");
                                }
                                evaluated.emplace_back(label, specializations(surf, spec, tol));
                            }
                        } catch (const std::exception&) {
                            failure = std::current_exception();
                        }
                        for (const auto& [suffix, member] : kinds) {
                            CaseRecord sr;
                            sr.check = family_name(fam) + suffix;
                            sr.family = family_name(fam);
                            sr.parameters = params;
                            for (const auto& [label, ai] : insts) sr.expressions.emplace_back("angle_" + label, ai->angle);
                            out.run(std::move(sr), [&](CaseRecord& r) {
                                if (failure) std::rethrow_exception(failure);
                                if (insts.empty()) {
                                    r.verdict = Verdict::Skipped;
                                    r.reason = ci.unavailable.empty()
                                                   ? "no coincidence instance with a non-constant angle on this branch"
                                                   : ci.unavailable;
                                    return;
                                }
                                bool any = false, ok = true;
                                for (const auto& [label, sp] : evaluated) {
                                    const SpecialValues& v = sp.*member;
                                    r.values.emplace_back(label + "_geometric", v.geometric);
                                    if (!v.condition) continue;
                                    r.values.emplace_back(label + "_condition", *v.condition);
                                    (label == "forward" ? r.forward_residual : r.backward_residual) = *v.condition;
                                    any = true;
                                    ok = ok && band_agree(v.geometric, *v.condition, cfg.tolerance);
                                }
                                if (!any) {
                                    r.verdict = Verdict::Skipped;
                                    r.reason = "theorem condition undefined on every instance";
                                } else if (!ok) {
                                    r.verdict = Verdict::Fail;
                                    r.reason = "striction predicate and theorem condition disagree";
                                }
                            });
                        }
                    }
                }
            }
        }
    }
    return out.take();
}

// --- developability suite ------------------------------------------------------------------

namespace {

// theta making the closed-form numerator vanish for a constant angle; nullopt when out of range.
std::optional<double> developable_theta(Family fam, Branch branch, double k1, double k2, double a0) {
    double r = 0.0;
    switch (fam) {
        case Family::Alpha: {
            const bool tl = branch == Branch::TimelikeRuling;
            const double eta = tl ? std::sinh(a0) : std::cosh(a0);
            const double ell = tl ? -1.0 : 1.0;
            r = ell * eta * eta * k2 / k1;
            break;
        }
        case Family::Beta: {
            const double c = std::cos(a0);
            r = k2 / (k1 * c * c);
            break;
        }
        case Family::Gamma:
            if (branch != Branch::TimelikeRuling) return std::nullopt;
            return a0;
    }
    if (!(std::abs(r) < 1.0)) return std::nullopt;
    return std::atanh(r);
}

}  // namespace

SuiteReport run_developability_suite(const SuiteConfig& cfg) {
    cfg.validate();
    const Tolerances tol = tolerances(cfg);
    const double etol = cfg.tolerance;
    const std::string ls = local_s(cfg.s0);
    Builder out("developability");

    for (Family fam : cfg.families) {
        for (double k1 : cfg.k1_values) {
            for (double k2 : cfg.k2_values) {
                for (double a0 : cfg.angle_values) {
                    CaseRecord rec;
                    rec.check = family_name(fam) + "_developability";
                    rec.family = family_name(fam);
                    rec.parameters = {{"k1", k1}, {"k2", k2}, {"angle0", a0}};
                    rec.expressions = {{"angle", num(a0)}};
                    out.run(std::move(rec), [&](CaseRecord& r) {
                        const auto th = developable_theta(fam, cfg.branch, k1, k2, a0);
                        if (!th) {
                            r.verdict = Verdict::Skipped;
                            r.reason = "no theta makes the closed-form numerator vanish for this angle";
                            return;
                        }
                        r.parameters.emplace_back("theta_developable", *th);
                        const auto spec = make_spec(fam, num(a0), cfg.branch);
                        const auto fwd = transversal::developability_condition(
                            base_instance(cfg, k1, k2, num(*th)).build(tol), spec, etol, tol);
                        const auto bwd = transversal::developability_condition(
                            base_instance(cfg, k1, k2, num(*th + cfg.margin)).build(tol), spec, etol, tol);
                        const Criterion& fn = need(fwd, "numerator_residual");
                        const Criterion& fo = need(fwd, "oracle_distribution");
                        const Criterion& bn = need(bwd, "numerator_residual");
                        const Criterion& bo = need(bwd, "oracle_distribution");
                        if (!fn.evaluated || !fo.evaluated || !bn.evaluated || !bo.evaluated) {
                            r.verdict = Verdict::Skipped;
                            r.reason = "closed form or oracle undefined on the instance";
                            return;
                        }
                        r.forward_residual = fn.max_abs;
                        r.backward_residual = bn.min_abs;
                        r.values = {{"forward_max_abs_d", fo.max_abs}, {"backward_max_abs_d", bo.max_abs},
                                    {"backward_min_abs_d", bo.min_abs}};
                        const Criterion& fr = need(fwd, "restated_condition");
                        const Criterion& br = need(bwd, "restated_condition");
                        if (fr.evaluated) r.values.emplace_back("forward_restated", fr.max_abs);
                        if (br.evaluated) r.values.emplace_back("backward_restated", br.max_abs);
                        const bool forward_ok = fn.holds && fo.holds;
                        const bool backward_ok = !bn.holds && bo.max_abs >= kBandFactor * etol;
                        if (!forward_ok || !backward_ok) {
                            r.verdict = Verdict::Fail;
                            r.reason = !forward_ok ? "tuned instance is not developable"
                                                   : "perturbed instance stays developable";
                            return;
                        }
                        const bool restated_ok = (!fr.evaluated || fr.holds == fo.holds) &&
                                                 (!br.evaluated || br.holds == bo.holds);
                        if (!restated_ok) {
                            if (fam == Family::Alpha) {
                                r.verdict = Verdict::Discrepancy;
                                r.reason = "restated alpha developability condition disagrees with the oracle; the "
                                           "closed-form numerator agrees";
                            } else {
                                r.verdict = Verdict::Fail;
                                r.reason = "restated developability condition disagrees with the oracle";
                            }
                        }
                    });
                }
            }
        }
    }

    // Developable bases: theta = 0.
    auto judge = [&](CaseRecord& r, const ConditionReport& rep, const char* label) {
        const Criterion& c = need(rep, "corollary_condition");
        const Criterion& o = need(rep, "oracle_distribution");
        if (!c.evaluated || !o.evaluated) throw Error(ErrorCode::DegenerateDenominator, "corollary undefined");
        r.values.emplace_back(std::string(label) + "_condition", c.max_abs);
        r.values.emplace_back(std::string(label) + "_max_abs_d", o.max_abs);
        r.values.emplace_back(std::string(label) + "_min_abs_d", o.min_abs);
        const bool ok = c.holds ? o.holds : (!o.holds && o.max_abs >= kBandFactor * etol);
        return std::pair<bool, double>{ok, c.max_abs};
    };
    for (Family fam : cfg.families) {
        const bool per_k2 = fam != Family::Gamma;
        for (double k1 : cfg.k1_values) {
            for (std::size_t j = 0; j < (per_k2 ? cfg.k2_values.size() : 1); ++j) {
                const double k2 = per_k2 ? cfg.k2_values[j] : 0.0;
                for (double a0 : cfg.angle_values) {
                    CaseRecord rec;
                    rec.check = family_name(fam) + "_developable_base_corollary";
                    rec.family = family_name(fam);
                    rec.parameters = {{"k1", k1}};
                    if (per_k2) rec.parameters.emplace_back("k2", k2);
                    rec.parameters.emplace_back("angle0", a0);
                    out.run(std::move(rec), [&](CaseRecord& r) {
                        bool ok = true;
                        switch (fam) {
                            case Family::Alpha: {
                                r.expressions = {{"angle", num(a0)}};
                                const auto rep = transversal::corollary_checks(
                                    base_instance(cfg, k1, k2, "0").build(tol), make_spec(fam, num(a0), cfg.branch),
                                    etol, tol);
                                const auto [good, res] = judge(r, rep, k2 == 0.0 ? "forward" : "backward");
                                ok = good;
                                (k2 == 0.0 ? r.forward_residual : r.backward_residual) = res;
                                break;
                            }
                            case Family::Beta: {
                                const double w = beta_half_width(a0);
                                if (w <= 0.0) {
                                    r.verdict = Verdict::Skipped;
                                    r.reason = "beta start outside (0, pi/2)";
                                    return;
                                }
                                for (int dir = 0; dir < 2; ++dir) {
                                    const double slope = -k2 + (dir ? cfg.margin : 0.0);
                                    Instance inst = base_instance(cfg, k1, k2, "0");
                                    fit_window(inst, std::max(std::abs(k2), std::abs(-k2 + cfg.margin)), w);
                                    const std::string angle = num(a0) + " + " + num(slope) + "*" + ls;
                                    r.expressions.emplace_back(dir ? "angle_backward" : "angle_forward", angle);
                                    const auto rep = transversal::corollary_checks(
                                        inst.build(tol), make_spec(fam, angle, cfg.branch), etol, tol);
                                    const auto [good, res] = judge(r, rep, dir ? "backward" : "forward");
                                    ok = ok && good && (dir ? !need(rep, "corollary_condition").holds
                                                            : need(rep, "corollary_condition").holds);
                                    (dir ? r.backward_residual : r.forward_residual) = res;
                                }
                                break;
                            }
                            case Family::Gamma: {
                                const bool tl = cfg.branch == Branch::TimelikeRuling;
                                const std::string angle = num(a0) + " + " + num(kGammaSlope) + "*" + ls;
                                // k2 = k1 mu / eta keeps mu k1 - eta k2 = 0 along a moving gamma
                                const std::string k2f =
                                    num(k1) + (tl ? "/tanh(" : "*tanh(") + angle + ")";
                                r.expressions = {{"angle", angle}, {"k2_forward", k2f},
                                                 {"k2_backward", k2f + " + " + num(cfg.margin)}};
                                for (int dir = 0; dir < 2; ++dir) {
                                    Instance inst = base_instance(cfg, k1, 0.0, "0");
                                    inst.k2 = dir ? k2f + " + " + num(cfg.margin) : k2f;
                                    const auto rep = transversal::corollary_checks(
                                        inst.build(tol), make_spec(fam, angle, cfg.branch), etol, tol);
                                    const auto [good, res] = judge(r, rep, dir ? "backward" : "forward");
                                    ok = ok && good && (dir ? !need(rep, "corollary_condition").holds
                                                            : need(rep, "corollary_condition").holds);
                                    (dir ? r.backward_residual : r.forward_residual) = res;
                                }
                                break;
                            }
                        }
                        if (!ok) {
                            r.verdict = Verdict::Fail;
                            r.reason = "corollary condition and oracle distribution parameter disagree";
                        }
                    });
                }
            }
        }
    }
    return out.take();
}

SuiteReport run_all(const SuiteConfig& cfg) {
    SuiteReport all = run_striction_suite(cfg);
    all.append(run_coincidence_suite(cfg));
    all.append(run_developability_suite(cfg));
    return all;
}

}  // namespace ruledlab::verify
