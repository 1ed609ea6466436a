#include "ruledlab/transversal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ruledlab/error.hpp"

namespace ruledlab::transversal {

const char* to_string(Family f) {
    switch (f) {
        case Family::Alpha: return "alpha";
        case Family::Beta: return "beta";
        case Family::Gamma: return "gamma";
    }
    return "?";
}

const char* to_string(Branch b) { return b == Branch::TimelikeRuling ? "timelike" : "spacelike"; }

const Criterion* ConditionReport::find(const std::string& name) const {
    for (const auto& c : criteria) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

constexpr double kDenominatorRel = 1e-10;
constexpr double kSuspectRel = 1e-4;

struct Mix {
    double mu;
    double eta;
    int ell;
};

Mix mix(const TransversalSpec& spec, double angle, double s, const Tolerances& tol) {
    Mix m{};
    if (spec.kind == Family::Beta) {
        m = {std::cos(angle), std::sin(angle), 1};
    } else if (spec.branch == Branch::TimelikeRuling) {
        m = {std::cosh(angle), std::sinh(angle), -1};
    } else {
        m = {std::sinh(angle), std::cosh(angle), 1};
    }
    if (std::abs(m.mu) <= tol.general_eps || std::abs(m.eta) <= tol.general_eps) {
        throw Error(ErrorCode::TrivialRuling, std::string(to_string(spec.kind)) +
                                                  " ruling degenerates onto a frame vector at s = " +
                                                  std::to_string(s));
    }
    return m;
}

// Ingredients of the closed forms at one s.
struct Forms {
    Mix m;
    double k1, k2, theta;
    double den;
    double v_num;
    double d_num;
    double d_num_via_d;
    double coincidence;
    std::optional<double> restated;
    double corollary;
    double angle_d;
    double tanh_factor;  // Gamma: mu sinh(theta) - eta cosh(theta)
};

Forms forms(const synth::SampledSurface& surf, const TransversalSpec& spec, double s, const Tolerances& tol) {
    const synth::IntrinsicData& data = surf.data();
    if (!data.theta) throw Error(ErrorCode::InvalidArgument, "base surface has no theta");
    Forms f{};
    f.k1 = data.k1(s);
    f.k2 = data.k2(s);
    f.theta = (*data.theta)(s);
    f.m = mix(spec, spec.angle(s), s, tol);
    f.angle_d = spec.angle.derivative(s);
    const double ch = std::cosh(f.theta);
    const double sh = std::sinh(f.theta);
    const double mu = f.m.mu;
    const double eta = f.m.eta;
    const double ell = f.m.ell;
    const double d = -sh / f.k1;
    double t1 = 0.0;
    double t2 = 0.0;
    double scale = 0.0;  // square of the summed magnitudes entering the denominator
    switch (spec.kind) {
        case Family::Alpha: {
            const double A = f.angle_d + f.k1;
            t1 = eta * eta * f.k2 * f.k2;
            t2 = -ell * A * A;
            scale = std::abs(eta * f.k2) + std::abs(A);
            f.v_num = eta * (ch * A - sh * f.k2);
            f.d_num = ell * A * sh - eta * eta * f.k2 * ch;
            f.d_num_via_d = -(ell * d * f.k1 * A + eta * eta * f.k2 * ch);
            f.coincidence = ch * A - sh * f.k2;
            if (f.k2 != 0.0) f.restated = std::tanh(f.theta) - ell * A / (mu * mu * f.k2);
            f.corollary = f.k2;
            break;
        }
        case Family::Beta: {
            const double B = f.angle_d + f.k2;
            t1 = B * B;
            t2 = -f.k1 * f.k1 * mu * mu;
            scale = std::abs(B) + std::abs(f.k1 * mu);
            f.v_num = mu * (B * sh - f.k1 * ch);
            f.d_num = f.k1 * mu * mu * sh - B * ch;
            f.d_num_via_d = -(d * f.k1 * f.k1 * mu * mu + B * ch);
            f.coincidence = B * sh - f.k1 * ch;
            if (f.k1 != 0.0) f.restated = std::tanh(f.theta) - B / (f.k1 * mu * mu);
            f.corollary = B;
            break;
        }
        case Family::Gamma: {
            const double G = mu * f.k1 - eta * f.k2;
            t1 = G * G;
            t2 = -ell * f.angle_d * f.angle_d;
            scale = std::abs(mu * f.k1) + std::abs(eta * f.k2) + std::abs(f.angle_d);
            f.tanh_factor = mu * sh - eta * ch;
            f.v_num = f.angle_d * f.tanh_factor;
            f.d_num = (eta * ch - mu * sh) * G;
            f.d_num_via_d = (eta * ch + f.k1 * d * mu) * G;
            f.coincidence = f.angle_d * f.tanh_factor;
            double r = std::abs(std::tanh(f.theta) - eta / mu);
            if (f.k2 != 0.0) r = std::min(r, std::abs(f.k1 / f.k2 - eta / mu));
            f.restated = r;
            f.corollary = G;
            break;
        }
    }
    f.den = t1 + t2;
    if (std::abs(f.den) <= kDenominatorRel * scale * scale || f.den == 0.0) {
        throw Error(ErrorCode::DegenerateDenominator,
                    std::string(to_string(spec.kind)) + " closed form denominator vanishes at s = " +
                        std::to_string(s));
    }
    return f;
}

Ruling ruling_at(const Vec3& q, const Vec3& h, const Vec3& a, const TransversalSpec& spec, double s,
                 const Tolerances& tol) {
    const Mix m = mix(spec, spec.angle(s), s, tol);
    Ruling r{};
    r.mu = m.mu;
    r.eta = m.eta;
    switch (spec.kind) {
        case Family::Alpha: r.q = m.mu * q + m.eta * h; break;
        case Family::Beta: r.q = m.mu * h + m.eta * a; break;
        case Family::Gamma: r.q = m.mu * q + m.eta * a; break;
    }
    r.ell = spec.kind == Family::Beta ? 1 : (m.eta * m.eta - m.mu * m.mu > 0.0 ? 1 : -1);
    return r;
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

struct Oracle {
    ruled::SampledRuledSurface surface;
    std::vector<int> ell;
};

Oracle oracle_surface(const synth::SampledSurface& surf, const TransversalSpec& spec, const Tolerances& tol) {
    Oracle o;
    o.surface.u0 = surf.s0();
    o.surface.du = surf.step();
    o.surface.base.reserve(surf.size());
    o.surface.ruling.reserve(surf.size());
    for (const auto& fr : surf.frames()) {
        const Ruling r = make_ruling(fr, spec, tol);
        o.surface.base.push_back(fr.c);
        o.surface.ruling.push_back(r.q);
        o.ell.push_back(r.ell);
    }
    return o;
}

struct Stat {
    double max_abs{0.0};
    double min_abs{std::numeric_limits<double>::infinity()};
    std::size_t count{0};

    void add(double x) {
        const double a = std::abs(x);
        max_abs = std::max(max_abs, a);
        min_abs = std::min(min_abs, a);
        ++count;
    }

    Criterion criterion(std::string name, double tolerance) const {
        Criterion c;
        c.name = std::move(name);
        c.evaluated = count > 0;
        c.max_abs = count > 0 ? max_abs : 0.0;
        c.min_abs = count > 0 ? min_abs : 0.0;
        c.holds = c.evaluated && max_abs <= tolerance;
        return c;
    }
};

}  // namespace

Ruling make_ruling(const ruled::FrameSample& frame, const TransversalSpec& spec, const Tolerances& tol) {
    return ruling_at(frame.q, frame.h, frame.a, spec, frame.s, tol);
}

double strictional_distance_closed(const synth::SampledSurface& surf, const TransversalSpec& spec, double s,
                                   const Tolerances& tol) {
    const Forms f = forms(surf, spec, s, tol);
    return f.v_num / f.den;
}

double distribution_closed(const synth::SampledSurface& surf, const TransversalSpec& spec, double s,
                           const Tolerances& tol) {
    const Forms f = forms(surf, spec, s, tol);
    return f.d_num / f.den;
}

Relation relation_via_d(const synth::SampledSurface& surf, const TransversalSpec& spec, double s,
                        const Tolerances& tol) {
    const Forms f = forms(surf, spec, s, tol);
    if (f.k1 == 0.0) throw Error(ErrorCode::DomainError, "base distribution parameter undefined for k1 = 0");
    return {f.d_num / f.den, f.d_num_via_d / f.den};
}

TransversalGrid to_explicit(const synth::SampledSurface& surf, const TransversalSpec& spec, double v0, double v1,
                            std::size_t nv, const Tolerances& tol) {
    if (nv < 2) throw Error(ErrorCode::InvalidArgument, "need at least two v samples");
    Oracle o = oracle_surface(surf, spec, tol);
    TransversalGrid g;
    g.ns = surf.size();
    g.nv = nv;
    g.v_values = synth::linspace(v0, v1, nv);
    g.grid.reserve(g.ns * nv);
    for (std::size_t i = 0; i < g.ns; ++i) {
        for (double v : g.v_values) g.grid.push_back(o.surface.base[i] + v * o.surface.ruling[i]);
    }
    g.surface = std::move(o.surface);
    g.ell = std::move(o.ell);
    return g;
}

std::vector<TransversalSample> sample_transversal(const synth::SampledSurface& surf, const TransversalSpec& spec,
                                                  const Tolerances& tol) {
    const Oracle o = oracle_surface(surf, spec, tol);
    std::vector<TransversalSample> out;
    out.reserve(surf.size());
    for (std::size_t i = 0; i < surf.size(); ++i) {
        TransversalSample t;
        t.s = surf.frames()[i].s;
        t.q_t = o.surface.ruling[i];
        t.ell = o.ell[i];
        if (std::abs(lorentz_dot(t.q_t, t.q_t) - t.ell) > tol.general_eps) {
            t.issues.push_back("ruling norm differs from its causal sign");
        }
        try {
            const Forms f = forms(surf, spec, t.s, tol);
            t.v_closed = f.v_num / f.den;
            t.d_closed = f.d_num / f.den;
            if (f.k1 != 0.0) t.d_relation = f.d_num_via_d / f.den;
        } catch (const Error& e) {
            t.issues.push_back(e.what());
        }
        try {
            t.v_oracle = ruled::striction(o.surface, i, tol).v0;
            t.d_oracle = ruled::distribution_parameter(o.surface, i, tol);
        } catch (const Error& e) {
            t.issues.push_back(e.what());
        }
        if (t.v_closed && t.v_oracle && rel_diff(*t.v_closed, *t.v_oracle) > kSuspectRel) {
            t.issues.push_back("closed-form strictional distance disagrees with oracle");
        }
        if (t.d_closed && t.d_oracle && rel_diff(*t.d_closed, *t.d_oracle) > kSuspectRel) {
            t.issues.push_back("closed-form distribution parameter disagrees with oracle");
        }
        out.push_back(std::move(t));
    }
    return out;
}

namespace {

// Closed forms skipped where they degenerate; oracle values always taken.
struct Sweep {
    std::vector<TransversalSample> samples;
    std::vector<std::optional<Forms>> forms;
};

Sweep sweep(const synth::SampledSurface& surf, const TransversalSpec& spec, const Tolerances& tol) {
    Sweep sw;
    sw.samples = sample_transversal(surf, spec, tol);
    sw.forms.reserve(sw.samples.size());
    for (const auto& t : sw.samples) {
        try {
            sw.forms.emplace_back(forms(surf, spec, t.s, tol));
        } catch (const Error&) {
            sw.forms.emplace_back(std::nullopt);
        }
    }
    return sw;
}

void note_closed_mismatch(const Sweep& sw, ConditionReport& rep, bool strictional) {
    std::size_t bad = 0;
    double worst = 0.0;
    for (const auto& t : sw.samples) {
        const auto& c = strictional ? t.v_closed : t.d_closed;
        const auto& o = strictional ? t.v_oracle : t.d_oracle;
        if (c && o) {
            const double r = rel_diff(*c, *o);
            worst = std::max(worst, r);
            if (r > kSuspectRel) ++bad;
        }
    }
    if (bad > 0) {
        rep.discrepancies.push_back(std::string(strictional ? "closed-form strictional distance"
                                                            : "closed-form distribution parameter") +
                                    " disagrees with oracle at " + std::to_string(bad) +
                                    " samples (max relative difference " + std::to_string(worst) + ")");
    }
}

}  // namespace

ConditionReport coincidence_condition(const synth::SampledSurface& surf, const TransversalSpec& spec,
                                      double tolerance, const Tolerances& tol) {
    const Sweep sw = sweep(surf, spec, tol);
    Stat cond, v_oracle, v_closed, angle_d, tanh_factor;
    for (std::size_t i = 0; i < sw.samples.size(); ++i) {
        const auto& t = sw.samples[i];
        if (t.v_oracle) v_oracle.add(*t.v_oracle);
        if (t.v_closed) v_closed.add(*t.v_closed);
        if (const auto& f = sw.forms[i]) {
            cond.add(f->coincidence);
            if (spec.kind == Family::Gamma) {
                angle_d.add(f->angle_d);
                tanh_factor.add(f->tanh_factor);
            }
        }
    }
    ConditionReport rep;
    rep.criteria.push_back(cond.criterion("condition_residual", tolerance));
    rep.criteria.push_back(v_oracle.criterion("oracle_strictional_distance", tolerance));
    rep.criteria.push_back(v_closed.criterion("closed_strictional_distance", tolerance));
    if (spec.kind == Family::Gamma) {
        rep.criteria.push_back(angle_d.criterion("angle_constant", tolerance));
        rep.criteria.push_back(tanh_factor.criterion("tanh_factor", tolerance));
    }
    const Criterion& c = rep.criteria[0];
    const Criterion& o = rep.criteria[1];
    rep.consistent = c.evaluated && o.evaluated && c.holds == o.holds;
    if (!rep.consistent) rep.notes.push_back("condition residual and oracle strictional distance disagree");
    note_closed_mismatch(sw, rep, true);
    return rep;
}

ConditionReport developability_condition(const synth::SampledSurface& surf, const TransversalSpec& spec,
                                         double tolerance, const Tolerances& tol) {
    const Sweep sw = sweep(surf, spec, tol);
    Stat numerator, restated, d_oracle, d_closed;
    for (std::size_t i = 0; i < sw.samples.size(); ++i) {
        const auto& t = sw.samples[i];
        if (t.d_oracle) d_oracle.add(*t.d_oracle);
        if (t.d_closed) d_closed.add(*t.d_closed);
        if (const auto& f = sw.forms[i]) {
            numerator.add(f->d_num);
            if (f->restated) restated.add(*f->restated);
        }
    }
    ConditionReport rep;
    rep.criteria.push_back(numerator.criterion("numerator_residual", tolerance));
    rep.criteria.push_back(restated.criterion("restated_condition", tolerance));
    rep.criteria.push_back(d_oracle.criterion("oracle_distribution", tolerance));
    rep.criteria.push_back(d_closed.criterion("closed_distribution", tolerance));
    const Criterion& n = rep.criteria[0];
    const Criterion& r = rep.criteria[1];
    const Criterion& o = rep.criteria[2];
    rep.consistent = n.evaluated && o.evaluated && n.holds == o.holds;
    if (!rep.consistent) rep.notes.push_back("closed-form numerator and oracle distribution parameter disagree");
    if (!r.evaluated) {
        rep.notes.push_back("restated condition undefined on this instance");
    } else if (r.holds != o.holds) {
        rep.discrepancies.push_back(std::string("restated developability condition for the ") +
                                    to_string(spec.kind) + " family " + (r.holds ? "holds" : "fails") +
                                    " while the oracle distribution parameter " + (o.holds ? "vanishes" : "does not"));
    }
    note_closed_mismatch(sw, rep, false);
    return rep;
}

ConditionReport corollary_checks(const synth::SampledSurface& surf, const TransversalSpec& spec, double tolerance,
                                 const Tolerances& tol) {
    const ruled::SampledRuledSurface base = surf.as_ruled();
    double base_d = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        base_d = std::max(base_d, std::abs(ruled::distribution_parameter(base, i, tol)));
    }
    if (base_d > tolerance) {
        throw Error(ErrorCode::BaseNotDevelopable,
                    "base distribution parameter reaches " + std::to_string(base_d));
    }
    const Sweep sw = sweep(surf, spec, tol);
    Stat cond, d_oracle;
    for (std::size_t i = 0; i < sw.samples.size(); ++i) {
        if (sw.samples[i].d_oracle) d_oracle.add(*sw.samples[i].d_oracle);
        if (const auto& f = sw.forms[i]) cond.add(f->corollary);
    }
    ConditionReport rep;
    rep.criteria.push_back(cond.criterion("corollary_condition", tolerance));
    rep.criteria.push_back(d_oracle.criterion("oracle_distribution", tolerance));
    Criterion bd;
    bd.name = "base_distribution";
    bd.max_abs = base_d;
    bd.holds = true;
    rep.criteria.push_back(bd);
    const Criterion& c = rep.criteria[0];
    const Criterion& o = rep.criteria[1];
    rep.consistent = c.evaluated && o.evaluated && c.holds == o.holds;
    if (!rep.consistent) rep.notes.push_back("corollary condition and oracle distribution parameter disagree");
    if (spec.kind == Family::Gamma) {
        rep.notes.push_back("the gamma corollary names the surface N' where the gamma-transversal surface is meant");
    }
    return rep;
}

}  // namespace ruledlab::transversal
