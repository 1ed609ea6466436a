#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ruledlab/expr.hpp"
#include "ruledlab/lorentz.hpp"
#include "ruledlab/ruled.hpp"
#include "ruledlab/synthesis.hpp"

namespace ruledlab::transversal {

/// Plane the transversal ruling is rotated in: span{q,h} (Alpha), span{h,a} (Beta), span{q,a} (Gamma).
enum class Family { Alpha, Beta, Gamma };

/// Causal character requested for an Alpha/Gamma ruling; picks (mu, eta) = (cosh, sinh) or (sinh, cosh).
enum class Branch { TimelikeRuling, SpacelikeRuling };

const char* to_string(Family f);
const char* to_string(Branch b);

struct TransversalSpec {
    Family kind{Family::Alpha};
    expr::ScalarFunction angle;
    Branch branch{Branch::TimelikeRuling};
};

struct Ruling {
    Vec3 q;
    int ell;     // <q_T, q_T>
    double mu;   // coefficient of the first spanning vector (cos(beta) for Beta)
    double eta;  // coefficient of the second spanning vector (sin(beta) for Beta)
};

/// Alpha: mu q + eta h.  Beta: cos(beta) h + sin(beta) a.  Gamma: mu q + eta a.
/// Throws TrivialRuling when the combination collapses onto a frame vector.
Ruling make_ruling(const ruled::FrameSample& frame, const TransversalSpec& spec, const Tolerances& tol = {});

/// Printed closed form of the strictional distance of the transversal surface at s.
/// k1, k2, theta are the exact synthesis inputs. Throws DegenerateDenominator, TrivialRuling.
double strictional_distance_closed(const synth::SampledSurface& surf, const TransversalSpec& spec, double s,
                                   const Tolerances& tol = {});

/// Printed closed form of the distribution parameter of the transversal surface at s.
double distribution_closed(const synth::SampledSurface& surf, const TransversalSpec& spec, double s,
                           const Tolerances& tol = {});

struct Relation {
    double lhs;  // closed-form distribution parameter
    double rhs;  // same quantity rewritten through the base drall d = -sinh(theta)/k1
};

Relation relation_via_d(const synth::SampledSurface& surf, const TransversalSpec& spec, double s,
                        const Tolerances& tol = {});

/// Explicit transversal surface c(s) + v q_T(s) on the base grid.
struct TransversalGrid {
    std::size_t ns{0};
    std::size_t nv{0};
    std::vector<double> v_values;
    std::vector<Vec3> grid;              // s-major
    ruled::SampledRuledSurface surface;  // base = striction curve of the base surface, ruling = q_T
    std::vector<int> ell;
};

TransversalGrid to_explicit(const synth::SampledSurface& surf, const TransversalSpec& spec, double v0, double v1,
                            std::size_t nv, const Tolerances& tol = {});

struct TransversalSample {
    double s{0.0};
    Vec3 q_t;
    int ell{1};
    std::optional<double> v_closed;
    std::optional<double> d_closed;
    std::optional<double> v_oracle;  // generic striction formula on the explicit parametrization
    std::optional<double> d_oracle;  // generic drall formula on the explicit parametrization
    std::optional<double> d_relation;
    std::vector<std::string> issues;
};

/// Closed forms and oracle values at every base sample.
std::vector<TransversalSample> sample_transversal(const synth::SampledSurface& surf, const TransversalSpec& spec,
                                                  const Tolerances& tol = {});

struct Criterion {
    std::string name;
    double max_abs{0.0};
    double min_abs{0.0};
    bool holds{false};  // max_abs <= tolerance
    bool evaluated{true};
};

struct ConditionReport {
    std::vector<Criterion> criteria;
    bool consistent{true};                   // criteria that must agree do agree
    std::vector<std::string> discrepancies;  // restated conditions that disagree with the oracle
    std::vector<std::string> notes;

    const Criterion* find(const std::string& name) const;
};

/// Does the transversal striction curve coincide with the base one? Compares the vanishing of
/// the curvature condition with max |v_T| of the oracle.
ConditionReport coincidence_condition(const synth::SampledSurface& surf, const TransversalSpec& spec,
                                      double tolerance, const Tolerances& tol = {});

/// Developability: closed-form numerator, restated tanh condition, and oracle drall.
ConditionReport developability_condition(const synth::SampledSurface& surf, const TransversalSpec& spec,
                                         double tolerance, const Tolerances& tol = {});

/// On a developable base (theta = 0): Alpha developable iff k2 = 0, Beta iff beta' = -k2,
/// Gamma iff mu k1 = eta k2.  Throws BaseNotDevelopable.
ConditionReport corollary_checks(const synth::SampledSurface& surf, const TransversalSpec& spec,
                                 double tolerance, const Tolerances& tol = {});

}  // namespace ruledlab::transversal
