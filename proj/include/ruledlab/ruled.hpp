#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ruledlab/expr.hpp"
#include "ruledlab/jet.hpp"
#include "ruledlab/lorentz.hpp"

namespace ruledlab::ruled {

/// ||q'|| at or below this is treated as a cylindrical (constant-direction) ruling.
inline constexpr double kCylindricalThreshold = 1e-8;

/// r(u, v) = f(u) + v q(u), with f and q given as expressions in the variable `s` (read as u).
class ExplicitSurface {
public:
    ExplicitSurface(std::array<expr::Expr, 3> f, std::array<expr::Expr, 3> q, double u0, double u1,
                    bool normalize_q = false);

    /// Parses six component strings.
    static ExplicitSurface from_strings(const std::array<std::string, 3>& f,
                                        const std::array<std::string, 3>& q, double u0, double u1,
                                        bool normalize_q = false);

    double u0() const { return u0_; }
    double u1() const { return u1_; }
    bool normalize_q() const { return normalize_q_; }

    Vec3 base(double u) const;
    Vec3 ruling(double u) const;  // as given, not normalized

    /// Jets of f and q at u, seeded from the symbolic derivatives up to `order` (<= 3).
    VecJet base_jet(double u, int order = 3) const;
    VecJet ruling_jet(double u, int order = 3) const;

    const std::array<expr::Expr, 3>& base_expr() const { return f_[0]; }
    const std::array<expr::Expr, 3>& ruling_expr() const { return q_[0]; }

private:
    // chains indexed [derivative order][component]
    std::array<std::array<expr::Expr, 3>, 4> f_;
    std::array<std::array<expr::Expr, 3>, 4> q_;
    double u0_;
    double u1_;
    bool normalize_q_;
};

/// Base curve and ruling sampled on a uniform parameter grid; derivatives by finite differences.
struct SampledRuledSurface {
    double u0{0.0};
    double du{1.0};
    std::vector<Vec3> base;
    std::vector<Vec3> ruling;

    std::size_t size() const { return base.size(); }
    double parameter(std::size_t i) const { return u0 + du * static_cast<double>(i); }
};

struct FrameSample {
    double s{0.0};  // arc length of the striction curve
    double u{0.0};  // surface parameter the sample was taken at
    Vec3 c;         // striction point
    Vec3 q, h, a;
    double k1{0.0};
    double k2{0.0};
    std::optional<double> theta;  // present only for a timelike striction curve
    int epsilon{-1};              // <q, q>
    CausalCharacter striction_character{CausalCharacter::Timelike};

    // Derivatives along the striction curve w.r.t. s; filled when known exactly.
    std::optional<Vec3> c_s;
    std::optional<Vec3> c_ss;
    std::optional<Vec3> h_s;
    std::optional<double> theta_s;

    double k2_from_h{0.0};         // k2 re-extracted from dh/ds
    double structure_residual{0.0};  // |dh/ds - (-eps k1 q + k2 a)| (Euclidean)
};

struct Striction {
    double v0;
    Vec3 point;
};

// --- expression-backed surfaces -------------------------------------------------------------

Vec3 surface_point(const ExplicitSurface& n, double u, double v);

/// det(f', q, q') / <q', q'>.  Throws CylindricalRuling, NullDerivative.
double distribution_parameter(const ExplicitSurface& n, double u, const Tolerances& tol = {});

/// Throws DegenerateNormal when the surface is not timelike at (u, v).
Vec3 unit_normal(const ExplicitSurface& n, double u, double v, const Tolerances& tol = {});

/// (q' x q) / ||q'||.
Vec3 asymptotic_normal(const ExplicitSurface& n, double u, const Tolerances& tol = {});

Striction striction(const ExplicitSurface& n, double u, const Tolerances& tol = {});

/// Frame {q, h, a} on the striction curve with k1, k2, theta and exact s-derivatives.
/// The returned s is the arc length measured from u0.
FrameSample frenet_frame_at(const ExplicitSurface& n, double u, const Tolerances& tol = {});

/// sqrt|<c_u, c_u>| for the striction curve c(u).
double striction_speed(const ExplicitSurface& n, double u, const Tolerances& tol = {});

/// Frames at `count` points equally spaced in striction arc length.
std::vector<FrameSample> sample_frames(const ExplicitSurface& n, std::size_t count,
                                       const Tolerances& tol = {});

// --- sample-backed surfaces -------------------------------------------------------------------

double distribution_parameter(const SampledRuledSurface& n, std::size_t i, const Tolerances& tol = {});
Striction striction(const SampledRuledSurface& n, std::size_t i, const Tolerances& tol = {});
FrameSample frenet_frame_at(const SampledRuledSurface& n, std::size_t i, const Tolerances& tol = {});

/// Recovers base curve and ruling from an s-major grid r(s_i, v_j); needs at least two v columns.
SampledRuledSurface from_grid(const std::vector<Vec3>& grid, std::size_t ns, double s0, double ds,
                              std::span<const double> v_values);

/// Derivative of order 1 or 2 of uniformly spaced samples at index i (fourth-order stencils,
/// one-sided near the ends).
Vec3 finite_difference(std::span<const Vec3> samples, double spacing, std::size_t i, int order);
double finite_difference(std::span<const double> samples, double spacing, std::size_t i, int order);

// --- classification and predicates ----------------------------------------------------------

struct SurfaceClassification {
    std::optional<CausalCharacter> ruling_character;  // Timelike: N-, Spacelike: N+
    std::optional<bool> developable;
    std::optional<bool> conoid;
    std::optional<bool> cylindrical;
    double max_abs_d{0.0};
    std::vector<std::string> notes;
};

SurfaceClassification classify(const ExplicitSurface& n, std::size_t samples, const Tolerances& tol = {});

/// Classification of a sampled surface; k1/k2 come from `frames` when given.
SurfaceClassification classify(const SampledRuledSurface& n, std::span<const FrameSample> frames,
                               const Tolerances& tol = {});

struct PredicateResult {
    std::string name;
    double geometric_residual{0.0};
    std::optional<double> curvature_residual;  // absent when the ratio is undefined (zero divisor)
    bool satisfiable{true};                    // |ratio| < 1 everywhere, so tanh(theta) can match it
    bool geometric_holds{false};
    bool curvature_holds{false};
    bool agree{false};
};

struct PredicateReport {
    PredicateResult asymptotic;
    PredicateResult geodesic;
    PredicateResult line_of_curvature;
    std::size_t samples{0};
};

/// Asymptotic-line / geodesic / line-of-curvature tests on a timelike striction curve, each
/// evaluated geometrically (c'', h') and through the curvature condition on (k1, k2, theta).
/// Missing s-derivatives are filled by finite differences along the (uniform) s grid.
PredicateReport striction_predicates(std::span<const FrameSample> frames, const Tolerances& tol = {});

/// Fills c_s, c_ss, h_s by finite differences along a uniform s grid.
void attach_derivatives(std::vector<FrameSample>& frames);

}  // namespace ruledlab::ruled
