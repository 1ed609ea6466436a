#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ruledlab/expr.hpp"
#include "ruledlab/lorentz.hpp"
#include "ruledlab/ruled.hpp"

namespace ruledlab::synth {

struct InitialFrame {
    Vec3 q, h, a;

    /// eps = -1: q=(1,0,0), h=(0,1,0), a=(0,0,-1).  eps = +1: q=(0,1,0), h=(0,0,-1), a=(1,0,0).
    /// Both satisfy h = a x q and det(q, h, a) = -1.
    static InitialFrame canonical(int epsilon = -1);
};

/// Intrinsic description of an N- surface: curvatures k1(s), k2(s) of the frame equations and
/// the hyperbolic angle theta(s) between the striction tangent and the ruling.
struct IntrinsicData {
    expr::ScalarFunction k1;
    expr::ScalarFunction k2;
    std::optional<expr::ScalarFunction> theta;
    int epsilon{-1};
    double s0{0.0};
    double s1{1.0};
    InitialFrame initial{InitialFrame::canonical(-1)};
    double step{1e-3};

    static IntrinsicData from_strings(const std::string& k1, const std::string& k2,
                                      const std::string& theta, double s0, double s1, double step);

    std::size_t steps() const;       // number of RK4 steps covering [s0, s1]
    double effective_step() const;  // (s1 - s0) / steps()
};

struct FrameState {
    double s;
    Vec3 q, h, a;
};

/// RK4 on dq/ds = k1 h, dh/ds = -eps k1 q + k2 a, da/ds = eps k2 h with Lorentzian Gram-Schmidt
/// re-projection after every step. Throws FrameDegenerate.
std::vector<FrameState> integrate_frame(const IntrinsicData& data, const Tolerances& tol = {});

/// N- surface r(s, v) = c(s) + v q(s) on the RK4 grid, c(s0) = 0.
class SampledSurface {
public:
    SampledSurface(IntrinsicData data, std::vector<ruled::FrameSample> frames);

    const IntrinsicData& data() const { return data_; }
    const std::vector<ruled::FrameSample>& frames() const { return frames_; }
    std::size_t size() const { return frames_.size(); }
    double step() const { return step_; }
    double s0() const { return data_.s0; }

    std::vector<Vec3> striction() const;
    std::vector<Vec3> rulings() const;

    /// Base curve = striction curve, for finite-difference analysis.
    ruled::SampledRuledSurface as_ruled() const;

private:
    IntrinsicData data_;
    std::vector<ruled::FrameSample> frames_;
    double step_;
};

/// Integrates c'(s) = cosh(theta) q + sinh(theta) a alongside the frame. Requires eps = -1.
SampledSurface synthesize_surface(const IntrinsicData& data, const Tolerances& tol = {});

std::vector<double> linspace(double a, double b, std::size_t n);

/// r(s_i, v_j) = c(s_i) + v_j q(s_i), s-major.
std::vector<Vec3> to_explicit_grid(const SampledSurface& surf, double v0, double v1, std::size_t nv);

}  // namespace ruledlab::synth
