#include "ruled_core.hpp"

#include <cmath>

#include "ruledlab/error.hpp"

namespace ruledlab::ruled::detail {

void check_ruling_derivative(const Vec3& qd, const Tolerances& tol) {
    const double e = euclid_norm(qd);
    if (e <= kCylindricalThreshold) {
        throw Error(ErrorCode::CylindricalRuling, "ruling derivative vanishes");
    }
    if (std::abs(lorentz_dot(qd, qd)) <= tol.causal_eps * e * e) {
        throw Error(ErrorCode::NullDerivative, "ruling derivative is null");
    }
}

double distribution_from(const Vec3& fd, const Vec3& q, const Vec3& qd, const Tolerances& tol) {
    check_ruling_derivative(qd, tol);
    return det3(fd, q, qd) / lorentz_dot(qd, qd);
}

Striction striction_from(const Vec3& f, const Vec3& fd, const Vec3& q, const Vec3& qd,
                         const Tolerances& tol) {
    check_ruling_derivative(qd, tol);
    const double v0 = -lorentz_dot(qd, fd) / lorentz_dot(qd, qd);
    return {v0, f + v0 * q};
}

VecJet unit_ruling(const VecJet& q) {
    Jet g = lorentz_dot(q, q);
    if (g.value() < 0) g = -g;
    return q / sqrt(g);
}

namespace {

struct StrictionJets {
    VecJet c;   // valid to order-1 of the inputs
    VecJet cu;  // valid to order-2 of the inputs
    Jet speed_sq;
};

StrictionJets striction_jets(const VecJet& f, const VecJet& q, const Tolerances& tol) {
    const VecJet qd = q.d();
    const VecJet fd = f.d();
    check_ruling_derivative(qd.value(), tol);
    const Jet v0 = -(lorentz_dot(qd, fd) / lorentz_dot(qd, qd));
    StrictionJets out;
    out.c = f + v0 * q;
    out.cu = out.c.d();
    out.speed_sq = lorentz_dot(out.cu, out.cu);
    return out;
}

}  // namespace

double striction_speed(const VecJet& f, const VecJet& q, const Tolerances& tol) {
    return std::sqrt(std::abs(striction_jets(f, q, tol).speed_sq.value()));
}

FrameSample frame_from_jets(const VecJet& f, const VecJet& q_in, bool third, const Tolerances& tol) {
    const VecJet& q = q_in;
    const Vec3 q0 = q.value();
    const double qq = lorentz_dot(q0, q0);
    const int eps = qq < 0 ? -1 : 1;

    const StrictionJets sj = striction_jets(f, q, tol);
    const Vec3 cu0 = sj.cu.value();
    const double g0 = sj.speed_sq.value();
    const double scale = euclid_dot(cu0, cu0);
    if (scale <= 1e-24) {
        throw Error(ErrorCode::SingularStriction, "striction curve is stationary");
    }

    FrameSample out;
    out.epsilon = eps;
    out.c = sj.c.value();
    out.q = q0;
    if (std::abs(g0) <= tol.causal_eps * scale) {
        out.striction_character = CausalCharacter::Null;
        throw Error(ErrorCode::SingularStriction, "striction curve is null; arc length undefined");
    }
    out.striction_character = g0 < 0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;

    const Jet speed = sqrt(g0 < 0 ? -sj.speed_sq : sj.speed_sq);
    const VecJet qd = q.d();
    Jet qd_sq = lorentz_dot(qd, qd);
    if (qd_sq.value() < 0) qd_sq = -qd_sq;

    // Arc length increases along the time orientation of q (cosh(theta) > 0 in c' = cosh q + sinh a).
    VecJet t = sj.cu / speed;
    double sigma = 1.0;
    if (out.striction_character == CausalCharacter::Timelike && eps * lorentz_dot(t.value(), q0) < 0) {
        sigma = -1.0;
        t = -t;
    }

    // a is oriented so that k1 = <dq/ds, h> is positive; h = a x q then gives det(q, h, a) = -1.
    const VecJet a = -sigma * (lorentz_cross(qd, q) / sqrt(qd_sq));
    const VecJet h = lorentz_cross(a, q);
    const double ds_du = sigma * speed.value();

    out.h = h.value();
    out.a = a.value();
    out.c_s = t.value();
    out.k1 = lorentz_dot(qd.value(), out.h) / ds_du;
    out.k2 = eps * lorentz_dot(a.d().value(), out.h) / ds_du;
    const Vec3 dh = h.d().value() / ds_du;
    out.k2_from_h = -eps * lorentz_dot(dh, out.a);
    out.structure_residual = euclid_norm(dh - (-eps * out.k1 * out.q + out.k2 * out.a));

    if (out.striction_character == CausalCharacter::Timelike) {
        const Jet sh = -eps * lorentz_dot(t, a);
        out.theta = std::asinh(sh.value());
        if (third) {
            out.theta_s = sh.derivative(1) / std::sqrt(1.0 + sh.value() * sh.value()) / ds_du;
        }
    }
    if (third) {
        out.c_ss = t.d().value() / ds_du;
        out.h_s = dh;
    }
    return out;
}

}  // namespace ruledlab::ruled::detail
