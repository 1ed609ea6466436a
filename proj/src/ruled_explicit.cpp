#include <algorithm>
#include <cmath>

#include "ruled_core.hpp"
#include "ruledlab/arclength.hpp"
#include "ruledlab/error.hpp"
#include "ruledlab/ruled.hpp"

namespace ruledlab::ruled {

namespace {

std::array<std::array<expr::Expr, 3>, 4> chains(const std::array<expr::Expr, 3>& e) {
    std::array<std::array<expr::Expr, 3>, 4> out;
    for (int k = 0; k < 3; ++k) {
        const auto chain = expr::derivative_chain<3>(e[k]);
        for (int d = 0; d <= 3; ++d) out[d][k] = chain[d];
    }
    return out;
}

VecJet seed(const std::array<std::array<expr::Expr, 3>, 4>& chain, double u, int order) {
    std::array<Jet, 3> comps;
    for (int k = 0; k < 3; ++k) {
        double d[4] = {0, 0, 0, 0};
        for (int o = 0; o <= order; ++o) d[o] = chain[o][k].eval(u);
        comps[k] = Jet::from_derivatives(d[0], d[1], d[2], d[3]);
    }
    return {comps[0], comps[1], comps[2]};
}

struct Local {
    VecJet f;
    VecJet q;
};

// Jets of f and of the unit ruling.
Local local_jets(const ExplicitSurface& n, double u, int order, const Tolerances& tol) {
    Local l{n.base_jet(u, order), n.ruling_jet(u, order)};
    const double qq = lorentz_dot(l.q.value(), l.q.value());
    if (n.normalize_q()) {
        if (std::abs(qq) <= tol.causal_eps) throw Error(ErrorCode::NullInput, "ruling is null");
        l.q = detail::unit_ruling(l.q);
    } else if (std::abs(std::abs(qq) - 1.0) > tol.general_eps) {
        throw Error(ErrorCode::InvalidArgument, "ruling is not unit; enable normalize_q");
    }
    return l;
}

}  // namespace

ExplicitSurface::ExplicitSurface(std::array<expr::Expr, 3> f, std::array<expr::Expr, 3> q, double u0,
                                 double u1, bool normalize_q)
    : f_(chains(f)), q_(chains(q)), u0_(u0), u1_(u1), normalize_q_(normalize_q) {
    if (!(u1 > u0)) throw Error(ErrorCode::InvalidArgument, "empty parameter range");
}

ExplicitSurface ExplicitSurface::from_strings(const std::array<std::string, 3>& f,
                                              const std::array<std::string, 3>& q, double u0, double u1,
                                              bool normalize_q) {
    std::array<expr::Expr, 3> fe, qe;
    for (int k = 0; k < 3; ++k) {
        fe[k] = expr::parse(f[k]);
        qe[k] = expr::parse(q[k]);
    }
    return ExplicitSurface(fe, qe, u0, u1, normalize_q);
}

Vec3 ExplicitSurface::base(double u) const { return {f_[0][0].eval(u), f_[0][1].eval(u), f_[0][2].eval(u)}; }

Vec3 ExplicitSurface::ruling(double u) const { return {q_[0][0].eval(u), q_[0][1].eval(u), q_[0][2].eval(u)}; }

VecJet ExplicitSurface::base_jet(double u, int order) const { return seed(f_, u, std::clamp(order, 0, 3)); }

VecJet ExplicitSurface::ruling_jet(double u, int order) const { return seed(q_, u, std::clamp(order, 0, 3)); }

Vec3 surface_point(const ExplicitSurface& n, double u, double v) { return n.base(u) + v * n.ruling(u); }

double distribution_parameter(const ExplicitSurface& n, double u, const Tolerances& tol) {
    const Local l = local_jets(n, u, 1, tol);
    return detail::distribution_from(l.f.derivative(1), l.q.value(), l.q.derivative(1), tol);
}

Vec3 unit_normal(const ExplicitSurface& n, double u, double v, const Tolerances& tol) {
    const Local l = local_jets(n, u, 1, tol);
    const Vec3 fd = l.f.derivative(1);
    const Vec3 q = l.q.value();
    const Vec3 w = fd + v * l.q.derivative(1);
    const double fq = lorentz_dot(fd, q);
    const double radicand = fq * fq - lorentz_dot(q, q) * lorentz_dot(w, w);
    const double scale = euclid_dot(w, w) * euclid_dot(q, q);
    if (!(radicand > tol.causal_eps * scale)) {
        throw Error(ErrorCode::DegenerateNormal, "surface is not timelike (or singular) here");
    }
    return lorentz_cross(w, q) / std::sqrt(radicand);
}

Vec3 asymptotic_normal(const ExplicitSurface& n, double u, const Tolerances& tol) {
    const Local l = local_jets(n, u, 1, tol);
    const Vec3 qd = l.q.derivative(1);
    detail::check_ruling_derivative(qd, tol);
    return lorentz_cross(qd, l.q.value()) / lorentz_norm(qd);
}

Striction striction(const ExplicitSurface& n, double u, const Tolerances& tol) {
    const Local l = local_jets(n, u, 1, tol);
    return detail::striction_from(l.f.value(), l.f.derivative(1), l.q.value(), l.q.derivative(1), tol);
}

double striction_speed(const ExplicitSurface& n, double u, const Tolerances& tol) {
    const Local l = local_jets(n, u, 2, tol);
    return detail::striction_speed(l.f, l.q, tol);
}

namespace {

ArcLengthMap arc_length_map(const ExplicitSurface& n, std::size_t nodes, const Tolerances& tol) {
    return ArcLengthMap([&n, tol](double u) { return striction_speed(n, u, tol); }, n.u0(), n.u1(), nodes);
}

}  // namespace

FrameSample frenet_frame_at(const ExplicitSurface& n, double u, const Tolerances& tol) {
    const Local l = local_jets(n, u, 3, tol);
    FrameSample frame = detail::frame_from_jets(l.f, l.q, true, tol);
    frame.u = u;
    frame.s = adaptive_simpson([&n, tol](double x) { return striction_speed(n, x, tol); }, n.u0(), u, 1e-10);
    return frame;
}

std::vector<FrameSample> sample_frames(const ExplicitSurface& n, std::size_t count, const Tolerances& tol) {
    if (count < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
    const ArcLengthMap map = arc_length_map(n, std::max<std::size_t>(4 * count, 64), tol);
    std::vector<FrameSample> frames;
    frames.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double s = map.length() * static_cast<double>(j) / static_cast<double>(count - 1);
        const double u = map.u_of_s(s);
        const Local l = local_jets(n, u, 3, tol);
        FrameSample frame = detail::frame_from_jets(l.f, l.q, true, tol);
        frame.u = u;
        frame.s = s;
        frames.push_back(frame);
    }
    return frames;
}

SurfaceClassification classify(const ExplicitSurface& n, std::size_t samples, const Tolerances& tol) {
    SurfaceClassification out;
    samples = std::max<std::size_t>(samples, 2);
    bool d_ok = true, frames_ok = true, all_cyl = true, any_cyl = false;
    bool all_timelike = true, all_spacelike = true;
    bool k1_nonzero = true;
    double max_k2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = n.u0() + (n.u1() - n.u0()) * static_cast<double>(i) / static_cast<double>(samples - 1);
        try {
            const Local l = local_jets(n, u, 1, tol);
            const CausalCharacter c = causal_character(l.q.value(), tol);
            all_timelike &= c == CausalCharacter::Timelike;
            all_spacelike &= c == CausalCharacter::Spacelike;
            const bool cyl = euclid_norm(l.q.derivative(1)) <= kCylindricalThreshold;
            all_cyl &= cyl;
            any_cyl |= cyl;
        } catch (const Error& e) {
            all_timelike = all_spacelike = false;
            out.notes.emplace_back(e.what());
            continue;
        }
        try {
            out.max_abs_d = std::max(out.max_abs_d, std::abs(distribution_parameter(n, u, tol)));
        } catch (const Error&) {
            d_ok = false;
        }
        try {
            const FrameSample f = frenet_frame_at(n, u, tol);
            k1_nonzero &= std::abs(f.k1) > tol.general_eps;
            max_k2 = std::max(max_k2, std::abs(f.k2));
        } catch (const Error&) {
            frames_ok = false;
        }
    }
    if (all_timelike) out.ruling_character = CausalCharacter::Timelike;
    if (all_spacelike) out.ruling_character = CausalCharacter::Spacelike;
    if (all_cyl || !any_cyl) out.cylindrical = all_cyl;
    if (d_ok) out.developable = out.max_abs_d <= tol.general_eps;
    if (frames_ok) out.conoid = k1_nonzero && max_k2 <= tol.general_eps;
    if (!d_ok) out.notes.emplace_back("distribution parameter undefined at some samples");
    if (!frames_ok) out.notes.emplace_back("frame undefined at some samples");
    return out;
}

}  // namespace ruledlab::ruled
