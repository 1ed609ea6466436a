#include <algorithm>
#include <cmath>
#include <limits>

#include "ruledlab/error.hpp"
#include "ruledlab/ruled.hpp"

namespace ruledlab::ruled {

namespace {

double uniform_spacing(std::span<const FrameSample> frames) {
    if (frames.size() < 6) throw Error(ErrorCode::InvalidArgument, "need at least six frames");
    const double ds = (frames.back().s - frames.front().s) / static_cast<double>(frames.size() - 1);
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (std::abs(frames[i].s - frames[i - 1].s - ds) > 1e-9 * std::max(1.0, std::abs(ds) * 1e3)) {
            throw Error(ErrorCode::NonUniformGrid, "frames are not equally spaced in s");
        }
    }
    return ds;
}

// Components along (q, h, a) of v in the frame.
Vec3 frame_coefficients(const Vec3& v, const FrameSample& f) {
    const double e = f.epsilon;
    return {e * lorentz_dot(v, f.q), lorentz_dot(v, f.h), -e * lorentz_dot(v, f.a)};
}

// |x cross y| / (|x| |y|) in frame coordinates; zero when either vector vanishes.
double parallel_residual(const Vec3& x, const Vec3& y) {
    const double nx = euclid_norm(x), ny = euclid_norm(y);
    if (nx <= 1e-300 || ny <= 1e-300) return 0.0;
    const Vec3 cx{x.x2 * y.x3 - x.x3 * y.x2, x.x3 * y.x1 - x.x1 * y.x3, x.x1 * y.x2 - x.x2 * y.x1};
    return euclid_norm(cx) / (nx * ny);
}

void finish(PredicateResult& r, double tol) {
    r.geometric_holds = r.geometric_residual <= tol;
    r.curvature_holds = r.curvature_residual.has_value() && *r.curvature_residual <= tol;
    r.agree = r.geometric_holds == r.curvature_holds;
}

}  // namespace

void attach_derivatives(std::vector<FrameSample>& frames) {
    const double ds = uniform_spacing(frames);
    std::vector<Vec3> c(frames.size()), h(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        c[i] = frames[i].c;
        h[i] = frames[i].h;
    }
    for (std::size_t i = 0; i < frames.size(); ++i) {
        frames[i].c_s = finite_difference(c, ds, i, 1);
        frames[i].c_ss = finite_difference(c, ds, i, 2);
        frames[i].h_s = finite_difference(h, ds, i, 1);
    }
}

PredicateReport striction_predicates(std::span<const FrameSample> frames, const Tolerances& tol) {
    if (frames.empty()) throw Error(ErrorCode::InvalidArgument, "no frames");
    const bool have_all = std::all_of(frames.begin(), frames.end(), [](const FrameSample& f) {
        return f.c_s && f.c_ss && f.h_s;
    });
    std::vector<FrameSample> filled;
    if (!have_all) {
        filled.assign(frames.begin(), frames.end());
        attach_derivatives(filled);
        frames = filled;
    }

    PredicateReport rep;
    rep.samples = frames.size();
    rep.asymptotic.name = "asymptotic_line";
    rep.geodesic.name = "geodesic";
    rep.line_of_curvature.name = "line_of_curvature";

    double asym_curv = 0.0, loc_curv = 0.0;
    bool asym_defined = true, loc_defined = true;
    double theta_min = std::numeric_limits<double>::infinity();
    double theta_max = -theta_min;

    for (const FrameSample& f : frames) {
        if (!f.theta) throw Error(ErrorCode::NonTimelikeStriction, "predicates need a timelike striction curve");
        const double th = *f.theta;
        theta_min = std::min(theta_min, th);
        theta_max = std::max(theta_max, th);

        const Vec3 css = *f.c_ss;
        rep.asymptotic.geometric_residual = std::max(rep.asymptotic.geometric_residual,
                                                     std::abs(lorentz_dot(f.h, css)));
        const Vec3 cc = frame_coefficients(css, f);
        rep.geodesic.geometric_residual = std::max(rep.geodesic.geometric_residual, std::hypot(cc.x1, cc.x3));
        rep.line_of_curvature.geometric_residual =
            std::max(rep.line_of_curvature.geometric_residual,
                     parallel_residual(frame_coefficients(*f.h_s, f), frame_coefficients(*f.c_s, f)));

        if (f.k2 == 0.0) {
            asym_defined = false;
        } else {
            const double ratio = f.k1 / f.k2;
            rep.asymptotic.satisfiable &= std::abs(ratio) < 1.0;
            asym_curv = std::max(asym_curv, std::abs(std::tanh(th) - ratio));
        }
        if (f.k1 == 0.0) {
            loc_defined = false;
        } else {
            const double ratio = f.k2 / f.k1;
            rep.line_of_curvature.satisfiable &= std::abs(ratio) < 1.0;
            loc_curv = std::max(loc_curv, std::abs(std::tanh(th) - ratio));
        }
    }
    if (asym_defined) rep.asymptotic.curvature_residual = asym_curv;
    else rep.asymptotic.satisfiable = false;
    if (loc_defined) rep.line_of_curvature.curvature_residual = loc_curv;
    else rep.line_of_curvature.satisfiable = false;
    rep.geodesic.curvature_residual = theta_max - theta_min;

    finish(rep.asymptotic, tol.general_eps);
    finish(rep.geodesic, tol.general_eps);
    finish(rep.line_of_curvature, tol.general_eps);
    return rep;
}

}  // namespace ruledlab::ruled
