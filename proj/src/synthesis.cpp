#include "ruledlab/synthesis.hpp"

#include <cmath>

#include "ruledlab/error.hpp"

namespace ruledlab::synth {

InitialFrame InitialFrame::canonical(int epsilon) {
    if (epsilon < 0) return {{1, 0, 0}, {0, 1, 0}, {0, 0, -1}};
    return {{0, 1, 0}, {0, 0, -1}, {1, 0, 0}};
}

IntrinsicData IntrinsicData::from_strings(const std::string& k1, const std::string& k2,
                                          const std::string& theta, double s0, double s1, double step) {
    IntrinsicData d;
    d.k1 = expr::ScalarFunction(k1);
    d.k2 = expr::ScalarFunction(k2);
    d.theta = expr::ScalarFunction(theta);
    d.s0 = s0;
    d.s1 = s1;
    d.step = step;
    return d;
}

std::size_t IntrinsicData::steps() const {
    if (!(s1 > s0) || !(step > 0)) throw Error(ErrorCode::InvalidArgument, "need s1 > s0 and step > 0");
    return static_cast<std::size_t>(std::ceil((s1 - s0) / step - 1e-9));
}

double IntrinsicData::effective_step() const { return (s1 - s0) / static_cast<double>(steps()); }

namespace {

struct State {
    Vec3 q, h, a, c;

    State operator+(const State& o) const { return {q + o.q, h + o.h, a + o.a, c + o.c}; }
    State operator*(double k) const { return {k * q, k * h, k * a, k * c}; }
};

class Rhs {
public:
    Rhs(const IntrinsicData& d, bool with_curve) : d_(d), with_curve_(with_curve) {}

    State operator()(double s, const State& x) const {
        const double e = d_.epsilon < 0 ? -1.0 : 1.0;
        const double k1 = d_.k1(s);
        const double k2 = d_.k2(s);
        State dx{k1 * x.h, -e * k1 * x.q + k2 * x.a, e * k2 * x.h, {}};
        if (with_curve_) {
            const double th = (*d_.theta)(s);
            dx.c = std::cosh(th) * x.q + std::sinh(th) * x.a;
        }
        return dx;
    }

private:
    const IntrinsicData& d_;
    bool with_curve_;
};

void reproject(State& x, int epsilon) {
    const double e = epsilon < 0 ? -1.0 : 1.0;
    auto normalize = [](Vec3& v, double signed_sq, const char* which) {
        if (!(signed_sq > 1e-12)) throw Error(ErrorCode::FrameDegenerate, std::string(which) + " became null");
        v = v / std::sqrt(signed_sq);
    };
    normalize(x.q, e * lorentz_dot(x.q, x.q), "q");
    const double qq = lorentz_dot(x.q, x.q);
    x.h = x.h - (lorentz_dot(x.h, x.q) / qq) * x.q;
    normalize(x.h, lorentz_dot(x.h, x.h), "h");
    x.a = x.a - (lorentz_dot(x.a, x.q) / qq) * x.q - lorentz_dot(x.a, x.h) * x.h;
    normalize(x.a, -e * lorentz_dot(x.a, x.a), "a");
}

std::vector<State> integrate(const IntrinsicData& data, bool with_curve, const Tolerances& tol) {
    const ruledlab::FrameReport init =
        frame_check(data.initial.q, data.initial.h, data.initial.a, data.epsilon, tol);
    if (!init.orthonormal) throw Error(ErrorCode::InvalidArgument, "initial frame is not orthonormal");
    if (!init.canonical) throw Error(ErrorCode::InvalidArgument, "initial frame must satisfy h = a x q");

    const std::size_t n = data.steps();
    const double h = data.effective_step();
    const Rhs rhs(data, with_curve);
    std::vector<State> out;
    out.reserve(n + 1);
    State x{data.initial.q, data.initial.h, data.initial.a, {}};
    out.push_back(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = data.s0 + h * static_cast<double>(i);
        const State k1 = rhs(s, x);
        const State k2 = rhs(s + 0.5 * h, x + k1 * (0.5 * h));
        const State k3 = rhs(s + 0.5 * h, x + k2 * (0.5 * h));
        const State k4 = rhs(s + h, x + k3 * h);
        x = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        reproject(x, data.epsilon);
        out.push_back(x);
    }
    return out;
}

}  // namespace

std::vector<FrameState> integrate_frame(const IntrinsicData& data, const Tolerances& tol) {
    const std::vector<State> states = integrate(data, false, tol);
    const double h = data.effective_step();
    std::vector<FrameState> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        out.push_back({data.s0 + h * static_cast<double>(i), states[i].q, states[i].h, states[i].a});
    }
    return out;
}

SampledSurface::SampledSurface(IntrinsicData data, std::vector<ruled::FrameSample> frames)
    : data_(std::move(data)), frames_(std::move(frames)), step_(data_.effective_step()) {}

std::vector<Vec3> SampledSurface::striction() const {
    std::vector<Vec3> out;
    out.reserve(frames_.size());
    for (const auto& f : frames_) out.push_back(f.c);
    return out;
}

std::vector<Vec3> SampledSurface::rulings() const {
    std::vector<Vec3> out;
    out.reserve(frames_.size());
    for (const auto& f : frames_) out.push_back(f.q);
    return out;
}

ruled::SampledRuledSurface SampledSurface::as_ruled() const {
    return {data_.s0, step_, striction(), rulings()};
}

SampledSurface synthesize_surface(const IntrinsicData& data, const Tolerances& tol) {
    if (data.epsilon >= 0) throw Error(ErrorCode::InvalidArgument, "surface synthesis needs eps = -1");
    if (!data.theta) throw Error(ErrorCode::InvalidArgument, "surface synthesis needs theta(s)");
    const std::vector<State> states = integrate(data, true, tol);
    const double h = data.effective_step();
    std::vector<ruled::FrameSample> frames;
    frames.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const State& x = states[i];
        ruled::FrameSample f;
        f.s = data.s0 + h * static_cast<double>(i);
        f.u = f.s;
        f.c = x.c;
        f.q = x.q;
        f.h = x.h;
        f.a = x.a;
        f.epsilon = data.epsilon;
        f.k1 = data.k1(f.s);
        f.k2 = data.k2(f.s);
        f.k2_from_h = f.k2;
        const double th = (*data.theta)(f.s);
        f.theta = th;
        f.theta_s = data.theta->derivative(f.s);
        f.c_s = std::cosh(th) * x.q + std::sinh(th) * x.a;
        if (std::abs(lorentz_dot(*f.c_s, *f.c_s) + 1.0) > tol.frame_eps) {
            throw Error(ErrorCode::FrameDegenerate, "striction tangent lost unit timelike length");
        }
        frames.push_back(f);
    }
    return SampledSurface(data, std::move(frames));
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

std::vector<Vec3> to_explicit_grid(const SampledSurface& surf, double v0, double v1, std::size_t nv) {
    const std::vector<double> vs = linspace(v0, v1, nv);
    std::vector<Vec3> grid;
    grid.reserve(surf.size() * nv);
    for (const auto& f : surf.frames()) {
        for (const double v : vs) grid.push_back(f.c + v * f.q);
    }
    return grid;
}

}  // namespace ruledlab::synth
