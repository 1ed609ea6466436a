#include <algorithm>
#include <cmath>
#include <vector>

#include "ruled_core.hpp"
#include "ruledlab/error.hpp"
#include "ruledlab/ruled.hpp"

namespace ruledlab::ruled {

namespace {

// Fornberg's recursion: weights of the derivative of order m at x0 for nodes x.
std::vector<double> fd_weights(const std::vector<double>& x, double x0, int m) {
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

struct Stencil {
    std::size_t first;
    std::vector<double> weights;
};

// Five points for first derivatives (six near the ends for second derivatives), fourth order.
Stencil stencil(std::size_t n, std::size_t i, int order) {
    const std::size_t width = (order == 2) ? 6 : 5;
    if (n < width) throw Error(ErrorCode::InvalidArgument, "too few samples for finite differences");
    std::size_t first = 0;
    std::size_t count = width;
    if (i >= 2 && i + 2 < n) {
        first = i - 2;
        count = 5;
    } else if (i < 2) {
        first = 0;
    } else {
        first = n - width;
    }
    std::vector<double> x(count);
    for (std::size_t k = 0; k < count; ++k) x[k] = static_cast<double>(first + k);
    return {first, fd_weights(x, static_cast<double>(i), order)};
}

template <typename T>
T apply_stencil(std::span<const T> samples, double spacing, std::size_t i, int order) {
    if (order != 1 && order != 2) throw Error(ErrorCode::InvalidArgument, "derivative order must be 1 or 2");
    const Stencil st = stencil(samples.size(), i, order);
    T acc{};
    for (std::size_t k = 0; k < st.weights.size(); ++k) acc = acc + st.weights[k] * samples[st.first + k];
    return acc * (order == 1 ? 1.0 / spacing : 1.0 / (spacing * spacing));
}

struct SampledLocal {
    Vec3 f, fd, fdd;
    Vec3 q, qd, qdd;
};

SampledLocal sampled_local(const SampledRuledSurface& n, std::size_t i, bool second) {
    if (n.base.size() != n.ruling.size()) throw Error(ErrorCode::InvalidArgument, "base/ruling size mismatch");
    if (i >= n.size()) throw Error(ErrorCode::InvalidArgument, "sample index out of range");
    SampledLocal l;
    l.f = n.base[i];
    l.q = n.ruling[i];
    l.fd = finite_difference(n.base, n.du, i, 1);
    l.qd = finite_difference(n.ruling, n.du, i, 1);
    if (second) {
        l.fdd = finite_difference(n.base, n.du, i, 2);
        l.qdd = finite_difference(n.ruling, n.du, i, 2);
    }
    return l;
}

VecJet jet_of(const Vec3& v, const Vec3& d1, const Vec3& d2) {
    return {Jet::from_derivatives(v.x1, d1.x1, d2.x1, 0.0), Jet::from_derivatives(v.x2, d1.x2, d2.x2, 0.0),
            Jet::from_derivatives(v.x3, d1.x3, d2.x3, 0.0)};
}

}  // namespace

Vec3 finite_difference(std::span<const Vec3> samples, double spacing, std::size_t i, int order) {
    return apply_stencil<Vec3>(samples, spacing, i, order);
}

double finite_difference(std::span<const double> samples, double spacing, std::size_t i, int order) {
    return apply_stencil<double>(samples, spacing, i, order);
}

double distribution_parameter(const SampledRuledSurface& n, std::size_t i, const Tolerances& tol) {
    const SampledLocal l = sampled_local(n, i, false);
    return detail::distribution_from(l.fd, l.q, l.qd, tol);
}

Striction striction(const SampledRuledSurface& n, std::size_t i, const Tolerances& tol) {
    const SampledLocal l = sampled_local(n, i, false);
    return detail::striction_from(l.f, l.fd, l.q, l.qd, tol);
}

FrameSample frenet_frame_at(const SampledRuledSurface& n, std::size_t i, const Tolerances& tol) {
    const SampledLocal l = sampled_local(n, i, true);
    FrameSample frame = detail::frame_from_jets(jet_of(l.f, l.fd, l.fdd), jet_of(l.q, l.qd, l.qdd), false, tol);
    frame.u = n.parameter(i);
    frame.s = frame.u;  // caller re-labels when the grid is not arc length
    return frame;
}

SampledRuledSurface from_grid(const std::vector<Vec3>& grid, std::size_t ns, double s0, double ds,
                              std::span<const double> v_values) {
    const std::size_t nv = v_values.size();
    if (nv < 2 || grid.size() != ns * nv) throw Error(ErrorCode::InvalidArgument, "grid shape mismatch");
    const double v0 = v_values.front();
    const double v1 = v_values.back();
    SampledRuledSurface out;
    out.u0 = s0;
    out.du = ds;
    out.base.reserve(ns);
    out.ruling.reserve(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        const Vec3& first = grid[i * nv];
        const Vec3& last = grid[i * nv + nv - 1];
        const Vec3 q = (last - first) / (v1 - v0);
        out.ruling.push_back(q);
        out.base.push_back(first - v0 * q);
    }
    return out;
}

SurfaceClassification classify(const SampledRuledSurface& n, std::span<const FrameSample> frames,
                               const Tolerances& tol) {
    SurfaceClassification out;
    bool d_ok = true, all_timelike = true, all_spacelike = true, all_cyl = true, any_cyl = false;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const CausalCharacter c = causal_character(n.ruling[i], tol);
        all_timelike &= c == CausalCharacter::Timelike;
        all_spacelike &= c == CausalCharacter::Spacelike;
        const bool cyl = euclid_norm(finite_difference(n.ruling, n.du, i, 1)) <= kCylindricalThreshold;
        all_cyl &= cyl;
        any_cyl |= cyl;
        try {
            out.max_abs_d = std::max(out.max_abs_d, std::abs(distribution_parameter(n, i, tol)));
        } catch (const Error&) {
            d_ok = false;
        }
    }
    if (all_timelike) out.ruling_character = CausalCharacter::Timelike;
    if (all_spacelike) out.ruling_character = CausalCharacter::Spacelike;
    if (all_cyl || !any_cyl) out.cylindrical = all_cyl;
    if (d_ok) {
        out.developable = out.max_abs_d <= tol.general_eps;
    } else {
        out.notes.emplace_back("distribution parameter undefined at some samples");
    }
    if (!frames.empty()) {
        bool k1_nonzero = true;
        double max_k2 = 0.0;
        for (const FrameSample& f : frames) {
            k1_nonzero &= std::abs(f.k1) > tol.general_eps;
            max_k2 = std::max(max_k2, std::abs(f.k2));
        }
        out.conoid = k1_nonzero && max_k2 <= tol.general_eps;
    }
    return out;
}

}  // namespace ruledlab::ruled
