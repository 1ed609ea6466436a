#pragma once

#include <array>
#include <cmath>

#include "ruledlab/lorentz.hpp"

namespace ruledlab {

/// Truncated Taylor expansion f(u0 + t) = c[0] + c[1] t + c[2] t^2 + c[3] t^3.
/// Coefficients are normalized (c[k] = f^(k)(u0) / k!).
struct Jet {
    static constexpr int order = 3;
    std::array<double, order + 1> c{};

    static Jet constant(double v) { return Jet{{v, 0.0, 0.0, 0.0}}; }

    /// From derivative values f, f', f'', f'''.
    static Jet from_derivatives(double f0, double f1, double f2, double f3) {
        return Jet{{f0, f1, f2 / 2.0, f3 / 6.0}};
    }

    double value() const { return c[0]; }
    double derivative(int k) const {
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return fact * c[k];
    }

    /// d/du; the top coefficient becomes unknown and is set to zero.
    Jet d() const {
        Jet r;
        for (int k = 0; k < order; ++k) r.c[k] = (k + 1) * c[k + 1];
        return r;
    }

    friend Jet operator+(Jet a, const Jet& b) {
        for (int k = 0; k <= order; ++k) a.c[k] += b.c[k];
        return a;
    }
    friend Jet operator-(Jet a, const Jet& b) {
        for (int k = 0; k <= order; ++k) a.c[k] -= b.c[k];
        return a;
    }
    friend Jet operator-(Jet a) {
        for (auto& x : a.c) x = -x;
        return a;
    }
    friend Jet operator*(double s, Jet a) {
        for (auto& x : a.c) x *= s;
        return a;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= order; ++k)
            for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= order; ++k) {
            double acc = a.c[k];
            for (int j = 1; j <= k; ++j) acc -= b.c[j] * r.c[k - j];
            r.c[k] = acc / b.c[0];
        }
        return r;
    }
};

inline Jet sqrt(const Jet& a) {
    Jet r;
    r.c[0] = std::sqrt(a.c[0]);
    for (int k = 1; k <= Jet::order; ++k) {
        double acc = a.c[k];
        for (int j = 1; j < k; ++j) acc -= r.c[j] * r.c[k - j];
        r.c[k] = acc / (2.0 * r.c[0]);
    }
    return r;
}

/// Vector-valued jet.
struct VecJet {
    Jet x1, x2, x3;

    Vec3 value() const { return {x1.value(), x2.value(), x3.value()}; }
    Vec3 derivative(int k) const { return {x1.derivative(k), x2.derivative(k), x3.derivative(k)}; }
    VecJet d() const { return {x1.d(), x2.d(), x3.d()}; }

    friend VecJet operator+(const VecJet& a, const VecJet& b) {
        return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
    }
    friend VecJet operator-(const VecJet& a) { return {-a.x1, -a.x2, -a.x3}; }
    friend VecJet operator*(const Jet& s, const VecJet& v) { return {s * v.x1, s * v.x2, s * v.x3}; }
    friend VecJet operator*(double s, const VecJet& v) { return {s * v.x1, s * v.x2, s * v.x3}; }
    friend VecJet operator/(const VecJet& v, const Jet& s) { return {v.x1 / s, v.x2 / s, v.x3 / s}; }
};

inline Jet lorentz_dot(const VecJet& x, const VecJet& y) {
    return x.x2 * y.x2 + x.x3 * y.x3 - x.x1 * y.x1;
}

inline VecJet lorentz_cross(const VecJet& x, const VecJet& y) {
    return {x.x2 * y.x3 - x.x3 * y.x2,
            x.x1 * y.x3 - x.x3 * y.x1,
            x.x2 * y.x1 - x.x1 * y.x2};
}

}  // namespace ruledlab
