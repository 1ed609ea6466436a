#pragma once

#include <array>
#include <cmath>
#include <ostream>

namespace ruledlab {

/// Coordinate triple (x1, x2, x3) of Minkowski 3-space, signature (-,+,+).
struct Vec3 {
    double x1{0.0};
    double x2{0.0};
    double x3{0.0};

    constexpr double operator[](int i) const { return i == 0 ? x1 : (i == 1 ? x2 : x3); }

    constexpr Vec3& operator+=(const Vec3& o) {
        x1 += o.x1; x2 += o.x2; x3 += o.x3;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
        return *this;
    }
    constexpr Vec3& operator*=(double k) {
        x1 *= k; x2 *= k; x3 *= k;
        return *this;
    }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x1, -a.x2, -a.x3}; }
    friend constexpr Vec3 operator*(double k, Vec3 a) { return a *= k; }
    friend constexpr Vec3 operator*(Vec3 a, double k) { return a *= k; }
    friend constexpr Vec3 operator/(Vec3 a, double k) { return a *= (1.0 / k); }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

    bool finite() const { return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3); }
};

std::ostream& operator<<(std::ostream& os, const Vec3& v);

enum class CausalCharacter { Spacelike, Timelike, Null };

const char* to_string(CausalCharacter c);

struct Tolerances {
    double causal_eps{1e-10};   // |<v,v>| threshold (after Euclidean normalization) for Null
    double frame_eps{1e-9};     // orthonormality residual bound
    double general_eps{1e-6};   // default comparison bound

    bool valid() const { return causal_eps > 0 && frame_eps > 0 && general_eps > 0; }
};

/// -x1*y1 + x2*y2 + x3*y3
constexpr double lorentz_dot(const Vec3& x, const Vec3& y) {
    return -x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3;
}

/// Lorentzian vector product; orthogonal to both factors under lorentz_dot.
constexpr Vec3 lorentz_cross(const Vec3& x, const Vec3& y) {
    return {x.x2 * y.x3 - x.x3 * y.x2,
            x.x1 * y.x3 - x.x3 * y.x1,
            x.x2 * y.x1 - x.x1 * y.x2};
}

constexpr double euclid_dot(const Vec3& x, const Vec3& y) {
    return x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3;
}

inline double euclid_norm(const Vec3& v) { return std::sqrt(euclid_dot(v, v)); }

/// Ordinary 3x3 determinant with rows x, y, z.
constexpr double det3(const Vec3& x, const Vec3& y, const Vec3& z) {
    return x.x1 * (y.x2 * z.x3 - y.x3 * z.x2)
         - x.x2 * (y.x1 * z.x3 - y.x3 * z.x1)
         + x.x3 * (y.x1 * z.x2 - y.x2 * z.x1);
}

/// sqrt(|<v,v>|)
inline double lorentz_norm(const Vec3& v) { return std::sqrt(std::abs(lorentz_dot(v, v))); }

CausalCharacter causal_character(const Vec3& v, const Tolerances& tol = {});

struct NormResult {
    double norm;
    CausalCharacter character;
};

NormResult norm_and_character(const Vec3& v, const Tolerances& tol = {});

enum class AngleKind { Hyperbolic, Central, Spacelike, LorentzianTimelike };

const char* to_string(AngleKind k);

struct AngleResult {
    AngleKind kind;
    double theta;           // >= 0
    double signed_product;  // <x,y>/(|x||y|), before any absolute value is taken
};

/// Angle between two non-null vectors, dispatched on their causal characters.
/// Throws Error{NullInput | OppositeOrientation | DegenerateSpan}.
AngleResult lorentz_angle(const Vec3& x, const Vec3& y, const Tolerances& tol = {});

struct FrameReport {
    bool orthonormal{false};
    double max_residual{0.0};   // worst deviation from the expected Gram matrix
    double determinant{0.0};    // Euclidean det(q, h, a)
    bool canonical{false};      // h == a x q within frame_eps, relative to |h|
    bool anticanonical{false};  // h == -(a x q) within frame_eps

    bool valid() const { return orthonormal && canonical; }
};

/// Checks <q,q> = eps, <h,h> = 1, <a,a> = -eps and mutual orthogonality.
FrameReport frame_check(const Vec3& q, const Vec3& h, const Vec3& a, int epsilon,
                        const Tolerances& tol = {});

}  // namespace ruledlab
