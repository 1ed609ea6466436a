#include "ruledlab/lorentz.hpp"

#include <algorithm>

#include "ruledlab/error.hpp"

namespace ruledlab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NullInput: return "NullInput";
        case ErrorCode::OppositeOrientation: return "OppositeOrientation";
        case ErrorCode::DegenerateSpan: return "DegenerateSpan";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::CylindricalRuling: return "CylindricalRuling";
        case ErrorCode::NullDerivative: return "NullDerivative";
        case ErrorCode::DegenerateNormal: return "DegenerateNormal";
        case ErrorCode::NonTimelikeStriction: return "NonTimelikeStriction";
        case ErrorCode::SingularStriction: return "SingularStriction";
        case ErrorCode::FrameDegenerate: return "FrameDegenerate";
        case ErrorCode::TrivialRuling: return "TrivialRuling";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::BaseNotDevelopable: return "BaseNotDevelopable";
        case ErrorCode::NonUniformGrid: return "NonUniformGrid";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << '(' << v.x1 << ", " << v.x2 << ", " << v.x3 << ')';
}

const char* to_string(CausalCharacter c) {
    switch (c) {
        case CausalCharacter::Spacelike: return "spacelike";
        case CausalCharacter::Timelike: return "timelike";
        case CausalCharacter::Null: return "null";
    }
    return "unknown";
}

const char* to_string(AngleKind k) {
    switch (k) {
        case AngleKind::Hyperbolic: return "hyperbolic";
        case AngleKind::Central: return "central";
        case AngleKind::Spacelike: return "spacelike";
        case AngleKind::LorentzianTimelike: return "lorentzian_timelike";
    }
    return "unknown";
}

CausalCharacter causal_character(const Vec3& v, const Tolerances& tol) {
    const double scale = euclid_norm(v);
    if (scale == 0.0) return CausalCharacter::Spacelike;
    const Vec3 unit = v / scale;
    const double g = lorentz_dot(unit, unit);
    if (std::abs(g) <= tol.causal_eps) return CausalCharacter::Null;
    return g > 0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike;
}

NormResult norm_and_character(const Vec3& v, const Tolerances& tol) {
    const CausalCharacter c = causal_character(v, tol);
    return {c == CausalCharacter::Null ? 0.0 : lorentz_norm(v), c};
}

AngleResult lorentz_angle(const Vec3& x, const Vec3& y, const Tolerances& tol) {
    const CausalCharacter cx = causal_character(x, tol);
    const CausalCharacter cy = causal_character(y, tol);
    if (cx == CausalCharacter::Null || cy == CausalCharacter::Null ||
        euclid_norm(x) == 0.0 || euclid_norm(y) == 0.0) {
        throw Error(ErrorCode::NullInput, "angle requires non-null, nonzero vectors");
    }

    const double xx = lorentz_dot(x, x);
    const double yy = lorentz_dot(y, y);
    const double xy = lorentz_dot(x, y);
    const double p = xy / (std::sqrt(std::abs(xx)) * std::sqrt(std::abs(yy)));

    if (cx == CausalCharacter::Timelike && cy == CausalCharacter::Timelike) {
        if ((x.x1 > 0) != (y.x1 > 0)) {
            throw Error(ErrorCode::OppositeOrientation,
                        "hyperbolic angle needs equally time-oriented vectors");
        }
        return {AngleKind::Hyperbolic, std::acosh(std::max(1.0, -p)), p};
    }
    if (cx == CausalCharacter::Spacelike && cy == CausalCharacter::Spacelike) {
        // sign of <x,y>^2 - <x,x><y,y> decides the character of span{x, y}
        const double gram = (xy * xy - xx * yy) / (xx * yy);
        if (std::abs(gram) <= tol.causal_eps) {
            throw Error(ErrorCode::DegenerateSpan, "spacelike vectors are parallel or span a null plane");
        }
        if (gram > 0) return {AngleKind::Central, std::acosh(std::max(1.0, std::abs(p))), p};
        return {AngleKind::Spacelike, std::acos(std::clamp(p, -1.0, 1.0)), p};
    }
    return {AngleKind::LorentzianTimelike, std::asinh(std::abs(p)), p};
}

FrameReport frame_check(const Vec3& q, const Vec3& h, const Vec3& a, int epsilon,
                        const Tolerances& tol) {
    const double eps = epsilon < 0 ? -1.0 : 1.0;
    const double residuals[] = {
        std::abs(lorentz_dot(q, q) - eps),
        std::abs(lorentz_dot(h, h) - 1.0),
        std::abs(lorentz_dot(a, a) + eps),
        std::abs(lorentz_dot(q, h)),
        std::abs(lorentz_dot(q, a)),
        std::abs(lorentz_dot(h, a)),
    };
    FrameReport report;
    report.max_residual = *std::max_element(std::begin(residuals), std::end(residuals));
    report.orthonormal = report.max_residual <= tol.frame_eps;
    report.determinant = det3(q, h, a);
    const Vec3 axq = lorentz_cross(a, q);
    // boosted frames have large Euclidean entries; compare relative to them
    const double scale = std::max(1.0, euclid_norm(h));
    report.canonical = euclid_norm(h - axq) <= tol.frame_eps * scale;
    report.anticanonical = euclid_norm(h + axq) <= tol.frame_eps * scale;
    return report;
}

}  // namespace ruledlab
