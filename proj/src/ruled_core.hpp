#pragma once

#include "ruledlab/ruled.hpp"

namespace ruledlab::ruled::detail {

void check_ruling_derivative(const Vec3& qd, const Tolerances& tol);

double distribution_from(const Vec3& fd, const Vec3& q, const Vec3& qd, const Tolerances& tol);

Striction striction_from(const Vec3& f, const Vec3& fd, const Vec3& q, const Vec3& qd,
                         const Tolerances& tol);

/// q / sqrt|<q, q>| as a jet.
VecJet unit_ruling(const VecJet& q);

/// Speed of the striction curve from jets valid to second order.
double striction_speed(const VecJet& f, const VecJet& q, const Tolerances& tol);

/// Frame, curvatures and theta from jets of f and (unit) q. With `third` the jets carry valid
/// third derivatives and the s-derivatives c_ss, h_s, theta_s are filled in as well.
FrameSample frame_from_jets(const VecJet& f, const VecJet& q, bool third, const Tolerances& tol);

}  // namespace ruledlab::ruled::detail
