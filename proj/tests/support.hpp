#pragma once

#include <algorithm>
#include <cmath>

#include "ruledlab/lorentz.hpp"

namespace ruledlab::test {

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

inline double dist(const Vec3& a, const Vec3& b) { return euclid_norm(a - b); }

}  // namespace ruledlab::test
