#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ruledlab {

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance abs_tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth = 40);

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slope limiting; monotone data in,
/// monotone interpolant out.
class MonotoneCubic {
public:
    /// Slopes are estimated from the data when `slopes` is empty.
    MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes = {});

    double operator()(double x) const;

private:
    std::vector<double> x_, y_, m_;
};

/// s(u) = integral of speed from u0, and its inverse u(s).
class ArcLengthMap {
public:
    ArcLengthMap(std::function<double(double)> speed, double u0, double u1, std::size_t nodes,
                 double abs_tol = 1e-10);

    double length() const { return s_.back(); }
    double s_of_u(double u) const;
    double u_of_s(double s) const;

private:
    std::function<double(double)> speed_;
    double abs_tol_;
    std::vector<double> u_, s_;
    MonotoneCubic inverse_;
};

}  // namespace ruledlab
