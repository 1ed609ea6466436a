#include "ruledlab/arclength.hpp"

#include <algorithm>
#include <cmath>

#include "ruledlab/error.hpp"

namespace ruledlab {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw Error(ErrorCode::InvalidArgument, "interpolation needs >= 2 points");
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    if (m_.size() != n) {
        m_.assign(n, 0.0);
        m_[0] = secant[0];
        m_[n - 1] = secant[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            m_[i] = secant[i - 1] * secant[i] <= 0 ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (secant[i] == 0.0) {
            m_[i] = m_[i + 1] = 0.0;
            continue;
        }
        const double alpha = m_[i] / secant[i];
        const double beta = m_[i + 1] / secant[i];
        if (alpha < 0) m_[i] = 0.0;
        if (beta < 0) m_[i + 1] = 0.0;
        const double r = alpha * alpha + beta * beta;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            m_[i] = tau * alpha * secant[i];
            m_[i + 1] = tau * beta * secant[i];
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
           (t3 - t2) * h * m_[i + 1];
}

namespace {

std::vector<double> uniform_nodes(double u0, double u1, std::size_t nodes) {
    std::vector<double> u(std::max<std::size_t>(nodes, 2));
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = u0 + (u1 - u0) * static_cast<double>(i) / static_cast<double>(u.size() - 1);
    }
    return u;
}

std::vector<double> cumulative(const std::function<double(double)>& speed, const std::vector<double>& u,
                               double abs_tol) {
    std::vector<double> s(u.size(), 0.0);
    const double per = abs_tol / static_cast<double>(u.size());
    for (std::size_t i = 1; i < u.size(); ++i) s[i] = s[i - 1] + adaptive_simpson(speed, u[i - 1], u[i], per);
    return s;
}

std::vector<double> inverse_slopes(const std::function<double(double)>& speed, const std::vector<double>& u) {
    std::vector<double> m(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = speed(u[i]);
        if (!(v > 0)) throw Error(ErrorCode::SingularStriction, "arc-length speed vanishes");
        m[i] = 1.0 / v;
    }
    return m;
}

}  // namespace

ArcLengthMap::ArcLengthMap(std::function<double(double)> speed, double u0, double u1, std::size_t nodes,
                           double abs_tol)
    : speed_(std::move(speed)),
      abs_tol_(abs_tol),
      u_(uniform_nodes(u0, u1, nodes)),
      s_(cumulative(speed_, u_, abs_tol)),
      inverse_(s_, u_, inverse_slopes(speed_, u_)) {}

double ArcLengthMap::s_of_u(double u) const {
    auto it = std::upper_bound(u_.begin(), u_.end(), u);
    std::size_t i = it == u_.begin() ? 0 : static_cast<std::size_t>(it - u_.begin()) - 1;
    i = std::min(i, u_.size() - 1);
    return s_[i] + adaptive_simpson(speed_, u_[i], u, abs_tol_ / static_cast<double>(u_.size()));
}

double ArcLengthMap::u_of_s(double s) const {
    double u = inverse_(s);
    // polish with Newton on s(u) - s; the interpolant is already close
    for (int iter = 0; iter < 3; ++iter) {
        const double r = s_of_u(u) - s;
        if (std::abs(r) <= abs_tol_) break;
        u -= r / speed_(u);
        u = std::clamp(u, u_.front(), u_.back());
    }
    return u;
}

}  // namespace ruledlab
