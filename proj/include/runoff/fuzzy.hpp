#pragma once

// Asymmetric triangular fuzzy numbers: membership, h-levels (alpha-cuts),
// linear combinations, and weighted defuzzification (adaptive quadrature plus
// the exponential closed form used for log-scale predictions).

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "runoff/errors.hpp"

namespace runoff {

// Triangular fuzzy number stored as endpoints: support [left, right], core at
// center. left == center == right represents a crisp number.
struct Tfn {
    double left = 0.0;
    double center = 0.0;
    double right = 0.0;
};

inline Tfn make_tfn(double left, double center, double right) {
    if (!(left <= center && center <= right))
        throw InvalidTfn("Tfn endpoints must satisfy left <= center <= right, got (" +
                         std::to_string(left) + ", " + std::to_string(center) + ", " +
                         std::to_string(right) + ")");
    return Tfn{left, center, right};
}

inline Tfn tfn_crisp(double c) { return Tfn{c, c, c}; }

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Membership grade of x in a: 1 at the center, linear on each side, 0 outside
// the support. Degenerate sides assign membership 1 exactly at the shared point.
inline double membership(const Tfn& a, double x) {
    if (x < a.left || x > a.right) return 0.0;
    if (x == a.center) return 1.0;
    if (x < a.center) return 1.0 - (a.center - x) / (a.center - a.left);
    return 1.0 - (x - a.center) / (a.right - a.center);
}

// h-level interval [center - (center-left)(1-h), center + (right-center)(1-h)].
inline Interval alpha_cut(const Tfn& a, double h) {
    if (!(h >= 0.0 && h <= 1.0))
        throw HOutOfRange("alpha_cut level must lie in [0, 1], got " + std::to_string(h));
    const double w = 1.0 - h;
    return Interval{a.center - (a.center - a.left) * w,
                    a.center + (a.right - a.center) * w};
}

// Linear combination of fuzzy coefficients with crisp weights. Endpoints are
// gathered sign-split: nonnegative weights keep (left, right), negative
// weights swap them, so the result's support is exact interval arithmetic.
inline Tfn linear_combination(const std::vector<Tfn>& coeffs,
                              const std::vector<double>& weights) {
    if (coeffs.size() != weights.size() || coeffs.empty())
        throw LengthMismatch("linear_combination needs equally sized, nonempty inputs (got " +
                             std::to_string(coeffs.size()) + " coefficients, " +
                             std::to_string(weights.size()) + " weights)");
    double lo = 0.0, c = 0.0, hi = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        const double w = weights[n];
        c += w * coeffs[n].center;
        if (w >= 0.0) {
            lo += w * coeffs[n].left;
            hi += w * coeffs[n].right;
        } else {
            lo += w * coeffs[n].right;
            hi += w * coeffs[n].left;
        }
    }
    // Guard against last-ulp rounding in the sums; each term preserves order.
    return Tfn{std::min(lo, c), c, std::max(hi, c)};
}

namespace detail {

template <class F>
double adaptive_simpson(F& f, double a, double m, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Terminate on the Richardson estimate; the relative floor keeps the
    // recursion finite when the integral is large compared to the absolute tol.
    if (depth <= 0 ||
        std::abs(delta) <= 15.0 * std::max(tol, 1e-14 * std::abs(left + right)))
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

} // namespace detail

// Weighted valuation of f over a: both h-level endpoints are integrated with
// weight h and the result is normalized by the weight mass,
//   ( [int f(lo(h)) h dh + int f(hi(h)) h dh] / 2 ) / int h dh.
// Computed by adaptive Simpson quadrature (absolute tolerance 1e-10 with a
// machine-precision relative floor); serves as the oracle for the closed form.
inline double defuzzify_weighted(const Tfn& a, const std::function<double(double)>& f) {
    auto integrand = [&](double h) {
        const Interval iv = alpha_cut(a, h);
        const double vlo = f(iv.lo), vhi = f(iv.hi);
        if (!std::isfinite(vlo) || !std::isfinite(vhi))
            throw NonFiniteFunctionValue("defuzzify_weighted: function value not finite at level " +
                                         std::to_string(h));
        return (vlo + vhi) * h;
    };
    return detail::integrate(integrand, 0.0, 1.0, 1e-10);
}

// I(a,b) = int_0^1 e^{a+bh} h dh.  Direct form e^a (b + (b-1) expm1(b)) / b^2;
// below |b| = 1e-3 that expression loses ~2eps/b of relative accuracy to
// cancellation, so a 4-term series (error ~b^4/144 relative) takes over.
inline double exp_weight_integral(double a, double b) {
    if (std::abs(b) <= 1e-3) {
        return std::exp(a) * (0.5 + b * (1.0 / 3.0 + b * (0.125 + b * (1.0 / 30.0))));
    }
    return std::exp(a) * (b + (b - 1.0) * std::expm1(b)) / (b * b);
}

// Closed-form weighted valuation of exp over a triangular fuzzy number:
//   I(left, center-left) + I(right, center-right).
// Agrees with defuzzify_weighted(a, exp) to <= 1e-8 relative; a crisp (c,c,c)
// returns e^c exactly.
inline double defuzzify_exp_closed(const Tfn& a) {
    return exp_weight_integral(a.left, a.center - a.left) +
           exp_weight_integral(a.right, a.center - a.right);
}

} // namespace runoff
