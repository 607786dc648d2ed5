#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetsched {

/// Thrown when a time integral diverges at its lower limit: this happens for
/// power curves that are asymptotically linear near speed 0 when the queue
/// would have to drain all the way to zero fractional weight. Callers avoid
/// it by stopping at a positive completion threshold.
class NonTerminatingSegment : public std::runtime_error {
public:
    explicit NonTerminatingSegment(const std::string& what)
        : std::runtime_error(what) {}
};

enum class PowerKind { Polynomial, AffineConvex, MonotoneTable };

/// A processor's power curve P(s): continuous, P(0) = 0, strictly increasing,
/// convex and unbounded. Q = P^{-1} maps a power budget to the achievable
/// speed. Besides point evaluation this type owns the two integral
/// primitives the schedulers and potential functions are made of:
///
///   integral_x_over_q(a, b)      = ∫_a^b  x / Q(x) dx
///   integral_inv_q(W, a, b)      = ∫_a^b  dw / Q(W + w)
///
/// Polynomial curves use closed forms, piecewise-linear tables use exact
/// per-segment antiderivatives, and general convex polynomials fall back to
/// bracketed bisection plus adaptive Simpson quadrature.
///
/// Instances are immutable after construction and safe to read concurrently.
class PowerFunction {
public:
    /// P(s) = s^alpha, alpha > 1.
    static PowerFunction polynomial(double alpha);

    /// P(s) = sum_k coeffs[k] * s^k with coeffs[0] == 0, all coefficients
    /// nonnegative and at least one quadratic-or-higher term positive.
    static PowerFunction affine_convex(std::vector<double> coeffs);

    /// Convex piecewise-linear interpolation through (speed, power) points.
    /// The first point must be (0, 0); beyond the last point the final slope
    /// is extended. Speeds and powers strictly increasing, slopes
    /// non-decreasing.
    static PowerFunction monotone_table(std::vector<std::array<double, 2>> points);

    PowerKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    const std::vector<std::array<double, 2>>& points() const { return points_; }

    /// P(s). Negative speed is a domain error.
    double power(double speed) const;

    /// Q(y) = P^{-1}(y) for y >= 0. Closed form for polynomial and table
    /// kinds, bracketed bisection otherwise.
    double speed_for_power(double y) const;

    /// g(x) = x / Q(x), with g(0) defined as 0.
    double g(double x) const;

    /// ∫_a^b x/Q(x) dx for 0 <= a <= b.
    double integral_x_over_q(double a, double b) const;

    /// ∫_a^b dw / Q(shift + w) for 0 <= a <= b, shift >= 0. Throws
    /// NonTerminatingSegment when shift + a == 0 and the integral diverges
    /// (Q asymptotically linear at 0).
    double integral_inv_q(double shift, double a, double b) const;

    /// Inverse of integral_inv_q in its lower limit: returns x in [0, upper]
    /// with integral_inv_q(shift, x, upper) == value. value must not exceed
    /// the (possibly infinite) integral down to 0; the result is clamped to
    /// [0, upper] against roundoff.
    double invert_inv_q(double shift, double upper, double value) const;

private:
    PowerFunction() = default;

    void validate_axioms() const;

    double table_power(double s) const;
    double table_speed(double y) const;
    // Per-segment closed forms over the power axis, splitting at breakpoints.
    double table_integral_x_over_q(double lo, double hi) const;
    double table_integral_inv_q(double lo, double hi) const;
    double table_invert_inv_q(double y_hi, double value) const;

    double affine_power(double s) const;
    double affine_speed(double y) const;

    PowerKind kind_ = PowerKind::Polynomial;
    double alpha_ = 2.0;
    std::vector<double> coeffs_;
    std::vector<std::array<double, 2>> points_;
    // lim_{x->0+} x/Q(x) = P'(0+); used to extend quadrature integrands
    // continuously across the removable point at 0.
    double g_limit_zero_ = 0.0;
    // Table segments in power coordinates: Q(y) = q_intercept + q_slope * y
    // on [points_[i][1], points_[i+1][1]]; one extra segment extends beyond
    // the last breakpoint.
    std::vector<double> seg_q_slope_;
    std::vector<double> seg_q_intercept_;
};

}  // namespace hetsched
