#include <hetsched/power.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetsched {

namespace {

constexpr double kConvexityTol = 1e-9;
constexpr double kQuadratureRelTol = 1e-8;
constexpr double kQuadratureAbsFloor = 1e-12;
constexpr int kBisectionMaxIter = 200;

template <typename F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double refined = left + right;
    const double err = (refined - whole) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol) {
        return refined + err;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b) {
    if (b <= a) {
        return 0.0;
    }
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol =
        std::max(kQuadratureAbsFloor, kQuadratureRelTol * std::abs(whole));
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace

PowerFunction PowerFunction::polynomial(double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument(
            "polynomial power function requires alpha > 1");
    }
    PowerFunction pf;
    pf.kind_ = PowerKind::Polynomial;
    pf.alpha_ = alpha;
    pf.g_limit_zero_ = 0.0;
    pf.validate_axioms();
    return pf;
}

PowerFunction PowerFunction::affine_convex(std::vector<double> coeffs) {
    if (coeffs.empty() || coeffs[0] != 0.0) {
        throw std::invalid_argument(
            "affine_convex power function requires a zero constant term");
    }
    double superlinear = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (!(coeffs[k] >= 0.0) || !std::isfinite(coeffs[k])) {
            throw std::invalid_argument(
                "affine_convex coefficients must be finite and nonnegative");
        }
        if (k >= 2) {
            superlinear += coeffs[k];
        }
    }
    if (superlinear <= 0.0) {
        throw std::invalid_argument(
            "affine_convex needs a positive coefficient of degree >= 2 "
            "(strict convexity)");
    }
    PowerFunction pf;
    pf.kind_ = PowerKind::AffineConvex;
    pf.coeffs_ = std::move(coeffs);
    pf.g_limit_zero_ = pf.coeffs_.size() > 1 ? pf.coeffs_[1] : 0.0;
    pf.validate_axioms();
    return pf;
}

PowerFunction PowerFunction::monotone_table(
    std::vector<std::array<double, 2>> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("table power function needs >= 2 points");
    }
    if (points[0][0] != 0.0 || points[0][1] != 0.0) {
        throw std::invalid_argument("table power function must start at (0,0)");
    }
    double prev_slope = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double ds = points[i][0] - points[i - 1][0];
        const double dp = points[i][1] - points[i - 1][1];
        if (!(ds > 0.0) || !(dp > 0.0)) {
            throw std::invalid_argument(
                "table speeds and powers must be strictly increasing");
        }
        const double slope = dp / ds;
        if (slope < prev_slope * (1.0 - 1e-12)) {
            throw std::invalid_argument(
                "table must be convex (non-decreasing slopes)");
        }
        prev_slope = std::max(prev_slope, slope);
    }
    PowerFunction pf;
    pf.kind_ = PowerKind::MonotoneTable;
    pf.points_ = std::move(points);
    // Precompute Q's segments in power coordinates, plus the extension
    // segment beyond the last breakpoint.
    const auto& pts = pf.points_;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double m = (pts[i + 1][0] - pts[i][0]) / (pts[i + 1][1] - pts[i][1]);
        pf.seg_q_slope_.push_back(m);
        pf.seg_q_intercept_.push_back(pts[i][0] - m * pts[i][1]);
    }
    const double m_last = pf.seg_q_slope_.back();
    pf.seg_q_slope_.push_back(m_last);
    pf.seg_q_intercept_.push_back(pts.back()[0] - m_last * pts.back()[1]);
    pf.g_limit_zero_ = 1.0 / pf.seg_q_slope_[0];
    pf.validate_axioms();
    return pf;
}

void PowerFunction::validate_axioms() const {
    // Sampled checks of the required shape: P(0) = 0, strictly increasing,
    // midpoint convex.
    constexpr int kSamples = 64;
    if (power(0.0) != 0.0) {
        throw std::invalid_argument("power function must satisfy P(0) = 0");
    }
    double prev_s = 0.0;
    double prev_p = 0.0;
    std::vector<double> ps(kSamples + 1);
    std::vector<double> ss(kSamples + 1);
    for (int i = 0; i <= kSamples; ++i) {
        const double s = 100.0 * static_cast<double>(i) / kSamples;
        const double p = power(s);
        ss[i] = s;
        ps[i] = p;
        if (i > 0 && !(p > prev_p)) {
            throw std::invalid_argument(
                "power function must be strictly increasing");
        }
        prev_s = s;
        prev_p = p;
    }
    (void)prev_s;
    for (int i = 0; i + 2 <= kSamples; i += 2) {
        const double mid = power(0.5 * (ss[i] + ss[i + 2]));
        if (mid > 0.5 * (ps[i] + ps[i + 2]) + kConvexityTol) {
            throw std::invalid_argument("power function must be convex");
        }
    }
}

double PowerFunction::power(double speed) const {
    if (speed < 0.0) {
        throw std::domain_error("speed must be nonnegative");
    }
    switch (kind_) {
        case PowerKind::Polynomial:
            return std::pow(speed, alpha_);
        case PowerKind::AffineConvex:
            return affine_power(speed);
        case PowerKind::MonotoneTable:
            return table_power(speed);
    }
    return 0.0;
}

double PowerFunction::affine_power(double s) const {
    // Horner over the full coefficient vector (constant term is zero).
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        acc = acc * s + coeffs_[k];
    }
    return acc;
}

double PowerFunction::table_power(double s) const {
    const auto& pts = points_;
    if (s >= pts.back()[0]) {
        const double slope = 1.0 / seg_q_slope_.back();
        return pts.back()[1] + (s - pts.back()[0]) * slope;
    }
    auto it = std::upper_bound(pts.begin(), pts.end(), s,
                               [](double v, const std::array<double, 2>& p) {
                                   return v < p[0];
                               });
    const std::size_t i = static_cast<std::size_t>(it - pts.begin()) - 1;
    const double t = (s - pts[i][0]) / (pts[i + 1][0] - pts[i][0]);
    return pts[i][1] + t * (pts[i + 1][1] - pts[i][1]);
}

double PowerFunction::speed_for_power(double y) const {
    if (y < 0.0) {
        throw std::domain_error("power must be nonnegative");
    }
    if (y == 0.0) {
        return 0.0;
    }
    switch (kind_) {
        case PowerKind::Polynomial:
            return std::pow(y, 1.0 / alpha_);
        case PowerKind::AffineConvex:
            return affine_speed(y);
        case PowerKind::MonotoneTable:
            return table_speed(y);
    }
    return 0.0;
}

double PowerFunction::affine_speed(double y) const {
    // Bracketed bisection; P unbounded guarantees a root.
    double hi = 1.0;
    while (affine_power(hi) < y) {
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            throw std::domain_error("power out of representable range");
        }
    }
    double lo = 0.0;
    double mid = 0.5 * hi;
    for (int iter = 0; iter < kBisectionMaxIter; ++iter) {
        mid = 0.5 * (lo + hi);
        const double p = affine_power(mid);
        if (std::abs(p - y) <= 1e-12 * std::max(1.0, y)) {
            return mid;
        }
        if (p < y) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-14 * std::max(1.0, hi)) {
            break;
        }
    }
    return 0.5 * (lo + hi);
}

double PowerFunction::table_speed(double y) const {
    const auto& pts = points_;
    if (y >= pts.back()[1]) {
        return seg_q_intercept_.back() + seg_q_slope_.back() * y;
    }
    auto it = std::upper_bound(pts.begin(), pts.end(), y,
                               [](double v, const std::array<double, 2>& p) {
                                   return v < p[1];
                               });
    const std::size_t i = static_cast<std::size_t>(it - pts.begin()) - 1;
    return seg_q_intercept_[i] + seg_q_slope_[i] * y;
}

double PowerFunction::g(double x) const {
    if (x < 0.0) {
        throw std::domain_error("g is defined on x >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    return x / speed_for_power(x);
}

double PowerFunction::integral_x_over_q(double a, double b) const {
    if (a < 0.0 || b < a) {
        throw std::domain_error("integral_x_over_q requires 0 <= a <= b");
    }
    if (a == b) {
        return 0.0;
    }
    switch (kind_) {
        case PowerKind::Polynomial: {
            const double e = 2.0 - 1.0 / alpha_;
            return (std::pow(b, e) - std::pow(a, e)) / e;
        }
        case PowerKind::MonotoneTable:
            return table_integral_x_over_q(a, b);
        case PowerKind::AffineConvex: {
            auto f = [this](double x) {
                return x == 0.0 ? g_limit_zero_ : x / affine_speed(x);
            };
            return adaptive_simpson(f, a, b);
        }
    }
    return 0.0;
}

double PowerFunction::table_integral_x_over_q(double lo, double hi) const {
    // Sum exact antiderivatives of y / (c + m y) over the table segments
    // covering [lo, hi].
    const auto& pts = points_;
    double total = 0.0;
    std::size_t i = 0;
    while (i + 1 < pts.size() && pts[i + 1][1] <= lo) {
        ++i;
    }
    double cur = lo;
    while (cur < hi) {
        const double seg_end =
            (i + 1 < pts.size()) ? std::min(hi, pts[i + 1][1]) : hi;
        const double m = seg_q_slope_[i];
        const double c = seg_q_intercept_[i];
        if (c == 0.0) {
            total += (seg_end - cur) / m;
        } else {
            const double ratio = m * (seg_end - cur) / (c + m * cur);
            total += (seg_end - cur) / m - c / (m * m) * std::log1p(ratio);
        }
        cur = seg_end;
        if (i + 1 < seg_q_slope_.size()) {
            ++i;
        }
    }
    return total;
}

double PowerFunction::integral_inv_q(double shift, double a, double b) const {
    if (shift < 0.0 || a < 0.0 || b < a) {
        throw std::domain_error(
            "integral_inv_q requires shift >= 0 and 0 <= a <= b");
    }
    if (a == b) {
        return 0.0;
    }
    const double lo = shift + a;
    const double hi = shift + b;
    switch (kind_) {
        case PowerKind::Polynomial: {
            const double e = 1.0 - 1.0 / alpha_;
            return (std::pow(hi, e) - std::pow(lo, e)) / e;
        }
        case PowerKind::MonotoneTable:
            if (lo == 0.0) {
                throw NonTerminatingSegment(
                    "non-terminating segment: 1/Q diverges at 0 for a "
                    "table power function; use a positive completion "
                    "threshold");
            }
            return table_integral_inv_q(lo, hi);
        case PowerKind::AffineConvex: {
            if (lo == 0.0) {
                if (coeffs_[1] > 0.0) {
                    throw NonTerminatingSegment(
                        "non-terminating segment: 1/Q diverges at 0 for a "
                        "power function with a linear term; use a positive "
                        "completion threshold");
                }
                // Substituting y = u^2 removes the integrable singularity:
                // the transformed integrand 2u / Q(u^2) has a finite limit.
                const double lim =
                    coeffs_.size() > 2 && coeffs_[2] > 0.0
                        ? 2.0 * std::sqrt(coeffs_[2])
                        : 0.0;
                auto f = [this, lim](double u) {
                    return u == 0.0 ? lim : 2.0 * u / affine_speed(u * u);
                };
                return adaptive_simpson(f, 0.0, std::sqrt(hi));
            }
            auto f = [this](double y) { return 1.0 / affine_speed(y); };
            return adaptive_simpson(f, lo, hi);
        }
    }
    return 0.0;
}

double PowerFunction::table_integral_inv_q(double lo, double hi) const {
    const auto& pts = points_;
    double total = 0.0;
    std::size_t i = 0;
    while (i + 1 < pts.size() && pts[i + 1][1] <= lo) {
        ++i;
    }
    double cur = lo;
    while (cur < hi) {
        const double seg_end =
            (i + 1 < pts.size()) ? std::min(hi, pts[i + 1][1]) : hi;
        const double m = seg_q_slope_[i];
        const double c = seg_q_intercept_[i];
        // antiderivative of 1 / (c + m y) is log(c + m y) / m
        total += std::log1p(m * (seg_end - cur) / (c + m * cur)) / m;
        cur = seg_end;
        if (i + 1 < seg_q_slope_.size()) {
            ++i;
        }
    }
    return total;
}

double PowerFunction::invert_inv_q(double shift, double upper,
                                   double value) const {
    if (shift < 0.0 || upper < 0.0 || value < 0.0) {
        throw std::domain_error("invert_inv_q requires nonnegative arguments");
    }
    if (value == 0.0 || upper == 0.0) {
        return upper;
    }
    switch (kind_) {
        case PowerKind::Polynomial: {
            const double e = 1.0 - 1.0 / alpha_;
            const double base = std::pow(shift + upper, e) - value * e;
            if (base <= 0.0) {
                return 0.0;
            }
            const double x = std::pow(base, 1.0 / e) - shift;
            return std::clamp(x, 0.0, upper);
        }
        case PowerKind::MonotoneTable: {
            const double y = table_invert_inv_q(shift + upper, value);
            return std::clamp(y - shift, 0.0, upper);
        }
        case PowerKind::AffineConvex: {
            // integral_inv_q(shift, x, upper) decreases in x; bisect.
            double lo = 0.0;
            double hi = upper;
            for (int iter = 0; iter < kBisectionMaxIter; ++iter) {
                const double mid = 0.5 * (lo + hi);
                double j;
                try {
                    j = integral_inv_q(shift, mid, upper);
                } catch (const NonTerminatingSegment&) {
                    j = std::numeric_limits<double>::infinity();
                }
                if (j > value) {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (hi - lo <= 1e-12 * std::max(1.0, upper)) {
                    break;
                }
            }
            return 0.5 * (lo + hi);
        }
    }
    return 0.0;
}

double PowerFunction::table_invert_inv_q(double y_hi, double value) const {
    // Walk segments downward from y_hi until the accumulated time reaches
    // value, then solve exactly within the final segment.
    const auto& pts = points_;
    std::size_t i = seg_q_slope_.size() - 1;
    if (y_hi <= pts.back()[1]) {
        while (i > 0 && pts[i][1] >= y_hi) {
            --i;
        }
    }
    double cur_hi = y_hi;
    double remaining = value;
    while (true) {
        const double seg_lo = pts[std::min(i, pts.size() - 1)][1];
        const double m = seg_q_slope_[i];
        const double c = seg_q_intercept_[i];
        const double seg_time =
            (cur_hi > seg_lo)
                ? std::log1p(m * (cur_hi - seg_lo) / (c + m * seg_lo)) / m
                : 0.0;
        if (seg_time >= remaining || i == 0) {
            // Solve log((c + m*cur_hi) / (c + m*y)) / m = remaining for y.
            const double scaled = (c + m * cur_hi) * std::exp(-m * remaining);
            const double y = (scaled - c) / m;
            return std::max(y, 0.0);
        }
        remaining -= seg_time;
        cur_hi = seg_lo;
        --i;
    }
}

}  // namespace hetsched
