#include <cmath>
#include <limits>

#include "infodemic/error.hpp"
#include "infodemic/numerics.hpp"

namespace infodemic::numerics {

namespace {

/// Continued fraction for I_x(a, b) (modified Lentz). Converges fast for x < (a+1)/(a+b+2).
double beta_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge");
}

/// I_x(a, b) with y = 1 - x supplied separately to keep precision near x = 1.
double ibeta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(y);
    if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_fraction(a, b, x) / a;
    return 1.0 - std::exp(log_front) * beta_fraction(b, a, y) / b;
}

/// P(T > |t|) for the Student-t distribution.
double t_upper_tail(double t, double dof) {
    if (!(dof > 0.0)) throw DomainError("degrees of freedom must be positive");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    const double t2 = t * t;
    const double x = dof / (dof + t2);
    const double y = t2 / (dof + t2);
    return 0.5 * ibeta(0.5 * dof, 0.5, x, y);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta needs x in [0, 1]");
    return ibeta(a, b, x, 1.0 - x);
}

double t_cdf(double t, double dof) {
    const double tail = t_upper_tail(t, dof);
    return t > 0 ? 1.0 - tail : tail;
}

double t_two_sided_p(double t, double dof) { return std::min(1.0, 2.0 * t_upper_tail(t, dof)); }

double f_sf(double f, double d1, double d2) {
    if (!(d1 > 0.0 && d2 > 0.0)) throw DomainError("F distribution needs positive dof");
    if (!(f > 0.0)) return 1.0;
    if (std::isinf(f)) return 0.0;
    const double x = d2 / (d2 + d1 * f);
    const double y = d1 * f / (d2 + d1 * f);
    return ibeta(0.5 * d2, 0.5 * d1, x, y);
}

}  // namespace infodemic::numerics
