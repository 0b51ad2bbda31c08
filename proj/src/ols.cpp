#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "infodemic/error.hpp"
#include "infodemic/numerics.hpp"

namespace infodemic::numerics {

namespace {

std::string column_name(std::size_t j) { return j == 0 ? "intercept" : "x" + std::to_string(j); }

/// Back substitution with the leading m x m block of upper-triangular r.
std::vector<double> solve_upper(const Matrix& r, std::vector<double> rhs, std::size_t m) {
    for (std::size_t ii = m; ii-- > 0;) {
        double s = rhs[ii];
        for (std::size_t j = ii + 1; j < m; ++j) s -= r(ii, j) * rhs[j];
        rhs[ii] = s / r(ii, ii);
    }
    rhs.resize(m);
    return rhs;
}

}  // namespace

OlsResult ols(const Matrix& x, std::span<const double> y) {
    const std::size_t n = x.rows(), k = x.cols(), m = k + 1;
    if (y.size() != n) throw DomainError("ols: response length does not match design rows");
    if (n <= m) throw NumericError("ols needs more observations than parameters plus one");
    for (std::size_t r = 0; r < n; ++r) {
        if (!std::isfinite(y[r])) throw NumericError("ols: non-finite response");
        for (double v : x.row(r))
            if (!std::isfinite(v)) throw NumericError("ols: non-finite design entry");
    }

    // Design [1 | X], Householder QR in place; qty accumulates Q^T y.
    Matrix a(n, m);
    std::vector<double> norms(m, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        a(r, 0) = 1.0;
        for (std::size_t c = 0; c < k; ++c) a(r, c + 1) = x(r, c);
    }
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t r = 0; r < n; ++r) norms[c] += a(r, c) * a(r, c);
        norms[c] = std::sqrt(norms[c]);
    }
    std::vector<double> qty(y.begin(), y.end());

    for (std::size_t j = 0; j < m; ++j) {
        double alpha = 0.0;
        for (std::size_t r = j; r < n; ++r) alpha += a(r, j) * a(r, j);
        alpha = std::sqrt(alpha);
        const double tol = 1e-10 * std::max(norms[j], std::numeric_limits<double>::min());
        if (alpha <= tol) {
            // column j lies in the span of columns 0..j-1: report the combination
            std::vector<double> rhs(j);
            for (std::size_t i = 0; i < j; ++i) rhs[i] = a(i, j);
            const auto coef = j ? solve_upper(a, rhs, j) : std::vector<double>{};
            double big = 0.0;
            for (double c : coef) big = std::max(big, std::abs(c));
            std::ostringstream msg;
            msg << "rank-deficient design: column " << column_name(j)
                << " is collinear with {";
            bool first = true;
            for (std::size_t i = 0; i < coef.size(); ++i) {
                if (std::abs(coef[i]) <= 1e-8 * big) continue;
                msg << (first ? "" : ", ") << column_name(i);
                first = false;
            }
            msg << (j == 0 ? "zero column" : "") << "}";
            throw NumericError(msg.str());
        }
        const double r_jj = a(j, j) > 0 ? -alpha : alpha;
        // v = a[j:, j] - r_jj e_1, stored in place
        a(j, j) -= r_jj;
        double vnorm2 = 0.0;
        for (std::size_t r = j; r < n; ++r) vnorm2 += a(r, j) * a(r, j);
        for (std::size_t c = j + 1; c < m; ++c) {
            double dot = 0.0;
            for (std::size_t r = j; r < n; ++r) dot += a(r, j) * a(r, c);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t r = j; r < n; ++r) a(r, c) -= f * a(r, j);
        }
        {
            double dot = 0.0;
            for (std::size_t r = j; r < n; ++r) dot += a(r, j) * qty[r];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t r = j; r < n; ++r) qty[r] -= f * a(r, j);
        }
        a(j, j) = r_jj;
        for (std::size_t r = j + 1; r < n; ++r) a(r, j) = 0.0;
    }

    OlsResult out;
    out.dof = n - m;

    const bool constant = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
    std::vector<double> beta;
    if (constant) {
        beta.assign(m, 0.0);
        beta[0] = y[0];
        out.degenerate_response = true;
    } else {
        beta = solve_upper(a, qty, m);
    }
    out.intercept = beta[0];
    out.coefficients.assign(beta.begin() + 1, beta.end());

    out.fitted.resize(n);
    out.residuals.resize(n);
    double ymean = 0.0;
    for (double v : y) ymean += v;
    ymean /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        double f = beta[0];
        for (std::size_t c = 0; c < k; ++c) f += beta[c + 1] * x(r, c);
        out.fitted[r] = f;
        out.residuals[r] = y[r] - f;
        out.ssr += out.residuals[r] * out.residuals[r];
        out.sst += (y[r] - ymean) * (y[r] - ymean);
    }
    if (constant) out.sst = 0.0;

    // (R^T R)^-1 diagonal = squared row norms of R^-1
    Matrix rinv(m, m);
    for (std::size_t c = 0; c < m; ++c) {
        std::vector<double> e(m, 0.0);
        e[c] = 1.0;
        const auto col = solve_upper(a, e, m);
        for (std::size_t r = 0; r < m; ++r) rinv(r, c) = col[r];
    }
    const double sigma2 = out.ssr / static_cast<double>(out.dof);
    const double df = static_cast<double>(out.dof);
    auto fill_inference = [&](double coef, std::size_t row) {
        double d = 0.0;
        for (std::size_t c = 0; c < m; ++c) d += rinv(row, c) * rinv(row, c);
        const double se = std::sqrt(sigma2 * d);
        double t, p;
        if (se > 0.0) {
            t = coef / se;
            p = t_two_sided_p(t, df);
        } else {
            t = coef == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), coef);
            p = coef == 0.0 ? 1.0 : 0.0;
        }
        out.std_errors.push_back(se);
        out.t_values.push_back(t);
        out.p_values.push_back(p);
    };
    for (std::size_t c = 0; c < k; ++c) fill_inference(beta[c + 1], c + 1);
    fill_inference(beta[0], 0);

    if (out.degenerate_response || out.sst == 0.0) {
        out.degenerate_response = true;
        out.r_squared = 0.0;
        out.f_value = 0.0;
        out.f_p_value = 1.0;
    } else {
        out.r_squared = 1.0 - out.ssr / out.sst;
        if (out.ssr == 0.0) {
            out.f_value = std::numeric_limits<double>::infinity();
            out.f_p_value = 0.0;
        } else {
            out.f_value = ((out.sst - out.ssr) / static_cast<double>(k)) / sigma2;
            out.f_p_value = f_sf(out.f_value, static_cast<double>(k), df);
        }
    }
    return out;
}

}  // namespace infodemic::numerics
