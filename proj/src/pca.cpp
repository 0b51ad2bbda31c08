#include <algorithm>
#include <cmath>
#include <numeric>

#include "infodemic/error.hpp"
#include "infodemic/numerics.hpp"

namespace infodemic::numerics {

Matrix covariance(const Matrix& data) {
    const std::size_t n = data.rows(), p = data.cols();
    if (n < 2) throw NumericError("covariance needs at least two rows");
    std::vector<double> mean(p, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < p; ++c) mean[c] += data(r, c);
    for (double& m : mean) m /= static_cast<double>(n);
    Matrix cov(p, p);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < p; ++i) {
            const double di = data(r, i) - mean[i];
            for (std::size_t j = i; j < p; ++j) cov(i, j) += di * (data(r, j) - mean[j]);
        }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            cov(i, j) /= static_cast<double>(n - 1);
            cov(j, i) = cov(i, j);
        }
    return cov;
}

SymmetricEigen symmetric_eigen(const Matrix& input) {
    const std::size_t n = input.rows();
    if (input.cols() != n) throw DomainError("symmetric_eigen: matrix not square");
    Matrix a = input;
    Matrix v = Matrix::identity(n);  // columns accumulate eigenvectors

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
        if (off == 0.0) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                // Once apq is below the precision of both diagonal entries, drop it.
                const double g = 100.0 * std::abs(apq);
                if (sweep > 3 && std::abs(app) + g == std::abs(app) &&
                    std::abs(aqq) + g == std::abs(aqq)) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p), arq = a(r, q);
                    a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                    a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.values[k] = a(src, src);
        double largest = 0.0;
        for (std::size_t r = 0; r < n; ++r) largest = std::max(largest, std::abs(v(r, src)));
        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r) {
            // first entry within rounding of the largest magnitude decides the sign
            if (std::abs(v(r, src)) >= largest * (1.0 - 1e-12)) {
                sign = v(r, src) < 0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t r = 0; r < n; ++r) out.vectors(k, r) = sign * v(r, src);
    }
    return out;
}

PcaResult pca(const Matrix& data) {
    if (data.rows() < 2) throw NumericError("pca needs at least two rows");
    for (std::size_t r = 0; r < data.rows(); ++r)
        for (double x : data.row(r))
            if (!std::isfinite(x)) throw NumericError("pca input contains non-finite values");

    const std::size_t p = data.cols();
    PcaResult out;
    out.means.assign(p, 0.0);
    for (std::size_t r = 0; r < data.rows(); ++r)
        for (std::size_t c = 0; c < p; ++c) out.means[c] += data(r, c);
    for (double& m : out.means) m /= static_cast<double>(data.rows());

    SymmetricEigen eig = symmetric_eigen(covariance(data));
    for (double& l : eig.values) l = std::max(l, 0.0);
    out.eigenvalues = std::move(eig.values);
    out.eigenvectors = std::move(eig.vectors);

    const double total = std::accumulate(out.eigenvalues.begin(), out.eigenvalues.end(), 0.0);
    out.contribution = total > 0.0 ? contribution_ratios(out.eigenvalues)
                                   : std::vector<double>(p, 0.0);
    return out;
}

std::vector<double> contribution_ratios(std::span<const double> eigenvalues) {
    double total = 0.0;
    for (double l : eigenvalues) {
        if (!(l >= 0.0)) throw NumericError("contribution ratios need non-negative eigenvalues");
        total += l;
    }
    if (total == 0.0) throw NumericError("contribution ratios undefined: all eigenvalues are zero");
    std::vector<double> out;
    out.reserve(eigenvalues.size());
    for (double l : eigenvalues) out.push_back(l / total);
    return out;
}

Matrix project(const PcaResult& pca, const Matrix& data, std::size_t k) {
    const std::size_t p = pca.means.size();
    if (k == 0 || k > p) throw DomainError("retained component count out of range");
    if (data.cols() != p) throw DomainError("project: column count does not match the PCA");
    Matrix scores(data.rows(), k);
    for (std::size_t r = 0; r < data.rows(); ++r)
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < p; ++j)
                s += (data(r, j) - pca.means[j]) * pca.eigenvectors(i, j);
            scores(r, i) = s;
        }
    return scores;
}

Matrix inverse_project(const PcaResult& pca, const Matrix& scores) {
    const std::size_t p = pca.means.size();
    const std::size_t k = scores.cols();
    if (k == 0 || k > p) throw DomainError("score column count out of range");
    Matrix out(scores.rows(), p);
    for (std::size_t r = 0; r < scores.rows(); ++r)
        for (std::size_t j = 0; j < p; ++j) {
            double x = pca.means[j];
            for (std::size_t i = 0; i < k; ++i) x += scores(r, i) * pca.eigenvectors(i, j);
            out(r, j) = x;
        }
    return out;
}

}  // namespace infodemic::numerics
