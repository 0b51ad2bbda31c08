#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace infodemic::numerics {

/// Dense row-major matrix of doubles. Small sizes only (a few hundred rows, a handful of
/// columns); no expression templates, no BLAS.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;

    Matrix transpose() const;
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);

    double frobenius_norm() const;
    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Unbiased (n - 1) sample covariance of the columns.
Matrix covariance(const Matrix& data);

struct SymmetricEigen {
    std::vector<double> values;  // descending
    Matrix vectors;              // row i is the unit eigenvector of values[i]
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Eigenvectors are sign
/// normalised so that each one's largest-magnitude entry is positive.
SymmetricEigen symmetric_eigen(const Matrix& a);

struct PcaResult {
    std::vector<double> means;
    std::vector<double> eigenvalues;  // descending, >= 0
    Matrix eigenvectors;              // row i belongs to eigenvalues[i]
    std::vector<double> contribution; // eigenvalue shares; all zero when there is no variance
};

/// Covariance PCA on the columns of `data` (one observation per row). Requires at least
/// two rows and finite entries; throws NumericError otherwise.
PcaResult pca(const Matrix& data);

/// l_i / sum(l). Throws NumericError when all eigenvalues are zero or any is negative.
std::vector<double> contribution_ratios(std::span<const double> eigenvalues);

/// Scores on the first k components: (row - means) * eigenvectors[0..k)^T.
Matrix project(const PcaResult& pca, const Matrix& data, std::size_t k);

/// Maps k-component scores back to data space: scores * eigenvectors[0..k) + means.
Matrix inverse_project(const PcaResult& pca, const Matrix& scores);

struct OlsResult {
    std::vector<double> coefficients;     // slopes a_1..a_k
    double intercept = 0.0;               // b
    std::vector<double> std_errors;       // k slopes, then the intercept
    std::vector<double> t_values;         // same layout
    std::vector<double> p_values;         // two-sided
    double r_squared = 0.0;
    double f_value = 0.0;
    double f_p_value = 1.0;
    double ssr = 0.0;                     // residual sum of squares
    double sst = 0.0;                     // total sum of squares about the mean
    std::size_t dof = 0;                  // n - k - 1
    /// True when the response has zero variance; R^2 and F are then defined as 0.
    bool degenerate_response = false;
    std::vector<double> fitted;
    std::vector<double> residuals;
};

/// Least squares with intercept. Requires rows(X) = len(y) > cols(X) + 1. A design whose
/// columns (with the intercept) are linearly dependent raises NumericError naming the
/// dependent column and the columns it is a combination of.
OlsResult ols(const Matrix& x, std::span<const double> y);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Student-t cumulative distribution with `dof` degrees of freedom (dof >= 1).
double t_cdf(double t, double dof);

/// P(|T| >= |t|).
double t_two_sided_p(double t, double dof);

/// Upper tail of the F distribution, P(F >= f).
double f_sf(double f, double d1, double d2);

}  // namespace infodemic::numerics
