#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "infodemic/date.hpp"
#include "infodemic/exposure.hpp"
#include "infodemic/numerics.hpp"

namespace infodemic {

using ImpactVector = std::array<double, kExposureClasses>;

/// Year-over-year change in daily sales: sales_t / sales_prev - 1, where sales_prev is
/// the same weekday 364 days earlier. Throws DomainError when sales_prev <= 0.
double sales_index(double sales_t, double sales_prev);

inline constexpr int kSalesLagDays = 364;

struct SalesPoint {
    Date date;
    double index = 0.0;

    bool operator==(const SalesPoint&) const = default;
};

/// Daily sales index, strictly increasing dates.
struct SalesSeries {
    std::vector<SalesPoint> points;

    std::size_t size() const { return points.size(); }
    std::vector<double> values() const;
    bool operator==(const SalesSeries&) const = default;
};

/// Accepts `date,sales_index` or `date,sales,sales_prev_year` (the index is then computed).
SalesSeries read_sales_csv(std::istream& in);
void write_sales_csv(std::ostream& out, const SalesSeries& series);

struct FitOptions {
    /// Principal components kept as regressors.
    std::size_t k = 4;
    /// Zero the coefficients of components whose p-value exceeds `alpha` when predicting
    /// and computing impacts.
    bool drop_nonsignificant = false;
    double alpha = 0.05;
};

/// PCA of the seven exposure columns followed by OLS of the sales index on the first k
/// component scores.
struct FittedSalesModel {
    numerics::PcaResult pca;
    std::size_t k = 0;
    std::vector<double> coefficients;  // a_1..a_k as fitted
    double intercept = 0.0;            // b
    std::vector<bool> active;          // components used for prediction
    numerics::OlsResult diagnostics;
    ImpactVector impacts{};            // per additional viewer of each class

    /// Coefficients with inactive components zeroed.
    std::vector<double> effective_coefficients() const;
};

/// Throws DomainError on date mismatch or k out of range; NumericError on rank deficiency.
FittedSalesModel fit(const ExposureMatrix& matrix, const SalesSeries& sales,
                     const FitOptions& options = {});

/// Model assembled from externally supplied parts (no diagnostics). The eigenvector rows
/// need not be exactly orthonormal.
FittedSalesModel assemble_model(std::vector<double> means,
                                const std::vector<std::vector<double>>& eigenvector_rows,
                                std::vector<double> coefficients, double intercept);

/// impact_j = sum over retained components i of a_i * e_ij.
ImpactVector per_viewer_impacts(const FittedSalesModel& model);

/// totals_j * impact_j.
ImpactVector group_impacts(const ImpactVector& impacts, const ExposureCounts& totals);
ImpactVector group_impacts(const FittedSalesModel& model, const ExposureCounts& totals);

/// Per day: b + scores(day) . a, scores centred on the model's stored means. Unclamped.
SalesSeries predict(const FittedSalesModel& model, const ExposureMatrix& matrix);

double sum_index(const SalesSeries& series);

/// Exposure matrix as a days x 7 numeric matrix.
numerics::Matrix to_matrix(const ExposureMatrix& matrix);

/// Versioned JSON document; doubles round-trip bit-exactly. `annotations` are stored
/// alongside (for provenance) and ignored when reading.
std::string serialize_model(const FittedSalesModel& model,
                            const std::map<std::string, std::string, std::less<>>& annotations = {});
FittedSalesModel deserialize_model(const std::string& text);

/// Table of a_1..a_k and b with standard errors, t and p values, plus R^2, F and dof.
void write_diagnostics_csv(std::ostream& out, const FittedSalesModel& model);

}  // namespace infodemic
