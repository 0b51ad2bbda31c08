#include "infodemic/salesmodel.hpp"

#include <cmath>
#include <istream>
#include <utility>
#include <ostream>

#include "infodemic/csv.hpp"
#include "infodemic/error.hpp"

namespace infodemic {

double sales_index(double sales_t, double sales_prev) {
    if (!(sales_prev > 0.0)) throw DomainError("previous-year sales must be positive");
    return sales_t / sales_prev - 1.0;
}

std::vector<double> SalesSeries::values() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.index);
    return v;
}

SalesSeries read_sales_csv(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> f;
    SalesSeries s;
    bool first = true;
    std::size_t width = 0;
    while (reader.next(f)) {
        if (std::exchange(first, false) && !f.empty() && f[0] == "date") {
            if (f == std::vector<std::string>{"date", "sales_index"}) width = 2;
            else if (f == std::vector<std::string>{"date", "sales", "sales_prev_year"}) width = 3;
            else throw ParseError("unknown sales header", reader.line());
            continue;
        }
        if (width == 0) width = f.size();
        if (f.size() != width || (width != 2 && width != 3))
            throw ParseError("expected date,sales_index or date,sales,sales_prev_year",
                             reader.line());
        SalesPoint p;
        try {
            p.date = Date::parse(f[0]);
            p.index = width == 2 ? csv::parse_double(f[1], reader.line())
                                 : sales_index(csv::parse_double(f[1], reader.line()),
                                               csv::parse_double(f[2], reader.line()));
        } catch (const ParseError& e) {
            if (e.line()) throw;
            throw ParseError(e.what(), reader.line());
        } catch (const DomainError& e) {
            throw ParseError(e.what(), reader.line());
        }
        if (!s.points.empty() && !(s.points.back().date < p.date))
            throw ParseError("sales dates must be strictly increasing", reader.line());
        s.points.push_back(p);
    }
    return s;
}

void write_sales_csv(std::ostream& out, const SalesSeries& series) {
    out << "date,sales_index\n";
    for (const auto& p : series.points) out << p.date.iso() << ',' << csv::format_double(p.index) << '\n';
}

numerics::Matrix to_matrix(const ExposureMatrix& matrix) {
    numerics::Matrix m(matrix.days(), kExposureClasses);
    for (std::size_t r = 0; r < matrix.days(); ++r)
        for (std::size_t c = 0; c < kExposureClasses; ++c)
            m(r, c) = static_cast<double>(matrix.rows[r].counts[c]);
    return m;
}

std::vector<double> FittedSalesModel::effective_coefficients() const {
    std::vector<double> a = coefficients;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (i < active.size() && !active[i]) a[i] = 0.0;
    return a;
}

FittedSalesModel fit(const ExposureMatrix& matrix, const SalesSeries& sales,
                     const FitOptions& options) {
    if (matrix.days() != sales.size())
        throw DomainError("exposure matrix and sales series cover different day counts");
    for (std::size_t d = 0; d < matrix.days(); ++d)
        if (matrix.rows[d].day != sales.points[d].date)
            throw DomainError("date mismatch at row " + std::to_string(d) + ": exposure " +
                              matrix.rows[d].day.iso() + " vs sales " +
                              sales.points[d].date.iso());
    if (options.k == 0 || options.k > kExposureClasses)
        throw DomainError("k must be in [1, 7]");
    if (matrix.days() <= options.k + 1)
        throw DomainError("need more days than retained components plus one");

    const numerics::Matrix x = to_matrix(matrix);
    FittedSalesModel model;
    model.pca = numerics::pca(x);
    model.k = options.k;
    const numerics::Matrix scores = numerics::project(model.pca, x, options.k);
    const std::vector<double> y = sales.values();
    model.diagnostics = numerics::ols(scores, y);
    model.coefficients = model.diagnostics.coefficients;
    model.intercept = model.diagnostics.intercept;
    model.active.assign(options.k, true);
    if (options.drop_nonsignificant)
        for (std::size_t i = 0; i < options.k; ++i)
            model.active[i] = model.diagnostics.p_values[i] <= options.alpha;
    model.impacts = per_viewer_impacts(model);
    return model;
}

FittedSalesModel assemble_model(std::vector<double> means,
                                const std::vector<std::vector<double>>& rows,
                                std::vector<double> coefficients, double intercept) {
    if (means.size() != kExposureClasses) throw DomainError("means must have 7 entries");
    if (rows.size() != coefficients.size() || rows.empty() || rows.size() > kExposureClasses)
        throw DomainError("need one eigenvector row per coefficient (1..7)");
    FittedSalesModel m;
    m.pca.means = std::move(means);
    m.pca.eigenvectors = numerics::Matrix::from_rows(rows);
    if (m.pca.eigenvectors.cols() != kExposureClasses)
        throw DomainError("eigenvector rows must have 7 entries");
    m.k = rows.size();
    m.coefficients = std::move(coefficients);
    m.intercept = intercept;
    m.active.assign(m.k, true);
    m.impacts = per_viewer_impacts(m);
    return m;
}

ImpactVector per_viewer_impacts(const FittedSalesModel& model) {
    const auto a = model.effective_coefficients();
    ImpactVector out{};
    for (std::size_t i = 0; i < model.k; ++i)
        for (std::size_t j = 0; j < kExposureClasses; ++j)
            out[j] += a[i] * model.pca.eigenvectors(i, j);
    return out;
}

ImpactVector group_impacts(const ImpactVector& impacts, const ExposureCounts& totals) {
    ImpactVector out{};
    for (std::size_t j = 0; j < kExposureClasses; ++j)
        out[j] = static_cast<double>(totals[j]) * impacts[j];
    return out;
}

ImpactVector group_impacts(const FittedSalesModel& model, const ExposureCounts& totals) {
    return group_impacts(per_viewer_impacts(model), totals);
}

SalesSeries predict(const FittedSalesModel& model, const ExposureMatrix& matrix) {
    const auto a = model.effective_coefficients();
    SalesSeries out;
    out.points.reserve(matrix.days());
    for (const auto& row : matrix.rows) {
        double s = model.intercept;
        for (std::size_t i = 0; i < model.k; ++i) {
            double score = 0.0;
            for (std::size_t j = 0; j < kExposureClasses; ++j)
                score += (static_cast<double>(row.counts[j]) - model.pca.means[j]) *
                         model.pca.eigenvectors(i, j);
            s += a[i] * score;
        }
        out.points.push_back({row.day, s});
    }
    return out;
}

double sum_index(const SalesSeries& series) {
    double s = 0.0;
    for (const auto& p : series.points) s += p.index;
    return s;
}

void write_diagnostics_csv(std::ostream& out, const FittedSalesModel& m) {
    const auto& d = m.diagnostics;
    out << "term,coefficient,std_error,t_value,p_value\n";
    const std::size_t k = m.coefficients.size();
    auto line = [&](const std::string& name, double coef, std::size_t idx) {
        out << name << ',' << csv::format_double(coef);
        if (idx < d.std_errors.size())
            out << ',' << csv::format_double(d.std_errors[idx]) << ','
                << csv::format_double(d.t_values[idx]) << ',' << csv::format_double(d.p_values[idx]);
        else
            out << ",,,";
        out << '\n';
    };
    for (std::size_t i = 0; i < k; ++i) line("a" + std::to_string(i + 1), m.coefficients[i], i);
    line("b", m.intercept, k);
    out << "# r_squared," << csv::format_double(d.r_squared) << '\n';
    out << "# f_value," << csv::format_double(d.f_value) << '\n';
    out << "# f_p_value," << csv::format_double(d.f_p_value) << '\n';
    out << "# dof," << d.dof << '\n';
    if (d.degenerate_response) out << "# degenerate_response,1\n";
}

}  // namespace infodemic
