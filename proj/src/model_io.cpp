#include <cmath>
#include <limits>

#include "json.hpp"

#include "infodemic/error.hpp"
#include "infodemic/salesmodel.hpp"

namespace infodemic {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

// JSON has no inf/nan, so non-finite values travel as strings.
json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double den(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ParseError("bad number '" + s + "' in model file", 0);
    }
    return j.get<double>();
}

json vec(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

std::vector<double> unvec(const json& a) {
    std::vector<double> v;
    for (const auto& x : a) v.push_back(den(x));
    return v;
}

json mat(const numerics::Matrix& m) {
    json a = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        a.push_back(vec({row.begin(), row.end()}));
    }
    return a;
}

numerics::Matrix unmat(const json& a) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : a) rows.push_back(unvec(r));
    return rows.empty() ? numerics::Matrix() : numerics::Matrix::from_rows(rows);
}

}  // namespace

std::string serialize_model(const FittedSalesModel& m,
                            const std::map<std::string, std::string, std::less<>>& annotations) {
    const auto& d = m.diagnostics;
    json j;
    j["format"] = "infodemic-sales-model";
    j["version"] = kFormatVersion;
    j["k"] = m.k;
    j["means"] = vec(m.pca.means);
    j["eigenvalues"] = vec(m.pca.eigenvalues);
    j["eigenvectors"] = mat(m.pca.eigenvectors);
    j["contribution"] = vec(m.pca.contribution);
    j["coefficients"] = vec(m.coefficients);
    j["intercept"] = num(m.intercept);
    j["active"] = m.active;
    j["impacts"] = vec({m.impacts.begin(), m.impacts.end()});
    j["diagnostics"] = {
        {"coefficients", vec(d.coefficients)},
        {"intercept", num(d.intercept)},
        {"std_errors", vec(d.std_errors)},
        {"t_values", vec(d.t_values)},
        {"p_values", vec(d.p_values)},
        {"r_squared", num(d.r_squared)},
        {"f_value", num(d.f_value)},
        {"f_p_value", num(d.f_p_value)},
        {"ssr", num(d.ssr)},
        {"sst", num(d.sst)},
        {"dof", d.dof},
        {"degenerate_response", d.degenerate_response},
        {"fitted", vec(d.fitted)},
        {"residuals", vec(d.residuals)},
    };
    if (!annotations.empty()) {
        json a = json::object();
        for (const auto& [k, v] : annotations) a[k] = v;
        j["run_config"] = std::move(a);
    }
    return j.dump(2) + "\n";
}

FittedSalesModel deserialize_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what(), 0);
    }
    try {
        if (j.at("format") != "infodemic-sales-model")
            throw ParseError("not a sales model file", 0);
        const int version = j.at("version").get<int>();
        if (version != kFormatVersion)
            throw ParseError("unsupported model file version " + std::to_string(version), 0);
        FittedSalesModel m;
        m.k = j.at("k").get<std::size_t>();
        m.pca.means = unvec(j.at("means"));
        m.pca.eigenvalues = unvec(j.at("eigenvalues"));
        m.pca.eigenvectors = unmat(j.at("eigenvectors"));
        m.pca.contribution = unvec(j.at("contribution"));
        m.coefficients = unvec(j.at("coefficients"));
        m.intercept = den(j.at("intercept"));
        m.active = j.at("active").get<std::vector<bool>>();
        const auto imp = unvec(j.at("impacts"));
        if (imp.size() != kExposureClasses || m.pca.means.size() != kExposureClasses ||
            m.coefficients.size() != m.k || m.active.size() != m.k ||
            m.pca.eigenvectors.rows() < m.k || m.pca.eigenvectors.cols() != kExposureClasses)
            throw ParseError("model file has inconsistent dimensions", 0);
        std::copy(imp.begin(), imp.end(), m.impacts.begin());
        const auto& d = j.at("diagnostics");
        auto& o = m.diagnostics;
        o.coefficients = unvec(d.at("coefficients"));
        o.intercept = den(d.at("intercept"));
        o.std_errors = unvec(d.at("std_errors"));
        o.t_values = unvec(d.at("t_values"));
        o.p_values = unvec(d.at("p_values"));
        o.r_squared = den(d.at("r_squared"));
        o.f_value = den(d.at("f_value"));
        o.f_p_value = den(d.at("f_p_value"));
        o.ssr = den(d.at("ssr"));
        o.sst = den(d.at("sst"));
        o.dof = d.at("dof").get<std::size_t>();
        o.degenerate_response = d.at("degenerate_response").get<bool>();
        o.fitted = unvec(d.at("fitted"));
        o.residuals = unvec(d.at("residuals"));
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model file: ") + e.what(), 0);
    }
}

}  // namespace infodemic
