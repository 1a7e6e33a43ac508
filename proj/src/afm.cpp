#include "plekit/afm.hpp"

#include <cmath>

#include "json.hpp"
#include "plekit/linalg.hpp"
#include "plekit/signal.hpp"

namespace plekit {

std::string to_string(RowCorrection mode) {
    switch (mode) {
    case RowCorrection::none: return "none";
    case RowCorrection::median: return "median";
    case RowCorrection::median_diff: return "median_diff";
    }
    return "none";
}

RowCorrection row_correction_from(const std::string& name) {
    if (name == "none") return RowCorrection::none;
    if (name == "median") return RowCorrection::median;
    if (name == "median_diff") return RowCorrection::median_diff;
    throw ValidationError("row_correction", "unknown mode \"" + name + "\"");
}

AfmMap step_line_correct(const AfmMap& map, RowCorrection mode) {
    validate(map);
    if (mode == RowCorrection::none) return map;

    AfmMap out = map;
    std::vector<double> row(map.nx);
    if (mode == RowCorrection::median) {
        for (int r = 0; r < map.ny; ++r) {
            for (int c = 0; c < map.nx; ++c) row[c] = map.at(r, c);
            double med = signal::median(row);
            for (int c = 0; c < map.nx; ++c) out.at(r, c) = map.at(r, c) - med;
        }
        return out;
    }
    // median_diff: accumulate the median of row-to-row differences
    double offset = 0.0;
    for (int r = 1; r < map.ny; ++r) {
        for (int c = 0; c < map.nx; ++c) row[c] = map.at(r, c) - map.at(r - 1, c);
        offset += signal::median(row);
        for (int c = 0; c < map.nx; ++c) out.at(r, c) = map.at(r, c) - offset;
    }
    return out;
}

std::vector<std::pair<int, int>> poly_basis_exponents(int degree) {
    std::vector<std::pair<int, int>> exps;
    for (int total = 0; total <= degree; ++total) {
        for (int a = total; a >= 0; --a) exps.emplace_back(a, total - a);
    }
    return exps;
}

AfmMap poly_detrend(const AfmMap& map, int degree) {
    validate(map);
    if (degree < 0) throw ValidationError("degree", "must be non-negative");

    auto exps = poly_basis_exponents(degree);
    const int k = static_cast<int>(exps.size());
    const std::size_t n = map.heights_nm.size();
    if (static_cast<std::size_t>(k) >= n)
        throw RankDeficient("polynomial basis is not over-determined on this grid");

    // coordinates normalized to [-1, 1] for conditioning
    std::vector<std::vector<double>> xp(map.nx), yp(map.ny);
    for (int c = 0; c < map.nx; ++c) {
        double x = map.nx > 1 ? 2.0 * c / (map.nx - 1.0) - 1.0 : 0.0;
        xp[c].resize(degree + 1);
        xp[c][0] = 1.0;
        for (int a = 1; a <= degree; ++a) xp[c][a] = xp[c][a - 1] * x;
    }
    for (int r = 0; r < map.ny; ++r) {
        double y = map.ny > 1 ? 2.0 * r / (map.ny - 1.0) - 1.0 : 0.0;
        yp[r].resize(degree + 1);
        yp[r][0] = 1.0;
        for (int b = 1; b <= degree; ++b) yp[r][b] = yp[r][b - 1] * y;
    }

    std::vector<double> gram(static_cast<std::size_t>(k) * k, 0.0), rhs(k, 0.0), phi(k);
    for (int r = 0; r < map.ny; ++r) {
        for (int c = 0; c < map.nx; ++c) {
            for (int j = 0; j < k; ++j) phi[j] = xp[c][exps[j].first] * yp[r][exps[j].second];
            double z = map.at(r, c);
            for (int a = 0; a < k; ++a) {
                rhs[a] += phi[a] * z;
                for (int b = a; b < k; ++b) gram[a * k + b] += phi[a] * phi[b];
            }
        }
    }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < a; ++b) gram[a * k + b] = gram[b * k + a];

    std::vector<double> coeff;
    if (!linalg::cholesky_solve(gram, k, rhs, coeff))
        throw RankDeficient("polynomial basis is rank-deficient on this grid");

    AfmMap out = map;
    for (int r = 0; r < map.ny; ++r) {
        for (int c = 0; c < map.nx; ++c) {
            double fit = 0.0;
            for (int j = 0; j < k; ++j) fit += coeff[j] * xp[c][exps[j].first] * yp[r][exps[j].second];
            out.at(r, c) = map.at(r, c) - fit;
        }
    }
    return out;
}

RoughnessResult roughness(const AfmMap& map) {
    validate(map);
    double sq = 0.0, ab = 0.0;
    for (double z : map.heights_nm) {
        sq += z * z;
        ab += std::abs(z);
    }
    double n = static_cast<double>(map.heights_nm.size());
    RoughnessResult res;
    res.rq_pm = std::sqrt(sq / n) * 1000.0;
    res.ra_pm = ab / n * 1000.0;
    return res;
}

RoughnessResult afm_pipeline(const AfmMap& map, RowCorrection mode, int degree) {
    AfmMap corrected = step_line_correct(map, mode);
    AfmMap detrended = poly_detrend(corrected, degree);
    RoughnessResult res = roughness(detrended);
    res.degree = degree;
    res.row_correction = mode;
    return res;
}

std::string roughness_to_json_text(const RoughnessResult& result) {
    nlohmann::json j;
    j["rq_pm"] = result.rq_pm;
    j["ra_pm"] = result.ra_pm;
    j["degree"] = result.degree;
    j["row_correction"] = to_string(result.row_correction);
    return j.dump(2) + "\n";
}

} // namespace plekit
