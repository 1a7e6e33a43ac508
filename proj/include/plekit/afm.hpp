#pragma once

#include <string>
#include <utility>
#include <vector>

#include "plekit/types.hpp"

namespace plekit {

enum class RowCorrection { none, median, median_diff };

// Exponents (a, b) of the 2-D monomials x^a y^b with a+b <= degree, in the
// fixed order shared by poly_detrend and the synthetic surface generator.
std::vector<std::pair<int, int>> poly_basis_exponents(int degree);

std::string to_string(RowCorrection mode);
RowCorrection row_correction_from(const std::string& name);

// Per-row offset removal. median subtracts each row's median; median_diff
// subtracts the running median of row-to-row differences, which keeps the
// tilt within rows.
AfmMap step_line_correct(const AfmMap& map, RowCorrection mode);

// Least-squares removal of a 2-D polynomial surface (all monomials x^a y^b
// with a+b <= degree, coordinates normalized to [-1, 1]). Throws
// RankDeficient when the basis is not over-determined on the grid.
AfmMap poly_detrend(const AfmMap& map, int degree);

struct RoughnessResult {
    double rq_pm = 0.0; // sqrt(mean(z^2))
    double ra_pm = 0.0; // mean(|z|)
    int degree = -1;    // -1 when no detrend ran in this call
    RowCorrection row_correction = RowCorrection::none;
};

// Rq/Ra of the map as-is; callers are expected to detrend first.
RoughnessResult roughness(const AfmMap& map);

// step_line_correct -> poly_detrend -> roughness, with the settings recorded
// in the result.
RoughnessResult afm_pipeline(const AfmMap& map, RowCorrection mode, int degree);

std::string roughness_to_json_text(const RoughnessResult& result);

} // namespace plekit
