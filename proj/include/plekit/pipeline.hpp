#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plekit/lorentz.hpp"
#include "plekit/types.hpp"

namespace plekit {

// Voltage -> frequency scale derived from the fitted A1-A2 separation and
// the known physical splitting (1 GHz for the V2 doublet by default).
struct CalibrationFactor {
    double mhz_per_volt = 0.0;
    double derived_from_separation_v = 0.0;
    double splitting_mhz = 0.0;
};

CalibrationFactor calibrate(double separation_v, double splitting_mhz);

// The fixed 7.5% linewidth error, from the sample-to-sample spread of the
// excited-state zero-field splitting.
double attach_error(double fwhm_mhz);

enum class LinewidthMethod { summed, aligned };

std::string to_string(LinewidthMethod method);

struct LinewidthResult {
    double fwhm_a1_mhz = 0.0;
    double fwhm_a2_mhz = 0.0;
    double error_a1_mhz = 0.0; // always exactly 0.075 * fwhm_a1_mhz
    double error_a2_mhz = 0.0;
    int n_lines_total = 0;
    int n_lines_used = 0;
    LinewidthMethod method = LinewidthMethod::aligned;
    CalibrationFactor calibration;
    FitResult final_fit; // provenance: the fit the numbers came from
};

struct PipelineOptions {
    bool a1_is_lower = true; // label the lower-voltage peak A1
    int threads = 1;
    FitWeighting weighting = FitWeighting::none;
};

// Per-line doublet fits, in line order. Lines whose fit does not converge or
// carries no signal come back as nullopt; the success filter is applied by
// the consumers, not here.
std::vector<std::optional<FitResult>> fit_lines(const PleScan& scan, const FitConstraints& constraints,
                                                int threads = 1,
                                                FitWeighting weighting = FitWeighting::none);

// Pointwise sum of all lines; requires the common grid.
PleLine summed_line(const PleScan& scan);

// The rigidly aligned sum on the first line's grid plus the indices of the
// successful lines that entered it.
struct AlignedSum {
    PleLine line;
    std::vector<std::size_t> used;
};
AlignedSum aligned_sum(const PleScan& scan, const FitConstraints& constraints, int threads = 1);
AlignedSum aligned_sum(const PleScan& scan, const std::vector<std::optional<FitResult>>& fits);

// Result JSON with the documented keys; verbose adds the final fit's
// statistical errors and solver diagnostics.
std::string linewidth_result_to_json_text(const LinewidthResult& result, bool verbose = false);

// Sum all lines pointwise (common grid required), fit the doublet once and
// calibrate from its separation. Only meaningful with little to no spectral
// wandering.
LinewidthResult summed_linewidth(const PleScan& scan, const FitConstraints& constraints,
                                 const PipelineOptions& options = {});

// Fit every line, rigidly shift the successful ones so the fitted doublet
// centers align, sum the shifted lines on the first line's grid (linear
// interpolation, samples shifted off the grid are dropped) and fit again.
LinewidthResult aligned_linewidth(const PleScan& scan, const FitConstraints& constraints,
                                  const PipelineOptions& options = {});

// Data-driven default restraints for a scan: position windows around the two
// most prominent peaks of the summed profile, max FWHM equal to the scanned
// interval, separation reference from the peak distance.
FitConstraints derive_constraints(const PleScan& scan, double separation_tol_frac = 0.10);

} // namespace plekit
