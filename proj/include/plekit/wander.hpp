#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plekit/lorentz.hpp"
#include "plekit/pipeline.hpp"
#include "plekit/types.hpp"

namespace plekit {

// Which fitted center feeds the wandering rate. The default follows the
// rigid-alignment convention and uses the doublet's mean center.
enum class CenterChoice { mean, a1, a2 };

// Spectral wandering rate of one consecutive line pair.
struct WanderSample {
    double rate_mhz_per_s = 0.0;  // signed
    double sigma_mhz_per_s = 0.0; // both centers' standard errors in quadrature
    std::string region_id;
    int pair_first = 0; // positional line indices (i, i+1)
    int pair_second = 0;
};

struct RateHistogram {
    double bin_width_mhz_per_s = 0.0;
    std::vector<double> edges; // uniform, one bin centered on zero
    std::vector<long> counts;  // half-open bins [left, right)
    long n_kept = 0;
    long n_rejected = 0;
};

// Rates for every consecutive pair whose two line fits are both successful:
//   rate = (center_{i+1} - center_i) * mhz_per_volt / (t0_{i+1} - t0_i)
std::vector<WanderSample> wander_rates(const PleScan& scan, const std::vector<std::optional<FitResult>>& fits,
                                       const CalibrationFactor& calib, CenterChoice center = CenterChoice::mean,
                                       bool a1_is_lower = true);

// Drop samples whose propagated sigma is unphysically high. Order preserved.
std::pair<std::vector<WanderSample>, long> reject_outliers(const std::vector<WanderSample>& samples,
                                                           double sigma_threshold_mhz_per_s = 200.0);

// Bin-width rule: the largest per-region mean sigma.
double bin_width(const std::map<std::string, std::vector<WanderSample>>& region_samples);

std::map<std::string, std::vector<WanderSample>> by_region(const std::vector<WanderSample>& samples);

// Uniform binning with one bin centered on zero, covering the full rate
// range of the kept samples.
RateHistogram histogram(const std::vector<WanderSample>& kept, double width, long n_rejected = 0);

// CSV text with header bin_center_mhz_per_s,count.
std::string histogram_to_csv_text(const RateHistogram& hist);

// Sample list CSV (region,pair_first,pair_second,rate_mhz_per_s,
// sigma_mhz_per_s) so rate sets can be archived and re-binned without the
// raw scans.
std::string samples_to_csv_text(const std::vector<WanderSample>& samples);
std::vector<WanderSample> samples_from_csv_text(const std::string& text);

} // namespace plekit
