#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plekit/types.hpp"

namespace plekit {

// Ground-truth generators for every analysis path. All generators are pure
// functions of their config (including the seed); see rng.hpp for the fixed
// generator and distribution algorithms.

struct PleSynthConfig {
    double fwhm_mhz = 60.0;
    double splitting_mhz = 1000.0;
    double mhz_per_volt = 1000.0;
    int n_lines = 50;
    int samples_per_line = 400;
    double scan_span_v = 2.0;
    double peak_counts = 100.0;      // expected counts at each peak maximum
    double background_counts = 5.0;
    double walk_std_mhz_per_line = 0.0; // random-walk step std of the doublet center
    double line_period_s = 1.0;
    std::uint64_t seed = 0;
    bool noiseless = false; // emit the exact model instead of Poisson draws
    std::string region_id = "synth";
};

struct PleGroundTruth {
    std::vector<double> centers_mhz; // walk offset of the doublet mean, per line
    std::vector<double> true_rates_mhz_per_s;
    double true_fwhm_mhz = 0.0;
    double splitting_mhz = 0.0;
    double mhz_per_volt = 0.0;
    double line_period_s = 0.0;
    double walk_std_mhz_per_line = 0.0;
    std::uint64_t seed = 0;
};

// Doublet centered on the scan with centers (mid + W_i) +- splitting/2 in
// frequency; W is a Gaussian random walk starting at 0. Counts are Poisson
// draws around the model unless noiseless is set.
std::pair<PleScan, PleGroundTruth> synth_ple(const PleSynthConfig& config);

PleSynthConfig ple_config_from_json_text(const std::string& text);
std::string ground_truth_to_json_text(const PleGroundTruth& truth);

struct PlantedPeak {
    double center_nm = 0.0;
    double height = 0.0;
    double width_nm = 0.0;
};

struct SpectrumSynthConfig {
    std::vector<PlantedPeak> peaks;
    double background = 0.0;
    double noise_std = 0.0;
    double lo_nm = 850.0;
    double hi_nm = 950.0;
    int n_samples = 1000;
    double resolution_nm = 0.35;
    std::uint64_t seed = 0;
};

// Planted Lorentzian peaks on a uniform grid plus Gaussian noise.
Spectrum synth_spectrum(const SpectrumSynthConfig& config);
std::string spectrum_truth_to_json_text(const SpectrumSynthConfig& config);

struct AfmSynthConfig {
    int nx = 512;
    int ny = 512;
    double dx_um = 5.0 / 512.0;
    double dy_um = 5.0 / 512.0;
    double sigma_pm = 350.0; // white roughness std
    int poly_degree = 0;
    std::vector<double> poly_coeffs_nm; // poly_basis_exponents order; empty = flat
    double row_offset_std_nm = 0.0;
    std::uint64_t seed = 0;
};

// Polynomial background (normalized coordinates) + per-row Gaussian offsets
// + white Gaussian roughness.
AfmMap synth_afm(const AfmSynthConfig& config);
std::string afm_truth_to_json_text(const AfmSynthConfig& config);

} // namespace plekit
