#pragma once

#include <vector>

namespace plekit::signal {

// 1-D peak machinery shared by the spectrum classifier and the fit
// initializer.

struct PeakCandidate {
    int index = 0;        // sample index (plateau midpoint, rounded down)
    double height = 0.0;  // raw value at index
    double prominence = 0.0;
};

// Centered moving average with the window clipped at the edges.
std::vector<double> moving_average(const std::vector<double>& y, int window);

// All strict local maxima with their topographic prominence. A plateau
// bounded by strict rises on both sides counts once, at its midpoint sample.
// First/last samples are never maxima. Prominence bases clip at the signal
// edges.
std::vector<PeakCandidate> local_maxima(const std::vector<double>& y);

// Threshold filtering plus greedy distance thinning by descending prominence
// (ties broken by lower index). Output sorted by index.
std::vector<PeakCandidate> select_peaks(std::vector<PeakCandidate> candidates, double min_prominence,
                                        double min_height, int min_distance_samples);

double median(std::vector<double> values);

// Median absolute deviation around the median (unscaled).
double median_abs_deviation(const std::vector<double>& values);

} // namespace plekit::signal
