#pragma once

#include <map>
#include <string>
#include <vector>

#include "plekit/lorentz.hpp"
#include "plekit/types.hpp"

namespace plekit {

struct Peak {
    double wavelength_nm = 0.0;
    double height = 0.0; // raw intensity at the peak sample
    double prominence = 0.0;
    int index = 0;
};

// ZPL attribution windows (nm). Defaults cover two spectrometer pixels
// around the V1 and V2 zero-phonon lines.
struct ZplWindows {
    Interval v1{861.8, 863.2};
    Interval v2{916.5, 917.9};
};

void validate(const ZplWindows& windows);

ZplWindows windows_from_json_text(const std::string& text); // {"v1":[lo,hi],"v2":[lo,hi]}
std::string windows_to_json_text(const ZplWindows& windows);

enum class ZplTag { v1, v2, other };
enum class SpectrumLabel { v1, v2, v1_and_v2, multiple, other, none };

std::string to_string(ZplTag tag);
std::string to_string(SpectrumLabel label);

struct TaggedPeak {
    Peak peak;
    ZplTag tag = ZplTag::other;
};

struct SpectrumClassification {
    SpectrumLabel label = SpectrumLabel::none;
    std::vector<TaggedPeak> peaks;
};

struct PeakSearchParams {
    double min_prominence = 0.0;
    double min_height = 0.0;
    int min_distance_samples = 1;
};

// Default thresholds: prominence above 3x the spectrum's median absolute
// deviation, no height cut, no distance thinning.
PeakSearchParams default_search_params(const Spectrum& spectrum);

// Strict local maxima (plateaus at their midpoint sample) filtered by
// prominence and height, then greedily thinned by descending prominence so
// survivors are at least min_distance_samples apart. Sorted by wavelength.
std::vector<Peak> find_peaks(const Spectrum& spectrum, const PeakSearchParams& params);

// Window classification: none / V1 / V2 / V1+V2 / multiple / other.
SpectrumClassification classify(const std::vector<Peak>& peaks, const ZplWindows& windows = {});

struct RegionStats {
    std::map<SpectrumLabel, long> counts;
    long total = 0;

    double fraction(SpectrumLabel label) const;
};

struct BatchEntry {
    std::string region;
    SpectrumClassification classification;
};

// Per-region label counts; fractions sum to one for every non-empty region.
std::map<std::string, RegionStats> batch_stats(const std::vector<BatchEntry>& entries);

// CSV text with header region,label,count,fraction; every label is listed
// per region so zeros are explicit.
std::string stats_to_csv_text(const std::map<std::string, RegionStats>& stats);

} // namespace plekit
