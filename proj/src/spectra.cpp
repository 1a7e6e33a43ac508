#include "plekit/spectra.hpp"

#include <algorithm>

#include "json.hpp"
#include "plekit/io.hpp"
#include "plekit/signal.hpp"

namespace plekit {

using nlohmann::json;

void validate(const ZplWindows& w) {
    if (!(w.v1.lo <= w.v1.hi)) throw ValidationError("v1", "window must be non-empty");
    if (!(w.v2.lo <= w.v2.hi)) throw ValidationError("v2", "window must be non-empty");
    bool disjoint = w.v1.hi < w.v2.lo || w.v2.hi < w.v1.lo;
    if (!disjoint) throw ValidationError("windows", "v1 and v2 windows must be disjoint");
}

ZplWindows windows_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid windows JSON: ") + e.what());
    }
    auto read = [&](const char* key) -> Interval {
        if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2)
            throw ParseError(std::string("windows JSON needs \"") + key + "\": [lo, hi]");
        return {j.at(key).at(0).get<double>(), j.at(key).at(1).get<double>()};
    };
    ZplWindows w;
    w.v1 = read("v1");
    w.v2 = read("v2");
    validate(w);
    return w;
}

std::string windows_to_json_text(const ZplWindows& w) {
    json j;
    j["v1"] = {w.v1.lo, w.v1.hi};
    j["v2"] = {w.v2.lo, w.v2.hi};
    return j.dump(2) + "\n";
}

std::string to_string(ZplTag tag) {
    switch (tag) {
    case ZplTag::v1: return "V1";
    case ZplTag::v2: return "V2";
    case ZplTag::other: return "other";
    }
    return "other";
}

std::string to_string(SpectrumLabel label) {
    switch (label) {
    case SpectrumLabel::v1: return "V1";
    case SpectrumLabel::v2: return "V2";
    case SpectrumLabel::v1_and_v2: return "V1+V2";
    case SpectrumLabel::multiple: return "multiple";
    case SpectrumLabel::other: return "other";
    case SpectrumLabel::none: return "none";
    }
    return "none";
}

PeakSearchParams default_search_params(const Spectrum& spectrum) {
    PeakSearchParams p;
    p.min_prominence = 3.0 * signal::median_abs_deviation(spectrum.intensity);
    p.min_height = 0.0;
    p.min_distance_samples = 1;
    return p;
}

std::vector<Peak> find_peaks(const Spectrum& spectrum, const PeakSearchParams& params) {
    validate(spectrum);
    if (params.min_prominence < 0.0 || params.min_distance_samples < 1)
        throw ValidationError("search_params", "thresholds must be non-negative, distance >= 1");

    std::vector<signal::PeakCandidate> kept = signal::select_peaks(
        signal::local_maxima(spectrum.intensity), params.min_prominence, params.min_height,
        params.min_distance_samples);

    std::vector<Peak> out;
    out.reserve(kept.size());
    for (const signal::PeakCandidate& c : kept)
        out.push_back({spectrum.wavelength_nm[c.index], c.height, c.prominence, c.index});
    return out;
}

SpectrumClassification classify(const std::vector<Peak>& peaks, const ZplWindows& windows) {
    validate(windows);

    SpectrumClassification cls;
    long in_v1 = 0, in_v2 = 0;
    for (const Peak& p : peaks) {
        ZplTag tag = ZplTag::other;
        if (windows.v1.contains(p.wavelength_nm)) {
            tag = ZplTag::v1;
            ++in_v1;
        } else if (windows.v2.contains(p.wavelength_nm)) {
            tag = ZplTag::v2;
            ++in_v2;
        }
        cls.peaks.push_back({p, tag});
    }

    if (peaks.empty()) {
        cls.label = SpectrumLabel::none;
    } else if (peaks.size() == 1 && in_v1 == 1) {
        cls.label = SpectrumLabel::v1;
    } else if (peaks.size() == 1 && in_v2 == 1) {
        cls.label = SpectrumLabel::v2;
    } else if (in_v1 > 0 && in_v2 > 0) {
        cls.label = SpectrumLabel::v1_and_v2;
    } else if (in_v1 + in_v2 > 0) {
        cls.label = SpectrumLabel::multiple; // more than one peak, window hit
    } else {
        cls.label = SpectrumLabel::other;
    }
    return cls;
}

double RegionStats::fraction(SpectrumLabel label) const {
    if (total == 0) return 0.0;
    auto it = counts.find(label);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

std::map<std::string, RegionStats> batch_stats(const std::vector<BatchEntry>& entries) {
    std::map<std::string, RegionStats> out;
    for (const BatchEntry& e : entries) {
        RegionStats& rs = out[e.region];
        ++rs.counts[e.classification.label];
        ++rs.total;
    }
    return out;
}

std::string stats_to_csv_text(const std::map<std::string, RegionStats>& stats) {
    static const SpectrumLabel all[] = {SpectrumLabel::v1,       SpectrumLabel::v2,
                                        SpectrumLabel::v1_and_v2, SpectrumLabel::multiple,
                                        SpectrumLabel::other,    SpectrumLabel::none};
    std::string out = "region,label,count,fraction\n";
    for (const auto& [region, rs] : stats) {
        for (SpectrumLabel label : all) {
            auto it = rs.counts.find(label);
            long count = it == rs.counts.end() ? 0 : it->second;
            out += region;
            out += ',';
            out += to_string(label);
            out += ',';
            out += std::to_string(count);
            out += ',';
            out += format_double(rs.fraction(label));
            out += '\n';
        }
    }
    return out;
}

} // namespace plekit
