#include "plekit/wander.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plekit/io.hpp"

namespace plekit {

namespace {

// center value and its standard error for the chosen convention; natural
// covariance order is (amp1, amp2, c1, c2, fwhm1, fwhm2, b)
std::pair<double, double> center_of(const FitResult& fit, CenterChoice choice, bool a1_is_lower) {
    const DoubleLorentzParams& p = fit.doublet();
    bool pick_lower = choice == CenterChoice::a1 ? a1_is_lower : !a1_is_lower;
    switch (choice) {
    case CenterChoice::mean: {
        double var = 0.25 * (fit.covariance[2 * 7 + 2] + fit.covariance[3 * 7 + 3] +
                             2.0 * fit.covariance[2 * 7 + 3]);
        return {p.mean_center(), var >= 0.0 ? std::sqrt(var) : std::numeric_limits<double>::infinity()};
    }
    case CenterChoice::a1:
    case CenterChoice::a2:
        if (pick_lower) return {p.p1.center, fit.std_errors[2]};
        return {p.p2.center, fit.std_errors[3]};
    }
    return {p.mean_center(), 0.0};
}

} // namespace

std::vector<WanderSample> wander_rates(const PleScan& scan, const std::vector<std::optional<FitResult>>& fits,
                                       const CalibrationFactor& calib, CenterChoice center, bool a1_is_lower) {
    if (fits.size() != scan.lines.size())
        throw ValidationError("fits", "need one (possibly empty) fit per line");
    if (!(calib.mhz_per_volt > 0.0)) throw ValidationError("calibration", "mhz_per_volt must be positive");

    std::vector<WanderSample> out;
    for (std::size_t i = 0; i + 1 < scan.lines.size(); ++i) {
        const auto& fa = fits[i];
        const auto& fb = fits[i + 1];
        if (!fa || !fb || !fit_successful(*fa) || !fit_successful(*fb)) continue;

        double dt = scan.lines[i + 1].t0_s - scan.lines[i].t0_s;
        if (!(dt > 0.0)) throw NonPositiveDt("line start times must be strictly increasing");

        auto [ca, sa] = center_of(*fa, center, a1_is_lower);
        auto [cb, sb] = center_of(*fb, center, a1_is_lower);

        WanderSample s;
        s.rate_mhz_per_s = (cb - ca) * calib.mhz_per_volt / dt;
        s.sigma_mhz_per_s = std::sqrt(sa * sa + sb * sb) * calib.mhz_per_volt / dt;
        s.region_id = scan.meta.region_id;
        s.pair_first = static_cast<int>(i);
        s.pair_second = static_cast<int>(i + 1);
        out.push_back(std::move(s));
    }
    return out;
}

std::pair<std::vector<WanderSample>, long> reject_outliers(const std::vector<WanderSample>& samples,
                                                           double sigma_threshold_mhz_per_s) {
    if (!(sigma_threshold_mhz_per_s > 0.0))
        throw ValidationError("sigma_threshold", "must be positive");
    std::vector<WanderSample> kept;
    kept.reserve(samples.size());
    long rejected = 0;
    for (const WanderSample& s : samples) {
        if (s.sigma_mhz_per_s > sigma_threshold_mhz_per_s) {
            ++rejected;
        } else {
            kept.push_back(s);
        }
    }
    return {std::move(kept), rejected};
}

std::map<std::string, std::vector<WanderSample>> by_region(const std::vector<WanderSample>& samples) {
    std::map<std::string, std::vector<WanderSample>> out;
    for (const WanderSample& s : samples) out[s.region_id].push_back(s);
    return out;
}

double bin_width(const std::map<std::string, std::vector<WanderSample>>& region_samples) {
    if (region_samples.empty()) throw EmptyRegion("no regions to derive a bin width from");
    double width = 0.0;
    for (const auto& [region, samples] : region_samples) {
        if (samples.empty()) throw EmptyRegion("region \"" + region + "\" has no samples");
        double mean = 0.0;
        for (const WanderSample& s : samples) mean += s.sigma_mhz_per_s;
        mean /= static_cast<double>(samples.size());
        width = std::max(width, mean);
    }
    return width;
}

std::string histogram_to_csv_text(const RateHistogram& hist) {
    std::string out = "bin_center_mhz_per_s,count\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        out += format_double(0.5 * (hist.edges[b] + hist.edges[b + 1]));
        out += ',';
        out += std::to_string(hist.counts[b]);
        out += '\n';
    }
    return out;
}

std::string samples_to_csv_text(const std::vector<WanderSample>& samples) {
    std::string out = "region,pair_first,pair_second,rate_mhz_per_s,sigma_mhz_per_s\n";
    for (const WanderSample& s : samples) {
        out += s.region_id;
        out += ',';
        out += std::to_string(s.pair_first);
        out += ',';
        out += std::to_string(s.pair_second);
        out += ',';
        out += format_double(s.rate_mhz_per_s);
        out += ',';
        out += format_double(s.sigma_mhz_per_s);
        out += '\n';
    }
    return out;
}

std::vector<WanderSample> samples_from_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty samples CSV");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "region,pair_first,pair_second,rate_mhz_per_s,sigma_mhz_per_s")
        throw ParseError("samples CSV has an unexpected header");

    std::vector<WanderSample> out;
    std::string row;
    std::size_t row_no = 1;
    while (std::getline(in, row)) {
        ++row_no;
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (row.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = row.find(',', start);
            cells.push_back(row.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cells.size() != 5)
            throw ParseError("samples CSV row " + std::to_string(row_no) + " needs 5 columns");
        WanderSample s;
        s.region_id = cells[0];
        try {
            s.pair_first = std::stoi(cells[1]);
            s.pair_second = std::stoi(cells[2]);
            s.rate_mhz_per_s = std::stod(cells[3]);
            s.sigma_mhz_per_s = std::stod(cells[4]);
        } catch (const std::exception&) {
            throw ParseError("bad number in samples CSV row " + std::to_string(row_no));
        }
        if (s.sigma_mhz_per_s < 0.0)
            throw ParseError("negative sigma in samples CSV row " + std::to_string(row_no));
        out.push_back(std::move(s));
    }
    return out;
}

RateHistogram histogram(const std::vector<WanderSample>& kept, double width, long n_rejected) {
    if (!(width > 0.0) || !std::isfinite(width)) throw ValidationError("bin_width", "must be positive");

    RateHistogram h;
    h.bin_width_mhz_per_s = width;
    h.n_kept = static_cast<long>(kept.size());
    h.n_rejected = n_rejected;
    if (kept.empty()) return h;

    // bin n is centered on n*width and covers [n*width - width/2, n*width + width/2)
    auto bin_of = [width](double r) { return static_cast<long>(std::floor(r / width + 0.5)); };
    long lo = bin_of(kept.front().rate_mhz_per_s);
    long hi = lo;
    for (const WanderSample& s : kept) {
        long b = bin_of(s.rate_mhz_per_s);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    h.edges.resize(h.counts.size() + 1);
    for (std::size_t j = 0; j < h.edges.size(); ++j)
        h.edges[j] = (static_cast<double>(lo) + static_cast<double>(j) - 0.5) * width;
    for (const WanderSample& s : kept) ++h.counts[static_cast<std::size_t>(bin_of(s.rate_mhz_per_s) - lo)];
    return h;
}

} // namespace plekit
