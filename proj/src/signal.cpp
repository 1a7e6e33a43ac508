#include "plekit/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace plekit::signal {

std::vector<double> moving_average(const std::vector<double>& y, int window) {
    const int n = static_cast<int>(y.size());
    const int half = window / 2;
    std::vector<double> out(y.size());
    for (int i = 0; i < n; ++i) {
        int lo = std::max(0, i - half);
        int hi = std::min(n - 1, i + half);
        double s = 0.0;
        for (int j = lo; j <= hi; ++j) s += y[j];
        out[i] = s / (hi - lo + 1);
    }
    return out;
}

std::vector<PeakCandidate> local_maxima(const std::vector<double>& y) {
    std::vector<PeakCandidate> out;
    const int n = static_cast<int>(y.size());
    int i = 1;
    while (i < n - 1) {
        if (y[i] > y[i - 1]) {
            int k = i;
            while (k + 1 < n && y[k + 1] == y[i]) ++k;
            if (k < n - 1 && y[k + 1] < y[i]) {
                PeakCandidate p;
                p.index = (i + k) / 2;
                p.height = y[p.index];
                // walk each side until the signal rises above the peak or
                // the edge is reached; base is the minimum on the way
                double left_min = p.height;
                for (int j = i - 1; j >= 0 && y[j] <= p.height; --j) left_min = std::min(left_min, y[j]);
                double right_min = p.height;
                for (int j = k + 1; j < n && y[j] <= p.height; ++j) right_min = std::min(right_min, y[j]);
                p.prominence = p.height - std::max(left_min, right_min);
                out.push_back(p);
            }
            i = k + 1;
        } else {
            ++i;
        }
    }
    return out;
}

std::vector<PeakCandidate> select_peaks(std::vector<PeakCandidate> candidates, double min_prominence,
                                        double min_height, int min_distance_samples) {
    std::erase_if(candidates, [&](const PeakCandidate& p) {
        return p.prominence < min_prominence || p.height < min_height;
    });
    std::sort(candidates.begin(), candidates.end(), [](const PeakCandidate& a, const PeakCandidate& b) {
        if (a.prominence != b.prominence) return a.prominence > b.prominence;
        return a.index < b.index;
    });
    std::vector<PeakCandidate> kept;
    for (const PeakCandidate& p : candidates) {
        bool ok = true;
        for (const PeakCandidate& q : kept) {
            if (std::abs(p.index - q.index) < min_distance_samples) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end(),
              [](const PeakCandidate& a, const PeakCandidate& b) { return a.index < b.index; });
    return kept;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double median_abs_deviation(const std::vector<double>& values) {
    double med = median(values);
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::abs(values[i] - med);
    return median(std::move(dev));
}

} // namespace plekit::signal
