#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <span>
#include <string>
#include <unistd.h>
#include <vector>

#include "plekit/rng.hpp"
#include "plekit/signal.hpp"

namespace testutil {

// Central finite-difference Jacobian, independent of the analytic one.
template <class ModelFn>
std::vector<double> fd_jacobian(ModelFn model, std::span<const double> xs, const std::vector<double>& theta,
                                double rel_step = 1e-6) {
    const std::size_t p = theta.size();
    const std::size_t m = xs.size();
    std::vector<double> jac(m * p);
    std::vector<double> lo_out, hi_out;
    for (std::size_t k = 0; k < p; ++k) {
        double h = rel_step * std::max(std::abs(theta[k]), 1e-2);
        std::vector<double> tl = theta, th = theta;
        tl[k] -= h;
        th[k] += h;
        model(xs, tl, lo_out);
        model(xs, th, hi_out);
        for (std::size_t i = 0; i < m; ++i) jac[i * p + k] = (hi_out[i] - lo_out[i]) / (2.0 * h);
    }
    return jac;
}

inline double frobenius(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

inline double frobenius_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Quadratic-time reimplementation of the peak definition used by
// find_peaks: strict local maxima with plateaus at their midpoint, bases
// clipped at the edges, threshold filters, greedy prominence thinning.
struct BrutePeak {
    int index;
    double height;
    double prominence;
};

inline std::vector<BrutePeak> brute_force_peaks(const std::vector<double>& y, double min_prominence,
                                                double min_height, int min_distance) {
    const int n = static_cast<int>(y.size());
    std::vector<BrutePeak> all;
    for (int i = 1; i < n - 1; ++i) {
        if (!(y[i] > y[i - 1])) continue; // strict rise into i
        int j = i;
        while (j < n - 1 && y[j + 1] == y[i]) ++j;
        if (j == n - 1 || !(y[j + 1] < y[i])) continue; // needs a strict fall
        int idx = (i + j) / 2;
        double h = y[idx];
        double left = h, right = h;
        for (int a = i - 1; a >= 0; --a) {
            if (y[a] > h) break;
            left = std::min(left, y[a]);
        }
        for (int a = j + 1; a < n; ++a) {
            if (y[a] > h) break;
            right = std::min(right, y[a]);
        }
        all.push_back({idx, h, h - std::max(left, right)});
    }
    std::vector<BrutePeak> filtered;
    for (const BrutePeak& p : all) {
        if (p.prominence >= min_prominence && p.height >= min_height) filtered.push_back(p);
    }
    std::sort(filtered.begin(), filtered.end(), [](const BrutePeak& a, const BrutePeak& b) {
        if (a.prominence != b.prominence) return a.prominence > b.prominence;
        return a.index < b.index;
    });
    std::vector<BrutePeak> kept;
    for (const BrutePeak& p : filtered) {
        bool ok = true;
        for (const BrutePeak& q : kept) {
            if (std::abs(p.index - q.index) < min_distance) ok = false;
        }
        if (ok) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end(), [](const BrutePeak& a, const BrutePeak& b) { return a.index < b.index; });
    return kept;
}

// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("plekit-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double stddev_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

} // namespace testutil
