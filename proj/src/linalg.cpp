#include "plekit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace plekit::linalg {

namespace {

// In-place lower Cholesky factor; false when a pivot is not safely positive.
bool factor(std::vector<double>& a, int n) {
    for (int j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (int k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        double l = std::sqrt(d);
        a[j * n + j] = l;
        for (int i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / l;
        }
    }
    return true;
}

void solve_factored(const std::vector<double>& l, int n, std::vector<double>& b) {
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
        b[i] = s / l[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
        b[i] = s / l[i * n + i];
    }
}

} // namespace

bool cholesky_solve(std::vector<double> a, int n, std::vector<double> b, std::vector<double>& x) {
    if (!factor(a, n)) return false;
    solve_factored(a, n, b);
    x = std::move(b);
    return true;
}

bool cholesky_invert(std::vector<double> a, int n, std::vector<double>& inv) {
    if (!factor(a, n)) return false;
    inv.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> e(n);
    for (int c = 0; c < n; ++c) {
        std::fill(e.begin(), e.end(), 0.0);
        e[c] = 1.0;
        solve_factored(a, n, e);
        for (int r = 0; r < n; ++r) inv[r * n + c] = e[r];
    }
    return true;
}

} // namespace plekit::linalg
