#pragma once

#include <vector>

namespace plekit::linalg {

// Small dense symmetric positive-definite kernels used by the fit solver
// and the polynomial detrend. Matrices are row-major n x n.

// Solve a*x = b via Cholesky. Returns false if a is not (numerically) SPD.
bool cholesky_solve(std::vector<double> a, int n, std::vector<double> b, std::vector<double>& x);

// Invert an SPD matrix via Cholesky. Returns false if not SPD.
bool cholesky_invert(std::vector<double> a, int n, std::vector<double>& inv);

} // namespace plekit::linalg
