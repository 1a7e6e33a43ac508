#include "doctest.h"

#include <cmath>

#include "plekit/linalg.hpp"
#include "plekit/rng.hpp"

using namespace plekit;

TEST_CASE("cholesky solve reproduces a known solution") {
    // a = b * b^T with b lower triangular, so a is SPD by construction
    std::vector<double> a = {4.0, 2.0, 0.0, 2.0, 5.0, 1.0, 0.0, 1.0, 3.0};
    std::vector<double> x_true = {1.0, -2.0, 0.5};
    std::vector<double> rhs(3, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rhs[i] += a[i * 3 + j] * x_true[j];
    std::vector<double> x;
    REQUIRE(linalg::cholesky_solve(a, 3, rhs, x));
    for (int i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-12));
}

TEST_CASE("cholesky invert gives the identity back") {
    Rng rng(8);
    const int n = 5;
    // random SPD via l * l^T + n * I
    std::vector<double> l(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) l[i * n + j] = rng.uniform();
    std::vector<double> a(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) a[i * n + j] += l[i * n + k] * l[j * n + k];
            if (i == j) a[i * n + j] += n;
        }
    std::vector<double> inv;
    REQUIRE(linalg::cholesky_invert(a, n, inv));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += a[i * n + k] * inv[k * n + j];
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-10);
        }
}

TEST_CASE("cholesky rejects an indefinite matrix") {
    std::vector<double> a = {1.0, 2.0, 2.0, 1.0}; // eigenvalues 3 and -1
    std::vector<double> x;
    CHECK(!linalg::cholesky_solve(a, 2, {1.0, 1.0}, x));
    std::vector<double> inv;
    CHECK(!linalg::cholesky_invert(a, 2, inv));
}
