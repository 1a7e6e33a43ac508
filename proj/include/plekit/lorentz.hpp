#pragma once

#include <span>
#include <variant>
#include <vector>

#include "plekit/types.hpp"

namespace plekit {

// Single Lorentzian, amplitude/FWHM parameterized:
//   L(x) = baseline + amplitude * (fwhm/2)^2 / ((x - center)^2 + (fwhm/2)^2)
// so L(center) = baseline + amplitude and L(center +- fwhm/2) = baseline + amplitude/2.
struct LorentzParams {
    double amplitude = 0.0;
    double center = 0.0;
    double fwhm = 1.0;
    double baseline = 0.0;
};

// Sum of two Lorentzians with a single shared baseline. p1 is the
// lower-center peak; the baselines inside p1/p2 are unused and kept at zero.
struct DoubleLorentzParams {
    LorentzParams p1;
    LorentzParams p2;
    double baseline = 0.0;

    double separation() const { return p2.center - p1.center; }
    double mean_center() const { return 0.5 * (p1.center + p2.center); }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

// The per-line fit restraints: no negative amplitudes, FWHMs smaller than
// the scanned interval, center position windows, and a bounded fractional
// variation of the peak separation.
struct FitConstraints {
    Interval pos_window_1;
    Interval pos_window_2;
    double max_fwhm = 0.0;       // scanned voltage interval length
    double separation_ref = 0.0; // expected |center2 - center1|
    double separation_tol_frac = 0.10;
};

void validate(const FitConstraints& constraints);
void validate(const LorentzParams& params);
void validate(const DoubleLorentzParams& params);

// True when params satisfy every constraint as stated (closed windows,
// strict FWHM bound, separation within the fractional tolerance).
bool satisfies(const DoubleLorentzParams& params, const FitConstraints& constraints);

double lorentz_eval(const LorentzParams& params, double x);
double double_lorentz_eval(const DoubleLorentzParams& params, double x);

// Box bounds for fit_single, ordered (amplitude, center, fwhm, baseline).
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
};

// Amplitude >= 0, fwhm in (0, span], center inside the data range, baseline free.
Box default_single_bounds(std::span<const double> xs);

// Natural parameter order of the reported errors/covariance:
//   single: (amplitude, center, fwhm, baseline)
//   double: (amp1, amp2, center1, center2, fwhm1, fwhm2, baseline)
struct FitResult {
    std::variant<LorentzParams, DoubleLorentzParams> params;
    std::vector<double> std_errors;
    std::vector<double> covariance; // row-major p x p
    double cost = 0.0;              // final sum of squared residuals
    bool converged = false;
    int n_iter = 0;
    std::vector<double> accepted_costs; // cost after each accepted step

    const LorentzParams& single() const { return std::get<LorentzParams>(params); }
    const DoubleLorentzParams& doublet() const { return std::get<DoubleLorentzParams>(params); }
};

// Optional per-point weighting: poisson scales residuals by
// 1/sqrt(max(y, 1)). Off by default.
enum class FitWeighting { none, poisson };

// Damped least squares (Levenberg-Marquardt) with analytic Jacobians and
// box-projected trial steps. Stops on relative cost change or relative step
// below 1e-10; iteration cap 200. Throws NonConvergence when the cap is hit
// with the cost still moving, DegenerateData when ys is constant.
FitResult fit_single(std::span<const double> xs, std::span<const double> ys, const LorentzParams& init,
                     const Box& bounds, FitWeighting weighting = FitWeighting::none);

// Doublet fit with the separation constraint handled by reparameterizing to
// (mean center, separation), both box-bounded. Throws ConstraintInfeasible
// when windows and separation bounds cannot hold together.
FitResult fit_double(const PleLine& line, const DoubleLorentzParams& init, const FitConstraints& constraints,
                     FitWeighting weighting = FitWeighting::none);

// Feasible starting point: centers at the two most prominent local maxima of
// a 5-point moving average (ties broken by lower index), one visible peak
// placing the partner at +-separation_ref, a flat line falling back to the
// window midpoints shifted by +-separation_ref/2. The result always
// satisfies the constraints.
DoubleLorentzParams initial_guess(const PleLine& line, const FitConstraints& constraints);

// The pipeline's per-line filter: converged, both center errors below the
// respective FWHM, both amplitudes above three of their standard errors.
bool fit_successful(const FitResult& result);

// Exhaustive search over a finite candidate grid; deterministic verification
// oracle for the solver. Ties keep the earliest grid element.
struct SingleGridResult {
    LorentzParams params;
    double cost = 0.0;
    std::size_t index = 0;
};
struct DoubleGridResult {
    DoubleLorentzParams params;
    double cost = 0.0;
    std::size_t index = 0;
};
SingleGridResult grid_oracle(std::span<const double> xs, std::span<const double> ys,
                             const std::vector<LorentzParams>& grid);
DoubleGridResult grid_oracle(std::span<const double> xs, std::span<const double> ys,
                             const std::vector<DoubleLorentzParams>& grid);

namespace detail {

// Model/Jacobian in solver space, exposed for the finite-difference checks.
// Double-fit solver parameters are (amp1, amp2, mean, separation, fwhm1, fwhm2, baseline).
void single_model(std::span<const double> xs, const std::vector<double>& theta, std::vector<double>& yhat);
void single_jacobian(std::span<const double> xs, const std::vector<double>& theta, std::vector<double>& jac);
void double_model(std::span<const double> xs, const std::vector<double>& theta, std::vector<double>& yhat);
void double_jacobian(std::span<const double> xs, const std::vector<double>& theta, std::vector<double>& jac);

} // namespace detail

} // namespace plekit
