#include "plekit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "plekit/parallel.hpp"
#include "plekit/signal.hpp"

namespace plekit {

namespace {

// Linear interpolation on a monotone grid; nullopt outside the data range
// (shifted samples are dropped, never extrapolated).
std::optional<double> lerp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    bool increasing = xs.back() > xs.front();
    double lo = increasing ? xs.front() : xs.back();
    double hi = increasing ? xs.back() : xs.front();
    if (x < lo || x > hi) return std::nullopt;

    std::size_t j;
    if (increasing) {
        j = std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
    } else {
        j = std::lower_bound(xs.begin(), xs.end(), x, std::greater<double>()) - xs.begin();
    }
    if (j == 0) return ys.front();
    double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

LinewidthResult assemble_result(FitResult final_fit, LinewidthMethod method, int n_total, int n_used,
                                double splitting_mhz, const PipelineOptions& options) {
    const DoubleLorentzParams& p = final_fit.doublet();
    CalibrationFactor calib = calibrate(p.separation(), splitting_mhz);

    double fwhm_a1_v = options.a1_is_lower ? p.p1.fwhm : p.p2.fwhm;
    double fwhm_a2_v = options.a1_is_lower ? p.p2.fwhm : p.p1.fwhm;

    LinewidthResult res;
    res.fwhm_a1_mhz = fwhm_a1_v * calib.mhz_per_volt;
    res.fwhm_a2_mhz = fwhm_a2_v * calib.mhz_per_volt;
    res.error_a1_mhz = attach_error(res.fwhm_a1_mhz);
    res.error_a2_mhz = attach_error(res.fwhm_a2_mhz);
    res.n_lines_total = n_total;
    res.n_lines_used = n_used;
    res.method = method;
    res.calibration = calib;
    res.final_fit = std::move(final_fit);
    return res;
}

} // namespace

CalibrationFactor calibrate(double separation_v, double splitting_mhz) {
    if (!(separation_v > 0.0) || !std::isfinite(separation_v))
        throw NonPositiveSeparation("fitted peak separation must be positive");
    if (!(splitting_mhz > 0.0) || !std::isfinite(splitting_mhz))
        throw ValidationError("splitting_mhz", "must be positive and finite");
    return {splitting_mhz / separation_v, separation_v, splitting_mhz};
}

double attach_error(double fwhm_mhz) {
    if (!(fwhm_mhz >= 0.0)) throw ValidationError("fwhm_mhz", "must be non-negative");
    return 0.075 * fwhm_mhz;
}

std::string to_string(LinewidthMethod method) {
    return method == LinewidthMethod::summed ? "summed" : "aligned";
}

std::vector<std::optional<FitResult>> fit_lines(const PleScan& scan, const FitConstraints& constraints,
                                                int threads, FitWeighting weighting) {
    validate(scan);
    validate(constraints);
    std::vector<std::optional<FitResult>> fits(scan.lines.size());
    parallel_for(static_cast<int>(scan.lines.size()), threads, [&](int i) {
        try {
            DoubleLorentzParams guess = initial_guess(scan.lines[i], constraints);
            fits[i] = fit_double(scan.lines[i], guess, constraints, weighting);
        } catch (const NonConvergence&) {
        } catch (const DegenerateData&) {
        }
    });
    return fits;
}

PleLine summed_line(const PleScan& scan) {
    validate(scan);
    if (!scan.uniform_grid())
        throw GridMismatch("summing PLE lines requires all lines on one voltage grid");
    PleLine sum;
    sum.index = 0;
    sum.t0_s = scan.lines.front().t0_s;
    sum.voltage_v = scan.lines.front().voltage_v;
    sum.counts.assign(sum.voltage_v.size(), 0.0);
    for (const PleLine& line : scan.lines) {
        for (std::size_t k = 0; k < sum.counts.size(); ++k) sum.counts[k] += line.counts[k];
    }
    return sum;
}

AlignedSum aligned_sum(const PleScan& scan, const FitConstraints& constraints, int threads) {
    return aligned_sum(scan, fit_lines(scan, constraints, threads));
}

AlignedSum aligned_sum(const PleScan& scan, const std::vector<std::optional<FitResult>>& fits) {
    validate(scan);
    if (fits.size() != scan.lines.size())
        throw ValidationError("fits", "need one (possibly empty) fit per line");
    AlignedSum out;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (fits[i] && fit_successful(*fits[i])) out.used.push_back(i);
    }
    if (out.used.size() < 2)
        throw TooFewSuccessfulLines("only " + std::to_string(out.used.size()) + " of " +
                                    std::to_string(fits.size()) + " line fits were successful");

    double target = 0.0;
    for (std::size_t i : out.used) target += fits[i]->doublet().mean_center();
    target /= static_cast<double>(out.used.size());

    // one rigid shift per line, resampled onto the first line's grid
    out.line.index = 0;
    out.line.t0_s = scan.lines.front().t0_s;
    out.line.voltage_v = scan.lines.front().voltage_v;
    out.line.counts.assign(out.line.voltage_v.size(), 0.0);
    for (std::size_t i : out.used) {
        const PleLine& line = scan.lines[i];
        double shift = target - fits[i]->doublet().mean_center();
        for (std::size_t k = 0; k < out.line.voltage_v.size(); ++k) {
            if (auto v = lerp_at(line.voltage_v, line.counts, out.line.voltage_v[k] - shift))
                out.line.counts[k] += *v;
        }
    }
    return out;
}

LinewidthResult summed_linewidth(const PleScan& scan, const FitConstraints& constraints,
                                 const PipelineOptions& options) {
    validate(constraints);
    PleLine sum = summed_line(scan);
    DoubleLorentzParams guess = initial_guess(sum, constraints);
    FitResult fit = fit_double(sum, guess, constraints, options.weighting);
    return assemble_result(std::move(fit), LinewidthMethod::summed, static_cast<int>(scan.lines.size()),
                           static_cast<int>(scan.lines.size()), scan.meta.splitting_mhz, options);
}

LinewidthResult aligned_linewidth(const PleScan& scan, const FitConstraints& constraints,
                                  const PipelineOptions& options) {
    validate(scan);
    validate(constraints);
    AlignedSum aligned =
        aligned_sum(scan, fit_lines(scan, constraints, options.threads, options.weighting));
    DoubleLorentzParams guess = initial_guess(aligned.line, constraints);
    FitResult fit = fit_double(aligned.line, guess, constraints, options.weighting);
    return assemble_result(std::move(fit), LinewidthMethod::aligned, static_cast<int>(scan.lines.size()),
                           static_cast<int>(aligned.used.size()), scan.meta.splitting_mhz, options);
}

std::string linewidth_result_to_json_text(const LinewidthResult& result, bool verbose) {
    nlohmann::json j;
    j["method"] = to_string(result.method);
    j["fwhm_a1_mhz"] = result.fwhm_a1_mhz;
    j["error_a1_mhz"] = result.error_a1_mhz;
    j["fwhm_a2_mhz"] = result.fwhm_a2_mhz;
    j["error_a2_mhz"] = result.error_a2_mhz;
    j["n_lines_total"] = result.n_lines_total;
    j["n_lines_used"] = result.n_lines_used;
    j["mhz_per_volt"] = result.calibration.mhz_per_volt;
    if (verbose) {
        const DoubleLorentzParams& p = result.final_fit.doublet();
        nlohmann::json fit;
        fit["model"] = "double_lorentzian"; // the sum is always fitted as a doublet
        fit["separation_v"] = result.calibration.derived_from_separation_v;
        fit["splitting_mhz"] = result.calibration.splitting_mhz;
        fit["cost"] = result.final_fit.cost;
        fit["n_iter"] = result.final_fit.n_iter;
        fit["amp1"] = p.p1.amplitude;
        fit["amp2"] = p.p2.amplitude;
        fit["center1_v"] = p.p1.center;
        fit["center2_v"] = p.p2.center;
        fit["fwhm1_v"] = p.p1.fwhm;
        fit["fwhm2_v"] = p.p2.fwhm;
        fit["baseline"] = p.baseline;
        fit["std_errors"] = result.final_fit.std_errors;
        // statistical linewidth errors from the fit, separate from the 7.5% rule
        fit["stat_error_fwhm1_mhz"] = result.final_fit.std_errors[4] * result.calibration.mhz_per_volt;
        fit["stat_error_fwhm2_mhz"] = result.final_fit.std_errors[5] * result.calibration.mhz_per_volt;
        j["fit"] = std::move(fit);
    }
    return j.dump(2) + "\n";
}

FitConstraints derive_constraints(const PleScan& scan, double separation_tol_frac) {
    validate(scan);
    const std::vector<double>& grid = scan.lines.front().voltage_v;
    std::vector<double> profile(grid.size(), 0.0);
    for (const PleLine& line : scan.lines) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (auto v = lerp_at(line.voltage_v, line.counts, grid[k])) profile[k] += *v;
        }
    }

    std::vector<double> smoothed = signal::moving_average(profile, 5);
    std::vector<signal::PeakCandidate> cands = signal::local_maxima(smoothed);
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        if (a.prominence != b.prominence) return a.prominence > b.prominence;
        return a.index < b.index;
    });

    double span = std::abs(grid.back() - grid.front());
    double spacing = span / static_cast<double>(grid.size() - 1);

    double c_lo, c_hi;
    if (cands.size() >= 2) {
        double va = grid[cands[0].index];
        double vb = grid[cands[1].index];
        c_lo = std::min(va, vb);
        c_hi = std::max(va, vb);
    } else {
        double mid = 0.5 * (grid.front() + grid.back());
        c_lo = mid - 0.25 * span;
        c_hi = mid + 0.25 * span;
    }
    double sep = c_hi - c_lo;
    if (!(sep > 0.0)) { // two adjacent equal samples cannot happen, but stay safe
        sep = 0.5 * span;
        double mid = 0.5 * (c_lo + c_hi);
        c_lo = mid - 0.5 * sep;
        c_hi = mid + 0.5 * sep;
    }
    double half = std::max(0.35 * sep, 3.0 * spacing);

    FitConstraints c;
    c.pos_window_1 = {c_lo - half, c_lo + half};
    c.pos_window_2 = {c_hi - half, c_hi + half};
    c.max_fwhm = span;
    c.separation_ref = sep;
    c.separation_tol_frac = separation_tol_frac;
    validate(c);
    return c;
}

} // namespace plekit
