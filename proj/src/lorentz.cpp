#include "plekit/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "plekit/linalg.hpp"
#include "plekit/signal.hpp"

namespace plekit {

namespace {

constexpr double kCostTol = 1e-10;
constexpr double kStepTol = 1e-10;
constexpr int kMaxIter = 200;
constexpr double kLambda0 = 1e-3;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Margins keep box-clamped parameters strictly inside the stated
// constraints after the (mean, separation) -> (c1, c2) round trip.
constexpr double kRelMargin = 1e-12;

struct LmProblem {
    int m = 0;
    int p = 0;
    std::function<void(const std::vector<double>&, std::vector<double>&)> eval;
    std::function<void(const std::vector<double>&, std::vector<double>&)> jacobian;
    std::function<void(std::vector<double>&)> project;
};

struct LmOutcome {
    std::vector<double> theta;
    double cost = 0.0;
    bool converged = false;
    int n_iter = 0;
    std::vector<double> accepted_costs;
    std::vector<double> jtj; // at the solution, without damping
};

double residual_cost(const LmProblem& pb, const std::vector<double>& theta, std::span<const double> ys,
                     std::vector<double>& yhat, std::vector<double>& r) {
    pb.eval(theta, yhat);
    r.resize(pb.m);
    double cost = 0.0;
    for (int i = 0; i < pb.m; ++i) {
        r[i] = yhat[i] - ys[i];
        cost += r[i] * r[i];
    }
    return cost;
}

void normal_matrix(const std::vector<double>& jac, const std::vector<double>& r, int m, int p,
                   std::vector<double>& jtj, std::vector<double>& jtr) {
    jtj.assign(static_cast<std::size_t>(p) * p, 0.0);
    jtr.assign(p, 0.0);
    for (int i = 0; i < m; ++i) {
        const double* row = &jac[static_cast<std::size_t>(i) * p];
        for (int a = 0; a < p; ++a) {
            jtr[a] += row[a] * r[i];
            for (int b = a; b < p; ++b) jtj[a * p + b] += row[a] * row[b];
        }
    }
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < a; ++b) jtj[a * p + b] = jtj[b * p + a];
}

LmOutcome lm_solve(const LmProblem& pb, std::vector<double> theta, std::span<const double> ys) {
    const int p = pb.p;
    pb.project(theta);

    std::vector<double> yhat, r, rt, jac, jtj, g, delta, trial;
    double cost = residual_cost(pb, theta, ys, yhat, r);
    double lambda = kLambda0;

    LmOutcome out;
    out.accepted_costs.push_back(cost);

    for (int iter = 1; iter <= kMaxIter; ++iter) {
        out.n_iter = iter;
        pb.jacobian(theta, jac);
        normal_matrix(jac, r, pb.m, p, jtj, g);

        double gmax = 0.0, dmax = 0.0;
        for (int k = 0; k < p; ++k) {
            gmax = std::max(gmax, std::abs(g[k]));
            dmax = std::max(dmax, jtj[k * p + k]);
        }
        if (gmax == 0.0) { // stationary point, nothing left to move
            out.converged = true;
            break;
        }

        bool accepted = false;
        while (true) {
            std::vector<double> a = jtj;
            for (int k = 0; k < p; ++k)
                a[k * p + k] += lambda * std::max(jtj[k * p + k], dmax * 1e-14 + 1e-300);
            std::vector<double> rhs(p);
            for (int k = 0; k < p; ++k) rhs[k] = -g[k];
            if (linalg::cholesky_solve(a, p, rhs, delta)) {
                trial = theta;
                for (int k = 0; k < p; ++k) trial[k] += delta[k];
                pb.project(trial);
                double step_sq = 0.0, base_sq = 0.0;
                for (int k = 0; k < p; ++k) {
                    double d = trial[k] - theta[k];
                    step_sq += d * d;
                    base_sq += theta[k] * theta[k];
                }
                double trial_cost = residual_cost(pb, trial, ys, yhat, rt);
                if (std::isfinite(trial_cost) && trial_cost < cost) {
                    double rel_drop = (cost - trial_cost) / std::max(cost, 1e-300);
                    theta = trial;
                    r = rt;
                    cost = trial_cost;
                    out.accepted_costs.push_back(cost);
                    lambda = std::max(lambda * 0.1, 1e-12);
                    accepted = true;
                    if (rel_drop < kCostTol || std::sqrt(step_sq) <= kStepTol * (std::sqrt(base_sq) + kStepTol))
                        out.converged = true;
                    break;
                }
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (!accepted) {
            // no step at any damping improves the cost: the relative cost
            // change is zero, which is below tolerance
            out.converged = true;
            break;
        }
        if (out.converged) break;
    }

    out.theta = std::move(theta);
    out.cost = cost;
    pb.jacobian(out.theta, jac);
    std::vector<double> unused;
    normal_matrix(jac, r, pb.m, p, out.jtj, unused);
    return out;
}

// s^2 (J^T J)^-1 with s^2 = cost/(m-p); all-infinity on singular systems.
std::vector<double> covariance_of(const LmOutcome& out, int m, int p) {
    std::vector<double> cov;
    if (m > p && linalg::cholesky_invert(out.jtj, p, cov)) {
        double s2 = out.cost / (m - p);
        for (double& v : cov) v *= s2;
        return cov;
    }
    cov.assign(static_cast<std::size_t>(p) * p, kInf);
    return cov;
}

std::vector<double> sqrt_diag(const std::vector<double>& cov, int p) {
    std::vector<double> se(p);
    for (int k = 0; k < p; ++k) {
        double v = cov[static_cast<std::size_t>(k) * p + k];
        se[k] = v >= 0.0 ? std::sqrt(v) : kInf;
    }
    return se;
}

void check_not_constant(std::span<const double> ys) {
    auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
    if (*mn == *mx) throw DegenerateData("signal is constant");
}

// sqrt(w_i) factors for the chosen weighting; empty means unweighted
std::vector<double> weight_roots(std::span<const double> ys, FitWeighting weighting) {
    if (weighting == FitWeighting::none) return {};
    std::vector<double> sw(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) sw[i] = 1.0 / std::sqrt(std::max(ys[i], 1.0));
    return sw;
}

// Feasible separation range: the separation box intersected with the values
// for which both position windows can still hold, shrunk by a relative
// margin so clamped results satisfy the stated constraints in floating point.
Interval feasible_separation(const FitConstraints& c) {
    double margin = kRelMargin * c.separation_ref;
    double lo = c.separation_ref * (1.0 - c.separation_tol_frac) + margin;
    double hi = c.separation_ref * (1.0 + c.separation_tol_frac) - margin;
    lo = std::max(lo, c.pos_window_2.lo - c.pos_window_1.hi);
    hi = std::min(hi, c.pos_window_2.hi - c.pos_window_1.lo);
    return {lo, hi};
}

double window_scale(const FitConstraints& c) {
    return std::max({std::abs(c.pos_window_1.lo), std::abs(c.pos_window_1.hi), std::abs(c.pos_window_2.lo),
                     std::abs(c.pos_window_2.hi), c.separation_ref});
}

// Project (mean, separation) onto the feasible set: separation first, then
// the mean onto its separation-dependent interval.
void project_mean_sep(double& mean, double& sep, const FitConstraints& c, const Interval& sep_range) {
    sep = std::clamp(sep, sep_range.lo, sep_range.hi);
    double margin = kRelMargin * window_scale(c);
    double lo = std::max(c.pos_window_1.lo + 0.5 * sep, c.pos_window_2.lo - 0.5 * sep) + margin;
    double hi = std::min(c.pos_window_1.hi + 0.5 * sep, c.pos_window_2.hi - 0.5 * sep) - margin;
    if (lo > hi) {
        mean = 0.5 * (lo + hi);
    } else {
        mean = std::clamp(mean, lo, hi);
    }
}

int nearest_index(const std::vector<double>& xs, double x) {
    int best = 0;
    double dist = std::abs(xs[0] - x);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double d = std::abs(xs[i] - x);
        if (d < dist) {
            dist = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

} // namespace

void validate(const FitConstraints& c) {
    if (!(c.pos_window_1.lo <= c.pos_window_1.hi) || !std::isfinite(c.pos_window_1.lo) ||
        !std::isfinite(c.pos_window_1.hi))
        throw ValidationError("pos_window_1", "must be a non-empty finite interval");
    if (!(c.pos_window_2.lo <= c.pos_window_2.hi) || !std::isfinite(c.pos_window_2.lo) ||
        !std::isfinite(c.pos_window_2.hi))
        throw ValidationError("pos_window_2", "must be a non-empty finite interval");
    if (!(c.max_fwhm > 0.0) || !std::isfinite(c.max_fwhm))
        throw ValidationError("max_fwhm", "must be positive and finite");
    if (!(c.separation_ref > 0.0) || !std::isfinite(c.separation_ref))
        throw ValidationError("separation_ref", "must be positive and finite");
    if (!(c.separation_tol_frac > 0.0) || !(c.separation_tol_frac < 1.0))
        throw ValidationError("separation_tol_frac", "must lie in (0, 1)");
}

void validate(const LorentzParams& p) {
    if (!(p.amplitude >= 0.0)) throw ValidationError("amplitude", "must be non-negative");
    if (!(p.fwhm > 0.0)) throw ValidationError("fwhm", "must be positive");
    if (!std::isfinite(p.amplitude) || !std::isfinite(p.center) || !std::isfinite(p.fwhm) ||
        !std::isfinite(p.baseline))
        throw ValidationError("params", "must be finite");
}

void validate(const DoubleLorentzParams& p) {
    validate(LorentzParams{p.p1.amplitude, p.p1.center, p.p1.fwhm, 0.0});
    validate(LorentzParams{p.p2.amplitude, p.p2.center, p.p2.fwhm, 0.0});
    if (!std::isfinite(p.baseline)) throw ValidationError("baseline", "must be finite");
    if (!(p.p1.center <= p.p2.center))
        throw ValidationError("center", "p1 must be the lower-center peak");
}

bool satisfies(const DoubleLorentzParams& p, const FitConstraints& c) {
    double sep = p.separation();
    return p.p1.amplitude >= 0.0 && p.p2.amplitude >= 0.0 && p.p1.fwhm > 0.0 && p.p2.fwhm > 0.0 &&
           p.p1.fwhm < c.max_fwhm && p.p2.fwhm < c.max_fwhm && c.pos_window_1.contains(p.p1.center) &&
           c.pos_window_2.contains(p.p2.center) &&
           std::abs(sep - c.separation_ref) <= c.separation_tol_frac * c.separation_ref;
}

double lorentz_eval(const LorentzParams& p, double x) {
    double h = 0.5 * p.fwhm;
    double d = x - p.center;
    return p.baseline + p.amplitude * h * h / (d * d + h * h);
}

double double_lorentz_eval(const DoubleLorentzParams& p, double x) {
    double h1 = 0.5 * p.p1.fwhm, d1 = x - p.p1.center;
    double h2 = 0.5 * p.p2.fwhm, d2 = x - p.p2.center;
    return p.baseline + p.p1.amplitude * h1 * h1 / (d1 * d1 + h1 * h1) +
           p.p2.amplitude * h2 * h2 / (d2 * d2 + h2 * h2);
}

namespace detail {

void single_model(std::span<const double> xs, const std::vector<double>& t, std::vector<double>& yhat) {
    yhat.resize(xs.size());
    double h = 0.5 * t[2];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d = xs[i] - t[1];
        yhat[i] = t[3] + t[0] * h * h / (d * d + h * h);
    }
}

void single_jacobian(std::span<const double> xs, const std::vector<double>& t, std::vector<double>& jac) {
    jac.resize(xs.size() * 4);
    double amp = t[0], h = 0.5 * t[2];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d = xs[i] - t[1];
        double den = d * d + h * h;
        double u = h * h / den;
        double* row = &jac[i * 4];
        row[0] = u;
        row[1] = 2.0 * amp * d * h * h / (den * den);
        row[2] = amp * h * d * d / (den * den);
        row[3] = 1.0;
    }
}

void double_model(std::span<const double> xs, const std::vector<double>& t, std::vector<double>& yhat) {
    yhat.resize(xs.size());
    double c1 = t[2] - 0.5 * t[3], c2 = t[2] + 0.5 * t[3];
    double h1 = 0.5 * t[4], h2 = 0.5 * t[5];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d1 = xs[i] - c1, d2 = xs[i] - c2;
        yhat[i] = t[6] + t[0] * h1 * h1 / (d1 * d1 + h1 * h1) + t[1] * h2 * h2 / (d2 * d2 + h2 * h2);
    }
}

void double_jacobian(std::span<const double> xs, const std::vector<double>& t, std::vector<double>& jac) {
    jac.resize(xs.size() * 7);
    double c1 = t[2] - 0.5 * t[3], c2 = t[2] + 0.5 * t[3];
    double h1 = 0.5 * t[4], h2 = 0.5 * t[5];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d1 = xs[i] - c1, d2 = xs[i] - c2;
        double den1 = d1 * d1 + h1 * h1, den2 = d2 * d2 + h2 * h2;
        double dc1 = 2.0 * t[0] * d1 * h1 * h1 / (den1 * den1); // d model / d c1
        double dc2 = 2.0 * t[1] * d2 * h2 * h2 / (den2 * den2);
        double* row = &jac[i * 7];
        row[0] = h1 * h1 / den1;
        row[1] = h2 * h2 / den2;
        row[2] = dc1 + dc2;
        row[3] = 0.5 * (dc2 - dc1);
        row[4] = t[0] * h1 * d1 * d1 / (den1 * den1);
        row[5] = t[1] * h2 * d2 * d2 / (den2 * den2);
        row[6] = 1.0;
    }
}

} // namespace detail

Box default_single_bounds(std::span<const double> xs) {
    auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    double span = *mx - *mn;
    Box b;
    b.lo = {0.0, *mn, span * 1e-9, -kInf};
    b.hi = {kInf, *mx, span, kInf};
    return b;
}

FitResult fit_single(std::span<const double> xs, std::span<const double> ys, const LorentzParams& init,
                     const Box& bounds, FitWeighting weighting) {
    if (xs.size() != ys.size() || xs.size() < 5)
        throw ValidationError("xs", "need matching arrays with at least 5 samples");
    if (bounds.lo.size() != 4 || bounds.hi.size() != 4)
        throw ValidationError("bounds", "need 4 lower and 4 upper bounds");
    check_not_constant(ys);
    validate(init);

    std::vector<double> theta = {init.amplitude, init.center, init.fwhm, init.baseline};
    for (int k = 0; k < 4; ++k) {
        if (theta[k] < bounds.lo[k] || theta[k] > bounds.hi[k])
            throw ValidationError("init", "initial parameters outside bounds");
    }

    std::vector<double> sw = weight_roots(ys, weighting);
    std::vector<double> target(ys.begin(), ys.end());
    if (!sw.empty())
        for (std::size_t i = 0; i < target.size(); ++i) target[i] *= sw[i];

    LmProblem pb;
    pb.m = static_cast<int>(xs.size());
    pb.p = 4;
    pb.eval = [xs, &sw](const std::vector<double>& t, std::vector<double>& y) {
        detail::single_model(xs, t, y);
        if (!sw.empty())
            for (std::size_t i = 0; i < y.size(); ++i) y[i] *= sw[i];
    };
    pb.jacobian = [xs, &sw](const std::vector<double>& t, std::vector<double>& j) {
        detail::single_jacobian(xs, t, j);
        if (!sw.empty())
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (int k = 0; k < 4; ++k) j[i * 4 + k] *= sw[i];
    };
    pb.project = [&bounds](std::vector<double>& t) {
        for (int k = 0; k < 4; ++k) t[k] = std::clamp(t[k], bounds.lo[k], bounds.hi[k]);
    };

    LmOutcome out = lm_solve(pb, std::move(theta), target);
    if (!out.converged)
        throw NonConvergence("single-Lorentzian fit hit the iteration cap while still improving");

    FitResult res;
    res.params = LorentzParams{out.theta[0], out.theta[1], out.theta[2], out.theta[3]};
    res.covariance = covariance_of(out, pb.m, pb.p);
    res.std_errors = sqrt_diag(res.covariance, pb.p);
    res.cost = out.cost;
    res.converged = out.converged;
    res.n_iter = out.n_iter;
    res.accepted_costs = std::move(out.accepted_costs);
    return res;
}

FitResult fit_double(const PleLine& line, const DoubleLorentzParams& init, const FitConstraints& constraints,
                     FitWeighting weighting) {
    validate(line);
    validate(constraints);
    validate(init);
    check_not_constant(line.counts);

    Interval sep_range = feasible_separation(constraints);
    if (!(sep_range.lo <= sep_range.hi))
        throw ConstraintInfeasible("position windows and separation tolerance cannot hold together");

    if (!satisfies(init, constraints))
        throw ValidationError("init", "initial guess violates the fit constraints");

    const double fwhm_lo = constraints.max_fwhm * 1e-9;
    const double fwhm_hi = constraints.max_fwhm * (1.0 - 1e-9);

    std::vector<double> theta = {init.p1.amplitude, init.p2.amplitude, init.mean_center(),
                                 init.separation(),  init.p1.fwhm,     init.p2.fwhm,
                                 init.baseline};

    std::span<const double> xs(line.voltage_v);
    std::vector<double> sw = weight_roots(line.counts, weighting);
    std::vector<double> target = line.counts;
    if (!sw.empty())
        for (std::size_t i = 0; i < target.size(); ++i) target[i] *= sw[i];

    LmProblem pb;
    pb.m = static_cast<int>(line.size());
    pb.p = 7;
    pb.eval = [xs, &sw](const std::vector<double>& t, std::vector<double>& y) {
        detail::double_model(xs, t, y);
        if (!sw.empty())
            for (std::size_t i = 0; i < y.size(); ++i) y[i] *= sw[i];
    };
    pb.jacobian = [xs, &sw](const std::vector<double>& t, std::vector<double>& j) {
        detail::double_jacobian(xs, t, j);
        if (!sw.empty())
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (int k = 0; k < 7; ++k) j[i * 7 + k] *= sw[i];
    };
    pb.project = [&constraints, &sep_range, fwhm_lo, fwhm_hi](std::vector<double>& t) {
        t[0] = std::max(t[0], 0.0);
        t[1] = std::max(t[1], 0.0);
        project_mean_sep(t[2], t[3], constraints, sep_range);
        t[4] = std::clamp(t[4], fwhm_lo, fwhm_hi);
        t[5] = std::clamp(t[5], fwhm_lo, fwhm_hi);
    };

    LmOutcome out = lm_solve(pb, std::move(theta), target);
    if (!out.converged)
        throw NonConvergence("double-Lorentzian fit hit the iteration cap while still improving");

    DoubleLorentzParams fitted;
    fitted.p1 = {out.theta[0], out.theta[2] - 0.5 * out.theta[3], out.theta[4], 0.0};
    fitted.p2 = {out.theta[1], out.theta[2] + 0.5 * out.theta[3], out.theta[5], 0.0};
    fitted.baseline = out.theta[6];

    // covariance in solver space (amp1, amp2, mean, sep, fwhm1, fwhm2, b)
    // mapped to natural space (amp1, amp2, c1, c2, fwhm1, fwhm2, b)
    std::vector<double> cs = covariance_of(out, pb.m, pb.p);
    std::vector<double> t(49, 0.0);
    t[0 * 7 + 0] = 1.0;
    t[1 * 7 + 1] = 1.0;
    t[2 * 7 + 2] = 1.0;
    t[2 * 7 + 3] = -0.5;
    t[3 * 7 + 2] = 1.0;
    t[3 * 7 + 3] = 0.5;
    t[4 * 7 + 4] = 1.0;
    t[5 * 7 + 5] = 1.0;
    t[6 * 7 + 6] = 1.0;
    std::vector<double> tmp(49, 0.0), cov(49, 0.0);
    for (int i = 0; i < 7; ++i)
        for (int k = 0; k < 7; ++k) {
            if (t[i * 7 + k] == 0.0) continue;
            for (int j = 0; j < 7; ++j) tmp[i * 7 + j] += t[i * 7 + k] * cs[k * 7 + j];
        }
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            double s = 0.0;
            for (int k = 0; k < 7; ++k) s += tmp[i * 7 + k] * t[j * 7 + k];
            cov[i * 7 + j] = s;
        }

    FitResult res;
    res.params = fitted;
    res.covariance = std::move(cov);
    res.std_errors = sqrt_diag(res.covariance, 7);
    res.cost = out.cost;
    res.converged = out.converged;
    res.n_iter = out.n_iter;
    res.accepted_costs = std::move(out.accepted_costs);
    return res;
}

DoubleLorentzParams initial_guess(const PleLine& line, const FitConstraints& constraints) {
    validate(line);
    validate(constraints);
    Interval sep_range = feasible_separation(constraints);
    if (!(sep_range.lo <= sep_range.hi))
        throw ConstraintInfeasible("position windows and separation tolerance cannot hold together");

    std::vector<double> smoothed = signal::moving_average(line.counts, 5);
    std::vector<signal::PeakCandidate> cands = signal::local_maxima(smoothed);
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        if (a.prominence != b.prominence) return a.prominence > b.prominence;
        return a.index < b.index;
    });

    double c1 = 0.0, c2 = 0.0;
    if (cands.size() >= 2) {
        double va = line.voltage_v[cands[0].index];
        double vb = line.voltage_v[cands[1].index];
        c1 = std::min(va, vb);
        c2 = std::max(va, vb);
    } else if (cands.size() == 1) {
        double g = line.voltage_v[cands[0].index];
        if (std::abs(g - constraints.pos_window_1.mid()) <= std::abs(g - constraints.pos_window_2.mid())) {
            c1 = g;
            c2 = g + constraints.separation_ref;
        } else {
            c2 = g;
            c1 = g - constraints.separation_ref;
        }
    } else {
        double mid = 0.5 * (constraints.pos_window_1.mid() + constraints.pos_window_2.mid());
        c1 = mid - 0.5 * constraints.separation_ref;
        c2 = mid + 0.5 * constraints.separation_ref;
    }

    double mean = 0.5 * (c1 + c2);
    double sep = c2 - c1;
    project_mean_sep(mean, sep, constraints, sep_range);
    c1 = mean - 0.5 * sep;
    c2 = mean + 0.5 * sep;

    double base = *std::min_element(smoothed.begin(), smoothed.end());
    double a1 = std::max(0.0, smoothed[nearest_index(line.voltage_v, c1)] - base);
    double a2 = std::max(0.0, smoothed[nearest_index(line.voltage_v, c2)] - base);

    // width at half prominence of the strongest candidate, else a fraction
    // of the expected separation
    double fwhm = constraints.separation_ref / 5.0;
    if (!cands.empty() && cands[0].prominence > 0.0) {
        int pi = cands[0].index;
        double level = smoothed[pi] - 0.5 * cands[0].prominence;
        int l = pi, rgt = pi;
        while (l > 0 && smoothed[l - 1] > level) --l;
        while (rgt + 1 < static_cast<int>(smoothed.size()) && smoothed[rgt + 1] > level) ++rgt;
        double w = std::abs(line.voltage_v[rgt] - line.voltage_v[l]);
        if (w > 0.0) fwhm = w;
    }
    fwhm = std::clamp(fwhm, constraints.max_fwhm * 1e-6, constraints.max_fwhm * 0.5);

    DoubleLorentzParams guess;
    guess.p1 = {a1, c1, fwhm, 0.0};
    guess.p2 = {a2, c2, fwhm, 0.0};
    guess.baseline = base;
    return guess;
}

bool fit_successful(const FitResult& r) {
    if (!r.converged) return false;
    if (std::holds_alternative<DoubleLorentzParams>(r.params)) {
        const DoubleLorentzParams& p = r.doublet();
        const std::vector<double>& se = r.std_errors;
        return se[2] < p.p1.fwhm && se[3] < p.p2.fwhm && p.p1.amplitude > 3.0 * se[0] &&
               p.p2.amplitude > 3.0 * se[1];
    }
    const LorentzParams& p = r.single();
    return r.std_errors[1] < p.fwhm && p.amplitude > 3.0 * r.std_errors[0];
}

namespace {

template <class Params, class Eval>
std::pair<std::size_t, double> best_on_grid(std::span<const double> xs, std::span<const double> ys,
                                            const std::vector<Params>& grid, Eval eval) {
    if (grid.empty()) throw EmptyGrid("candidate grid is empty");
    std::size_t best = 0;
    double best_cost = kInf;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double cost = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double r = eval(grid[g], xs[i]) - ys[i];
            cost += r * r;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = g;
        }
    }
    return {best, best_cost};
}

} // namespace

SingleGridResult grid_oracle(std::span<const double> xs, std::span<const double> ys,
                             const std::vector<LorentzParams>& grid) {
    auto [idx, cost] = best_on_grid(xs, ys, grid,
                                    [](const LorentzParams& p, double x) { return lorentz_eval(p, x); });
    return {grid[idx], cost, idx};
}

DoubleGridResult grid_oracle(std::span<const double> xs, std::span<const double> ys,
                             const std::vector<DoubleLorentzParams>& grid) {
    auto [idx, cost] = best_on_grid(
        xs, ys, grid, [](const DoubleLorentzParams& p, double x) { return double_lorentz_eval(p, x); });
    return {grid[idx], cost, idx};
}

} // namespace plekit
