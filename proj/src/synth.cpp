#include "plekit/synth.hpp"

#include <cmath>

#include "json.hpp"
#include "plekit/afm.hpp"
#include "plekit/lorentz.hpp"
#include "plekit/rng.hpp"

namespace plekit {

using nlohmann::json;

namespace {

void check(bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
}

} // namespace

std::pair<PleScan, PleGroundTruth> synth_ple(const PleSynthConfig& cfg) {
    check(cfg.fwhm_mhz > 0.0, "fwhm_mhz must be positive");
    check(cfg.splitting_mhz > 0.0, "splitting_mhz must be positive");
    check(cfg.mhz_per_volt > 0.0, "mhz_per_volt must be positive");
    check(cfg.n_lines >= 1, "n_lines must be at least 1");
    check(cfg.samples_per_line >= 8, "samples_per_line must be at least 8");
    check(cfg.scan_span_v > 0.0, "scan_span_v must be positive");
    check(cfg.peak_counts >= 0.0, "peak_counts must be non-negative");
    check(cfg.background_counts >= 0.0, "background_counts must be non-negative");
    check(cfg.walk_std_mhz_per_line >= 0.0, "walk_std_mhz_per_line must be non-negative");
    check(cfg.line_period_s > 0.0, "line_period_s must be positive");

    Rng rng(cfg.seed);

    PleScan scan;
    scan.meta.region_id = cfg.region_id;
    scan.meta.splitting_mhz = cfg.splitting_mhz;

    PleGroundTruth truth;
    truth.true_fwhm_mhz = cfg.fwhm_mhz;
    truth.splitting_mhz = cfg.splitting_mhz;
    truth.mhz_per_volt = cfg.mhz_per_volt;
    truth.line_period_s = cfg.line_period_s;
    truth.walk_std_mhz_per_line = cfg.walk_std_mhz_per_line;
    truth.seed = cfg.seed;

    const int n = cfg.samples_per_line;
    std::vector<double> grid(n);
    for (int j = 0; j < n; ++j) grid[j] = cfg.scan_span_v * j / (n - 1.0);

    const double mid_v = 0.5 * cfg.scan_span_v;
    const double half_sep_v = 0.5 * cfg.splitting_mhz / cfg.mhz_per_volt;
    const double fwhm_v = cfg.fwhm_mhz / cfg.mhz_per_volt;

    double walk = 0.0;
    for (int i = 0; i < cfg.n_lines; ++i) {
        if (i > 0) walk += cfg.walk_std_mhz_per_line * rng.normal();
        truth.centers_mhz.push_back(walk);

        DoubleLorentzParams model;
        double mean_v = mid_v + walk / cfg.mhz_per_volt;
        model.p1 = {cfg.peak_counts, mean_v - half_sep_v, fwhm_v, 0.0};
        model.p2 = {cfg.peak_counts, mean_v + half_sep_v, fwhm_v, 0.0};
        model.baseline = cfg.background_counts;

        PleLine line;
        line.index = i;
        line.t0_s = i * cfg.line_period_s;
        line.voltage_v = grid;
        line.counts.resize(n);
        for (int j = 0; j < n; ++j) {
            double mu = double_lorentz_eval(model, grid[j]);
            line.counts[j] = cfg.noiseless ? mu : rng.poisson(mu);
        }
        scan.lines.push_back(std::move(line));
    }
    for (int i = 0; i + 1 < cfg.n_lines; ++i)
        truth.true_rates_mhz_per_s.push_back((truth.centers_mhz[i + 1] - truth.centers_mhz[i]) /
                                             cfg.line_period_s);

    validate(scan);
    return {std::move(scan), std::move(truth)};
}

PleSynthConfig ple_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid synth config JSON: ") + e.what());
    }
    PleSynthConfig cfg;
    auto num = [&](const char* key, double& out) {
        if (j.contains(key)) out = j.at(key).get<double>();
    };
    num("fwhm_mhz", cfg.fwhm_mhz);
    num("splitting_mhz", cfg.splitting_mhz);
    num("mhz_per_volt", cfg.mhz_per_volt);
    if (j.contains("n_lines")) cfg.n_lines = j.at("n_lines").get<int>();
    if (j.contains("samples_per_line")) cfg.samples_per_line = j.at("samples_per_line").get<int>();
    num("scan_span_v", cfg.scan_span_v);
    num("peak_counts", cfg.peak_counts);
    num("background_counts", cfg.background_counts);
    num("walk_std_mhz_per_line", cfg.walk_std_mhz_per_line);
    num("line_period_s", cfg.line_period_s);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("noiseless")) cfg.noiseless = j.at("noiseless").get<bool>();
    if (j.contains("region_id")) cfg.region_id = j.at("region_id").get<std::string>();
    return cfg;
}

std::string ground_truth_to_json_text(const PleGroundTruth& truth) {
    json j;
    j["centers_mhz"] = truth.centers_mhz;
    j["true_rates_mhz_per_s"] = truth.true_rates_mhz_per_s;
    j["true_fwhm_mhz"] = truth.true_fwhm_mhz;
    j["splitting_mhz"] = truth.splitting_mhz;
    j["mhz_per_volt"] = truth.mhz_per_volt;
    j["line_period_s"] = truth.line_period_s;
    j["walk_std_mhz_per_line"] = truth.walk_std_mhz_per_line;
    j["seed"] = truth.seed;
    return j.dump(2) + "\n";
}

Spectrum synth_spectrum(const SpectrumSynthConfig& cfg) {
    check(cfg.n_samples >= 2, "n_samples must be at least 2");
    check(cfg.lo_nm < cfg.hi_nm, "wavelength range must be non-empty");
    check(cfg.noise_std >= 0.0, "noise_std must be non-negative");
    check(cfg.resolution_nm > 0.0, "resolution_nm must be positive");
    for (const PlantedPeak& p : cfg.peaks) {
        check(p.width_nm > 0.0, "planted peak width must be positive");
        check(p.height >= 0.0, "planted peak height must be non-negative");
    }

    Rng rng(cfg.seed);
    Spectrum s;
    s.resolution_nm = cfg.resolution_nm;
    s.wavelength_nm.resize(cfg.n_samples);
    s.intensity.resize(cfg.n_samples);
    for (int i = 0; i < cfg.n_samples; ++i) {
        double w = cfg.lo_nm + (cfg.hi_nm - cfg.lo_nm) * i / (cfg.n_samples - 1.0);
        double y = cfg.background;
        for (const PlantedPeak& p : cfg.peaks)
            y += lorentz_eval({p.height, p.center_nm, p.width_nm, 0.0}, w);
        s.wavelength_nm[i] = w;
        s.intensity[i] = y + cfg.noise_std * rng.normal();
    }
    validate(s);
    return s;
}

std::string spectrum_truth_to_json_text(const SpectrumSynthConfig& cfg) {
    json peaks = json::array();
    for (const PlantedPeak& p : cfg.peaks)
        peaks.push_back({{"center_nm", p.center_nm}, {"height", p.height}, {"width_nm", p.width_nm}});
    json j;
    j["peaks"] = std::move(peaks);
    j["background"] = cfg.background;
    j["noise_std"] = cfg.noise_std;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

AfmMap synth_afm(const AfmSynthConfig& cfg) {
    check(cfg.nx >= 4 && cfg.ny >= 4, "grid must be at least 4x4");
    check(cfg.dx_um > 0.0 && cfg.dy_um > 0.0, "pixel pitch must be positive");
    check(cfg.sigma_pm >= 0.0, "sigma_pm must be non-negative");
    check(cfg.row_offset_std_nm >= 0.0, "row_offset_std_nm must be non-negative");
    check(cfg.poly_degree >= 0, "poly_degree must be non-negative");

    auto exps = poly_basis_exponents(cfg.poly_degree);
    std::vector<double> coeffs = cfg.poly_coeffs_nm;
    if (coeffs.empty()) coeffs.assign(exps.size(), 0.0);
    check(coeffs.size() == exps.size(), "poly_coeffs_nm length must match the basis for poly_degree");

    Rng rng(cfg.seed);
    std::vector<double> row_offset(cfg.ny);
    for (int r = 0; r < cfg.ny; ++r) row_offset[r] = cfg.row_offset_std_nm * rng.normal();

    AfmMap map;
    map.nx = cfg.nx;
    map.ny = cfg.ny;
    map.dx_um = cfg.dx_um;
    map.dy_um = cfg.dy_um;
    map.heights_nm.resize(static_cast<std::size_t>(cfg.nx) * cfg.ny);
    const double sigma_nm = cfg.sigma_pm / 1000.0;
    for (int r = 0; r < cfg.ny; ++r) {
        double y = cfg.ny > 1 ? 2.0 * r / (cfg.ny - 1.0) - 1.0 : 0.0;
        for (int c = 0; c < cfg.nx; ++c) {
            double x = cfg.nx > 1 ? 2.0 * c / (cfg.nx - 1.0) - 1.0 : 0.0;
            double z = row_offset[r];
            for (std::size_t j = 0; j < exps.size(); ++j)
                z += coeffs[j] * std::pow(x, exps[j].first) * std::pow(y, exps[j].second);
            map.at(r, c) = z + sigma_nm * rng.normal();
        }
    }
    validate(map);
    return map;
}

std::string afm_truth_to_json_text(const AfmSynthConfig& cfg) {
    json j;
    j["sigma_pm"] = cfg.sigma_pm;
    j["row_offset_std_nm"] = cfg.row_offset_std_nm;
    j["poly_degree"] = cfg.poly_degree;
    j["poly_coeffs_nm"] = cfg.poly_coeffs_nm.empty() ? std::vector<double>(poly_basis_exponents(cfg.poly_degree).size(), 0.0)
                                                     : cfg.poly_coeffs_nm;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

} // namespace plekit
