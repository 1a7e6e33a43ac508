// plekit - PLE linewidths, spectral wandering, emission-spectrum
// classification, AFM roughness, and the synthetic datasets to verify them.
//
// Exit codes: 0 success, 1 I/O or bad input file, 2 analysis degenerate,
// 3 fit non-convergence, 64 usage.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "plekit/afm.hpp"
#include "plekit/io.hpp"
#include "plekit/lorentz.hpp"
#include "plekit/parallel.hpp"
#include "plekit/pipeline.hpp"
#include "plekit/spectra.hpp"
#include "plekit/synth.hpp"
#include "plekit/wander.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace plekit;

namespace {

int env_threads() {
    if (const char* s = std::getenv("PLEKIT_THREADS")) {
        int v = std::atoi(s);
        if (v >= 1) return std::min(v, 256);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        atomic_write_text(out_path, text);
    }
}

// For commands with several output files: everything is rendered up front,
// so a failure while computing leaves no file behind.
void emit_all(const std::vector<std::pair<std::string, std::string>>& outputs) {
    for (const auto& [path, text] : outputs) atomic_write_text(path, text);
}

std::vector<double> parse_csv_numbers(const std::string& arg, std::size_t expect = 0) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= arg.size()) {
        std::size_t comma = arg.find(',', start);
        std::string cell = arg.substr(start, comma - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse number \"" + cell + "\" in \"" + arg + "\"");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (expect != 0 && out.size() != expect)
        throw ConfigError("expected " + std::to_string(expect) + " comma-separated values in \"" + arg + "\"");
    return out;
}

FitConstraints constraints_from_json_text(const std::string& text, double scan_span) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid constraints JSON: ") + e.what());
    }
    auto interval = [&](const char* key) -> Interval {
        if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2)
            throw ParseError(std::string("constraints JSON needs \"") + key + "\": [lo, hi]");
        return {j.at(key).at(0).get<double>(), j.at(key).at(1).get<double>()};
    };
    FitConstraints c;
    c.pos_window_1 = interval("pos_window_1");
    c.pos_window_2 = interval("pos_window_2");
    if (!j.contains("separation_ref")) throw ParseError("constraints JSON needs \"separation_ref\"");
    c.separation_ref = j.at("separation_ref").get<double>();
    c.max_fwhm = j.contains("max_fwhm") ? j.at("max_fwhm").get<double>() : scan_span;
    c.separation_tol_frac =
        j.contains("separation_tol_frac") ? j.at("separation_tol_frac").get<double>() : 0.10;
    validate(c);
    return c;
}

// ---------------------------------------------------------------- linewidth

struct LinewidthOpts {
    std::string scan_path;
    std::string out_path;
    std::string method = "aligned";
    double splitting_mhz = 0.0; // 0 keeps the scan's value
    std::string constraints_path;
    std::string profile_path;
    double tol_frac = 0.10;
    bool a1_upper = false;
    bool poisson_weights = false;
    bool verbose = false;
};

int run_linewidth(const LinewidthOpts& o) {
    PleScan scan = read_scan(o.scan_path);
    if (o.splitting_mhz > 0.0) scan.meta.splitting_mhz = o.splitting_mhz;
    FitConstraints c = o.constraints_path.empty()
                           ? derive_constraints(scan, o.tol_frac)
                           : constraints_from_json_text(read_text(o.constraints_path),
                                                        scan.lines.front().span_v());
    PipelineOptions po;
    po.a1_is_lower = !o.a1_upper;
    po.threads = env_threads();
    po.weighting = o.poisson_weights ? FitWeighting::poisson : FitWeighting::none;
    LinewidthResult res =
        o.method == "summed" ? summed_linewidth(scan, c, po) : aligned_linewidth(scan, c, po);

    if (!o.profile_path.empty()) {
        // the fitted sum profile and its model as plot data
        PleLine profile = o.method == "summed"
                              ? summed_line(scan)
                              : aligned_sum(scan, fit_lines(scan, c, po.threads, po.weighting)).line;
        std::string csv = "voltage_v,counts,model\n";
        for (std::size_t k = 0; k < profile.voltage_v.size(); ++k) {
            csv += format_double(profile.voltage_v[k]);
            csv += ',';
            csv += format_double(profile.counts[k]);
            csv += ',';
            csv += format_double(double_lorentz_eval(res.final_fit.doublet(), profile.voltage_v[k]));
            csv += '\n';
        }
        atomic_write_text(o.profile_path, csv);
    }
    emit(o.out_path, linewidth_result_to_json_text(res, o.verbose));
    return 0;
}

// ------------------------------------------------------------------- wander

struct WanderOpts {
    std::vector<std::string> scan_paths;
    std::string samples_csv;
    std::string out_prefix = "wander";
    double sigma_threshold = 200.0;
    std::string bin_width_arg = "auto";
    std::string center = "mean";
    bool magnitude = false;
    bool dump_samples = false;
    std::string constraints_path;
    double tol_frac = 0.10;
    bool a1_upper = false;
    bool poisson_weights = false;
    double splitting_mhz = 0.0;
};

int run_wander(const WanderOpts& o) {
    if (o.samples_csv.empty() == o.scan_paths.empty())
        throw ConfigError("give either scan files or --samples-csv");

    CenterChoice center = o.center == "a1"   ? CenterChoice::a1
                          : o.center == "a2" ? CenterChoice::a2
                                             : CenterChoice::mean;

    std::vector<WanderSample> samples;
    if (!o.samples_csv.empty()) {
        samples = samples_from_csv_text(read_text(o.samples_csv));
    } else {
        const int n = static_cast<int>(o.scan_paths.size());
        const int total_threads = env_threads();
        const int file_threads = n > 1 ? total_threads : 1;
        const int fit_threads = n > 1 ? 1 : total_threads;
        std::vector<std::vector<WanderSample>> per_file(n);
        parallel_for(n, file_threads, [&](int i) {
            PleScan scan = read_scan(o.scan_paths[i]);
            if (o.splitting_mhz > 0.0) scan.meta.splitting_mhz = o.splitting_mhz;
            if (scan.meta.region_id.empty())
                scan.meta.region_id = fs::path(o.scan_paths[i]).stem().string();
            FitConstraints c = o.constraints_path.empty()
                                   ? derive_constraints(scan, o.tol_frac)
                                   : constraints_from_json_text(read_text(o.constraints_path),
                                                                scan.lines.front().span_v());
            FitWeighting w = o.poisson_weights ? FitWeighting::poisson : FitWeighting::none;
            auto fits = fit_lines(scan, c, fit_threads, w);
            // calibration from the aligned-sum fit, as in the linewidth path
            AlignedSum aligned = aligned_sum(scan, fits);
            FitResult final_fit = fit_double(aligned.line, initial_guess(aligned.line, c), c, w);
            CalibrationFactor calib =
                calibrate(final_fit.doublet().separation(), scan.meta.splitting_mhz);
            per_file[i] = wander_rates(scan, fits, calib, center, !o.a1_upper);
        });
        for (auto& chunk : per_file)
            samples.insert(samples.end(), chunk.begin(), chunk.end());
    }

    auto [kept, n_rejected] = reject_outliers(samples, o.sigma_threshold);

    double width;
    bool auto_width = o.bin_width_arg == "auto";
    if (auto_width) {
        width = bin_width(by_region(kept));
    } else {
        try {
            width = std::stod(o.bin_width_arg);
        } catch (const std::exception&) {
            throw ConfigError("--bin-width must be \"auto\" or a positive number");
        }
        if (!(width > 0.0)) throw ConfigError("--bin-width must be positive");
    }

    std::vector<WanderSample> binned = kept;
    if (o.magnitude) {
        for (WanderSample& s : binned) s.rate_mhz_per_s = std::abs(s.rate_mhz_per_s);
    }
    RateHistogram hist = histogram(binned, width, n_rejected);

    json summary;
    summary["bin_width_mhz_per_s"] = hist.bin_width_mhz_per_s;
    summary["bin_width_mode"] = auto_width ? "auto" : "fixed";
    summary["n_samples"] = static_cast<long>(samples.size());
    summary["n_kept"] = hist.n_kept;
    summary["n_rejected"] = hist.n_rejected;
    summary["sigma_threshold_mhz_per_s"] = o.sigma_threshold;
    summary["center"] = o.center;
    summary["magnitude"] = o.magnitude;
    json region_means = json::object();
    for (const auto& [region, rs] : by_region(kept)) {
        double mean = 0.0;
        for (const WanderSample& s : rs) mean += s.sigma_mhz_per_s;
        region_means[region] = mean / static_cast<double>(rs.size());
    }
    summary["region_mean_sigma_mhz_per_s"] = std::move(region_means);

    std::vector<std::pair<std::string, std::string>> outputs = {
        {o.out_prefix + ".hist.csv", histogram_to_csv_text(hist)},
        {o.out_prefix + ".summary.json", summary.dump(2) + "\n"}};
    if (o.dump_samples) outputs.emplace_back(o.out_prefix + ".samples.csv", samples_to_csv_text(samples));
    emit_all(outputs);
    return 0;
}

// ------------------------------------------------------------------ spectra

struct SpectraOpts {
    std::vector<std::string> paths;
    std::string out_prefix = "spectra";
    std::string windows_path;
    std::string min_prominence = "auto";
    double min_height = 0.0;
    int min_distance = 1;
    double resolution_nm = 0.35;
};

int run_spectra(const SpectraOpts& o) {
    std::vector<fs::path> files;
    for (const std::string& p : o.paths) {
        fs::path path(p);
        if (fs::is_directory(path)) {
            std::vector<fs::path> dir_files;
            for (const auto& entry : fs::directory_iterator(path)) {
                if (entry.is_regular_file() && entry.path().extension() == ".csv")
                    dir_files.push_back(entry.path());
            }
            std::sort(dir_files.begin(), dir_files.end());
            files.insert(files.end(), dir_files.begin(), dir_files.end());
        } else {
            files.push_back(path);
        }
    }
    if (files.empty()) throw ConfigError("no spectrum files to analyze");

    ZplWindows windows =
        o.windows_path.empty() ? ZplWindows{} : windows_from_json_text(read_text(o.windows_path));

    bool auto_prominence = o.min_prominence == "auto";
    double fixed_prominence = 0.0;
    if (!auto_prominence) {
        try {
            fixed_prominence = std::stod(o.min_prominence);
        } catch (const std::exception&) {
            throw ConfigError("--min-prominence must be \"auto\" or a number");
        }
        if (fixed_prominence < 0.0) throw ConfigError("--min-prominence must be non-negative");
    }

    struct FileResult {
        std::string region;
        SpectrumClassification cls;
        PeakSearchParams params;
    };
    std::vector<FileResult> results(files.size());
    parallel_for(static_cast<int>(files.size()), env_threads(), [&](int i) {
        Spectrum s = read_spectrum(files[i], o.resolution_nm);
        PeakSearchParams params = auto_prominence ? default_search_params(s) : PeakSearchParams{};
        if (!auto_prominence) params.min_prominence = fixed_prominence;
        params.min_height = o.min_height;
        params.min_distance_samples = o.min_distance;
        FileResult r;
        fs::path parent = files[i].parent_path();
        r.region = parent.filename().string().empty() ? "." : parent.filename().string();
        r.cls = classify(find_peaks(s, params), windows);
        r.params = params;
        results[i] = std::move(r);
    });

    json entries = json::array();
    std::vector<BatchEntry> batch;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const FileResult& r = results[i];
        json e;
        e["file"] = files[i].string();
        e["region"] = r.region;
        e["label"] = to_string(r.cls.label);
        e["min_prominence"] = r.params.min_prominence;
        e["min_height"] = r.params.min_height;
        e["min_distance_samples"] = r.params.min_distance_samples;
        json peaks = json::array();
        for (const TaggedPeak& tp : r.cls.peaks) {
            peaks.push_back({{"wavelength_nm", tp.peak.wavelength_nm},
                             {"height", tp.peak.height},
                             {"prominence", tp.peak.prominence},
                             {"index", tp.peak.index},
                             {"tag", to_string(tp.tag)}});
        }
        e["peaks"] = std::move(peaks);
        entries.push_back(std::move(e));
        batch.push_back({r.region, r.cls});
    }

    emit_all({{o.out_prefix + ".classifications.json", entries.dump(2) + "\n"},
              {o.out_prefix + ".stats.csv", stats_to_csv_text(batch_stats(batch))}});
    return 0;
}

// ---------------------------------------------------------------------- afm

struct AfmOpts {
    std::string map_path;
    std::string out_path;
    int degree = 2;
    std::string row_correction = "median";
};

int run_afm(const AfmOpts& o) {
    AfmMap map = read_afm(o.map_path);
    RoughnessResult res = afm_pipeline(map, row_correction_from(o.row_correction), o.degree);
    emit(o.out_path, roughness_to_json_text(res));
    return 0;
}

// -------------------------------------------------------------------- synth

struct SynthPleOpts {
    std::string out_path;
    std::string truth_path;
    std::string config_path;
    PleSynthConfig cfg;
};

int run_synth_ple(const SynthPleOpts& o, const CLI::App* sub) {
    PleSynthConfig cfg =
        o.config_path.empty() ? PleSynthConfig{} : ple_config_from_json_text(read_text(o.config_path));
    // explicit flags beat the config file
    if (sub->count("--fwhm-mhz")) cfg.fwhm_mhz = o.cfg.fwhm_mhz;
    if (sub->count("--splitting-mhz")) cfg.splitting_mhz = o.cfg.splitting_mhz;
    if (sub->count("--mhz-per-volt")) cfg.mhz_per_volt = o.cfg.mhz_per_volt;
    if (sub->count("--n-lines")) cfg.n_lines = o.cfg.n_lines;
    if (sub->count("--samples-per-line")) cfg.samples_per_line = o.cfg.samples_per_line;
    if (sub->count("--span-v")) cfg.scan_span_v = o.cfg.scan_span_v;
    if (sub->count("--peak-counts")) cfg.peak_counts = o.cfg.peak_counts;
    if (sub->count("--background-counts")) cfg.background_counts = o.cfg.background_counts;
    if (sub->count("--walk-std")) cfg.walk_std_mhz_per_line = o.cfg.walk_std_mhz_per_line;
    if (sub->count("--period-s")) cfg.line_period_s = o.cfg.line_period_s;
    if (sub->count("--seed")) cfg.seed = o.cfg.seed;
    if (sub->count("--noiseless")) cfg.noiseless = true;
    if (sub->count("--region")) cfg.region_id = o.cfg.region_id;

    auto [scan, truth] = synth_ple(cfg);
    write_scan(scan, o.out_path);
    std::string truth_path = o.truth_path.empty() ? o.out_path + ".truth.json" : o.truth_path;
    atomic_write_text(truth_path, ground_truth_to_json_text(truth));
    return 0;
}

struct SynthSpectrumOpts {
    std::string out_path;
    std::string truth_path;
    std::vector<std::string> peaks;
    std::string grid = "850,950,1000";
    SpectrumSynthConfig cfg;
};

int run_synth_spectrum(const SynthSpectrumOpts& o) {
    SpectrumSynthConfig cfg = o.cfg;
    cfg.peaks.clear();
    for (const std::string& p : o.peaks) {
        std::vector<double> v = parse_csv_numbers(p, 3);
        cfg.peaks.push_back({v[0], v[1], v[2]});
    }
    std::vector<double> g = parse_csv_numbers(o.grid, 3);
    cfg.lo_nm = g[0];
    cfg.hi_nm = g[1];
    cfg.n_samples = static_cast<int>(g[2]);

    Spectrum s = synth_spectrum(cfg);
    write_spectrum(s, o.out_path);
    std::string truth_path = o.truth_path.empty() ? o.out_path + ".truth.json" : o.truth_path;
    atomic_write_text(truth_path, spectrum_truth_to_json_text(cfg));
    return 0;
}

struct SynthAfmOpts {
    std::string out_path;
    std::string truth_path;
    std::string poly_coeffs;
    AfmSynthConfig cfg;
};

int run_synth_afm(const SynthAfmOpts& o) {
    AfmSynthConfig cfg = o.cfg;
    if (!o.poly_coeffs.empty()) cfg.poly_coeffs_nm = parse_csv_numbers(o.poly_coeffs);
    AfmMap map = synth_afm(cfg);
    write_afm(map, o.out_path);
    std::string truth_path = o.truth_path.empty() ? o.out_path + ".truth.json" : o.truth_path;
    atomic_write_text(truth_path, afm_truth_to_json_text(cfg));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PLE linewidths, spectral wandering, spectrum classification and AFM roughness"};
    app.require_subcommand(1);

    LinewidthOpts lw;
    CLI::App* lw_cmd = app.add_subcommand(
        "linewidth", "Extract calibrated A1/A2 linewidths from a PLE scan (JSON result)");
    lw_cmd->add_option("scan", lw.scan_path, "PLE scan JSON file")->required();
    lw_cmd->add_option("-o,--out", lw.out_path, "output JSON path (stdout when omitted)");
    lw_cmd->add_option("--method", lw.method, "linewidth estimator")
        ->check(CLI::IsMember({"aligned", "summed"}))
        ->capture_default_str();
    lw_cmd->add_option("--splitting-mhz", lw.splitting_mhz,
                       "override the scan's A1-A2 splitting (MHz)");
    lw_cmd->add_option("--constraints", lw.constraints_path,
                       "fit constraints JSON (derived from the data when omitted)");
    lw_cmd->add_option("--dump-profile", lw.profile_path,
                       "also write the fitted sum profile as CSV (voltage_v,counts,model)");
    lw_cmd->add_option("--tol-frac", lw.tol_frac, "allowed fractional separation deviation")
        ->check(CLI::Range(1e-6, 0.999))
        ->capture_default_str();
    lw_cmd->add_flag("--a1-upper", lw.a1_upper, "label the upper-voltage peak A1");
    lw_cmd->add_flag("--poisson-weights", lw.poisson_weights, "weight residuals by 1/sqrt(counts)");
    lw_cmd->add_flag("-v,--verbose", lw.verbose, "include fit diagnostics in the JSON");

    WanderOpts wo;
    CLI::App* wa_cmd = app.add_subcommand(
        "wander", "Spectral wandering rates, outlier rejection and histogram from PLE scans");
    wa_cmd->add_option("scans", wo.scan_paths, "PLE scan JSON files (one region each)");
    wa_cmd->add_option("--samples-csv", wo.samples_csv,
                       "read precomputed wander samples instead of scan files");
    wa_cmd->add_option("-o,--out", wo.out_prefix, "output prefix for .hist.csv and .summary.json")
        ->capture_default_str();
    wa_cmd->add_option("--sigma-threshold", wo.sigma_threshold,
                       "reject samples with sigma above this (MHz/s)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    wa_cmd->add_option("--bin-width", wo.bin_width_arg,
                       "histogram bin width in MHz/s, or \"auto\" for the max-of-region-means rule")
        ->capture_default_str();
    wa_cmd->add_option("--center", wo.center, "which fitted center feeds the rate")
        ->check(CLI::IsMember({"mean", "a1", "a2"}))
        ->capture_default_str();
    wa_cmd->add_flag("--magnitude", wo.magnitude, "histogram |rate| instead of the signed rate");
    wa_cmd->add_flag("--dump-samples", wo.dump_samples, "also write .samples.csv");
    wa_cmd->add_option("--constraints", wo.constraints_path,
                       "fit constraints JSON applied to every scan");
    wa_cmd->add_option("--tol-frac", wo.tol_frac, "allowed fractional separation deviation")
        ->check(CLI::Range(1e-6, 0.999))
        ->capture_default_str();
    wa_cmd->add_flag("--a1-upper", wo.a1_upper, "label the upper-voltage peak A1");
    wa_cmd->add_flag("--poisson-weights", wo.poisson_weights, "weight residuals by 1/sqrt(counts)");
    wa_cmd->add_option("--splitting-mhz", wo.splitting_mhz,
                       "override every scan's A1-A2 splitting (MHz)");

    SpectraOpts so;
    CLI::App* sp_cmd = app.add_subcommand(
        "spectra", "Classify emission spectra against the V1/V2 ZPL windows and tally per region");
    sp_cmd->add_option("paths", so.paths, "spectrum CSV files or directories of them")->required();
    sp_cmd->add_option("-o,--out", so.out_prefix,
                       "output prefix for .classifications.json and .stats.csv")
        ->capture_default_str();
    sp_cmd->add_option("--windows", so.windows_path, "ZPL windows JSON (built-in defaults when omitted)");
    sp_cmd->add_option("--min-prominence", so.min_prominence,
                       "peak prominence threshold, or \"auto\" for 3x the spectrum MAD")
        ->capture_default_str();
    sp_cmd->add_option("--min-height", so.min_height, "peak height threshold")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sp_cmd->add_option("--min-distance", so.min_distance, "minimal peak distance in samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sp_cmd->add_option("--resolution-nm", so.resolution_nm, "spectrometer resolution tag (nm)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    AfmOpts ao;
    CLI::App* afm_cmd = app.add_subcommand(
        "afm", "Row-correct, polynomial-detrend and report Rq/Ra of an AFM height map");
    afm_cmd->add_option("map", ao.map_path, "AFM text file (nx ny dx_um dy_um header)")->required();
    afm_cmd->add_option("-o,--out", ao.out_path, "output JSON path (stdout when omitted)");
    afm_cmd->add_option("--degree", ao.degree, "polynomial background degree")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    afm_cmd->add_option("--row-correction", ao.row_correction, "per-row offset removal mode")
        ->check(CLI::IsMember({"none", "median", "median_diff"}))
        ->capture_default_str();

    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate synthetic datasets with ground truth");
    synth_cmd->require_subcommand(1);

    SynthPleOpts spo;
    CLI::App* synth_ple_cmd =
        synth_cmd->add_subcommand("ple", "Synthetic PLE scan with spectral diffusion and shot noise");
    synth_ple_cmd->add_option("-o,--out", spo.out_path, "output scan JSON path")->required();
    synth_ple_cmd->add_option("--truth", spo.truth_path,
                              "ground-truth sidecar path (default: <out>.truth.json)");
    synth_ple_cmd->add_option("--config", spo.config_path, "config JSON (flags override it)");
    synth_ple_cmd->add_option("--fwhm-mhz", spo.cfg.fwhm_mhz, "true linewidth")->capture_default_str();
    synth_ple_cmd->add_option("--splitting-mhz", spo.cfg.splitting_mhz, "A1-A2 splitting")
        ->capture_default_str();
    synth_ple_cmd->add_option("--mhz-per-volt", spo.cfg.mhz_per_volt, "true calibration")
        ->capture_default_str();
    synth_ple_cmd->add_option("--n-lines", spo.cfg.n_lines, "number of lines")->capture_default_str();
    synth_ple_cmd->add_option("--samples-per-line", spo.cfg.samples_per_line, "samples per line")
        ->capture_default_str();
    synth_ple_cmd->add_option("--span-v", spo.cfg.scan_span_v, "scan span in volts")->capture_default_str();
    synth_ple_cmd->add_option("--peak-counts", spo.cfg.peak_counts, "expected counts at each peak")
        ->capture_default_str();
    synth_ple_cmd->add_option("--background-counts", spo.cfg.background_counts, "background counts")
        ->capture_default_str();
    synth_ple_cmd->add_option("--walk-std", spo.cfg.walk_std_mhz_per_line,
                              "random-walk step std (MHz per line)")
        ->capture_default_str();
    synth_ple_cmd->add_option("--period-s", spo.cfg.line_period_s, "time between line starts (s)")
        ->capture_default_str();
    synth_ple_cmd->add_option("--seed", spo.cfg.seed, "PRNG seed")->capture_default_str();
    synth_ple_cmd->add_flag("--noiseless", spo.cfg.noiseless, "emit the exact model, no shot noise");
    synth_ple_cmd->add_option("--region", spo.cfg.region_id, "region label")->capture_default_str();

    SynthSpectrumOpts sso;
    CLI::App* synth_sp_cmd =
        synth_cmd->add_subcommand("spectrum", "Synthetic emission spectrum with planted peaks");
    synth_sp_cmd->add_option("-o,--out", sso.out_path, "output spectrum CSV path")->required();
    synth_sp_cmd->add_option("--truth", sso.truth_path,
                             "ground-truth sidecar path (default: <out>.truth.json)");
    synth_sp_cmd
        ->add_option("--peak", sso.peaks, "planted peak center_nm,height,width_nm (repeatable)")
        ->take_all();
    synth_sp_cmd->add_option("--background", sso.cfg.background, "flat background level")
        ->capture_default_str();
    synth_sp_cmd->add_option("--noise-std", sso.cfg.noise_std, "Gaussian noise std")->capture_default_str();
    synth_sp_cmd->add_option("--grid", sso.grid, "wavelength grid lo_nm,hi_nm,n_samples")
        ->capture_default_str();
    synth_sp_cmd->add_option("--resolution-nm", sso.cfg.resolution_nm, "spectrometer resolution tag")
        ->capture_default_str();
    synth_sp_cmd->add_option("--seed", sso.cfg.seed, "PRNG seed")->capture_default_str();

    SynthAfmOpts sao;
    CLI::App* synth_afm_cmd = synth_cmd->add_subcommand(
        "afm", "Synthetic AFM map: polynomial background, row offsets, white roughness");
    synth_afm_cmd->add_option("-o,--out", sao.out_path, "output AFM text path")->required();
    synth_afm_cmd->add_option("--truth", sao.truth_path,
                              "ground-truth sidecar path (default: <out>.truth.json)");
    synth_afm_cmd->add_option("--nx", sao.cfg.nx, "columns")->capture_default_str();
    synth_afm_cmd->add_option("--ny", sao.cfg.ny, "rows")->capture_default_str();
    synth_afm_cmd->add_option("--dx-um", sao.cfg.dx_um, "pixel pitch x")->capture_default_str();
    synth_afm_cmd->add_option("--dy-um", sao.cfg.dy_um, "pixel pitch y")->capture_default_str();
    synth_afm_cmd->add_option("--sigma-pm", sao.cfg.sigma_pm, "white roughness std (pm)")
        ->capture_default_str();
    synth_afm_cmd->add_option("--poly-degree", sao.cfg.poly_degree, "background polynomial degree")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth_afm_cmd->add_option("--poly-coeffs", sao.poly_coeffs,
                              "comma-separated background coefficients (nm)");
    synth_afm_cmd->add_option("--row-offset-std-nm", sao.cfg.row_offset_std_nm,
                              "per-row offset std (nm)")
        ->capture_default_str();
    synth_afm_cmd->add_option("--seed", sao.cfg.seed, "PRNG seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (*lw_cmd) return run_linewidth(lw);
        if (*wa_cmd) return run_wander(wo);
        if (*sp_cmd) return run_spectra(so);
        if (*afm_cmd) return run_afm(ao);
        if (*synth_ple_cmd) return run_synth_ple(spo, synth_ple_cmd);
        if (*synth_sp_cmd) return run_synth_spectrum(sso);
        if (*synth_afm_cmd) return run_synth_afm(sao);
    } catch (const NonConvergence& e) {
        std::cerr << "plekit: fit did not converge: " << e.what() << "\n";
        return 3;
    } catch (const TooFewSuccessfulLines& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateData& e) {
        std::cerr << "plekit: degenerate data: " << e.what() << "\n";
        return 2;
    } catch (const GridMismatch& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 2;
    } catch (const EmptyRegion& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 2;
    } catch (const NonPositiveSeparation& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 2;
    } catch (const NonPositiveDt& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 2;
    } catch (const ConstraintInfeasible& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 2;
    } catch (const EmptyGrid& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 64;
    } catch (const ParseError& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "plekit: invalid input: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "plekit: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
