#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plekit/errors.hpp"

namespace plekit {

// Acquisition metadata shared by all lines of a PLE scan.
struct ScanMeta {
    std::string region_id;
    double splitting_mhz = 1000.0; // known A1-A2 peak separation
    std::optional<double> excitation_power_nw;
    std::optional<std::string> notes;
};

// One PLE line: photon counts versus scan voltage, acquired at t0 seconds
// after scan start.
struct PleLine {
    int index = 0;
    double t0_s = 0.0;
    std::vector<double> voltage_v;
    std::vector<double> counts;

    std::size_t size() const { return voltage_v.size(); }
    double span_v() const; // |last - first|, valid after validation
};

// A time-ordered sequence of PLE lines.
struct PleScan {
    ScanMeta meta;
    std::vector<PleLine> lines;

    // True when every line samples the identical voltage grid.
    bool uniform_grid() const;
};

// Emission spectrum on a strictly increasing wavelength grid.
struct Spectrum {
    std::vector<double> wavelength_nm;
    std::vector<double> intensity;
    double resolution_nm = 0.35; // spectrometer resolution

    std::size_t size() const { return wavelength_nm.size(); }
};

// Rectangular AFM height map, row-major with ny rows of nx columns.
struct AfmMap {
    int nx = 0;
    int ny = 0;
    double dx_um = 0.0;
    double dy_um = 0.0;
    std::vector<double> heights_nm;

    double at(int row, int col) const { return heights_nm[static_cast<std::size_t>(row) * nx + col]; }
    double& at(int row, int col) { return heights_nm[static_cast<std::size_t>(row) * nx + col]; }
};

// Invariant checks. Each throws ValidationError naming the offending field;
// readers call these so no invalid object ever escapes the I/O layer.
void validate(const ScanMeta& meta);
void validate(const PleLine& line);
void validate(const PleScan& scan);
void validate(const Spectrum& spectrum);
void validate(const AfmMap& map);

} // namespace plekit
