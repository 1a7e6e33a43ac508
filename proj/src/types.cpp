#include "plekit/types.hpp"

#include <cmath>
#include <cstddef>

namespace plekit {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// +1 strictly increasing, -1 strictly decreasing, 0 neither
int monotone_direction(const std::vector<double>& v) {
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] <= v[i - 1]) inc = false;
        if (v[i] >= v[i - 1]) dec = false;
    }
    if (inc) return 1;
    if (dec) return -1;
    return 0;
}

} // namespace

double PleLine::span_v() const {
    if (voltage_v.empty()) return 0.0;
    return std::abs(voltage_v.back() - voltage_v.front());
}

bool PleScan::uniform_grid() const {
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].voltage_v != lines[0].voltage_v) return false;
    }
    return true;
}

void validate(const ScanMeta& meta) {
    if (!(meta.splitting_mhz > 0.0) || !std::isfinite(meta.splitting_mhz))
        throw ValidationError("splitting_mhz", "must be positive and finite");
    if (meta.excitation_power_nw && !std::isfinite(*meta.excitation_power_nw))
        throw ValidationError("excitation_power_nw", "must be finite");
}

void validate(const PleLine& line) {
    if (line.voltage_v.size() < 8)
        throw ValidationError("voltage", "line needs at least 8 samples");
    if (line.counts.size() != line.voltage_v.size())
        throw ValidationError("counts", "length differs from voltage length");
    if (!all_finite(line.voltage_v))
        throw ValidationError("voltage", "contains non-finite values");
    if (monotone_direction(line.voltage_v) == 0)
        throw ValidationError("voltage", "must be strictly monotone");
    if (!all_finite(line.counts))
        throw ValidationError("counts", "contains non-finite values");
    for (double c : line.counts) {
        if (c < 0.0) throw ValidationError("counts", "must be non-negative");
    }
    if (!std::isfinite(line.t0_s))
        throw ValidationError("t0_s", "must be finite");
}

void validate(const PleScan& scan) {
    validate(scan.meta);
    if (scan.lines.empty())
        throw ValidationError("lines", "scan has no lines");
    int direction = 0;
    for (std::size_t i = 0; i < scan.lines.size(); ++i) {
        validate(scan.lines[i]);
        int d = scan.lines[i].voltage_v[1] > scan.lines[i].voltage_v[0] ? 1 : -1;
        if (i == 0) {
            direction = d;
        } else {
            if (d != direction)
                throw ValidationError("voltage", "scan mixes increasing and decreasing lines");
            if (scan.lines[i].t0_s <= scan.lines[i - 1].t0_s)
                throw ValidationError("t0_s", "line start times must be strictly increasing");
        }
    }
}

void validate(const Spectrum& spectrum) {
    if (spectrum.wavelength_nm.empty())
        throw ValidationError("wavelength_nm", "spectrum is empty");
    if (spectrum.intensity.size() != spectrum.wavelength_nm.size())
        throw ValidationError("intensity", "length differs from wavelength length");
    if (!all_finite(spectrum.wavelength_nm))
        throw ValidationError("wavelength_nm", "contains non-finite values");
    if (monotone_direction(spectrum.wavelength_nm) != 1)
        throw ValidationError("wavelength_nm", "must be strictly increasing");
    if (!all_finite(spectrum.intensity))
        throw ValidationError("intensity", "contains non-finite values");
    if (!(spectrum.resolution_nm > 0.0) || !std::isfinite(spectrum.resolution_nm))
        throw ValidationError("resolution_nm", "must be positive and finite");
}

void validate(const AfmMap& map) {
    if (map.nx < 4) throw ValidationError("nx", "grid needs nx >= 4");
    if (map.ny < 4) throw ValidationError("ny", "grid needs ny >= 4");
    if (!(map.dx_um > 0.0) || !std::isfinite(map.dx_um))
        throw ValidationError("dx_um", "must be positive and finite");
    if (!(map.dy_um > 0.0) || !std::isfinite(map.dy_um))
        throw ValidationError("dy_um", "must be positive and finite");
    if (map.heights_nm.size() != static_cast<std::size_t>(map.nx) * static_cast<std::size_t>(map.ny))
        throw ValidationError("heights_nm", "size differs from nx*ny");
    if (!all_finite(map.heights_nm))
        throw ValidationError("heights_nm", "contains non-finite values");
}

} // namespace plekit
