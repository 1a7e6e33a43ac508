#include "plekit/io.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "json.hpp"

namespace plekit {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw IoError("failed to format number");
    return std::string(buf, ptr);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed on " + path.string());
    return ss.str();
}

void atomic_write_text(const fs::path& path, const std::string& content) {
    fs::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    static std::atomic<unsigned> counter{0};
    fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(counter.fetch_add(1)) +
                          "." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + path.string());
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed on " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename temp file onto " + path.string());
    }
}

namespace {

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ParseError(std::string("missing or non-numeric field \"") + key + "\"");
    return j.at(key).get<double>();
}

std::vector<double> require_array(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw ParseError(std::string("missing or non-array field \"") + key + "\"");
    std::vector<double> out;
    out.reserve(j.at(key).size());
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ParseError(std::string("non-numeric entry in \"") + key + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

PleScan read_scan(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw ParseError("invalid scan JSON in " + path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("meta") || !j.contains("lines") || !j.at("lines").is_array())
        throw ParseError("scan JSON must contain \"meta\" and \"lines\"");

    PleScan scan;
    const json& m = j.at("meta");
    if (!m.is_object()) throw ParseError("\"meta\" must be an object");
    if (m.contains("region_id") && m.at("region_id").is_string())
        scan.meta.region_id = m.at("region_id").get<std::string>();
    scan.meta.splitting_mhz = require_number(m, "splitting_mhz");
    if (m.contains("excitation_power_nw") && !m.at("excitation_power_nw").is_null())
        scan.meta.excitation_power_nw = require_number(m, "excitation_power_nw");
    if (m.contains("notes") && !m.at("notes").is_null()) {
        if (!m.at("notes").is_string()) throw ParseError("\"notes\" must be a string or null");
        scan.meta.notes = m.at("notes").get<std::string>();
    }

    for (const auto& lj : j.at("lines")) {
        PleLine line;
        line.index = static_cast<int>(require_number(lj, "index"));
        line.t0_s = require_number(lj, "t0_s");
        line.voltage_v = require_array(lj, "voltage_v");
        line.counts = require_array(lj, "counts");
        scan.lines.push_back(std::move(line));
    }
    validate(scan);
    return scan;
}

void write_scan(const PleScan& scan, const fs::path& path) {
    validate(scan);
    json m;
    m["region_id"] = scan.meta.region_id;
    m["splitting_mhz"] = scan.meta.splitting_mhz;
    m["excitation_power_nw"] = scan.meta.excitation_power_nw ? json(*scan.meta.excitation_power_nw) : json(nullptr);
    m["notes"] = scan.meta.notes ? json(*scan.meta.notes) : json(nullptr);

    json lines = json::array();
    for (const PleLine& line : scan.lines) {
        json lj;
        lj["index"] = line.index;
        lj["t0_s"] = line.t0_s;
        lj["voltage_v"] = line.voltage_v;
        lj["counts"] = line.counts;
        lines.push_back(std::move(lj));
    }
    json j;
    j["meta"] = std::move(m);
    j["lines"] = std::move(lines);
    atomic_write_text(path, j.dump(2) + "\n");
}

Spectrum read_spectrum(const fs::path& path, double resolution_nm) {
    std::istringstream in(read_text(path));
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty spectrum file " + path.string());
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != "wavelength_nm,intensity")
        throw ParseError("spectrum CSV must start with \"wavelength_nm,intensity\"");

    Spectrum s;
    s.resolution_nm = resolution_nm;
    std::string row;
    std::size_t row_no = 1;
    while (std::getline(in, row)) {
        ++row_no;
        if (!row.empty() && row.back() == '\r') row.pop_back();
        if (row.empty()) continue;
        std::size_t comma = row.find(',');
        if (comma == std::string::npos)
            throw ParseError("spectrum row " + std::to_string(row_no) + " has no comma");
        char* end = nullptr;
        double w = std::strtod(row.c_str(), &end);
        if (end != row.c_str() + comma)
            throw ParseError("bad wavelength in spectrum row " + std::to_string(row_no));
        double y = std::strtod(row.c_str() + comma + 1, &end);
        if (end != row.c_str() + row.size())
            throw ParseError("bad intensity in spectrum row " + std::to_string(row_no));
        s.wavelength_nm.push_back(w);
        s.intensity.push_back(y);
    }
    validate(s);
    return s;
}

void write_spectrum(const Spectrum& spectrum, const fs::path& path) {
    validate(spectrum);
    std::string out = "wavelength_nm,intensity\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        out += format_double(spectrum.wavelength_nm[i]);
        out += ',';
        out += format_double(spectrum.intensity[i]);
        out += '\n';
    }
    atomic_write_text(path, out);
}

AfmMap read_afm(const fs::path& path) {
    std::istringstream in(read_text(path));
    AfmMap map;
    if (!(in >> map.nx >> map.ny >> map.dx_um >> map.dy_um))
        throw ParseError("AFM header must be \"nx ny dx_um dy_um\" in " + path.string());
    if (map.nx <= 0 || map.ny <= 0) throw ParseError("AFM header has non-positive dimensions");
    std::size_t n = static_cast<std::size_t>(map.nx) * static_cast<std::size_t>(map.ny);
    map.heights_nm.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(in >> map.heights_nm[i]))
            throw ParseError("AFM file has fewer height values than nx*ny");
    }
    std::string extra;
    if (in >> extra) throw ParseError("AFM file has more height values than nx*ny");
    validate(map);
    return map;
}

void write_afm(const AfmMap& map, const fs::path& path) {
    validate(map);
    std::string out = std::to_string(map.nx) + " " + std::to_string(map.ny) + " " +
                      format_double(map.dx_um) + " " + format_double(map.dy_um) + "\n";
    for (int r = 0; r < map.ny; ++r) {
        for (int c = 0; c < map.nx; ++c) {
            if (c) out += ' ';
            out += format_double(map.at(r, c));
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

} // namespace plekit
