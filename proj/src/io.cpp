#include "bec/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace bec {

namespace {

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
    return std::filesystem::path(stem.string() + suffix);
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << j.dump(2) << '\n';
}

nlohmann::ordered_json grid_json(const Grid& g) {
    nlohmann::ordered_json j;
    j["dim_r"] = g.dim_r();
    j["dim_p"] = g.dim_p();
    j["n_r"] = g.n_r();
    j["n_p"] = g.n_p();
    j["length_r"] = g.length_r();
    j["p_max"] = g.p_max();
    j["p_shift"] = g.p_shift();
    j["dr"] = g.dr();
    j["dp"] = g.dp();
    return j;
}

} // namespace

void write_f64_le(const std::filesystem::path& path, const double* data, std::size_t n) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, data + i, sizeof bits);
        bits = to_le(bits);
        os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

RealField read_f64_le(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    RealField out;
    std::uint64_t bits;
    while (is.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
        bits = to_le(bits);
        double v;
        std::memcpy(&v, &bits, sizeof v);
        out.push_back(v);
    }
    return out;
}

void write_phase_snapshot(const std::filesystem::path& stem, const KineticModel& kinetic, const PhaseSpaceField& f) {
    write_f64_le(with_suffix(stem, ".bin"), f.values.data(), f.values.size());
    nlohmann::ordered_json j;
    j["kind"] = "phase_space";
    j["layout"] = "row-major, spatial axes outer, momentum axes inner, float64 little-endian";
    j["grid"] = grid_json(kinetic.grid());
    j["time"] = f.time;
    j["mass"] = kinetic.mass(f);
    j["l_norm"] = kinetic.l_norm(f);
    write_json(with_suffix(stem, ".json"), j);
}

void write_wave_snapshot(const std::filesystem::path& stem, const NlsModel& nls, const WaveField& w) {
    RealField flat(2 * w.psi.size());
    double sup1 = 0.0, sup2 = 0.0;
    for (std::size_t i = 0; i < w.psi.size(); ++i) {
        flat[2 * i] = w.psi[i].real();
        flat[2 * i + 1] = w.psi[i].imag();
        sup1 = std::max(sup1, std::abs(w.psi[i].real() - 1.0));
        sup2 = std::max(sup2, std::abs(w.psi[i].imag()));
    }
    write_f64_le(with_suffix(stem, ".bin"), flat.data(), flat.size());
    nlohmann::ordered_json j;
    j["kind"] = "wave";
    j["layout"] = "row-major, interleaved (re, im), float64 little-endian";
    j["grid"] = grid_json(nls.grid());
    j["time"] = w.time;
    j["mass"] = nls.mass(w);
    j["sup_u1"] = sup1;
    j["sup_u2"] = sup2;
    write_json(with_suffix(stem, ".json"), j);
}

} // namespace bec
