#include "vncs/profile_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace vncs {

namespace {

std::ofstream open_binary(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_pgm(const std::filesystem::path& path, int width, int height, const std::vector<unsigned char>& pixels) {
    auto out = open_binary(path);
    out << "P5\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

void write_f64(const std::filesystem::path& path, const std::vector<double>& values) {
    auto out = open_binary(path);
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        char bytes[8];
        std::memcpy(bytes, &bits, 8);
        out.write(bytes, 8);
    }
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

unsigned char phase_to_gray(double phase) {
    const double t = (phase + kPi) / (2.0 * kPi);
    return static_cast<unsigned char>(std::clamp(std::lround(t * 255.0), 0L, 255L));
}

void write_intensity_pgm(const std::filesystem::path& path, const TransverseProfile& profile) {
    double peak = 0.0;
    for (const auto& c : profile.field) peak = std::max(peak, std::norm(c));
    std::vector<unsigned char> px(profile.field.size(), 0);
    if (peak > 0.0)
        for (std::size_t i = 0; i < px.size(); ++i)
            px[i] = static_cast<unsigned char>(std::lround(255.0 * std::norm(profile.field[i]) / peak));
    write_pgm(path, profile.azimuthal, profile.radial, px);
}

void write_phase_pgm(const std::filesystem::path& path, const TransverseProfile& profile) {
    std::vector<unsigned char> px(profile.field.size());
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = phase_to_gray(std::arg(profile.field[i]));
    write_pgm(path, profile.azimuthal, profile.radial, px);
}

std::vector<std::filesystem::path> write_profile_raw(const std::filesystem::path& directory, const std::string& stem,
                                                     const TransverseProfile& profile,
                                                     const SuperpositionState& state) {
    std::vector<double> intensity(profile.field.size()), phase(profile.field.size());
    for (std::size_t i = 0; i < profile.field.size(); ++i) {
        intensity[i] = std::norm(profile.field[i]);
        phase[i] = std::arg(profile.field[i]);
    }
    const auto ipath = directory / (stem + "_intensity.f64");
    const auto ppath = directory / (stem + "_phase.f64");
    const auto meta = directory / (stem + ".txt");
    write_f64(ipath, intensity);
    write_f64(ppath, phase);

    std::ofstream out(meta, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + meta.string());
    out << "format=float64_le\n";
    out << "layout=row_major_radial_by_azimuthal\n";
    out << "radial=" << profile.radial << "\n";
    out << "azimuthal=" << profile.azimuthal << "\n";
    out << "r_max_inv_ev=" << g17(profile.r_max) << "\n";
    out << "r_max_kperp_units=" << g17(profile.r_max * profile.kperp) << "\n";
    out << "kperp_ev=" << g17(profile.kperp) << "\n";
    out << "intensity_file=" << ipath.filename().string() << "\n";
    out << "phase_file=" << ppath.filename().string() << "\n";
    std::string modes;
    for (int ell : state.modes_by_weight()) {
        const cplx c = state.coefficients.at(ell);
        if (!modes.empty()) modes += ';';
        modes += std::to_string(ell) + ':' + g17(std::norm(c)) + ':' + g17(std::arg(c));
    }
    out << "modes=" << modes << "\n";
    return {ipath, ppath, meta};
}

}  // namespace vncs
