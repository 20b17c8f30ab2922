#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "config_text.hpp"
#include "vncs/scan_engine.hpp"

namespace vncs::cli {

struct ProfilePoint {
    double omega_ev = 0.0;
    double theta_mrad = 0.0;

    bool operator==(const ProfilePoint&) const = default;
};

// Everything a run needs, in the units used by the configuration file.
struct RunConfig {
    double electron_energy_ev = 0.0;
    int spin_in = 1;
    int photon_helicity = -1;
    int n_phi = 64;
    int n_max = 12;
    double emission_floor = 1e-30;
    int workers = 1;
    std::string output_dir = "out";

    double omega1_ev = 1.55;
    int n_cycle = 10;
    std::vector<int> harmonics;
    std::vector<double> a0;
    std::vector<int> helicity;
    std::vector<double> cep_rad;

    bool omega_dressed = true;  // omega bounds in units of the dressed first harmonic
    double omega_min = 0.5;
    double omega_max = 4.5;
    int omega_count = 200;
    std::vector<double> theta_mrad{2.0};
    std::vector<std::vector<double>> a0_ladder;

    QuadratureSettings quadrature;

    bool profile_emit = false;  // also write profiles after `scan`
    bool profile_images = true;
    int profile_radial = 256;
    int profile_azimuthal = 256;
    std::vector<ProfilePoint> profile_points;

    bool operator==(const RunConfig&) const = default;

    LaserConfig laser() const;
    ScanSpec scan_spec() const;
    // Per profile point: true if it coincides with a scan grid point.
    std::vector<bool> profile_on_grid() const;
};

// Builds and validates a RunConfig. Overrides ("key", "value text") replace file
// entries one-for-one before validation. Throws ConfigError naming the key.
RunConfig parse_config(const std::string& text, const std::vector<std::pair<std::string, std::string>>& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Effective configuration with every default spelled out; parses back to an equal RunConfig.
std::string echo_config(const RunConfig& config);

}  // namespace vncs::cli
