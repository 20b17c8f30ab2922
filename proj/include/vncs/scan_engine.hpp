#pragma once

// Parameter sweeps over (omega', theta) with deterministic parallel execution.
// One work unit is one grid point: every azimuth sample, both final spins,
// winding decomposition and bookkeeping.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vncs/physcore.hpp"
#include "vncs/volkov_amplitude.hpp"

namespace vncs {

struct OmegaGrid {
    double min = 0.0;  // eV, or multiples of the dressed first harmonic when `dressed_units`
    double max = 0.0;
    int count = 0;
    bool dressed_units = false;

    bool operator==(const OmegaGrid&) const = default;
};

struct ScanSpec {
    LaserConfig laser;
    double electron_energy_ev = 1.0e9;
    int spin_in = +1;
    int photon_helicity = -1;
    OmegaGrid omega;
    std::vector<double> thetas;  // rad
    int n_phi = 64;
    int n_max = 12;
    QuadratureSettings quadrature;
    double emission_floor = 1e-30;  // relative to the scan peak
    int workers = 1;

    // Throws ConfigError naming the offending key.
    void validate() const;

    ElectronState electron() const { return ElectronState::head_on(electron_energy_ev, spin_in); }
    double omega_at(int index, double theta) const;
    std::size_t point_count() const { return thetas.size() * static_cast<std::size_t>(omega.count); }
    // Point index -> (theta index, omega index).
    std::pair<int, int> split(std::size_t index) const;

    // key=value description of everything that determines the results (worker count excluded).
    std::vector<std::pair<std::string, std::string>> metadata() const;

    bool operator==(const ScanSpec&) const = default;
};

// Photon energy of harmonic `harmonic` seen by the electron dressed with the
// peak intensity of `config`: N k1.p / (eps - p_z cos theta + (N + m^2 sum a0^2 / (2 k1.p)) omega_1 (1 + cos theta)).
double dressed_harmonic_energy(int harmonic, double theta, const ElectronState& electron, const LaserConfig& config);

enum class PointStatus { Ok, BelowFloor, QuadratureFailure, AliasingFailure, KinematicsFailure };

const char* to_string(PointStatus status);
PointStatus parse_status(const std::string& text);

struct ModeRow {
    int ell = 0;
    double rate = 0.0;    // summed over the final spin, 1/eV/rad
    double weight = 0.0;  // rate / total rate
    double phase = 0.0;   // phase of the no-flip state coefficient, rad
};

struct PointResult {
    std::size_t index = 0;
    double omega = 0.0;
    double theta = 0.0;
    PointStatus status = PointStatus::Ok;
    std::string message;
    std::vector<ModeRow> modes;
    double total_rate = 0.0;
    double flip_rate = 0.0;          // part of total_rate with spin_out = -spin_in
    double parseval_error = 0.0;     // worst relative error over both final spins
    double selection_fraction = 1.0; // power on windings reachable by some channel with N <= n_max
    double convergence = 0.0;

    bool failed() const {
        return status == PointStatus::QuadratureFailure || status == PointStatus::AliasingFailure ||
               status == PointStatus::KinematicsFailure;
    }
    const ModeRow* mode(int ell) const;
};

struct SpectrumTable {
    ScanSpec spec;
    std::vector<PointResult> points;  // ordered by point index: theta-major, omega-minor

    std::vector<const PointResult*> for_theta(int theta_index) const;
    std::size_t failures() const;
};

// Evaluates a single grid point. `peak` is not known here, so status is never BelowFloor.
PointResult evaluate_point(const VolkovAmplitude& amplitude, const ScanSpec& spec, std::size_t index);

struct ScanOptions {
    std::optional<std::filesystem::path> checkpoint;  // append-only progress log, resumed if present
    std::size_t max_points = 0;                        // stop after this many new points (0 = no limit)
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct ScanInterrupted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Throws ScanInterrupted when max_points stops the run before completion.
SpectrumTable run_spectrum_scan(const ScanSpec& spec, const ScanOptions& options = {});

// Marks points below emission_floor * (largest total rate) and zeroes their weights.
void apply_emission_floor(SpectrumTable& table);

// Table I/O: tab-separated rows, '#key=value' header.
void write_spectrum_table(std::ostream& out, const SpectrumTable& table, int theta_index);
std::vector<std::filesystem::path> write_spectrum_tables(const std::filesystem::path& directory,
                                                         const SpectrumTable& table);
std::string spectrum_file_name(int theta_index);
// Reads the rows of one file back (omega, theta, status, mode rows; totals recomputed).
std::vector<PointResult> read_spectrum_table(std::istream& in);

// Checkpoint lines (exact hexadecimal floats).
std::string serialize_point(const PointResult& point);
PointResult deserialize_point(const std::string& line);

// Leading spectral line of a sampled spectrum.
struct SpectralLine {
    bool found = false;
    double peak_omega = 0.0;
    double peak_value = 0.0;
    double fwhm = 0.0;
    double fractional_width = 0.0;  // fwhm / peak_omega
};

// Lowest-energy local maximum reaching at least `relative_height` of the global
// maximum, refined by a parabola through the three samples around it; the
// half-maximum crossings are linearly interpolated (clamped at the grid ends).
SpectralLine leading_line(const std::vector<double>& omega, const std::vector<double>& value,
                          double relative_height = 0.1);

// Total emission versus omega' at one theta.
std::pair<std::vector<double>, std::vector<double>> total_spectrum(const SpectrumTable& table, int theta_index);

struct ChannelOverlap {
    int lower = 0;  // harmonic index N; pair is (N, N+1)
    double beta_lower = 0.0;
    double beta_upper = 0.0;
    double fraction = 0.0;  // overlap length / narrower support width
};

struct IntensityEntry {
    std::vector<double> a0;
    double sum_a0_squared = 0.0;
    SpectralLine line;
    double predicted_peak = 0.0;  // dressed first harmonic, eV
    std::vector<ChannelOverlap> overlaps;
};

struct BandMergeReport {
    double theta = 0.0;
    std::vector<IntensityEntry> entries;
    bool linewidth_increasing = false;
    bool redshift_decreasing = false;
    // (measured peak ratio) / (predicted ratio) - 1 for each adjacent pair and end to end.
    std::vector<double> redshift_ratio_errors;
    double worst_redshift_ratio_error = 0.0;

    void write(std::ostream& out) const;
};

std::vector<ChannelOverlap> channel_overlaps(const ScanSpec& spec, double theta, int n_pairs);

// The leading line is taken with `relative_height` (see leading_line); the
// default picks the strongest line, so the omega' window should bracket the
// first harmonic (dressed units 0.6..1.6 do).
BandMergeReport band_merge_report(const std::vector<SpectrumTable>& tables, int theta_index = 0,
                                  double relative_height = 1.0);

struct IntensityScan {
    std::vector<SpectrumTable> tables;
    BandMergeReport report;
};

// One spectrum scan per a0 vector (same harmonics and helicities as spec.laser).
IntensityScan run_intensity_scan(const ScanSpec& spec, const std::vector<std::vector<double>>& a0_ladder,
                                 const ScanOptions& options = {});

struct ApertureEntry {
    std::vector<double> a0;
    double mean_theta = 0.0;   // emission-weighted, rad
    double scale = 0.0;        // a_eff / gamma
    double ratio = 0.0;
    bool order_unity = false;  // 0.3 <= ratio <= 3
};

struct ApertureReport {
    std::vector<ApertureEntry> entries;
    bool widening = false;  // mean_theta strictly increasing along the ladder
    void write(std::ostream& out) const;
};

// Throws std::invalid_argument with fewer than three theta values.
ApertureReport angular_aperture_report(const std::vector<SpectrumTable>& tables);

}  // namespace vncs
