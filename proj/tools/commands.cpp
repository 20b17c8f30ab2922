#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "manifest.hpp"
#include "vncs/channel_planner.hpp"
#include "vncs/errors.hpp"
#include "vncs/profile_io.hpp"
#include "vncs/vortex_projection.hpp"

namespace vncs::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

// Creates the output directory and records the effective configuration.
fs::path prepare_output(const RunConfig& config) {
    const std::string echo = echo_config(config);
    if (!(parse_config(echo) == config)) throw std::logic_error("effective configuration does not round-trip");
    const fs::path dir = config.output_dir;
    fs::create_directories(dir);
    open_out(dir / "effective_config.toml") << echo;
    return dir;
}

fs::path intensity_dir(const fs::path& out, std::size_t k) { return out / ("intensity_" + std::to_string(k)); }

ScanSpec ladder_spec(const RunConfig& config, std::size_t k) {
    RunConfig step = config;
    step.a0 = config.a0_ladder[k];
    return step.scan_spec();
}

std::function<void(std::size_t, std::size_t)> progress_printer(std::ostream& log, bool quiet, const std::string& tag) {
    if (quiet) return {};
    return [&log, tag, last = std::size_t(0)](std::size_t done, std::size_t total) mutable {
        const std::size_t tenth = total >= 10 ? total / 10 : 1;
        if (done == total || done - last >= tenth) {
            last = done;
            log << tag << ": " << done << "/" << total << " points\n" << std::flush;
        }
    };
}

std::string fmt(double v) { return format_double(v); }

struct ProfileOutcome {
    bool ok = true;
    std::string message;
};

ProfileOutcome write_profile(const RunConfig& config, std::size_t i, bool on_grid, const fs::path& dir,
                             const VolkovAmplitude& amplitude) {
    const ProfilePoint& pt = config.profile_points[i];
    const ScanSpec spec = config.scan_spec();
    char stem_buf[32];
    std::snprintf(stem_buf, sizeof stem_buf, "point_%02zu", i);
    const std::string stem = stem_buf;
    try {
        const double theta = pt.theta_mrad * 1e-3;
        const Kinematics kin = make_kinematics(spec.electron(), spec.laser.omega1_ev, pt.omega_ev, theta);
        const AzimuthalSamples samples = amplitude.azimuthal_samples(kin, spec.n_phi, spec.spin_in, spec.photon_helicity);
        const VortexDecomposition d = decompose(samples.for_spin(spec.spin_in), kin, spec.spin_in, spec.spin_in,
                                                spec.photon_helicity);
        std::map<int, cplx> coeffs;
        const double total = d.tam.total_power();
        for (const auto& [ell, c] : oam_coefficients(d))
            if (std::norm(c) >= 1e-6 * total) coeffs[ell] = c;
        const SuperpositionState state = superposition_state(coeffs, 0.0);
        const TransverseProfile profile =
            transverse_profile(state, kin.kperp, {config.profile_radial, config.profile_azimuthal, 0.0});
        if (config.profile_images) {
            write_intensity_pgm(dir / (stem + "_intensity.pgm"), profile);
            write_phase_pgm(dir / (stem + "_phase.pgm"), profile);
        }
        write_profile_raw(dir, stem, profile, state);
        std::ofstream side(dir / (stem + ".txt"), std::ios::app | std::ios::binary);
        side << "omega_ev=" << fmt(pt.omega_ev) << "\n";
        side << "theta_mrad=" << fmt(pt.theta_mrad) << "\n";
        side << "evaluation=" << (on_grid ? "grid" : "standalone") << "\n";
        side << "spin=initial " << spec.spin_in << " final " << spec.spin_in << "\n";
        side << "dominant_ring_index=" << profile.dominant_ring() << "\n";
        side << "phase_winding_on_dominant_ring=" << profile.phase_winding(profile.dominant_ring()) << "\n";
        side << "azimuthal_minima_on_dominant_ring=" << profile.count_azimuthal_minima(profile.dominant_ring())
             << "\n";
        for (const auto& p : state.pairs)
            side << "pair=" << p.ell_low << "," << p.ell_high << " delta_ell=" << p.delta_ell
                 << " delta_rad=" << fmt(p.delta) << " visibility=" << fmt(p.visibility) << "\n";
        return {};
    } catch (const NoEmissionError& e) {
        return {false, e.what()};
    } catch (const QuadratureError& e) {
        return {false, e.what()};
    } catch (const KinematicsError& e) {
        return {false, e.what()};
    } catch (const AliasingError& e) {
        return {false, e.what()};
    }
}

int profiles(const RunConfig& config, const CommandOptions& options, std::ostream& log, const fs::path& out) {
    if (config.profile_points.empty()) throw ConfigError("profile.points", "at least one point is required");
    const fs::path dir = out / "profiles";
    fs::create_directories(dir);
    const auto on_grid = config.profile_on_grid();
    const VolkovAmplitude amplitude{PulseField(config.laser()), config.quadrature};
    std::size_t failures = 0;
    auto summary = open_out(dir / "summary.txt");
    for (std::size_t i = 0; i < config.profile_points.size(); ++i) {
        const ProfileOutcome r = write_profile(config, i, on_grid[i], dir, amplitude);
        summary << "point." << i << "=" << (r.ok ? "ok" : "failed: " + r.message) << "\n";
        if (!r.ok) {
            ++failures;
            log << "profile point " << i << ": " << r.message << "\n";
        }
    }
    if (!options.quiet) log << "profiles: " << config.profile_points.size() - failures << " written\n";
    return failures > 0 && options.strict ? kExitNumerical : kExitOk;
}

SpectrumTable load_table(const ScanSpec& spec, const fs::path& dir) {
    SpectrumTable table;
    table.spec = spec;
    for (std::size_t t = 0; t < spec.thetas.size(); ++t) {
        const fs::path path = dir / spectrum_file_name(static_cast<int>(t));
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("missing " + path.string() + "; run `scan` first");
        auto points = read_spectrum_table(in);
        if (points.size() != static_cast<std::size_t>(spec.omega.count))
            throw std::runtime_error(path.string() + " does not match the configured omega grid");
        for (std::size_t i = 0; i < points.size(); ++i) {
            points[i].index = t * spec.omega.count + i;
            table.points.push_back(std::move(points[i]));
        }
    }
    return table;
}

void write_line_summary(std::ostream& out, const SpectrumTable& table) {
    for (std::size_t t = 0; t < table.spec.thetas.size(); ++t) {
        const auto [w, v] = total_spectrum(table, static_cast<int>(t));
        const SpectralLine line = leading_line(w, v, 1.0);
        out << "[theta." << t << "]\n";
        out << "theta_rad=" << fmt(table.spec.thetas[t]) << "\n";
        out << "strongest_line_ev=" << fmt(line.peak_omega) << "\n";
        out << "fractional_width=" << fmt(line.fractional_width) << "\n";
        const auto pts = table.for_theta(static_cast<int>(t));
        const auto best = std::max_element(pts.begin(), pts.end(),
                                           [](auto* a, auto* b) { return a->total_rate < b->total_rate; });
        if (best != pts.end()) {
            auto modes = (*best)->modes;
            std::sort(modes.begin(), modes.end(), [](auto& a, auto& b) { return a.weight > b.weight; });
            out << "peak_sample_ev=" << fmt((*best)->omega) << "\n";
            for (std::size_t k = 0; k < std::min<std::size_t>(3, modes.size()); ++k)
                out << "peak_mode." << k << "=" << modes[k].ell << ":" << fmt(modes[k].weight) << "\n";
        }
        out << "\n";
    }
}

}  // namespace

int run_plan(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const fs::path out = prepare_output(config);
    const ScanSpec spec = config.scan_spec();
    const ElectronState e = spec.electron();
    const double theta = spec.thetas.front();
    auto beta_of_n = [&](int n) {
        const Kinematics kin = make_kinematics(e, spec.laser.omega1_ev, photon_energy(n, theta, e, spec.laser.omega1_ev),
                                               theta);
        return ponderomotive_shift(kin, spec.laser);
    };
    {
        auto atlas = open_out(out / "atlas.tsv");
        atlas << "#theta_rad=" << fmt(theta) << "\n";
        write_atlas(atlas, spec.laser, spec.n_max, beta_of_n);
    }
    {
        auto deg = open_out(out / "degeneracies.tsv");
        write_degeneracies(deg, spec.laser, spec.n_max, spec.photon_helicity);
    }
    if (!options.quiet) {
        const auto pairs = degenerate_pairs(spec.laser, spec.n_max);
        log << "plan: " << enumerate_channels(spec.laser, spec.n_max).size() << " channels, " << pairs.size()
            << " degenerate pairs up to N = " << spec.n_max << "\n";
    }
    write_manifest(out);
    return kExitOk;
}

int run_scan(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const fs::path out = prepare_output(config);
    ScanOptions scan_options;
    scan_options.max_points = options.max_points;
    std::size_t failures = 0;
    bool interrupted = false;

    auto run_one = [&](const ScanSpec& spec, const fs::path& dir, const std::string& tag) -> std::optional<SpectrumTable> {
        fs::create_directories(dir);
        scan_options.checkpoint = dir / "checkpoint.log";
        scan_options.progress = progress_printer(log, options.quiet, tag);
        try {
            SpectrumTable table = run_spectrum_scan(spec, scan_options);
            write_spectrum_tables(dir, table);
            fs::remove(dir / "checkpoint.log");
            failures += table.failures();
            return table;
        } catch (const ScanInterrupted& e) {
            log << tag << ": " << e.what() << "; rerun the same command to resume\n";
            interrupted = true;
            return std::nullopt;
        }
    };

    if (config.a0_ladder.empty()) {
        run_one(config.scan_spec(), out, "scan");
    } else {
        std::vector<SpectrumTable> tables;
        for (std::size_t k = 0; k < config.a0_ladder.size() && !interrupted; ++k) {
            auto t = run_one(ladder_spec(config, k), intensity_dir(out, k), "intensity " + std::to_string(k));
            if (t) tables.push_back(std::move(*t));
        }
        if (!interrupted) {
            const BandMergeReport report = band_merge_report(tables);
            auto f = open_out(out / "band_merge.txt");
            report.write(f);
        }
    }
    int code = kExitOk;
    if (interrupted) {
        code = kExitIncomplete;
    } else {
        if (failures > 0) log << "scan: " << failures << " point(s) failed; see #failure lines in the tables\n";
        if (config.profile_emit && !config.profile_points.empty()) code = profiles(config, options, log, out);
        if (failures > 0 && options.strict) code = kExitNumerical;
    }
    write_manifest(out);
    return code;
}

int run_profile(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const fs::path out = prepare_output(config);
    const int code = profiles(config, options, log, out);
    write_manifest(out);
    return code;
}

int run_report(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const fs::path out = prepare_output(config);
    std::vector<SpectrumTable> tables;
    if (config.a0_ladder.empty()) {
        tables.push_back(load_table(config.scan_spec(), out));
    } else {
        for (std::size_t k = 0; k < config.a0_ladder.size(); ++k)
            tables.push_back(load_table(ladder_spec(config, k), intensity_dir(out, k)));
        const BandMergeReport report = band_merge_report(tables);
        auto f = open_out(out / "band_merge.txt");
        report.write(f);
        if (!options.quiet)
            log << "report: linewidth_increasing=" << (report.linewidth_increasing ? "true" : "false")
                << " redshift_decreasing=" << (report.redshift_decreasing ? "true" : "false")
                << " worst_redshift_ratio_error=" << fmt(report.worst_redshift_ratio_error) << "\n";
    }
    {
        auto f = open_out(out / "lines.txt");
        for (std::size_t k = 0; k < tables.size(); ++k) {
            f << "# table " << k << "\n";
            write_line_summary(f, tables[k]);
        }
    }
    if (config.theta_mrad.size() >= 3) {
        const ApertureReport aperture = angular_aperture_report(tables);
        auto f = open_out(out / "aperture.txt");
        aperture.write(f);
    } else if (!options.quiet) {
        log << "report: angular aperture skipped (needs at least three theta values)\n";
    }
    write_manifest(out);
    return kExitOk;
}

}  // namespace vncs::cli
