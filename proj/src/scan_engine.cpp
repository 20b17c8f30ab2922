#include "vncs/scan_engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "vncs/channel_planner.hpp"
#include "vncs/errors.hpp"
#include "vncs/vortex_projection.hpp"

namespace vncs {

namespace {

// Shortest decimal form that reads back to the same double.
std::string g17(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string hexf(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw std::runtime_error("malformed number '" + s + "'");
    return v;
}

template <class T>
std::string join(const std::vector<T>& values, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        if constexpr (std::is_same_v<T, double>)
            out += g17(values[i]);
        else
            out += std::to_string(values[i]);
    }
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fingerprint(const ScanSpec& spec) {
    std::string text;
    for (const auto& [k, v] : spec.metadata()) text += k + "=" + v + "\n";
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
    return buf;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

}  // namespace

void ScanSpec::validate() const {
    try {
        laser.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("laser", e.what());
    }
    if (!(electron_energy_ev > kElectronMass))
        throw ConfigError("electron_energy_ev", "must exceed the electron rest energy");
    if (spin_in != 1 && spin_in != -1) throw ConfigError("spin_in", "helicity must be ±1");
    if (photon_helicity != 1 && photon_helicity != -1) throw ConfigError("photon_helicity", "helicity must be ±1");
    if (omega.count < 1) throw ConfigError("omega_count", "must be at least 1");
    if (!(omega.min > 0.0)) throw ConfigError("omega_min", "must be positive");
    if (!(omega.max >= omega.min)) throw ConfigError("omega_max", "must not be below omega_min");
    if (omega.count == 1 && omega.max != omega.min)
        throw ConfigError("omega_count", "a single point needs omega_min == omega_max");
    if (thetas.empty()) throw ConfigError("theta_mrad", "at least one angle is required");
    for (double t : thetas)
        if (!(t > 0.0 && t < kPi / 2)) throw ConfigError("theta_mrad", "angles must lie in (0, pi/2)");
    if (n_max < 1) throw ConfigError("n_max", "must be at least 1");
    if (n_phi < 2 * (n_max + 2) + 1)
        throw ConfigError("n_phi", "must be at least 2 (n_max + 2) + 1 = " + std::to_string(2 * (n_max + 2) + 1));
    if (!(emission_floor >= 0.0)) throw ConfigError("emission_floor", "must be nonnegative");
    if (workers < 1) throw ConfigError("workers", "must be at least 1");
    if (quadrature.points_per_cycle < 8) throw ConfigError("points_per_cycle", "must be at least 8");
    if (!(quadrature.tolerance > 0.0)) throw ConfigError("quadrature_tolerance", "must be positive");
    if (quadrature.max_refinements < 0 || quadrature.max_refinements > 5)
        throw ConfigError("max_refinements", "must lie in [0, 5]");
    const ElectronState e = electron();
    for (double t : thetas) {
        const double top = omega_at(omega.count - 1, t);
        const double edge = kinematic_edge(t, e, laser.omega1_ev);
        if (!(top < edge))
            throw ConfigError("omega_max", "largest photon energy " + g17(top) + " eV reaches the kinematic edge " +
                                               g17(edge) + " eV at theta = " + g17(t) + " rad");
    }
}

double ScanSpec::omega_at(int index, double theta) const {
    const double x = omega.count > 1 ? omega.min + (omega.max - omega.min) * index / (omega.count - 1) : omega.min;
    return omega.dressed_units ? x * dressed_harmonic_energy(1, theta, electron(), laser) : x;
}

std::pair<int, int> ScanSpec::split(std::size_t index) const {
    return {static_cast<int>(index / omega.count), static_cast<int>(index % omega.count)};
}

std::vector<std::pair<std::string, std::string>> ScanSpec::metadata() const {
    std::vector<int> harmonics, helicities;
    std::vector<double> a0, cep;
    for (const auto& m : laser.modes) {
        harmonics.push_back(m.harmonic);
        helicities.push_back(m.helicity);
        a0.push_back(m.a0);
        cep.push_back(m.cep);
    }
    return {
        {"electron_energy_ev", g17(electron_energy_ev)},
        {"omega1_ev", g17(laser.omega1_ev)},
        {"n_cycle", std::to_string(laser.n_cycle)},
        {"harmonics", join(harmonics)},
        {"a0", join(a0)},
        {"helicity", join(helicities)},
        {"cep_rad", join(cep)},
        {"spin_in", std::to_string(spin_in)},
        {"photon_helicity", std::to_string(photon_helicity)},
        {"omega_min", g17(omega.min)},
        {"omega_max", g17(omega.max)},
        {"omega_count", std::to_string(omega.count)},
        {"omega_units", omega.dressed_units ? "dressed_first_harmonic" : "ev"},
        {"theta_rad", join(thetas)},
        {"n_phi", std::to_string(n_phi)},
        {"n_max", std::to_string(n_max)},
        {"points_per_cycle", std::to_string(quadrature.points_per_cycle)},
        {"quadrature_tolerance", g17(quadrature.tolerance)},
        {"max_refinements", std::to_string(quadrature.max_refinements)},
        {"emission_floor", g17(emission_floor)},
    };
}

double dressed_harmonic_energy(int harmonic, double theta, const ElectronState& electron, const LaserConfig& config) {
    const double eps = electron.momentum.t;
    const double pz = electron.momentum.z;
    const double w1 = config.omega1_ev;
    const double kp = w1 * (eps + pz);
    const double m2 = kElectronMass * kElectronMass;
    const double sh = std::sin(0.5 * theta);
    const double longitudinal = m2 / (eps + pz) + 2.0 * pz * sh * sh;
    const double shift = m2 * config.sum_a0_squared() / (2.0 * kp);
    return harmonic * kp / (longitudinal + (harmonic + shift) * w1 * (1.0 + std::cos(theta)));
}

const char* to_string(PointStatus status) {
    switch (status) {
        case PointStatus::Ok: return "ok";
        case PointStatus::BelowFloor: return "below_floor";
        case PointStatus::QuadratureFailure: return "quadrature_failure";
        case PointStatus::AliasingFailure: return "aliasing";
        case PointStatus::KinematicsFailure: return "kinematics_failure";
    }
    return "unknown";
}

PointStatus parse_status(const std::string& text) {
    for (auto s : {PointStatus::Ok, PointStatus::BelowFloor, PointStatus::QuadratureFailure,
                   PointStatus::AliasingFailure, PointStatus::KinematicsFailure})
        if (text == to_string(s)) return s;
    throw std::runtime_error("unknown point status '" + text + "'");
}

const ModeRow* PointResult::mode(int ell) const {
    for (const auto& m : modes)
        if (m.ell == ell) return &m;
    return nullptr;
}

std::vector<const PointResult*> SpectrumTable::for_theta(int theta_index) const {
    std::vector<const PointResult*> out;
    for (const auto& p : points)
        if (spec.split(p.index).first == theta_index) out.push_back(&p);
    return out;
}

std::size_t SpectrumTable::failures() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.failed(); }));
}

PointResult evaluate_point(const VolkovAmplitude& amplitude, const ScanSpec& spec, std::size_t index) {
    const auto [ti, wi] = spec.split(index);
    PointResult r;
    r.index = index;
    r.theta = spec.thetas[ti];
    r.omega = spec.omega_at(wi, r.theta);
    const ElectronState electron = spec.electron();

    Kinematics kin;
    AzimuthalSamples samples;
    try {
        kin = make_kinematics(electron, spec.laser.omega1_ev, r.omega, r.theta);
        samples = amplitude.azimuthal_samples(kin, spec.n_phi, spec.spin_in, spec.photon_helicity);
    } catch (const KinematicsError& e) {
        r.status = PointStatus::KinematicsFailure;
        r.message = e.what();
        return r;
    } catch (const QuadratureError& e) {
        r.status = PointStatus::QuadratureFailure;
        r.message = e.what();
        return r;
    }
    r.convergence = samples.convergence;

    const int no_flip = spec.spin_in > 0 ? 0 : 1;
    std::array<WindingSpectrum, 2> spectra;
    double total_power = 0.0, outer_power = 0.0, on_rule = 0.0;
    const int edge = static_cast<int>(std::ceil(0.9 * (spec.n_phi / 2)));
    for (int k = 0; k < 2; ++k) {
        const auto& a = samples.amplitude[k];
        spectra[k] = azimuthal_decompose(a, false);
        const double power = spectra[k].total_power();
        double mean = 0.0;
        for (const auto& v : a) mean += std::norm(v);
        mean /= static_cast<double>(a.size());
        if (mean > 0.0) r.parseval_error = std::max(r.parseval_error, std::abs(power - mean) / mean);
        total_power += power;
        for (int m = spectra[k].min_winding(); m <= spectra[k].max_winding(); ++m)
            if (std::abs(m) >= edge) outer_power += spectra[k].power(m);
        const int spin_out = k == 0 ? +1 : -1;
        on_rule += power * selection_rule_fraction(spectra[k], spec.laser, spec.n_max, spec.spin_in, spin_out);
    }
    r.selection_fraction = total_power > 0.0 ? on_rule / total_power : 1.0;
    if (total_power > 0.0 && outer_power > 1e-8 * total_power) {
        r.status = PointStatus::AliasingFailure;
        r.message = "winding content reaches the band edge (fraction " + g17(outer_power / total_power) +
                    "); increase n_phi";
        return r;
    }

    const double pref = rate_prefactor(kin);
    std::map<int, cplx> state_in;
    const auto& nf = spectra[no_flip];
    for (int m = nf.min_winding(); m <= nf.max_winding(); ++m) state_in[m - spec.photon_helicity] = nf.at(m);
    std::optional<SuperpositionState> state;
    try {
        state = superposition_state(state_in, 0.0);
    } catch (const NoEmissionError&) {
    }

    for (int m = nf.min_winding(); m <= nf.max_winding(); ++m) {
        ModeRow row;
        row.ell = m - spec.photon_helicity;
        row.rate = pref * (spectra[0].power(m) + spectra[1].power(m));
        r.flip_rate += pref * spectra[1 - no_flip].power(m);
        if (state) row.phase = std::arg(state->coefficients.at(row.ell));
        r.total_rate += row.rate;
        r.modes.push_back(row);
    }
    for (auto& row : r.modes) row.weight = r.total_rate > 0.0 ? row.rate / r.total_rate : 0.0;
    return r;
}

void apply_emission_floor(SpectrumTable& table) {
    double peak = 0.0;
    for (const auto& p : table.points)
        if (!p.failed()) peak = std::max(peak, p.total_rate);
    for (auto& p : table.points) {
        if (p.failed()) continue;
        if (peak > 0.0 && p.total_rate > table.spec.emission_floor * peak) {
            p.status = PointStatus::Ok;
            continue;
        }
        p.status = PointStatus::BelowFloor;
        for (auto& m : p.modes) {
            m.weight = 0.0;
            m.phase = 0.0;
        }
    }
}

SpectrumTable run_spectrum_scan(const ScanSpec& spec, const ScanOptions& options) {
    spec.validate();
    const std::size_t total = spec.point_count();
    std::vector<std::optional<PointResult>> results(total);
    const std::string header = "#checkpoint=" + fingerprint(spec);

    std::ofstream log;
    if (options.checkpoint) {
        std::ifstream in(*options.checkpoint);
        if (in) {
            std::string line;
            if (std::getline(in, line) && line != header)
                throw std::runtime_error("checkpoint " + options.checkpoint->string() + " belongs to a different scan");
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                // a torn final line from an interrupted write is recomputed
                try {
                    PointResult p = deserialize_point(line);
                    if (p.index < total) results[p.index] = std::move(p);
                } catch (const std::exception&) {
                }
            }
        }
        const bool fresh = !in.is_open();
        in.close();
        log.open(*options.checkpoint, std::ios::app | std::ios::binary);
        if (!log) throw std::runtime_error("cannot write checkpoint " + options.checkpoint->string());
        if (fresh) log << header << "\n" << std::flush;
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < total; ++i)
        if (!results[i]) pending.push_back(i);
    std::size_t budget = pending.size();
    if (options.max_points > 0) budget = std::min(budget, options.max_points);

    const VolkovAmplitude amplitude{PulseField(spec.laser), spec.quadrature};
    std::atomic<std::size_t> next{0};
    std::mutex lock;
    std::size_t done = total - pending.size();
    std::exception_ptr error;

    auto work = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= budget) return;
            try {
                PointResult r = evaluate_point(amplitude, spec, pending[k]);
                std::lock_guard guard(lock);
                if (log.is_open()) log << serialize_point(r) << "\n" << std::flush;
                results[r.index] = std::move(r);
                ++done;
                if (options.progress) options.progress(done, total);
            } catch (...) {
                std::lock_guard guard(lock);
                if (!error) error = std::current_exception();
                next.store(budget);
                return;
            }
        }
    };

    const int workers = static_cast<int>(std::min<std::size_t>(spec.workers, std::max<std::size_t>(budget, 1)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (error) std::rethrow_exception(error);

    SpectrumTable table;
    table.spec = spec;
    table.points.reserve(total);
    for (auto& r : results) {
        if (!r) throw ScanInterrupted("scan stopped after " + std::to_string(done) + " of " + std::to_string(total) +
                                      " points");
        table.points.push_back(std::move(*r));
    }
    apply_emission_floor(table);
    return table;
}

std::string spectrum_file_name(int theta_index) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "spectrum_theta%02d.tsv", theta_index);
    return buf;
}

void write_spectrum_table(std::ostream& out, const SpectrumTable& table, int theta_index) {
    out << "#format=vncs-spectrum-1\n";
    for (const auto& [k, v] : table.spec.metadata()) out << '#' << k << '=' << v << '\n';
    out << "#theta_index=" << theta_index << '\n';
    out << "#theta_rad=" << g17(table.spec.thetas[theta_index]) << '\n';
    out << "#spin_treatment=initial_fixed_final_summed\n";
    out << "#phase_reference=no_flip_state\n";
    out << "#rate_units=1/eV/rad\n";
    const auto points = table.for_theta(theta_index);
    for (const auto* p : points)
        if (p->failed()) out << "#failure=" << g17(p->omega) << ": " << p->message << '\n';
    out << "omega_ev\ttheta_rad\tell\trate\tweight\tphase_rad\tstatus\n";
    for (const auto* p : points) {
        const std::string lead = g17(p->omega) + '\t' + g17(p->theta) + '\t';
        if (p->failed()) {
            out << lead << "NA\tnan\tnan\tnan\t" << to_string(p->status) << '\n';
            continue;
        }
        for (const auto& m : p->modes)
            out << lead << m.ell << '\t' << g17(m.rate) << '\t' << g17(m.weight) << '\t' << g17(m.phase) << '\t'
                << to_string(p->status) << '\n';
    }
}

std::vector<std::filesystem::path> write_spectrum_tables(const std::filesystem::path& directory,
                                                         const SpectrumTable& table) {
    std::filesystem::create_directories(directory);
    std::vector<std::filesystem::path> written;
    for (int t = 0; t < static_cast<int>(table.spec.thetas.size()); ++t) {
        const auto path = directory / spectrum_file_name(t);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        write_spectrum_table(out, table, t);
        written.push_back(path);
    }
    return written;
}

std::vector<PointResult> read_spectrum_table(std::istream& in) {
    std::vector<PointResult> points;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("omega_ev", 0) == 0) continue;
        }
        const auto cols = split_tabs(line);
        if (cols.size() != 7) throw std::runtime_error("malformed spectrum row: " + line);
        const double omega = parse_double(cols[0]);
        const double theta = parse_double(cols[1]);
        if (points.empty() || points.back().omega != omega || points.back().theta != theta) {
            PointResult p;
            p.index = points.size();
            p.omega = omega;
            p.theta = theta;
            p.status = parse_status(cols[6]);
            points.push_back(p);
        }
        PointResult& p = points.back();
        if (p.failed()) continue;
        ModeRow row;
        row.ell = std::stoi(cols[2]);
        row.rate = parse_double(cols[3]);
        row.weight = parse_double(cols[4]);
        row.phase = parse_double(cols[5]);
        p.total_rate += row.rate;
        p.modes.push_back(row);
    }
    return points;
}

std::string serialize_point(const PointResult& p) {
    std::string message = p.message;
    std::replace_if(message.begin(), message.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    std::string s = std::to_string(p.index) + '\t' + to_string(p.status) + '\t' + hexf(p.omega) + '\t' +
                    hexf(p.theta) + '\t' + hexf(p.total_rate) + '\t' + hexf(p.flip_rate) + '\t' +
                    hexf(p.parseval_error) + '\t' + hexf(p.selection_fraction) + '\t' + hexf(p.convergence) + '\t' +
                    std::to_string(p.modes.size());
    for (const auto& m : p.modes)
        s += '\t' + std::to_string(m.ell) + '\t' + hexf(m.rate) + '\t' + hexf(m.weight) + '\t' + hexf(m.phase);
    s += '\t' + message + "\t.";
    return s;
}

PointResult deserialize_point(const std::string& line) {
    const auto cols = split_tabs(line);
    if (cols.size() < 12 || cols.back() != ".") throw std::runtime_error("incomplete checkpoint line");
    PointResult p;
    p.index = std::stoull(cols[0]);
    p.status = parse_status(cols[1]);
    p.omega = parse_double(cols[2]);
    p.theta = parse_double(cols[3]);
    p.total_rate = parse_double(cols[4]);
    p.flip_rate = parse_double(cols[5]);
    p.parseval_error = parse_double(cols[6]);
    p.selection_fraction = parse_double(cols[7]);
    p.convergence = parse_double(cols[8]);
    const std::size_t n = std::stoull(cols[9]);
    if (cols.size() != 12 + 4 * n) throw std::runtime_error("checkpoint line has the wrong field count");
    for (std::size_t i = 0; i < n; ++i) {
        ModeRow m;
        m.ell = std::stoi(cols[10 + 4 * i]);
        m.rate = parse_double(cols[11 + 4 * i]);
        m.weight = parse_double(cols[12 + 4 * i]);
        m.phase = parse_double(cols[13 + 4 * i]);
        p.modes.push_back(m);
    }
    p.message = cols[10 + 4 * n];
    return p;
}

SpectralLine leading_line(const std::vector<double>& omega, const std::vector<double>& value, double relative_height) {
    SpectralLine line;
    const std::size_t n = std::min(omega.size(), value.size());
    if (n == 0) return line;
    const double top = *std::max_element(value.begin(), value.begin() + static_cast<std::ptrdiff_t>(n));
    if (!(top > 0.0)) return line;

    std::size_t at = n;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (value[i] >= value[i - 1] && value[i] > value[i + 1] && value[i] >= relative_height * top) {
            at = i;
            break;
        }
    }
    if (at == n) at = static_cast<std::size_t>(std::max_element(value.begin(), value.begin() + n) - value.begin());

    line.found = true;
    line.peak_omega = omega[at];
    line.peak_value = value[at];
    if (at > 0 && at + 1 < n) {
        const double x0 = omega[at - 1], x1 = omega[at], x2 = omega[at + 1];
        const double y0 = value[at - 1], y1 = value[at], y2 = value[at + 1];
        const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
        const double curv = (d12 - d01) / (x2 - x0);
        if (curv < 0.0) {
            const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
            if (xv > x0 && xv < x2) {
                line.peak_omega = xv;
                line.peak_value = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1);
            }
        }
    }
    const double half = 0.5 * line.peak_value;
    double left = omega[0];
    for (std::size_t i = at; i > 0; --i) {
        if (value[i - 1] <= half) {
            left = omega[i - 1] + (half - value[i - 1]) * (omega[i] - omega[i - 1]) / (value[i] - value[i - 1]);
            break;
        }
    }
    double right = omega[n - 1];
    for (std::size_t i = at; i + 1 < n; ++i) {
        if (value[i + 1] <= half) {
            right = omega[i] + (value[i] - half) * (omega[i + 1] - omega[i]) / (value[i] - value[i + 1]);
            break;
        }
    }
    line.fwhm = right - left;
    line.fractional_width = line.fwhm / line.peak_omega;
    return line;
}

std::pair<std::vector<double>, std::vector<double>> total_spectrum(const SpectrumTable& table, int theta_index) {
    std::vector<double> w, v;
    for (const auto* p : table.for_theta(theta_index)) {
        w.push_back(p->omega);
        v.push_back(p->failed() ? 0.0 : p->total_rate);
    }
    return {w, v};
}

std::vector<ChannelOverlap> channel_overlaps(const ScanSpec& spec, double theta, int n_pairs) {
    const ElectronState e = spec.electron();
    const double w1 = spec.laser.omega1_ev;
    std::vector<double> beta;
    for (int n = 1; n <= n_pairs + 1; ++n) {
        try {
            const Kinematics kin = make_kinematics(e, w1, photon_energy(n, theta, e, w1), theta);
            beta.push_back(ponderomotive_shift(kin, spec.laser));
        } catch (const KinematicsError&) {
            break;
        }
    }
    std::vector<ChannelOverlap> out;
    for (std::size_t i = 0; i + 1 < beta.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        const Interval lo = channel_support(n, beta[i]);
        const Interval hi = channel_support(n + 1, beta[i + 1]);
        const double overlap = std::max(0.0, std::min(lo.hi, hi.hi) - std::max(lo.lo, hi.lo));
        const double narrow = std::min(lo.width(), hi.width());
        out.push_back({n, beta[i], beta[i + 1], narrow > 0.0 ? overlap / narrow : 0.0});
    }
    return out;
}

BandMergeReport band_merge_report(const std::vector<SpectrumTable>& tables, int theta_index, double relative_height) {
    BandMergeReport report;
    if (tables.empty()) return report;
    report.theta = tables.front().spec.thetas.at(theta_index);
    for (const auto& t : tables) {
        IntensityEntry e;
        for (const auto& m : t.spec.laser.modes) e.a0.push_back(m.a0);
        e.sum_a0_squared = t.spec.laser.sum_a0_squared();
        const auto [w, v] = total_spectrum(t, theta_index);
        e.line = leading_line(w, v, relative_height);
        e.predicted_peak = dressed_harmonic_energy(1, report.theta, t.spec.electron(), t.spec.laser);
        e.overlaps = channel_overlaps(t.spec, report.theta, 4);
        report.entries.push_back(std::move(e));
    }
    const auto& en = report.entries;
    report.linewidth_increasing = en.size() > 1;
    report.redshift_decreasing = en.size() > 1;
    for (std::size_t i = 0; i + 1 < en.size(); ++i) {
        if (!(en[i + 1].line.fractional_width > en[i].line.fractional_width)) report.linewidth_increasing = false;
        if (!(en[i + 1].line.peak_omega < en[i].line.peak_omega)) report.redshift_decreasing = false;
    }
    auto ratio_error = [&](std::size_t a, std::size_t b) {
        const double measured = en[b].line.peak_omega / en[a].line.peak_omega;
        const double predicted = en[b].predicted_peak / en[a].predicted_peak;
        return measured / predicted - 1.0;
    };
    for (std::size_t i = 0; i + 1 < en.size(); ++i) report.redshift_ratio_errors.push_back(ratio_error(i, i + 1));
    if (en.size() > 2) report.redshift_ratio_errors.push_back(ratio_error(0, en.size() - 1));
    for (double r : report.redshift_ratio_errors)
        report.worst_redshift_ratio_error = std::max(report.worst_redshift_ratio_error, std::abs(r));
    return report;
}

void BandMergeReport::write(std::ostream& out) const {
    out << "[band_merge]\n";
    out << "theta_rad=" << g17(theta) << "\n";
    out << "intensity_count=" << entries.size() << "\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        out << "\n[intensity." << i << "]\n";
        out << "a0=" << join(e.a0) << "\n";
        out << "sum_a0_squared=" << g17(e.sum_a0_squared) << "\n";
        out << "leading_peak_found=" << (e.line.found ? "true" : "false") << "\n";
        out << "leading_peak_ev=" << g17(e.line.peak_omega) << "\n";
        out << "predicted_peak_ev=" << g17(e.predicted_peak) << "\n";
        out << "fwhm_ev=" << g17(e.line.fwhm) << "\n";
        out << "fractional_width=" << g17(e.line.fractional_width) << "\n";
        for (const auto& o : e.overlaps)
            out << "overlap." << o.lower << "_" << o.lower + 1 << "=" << g17(o.fraction) << "\n";
    }
    out << "\n[summary]\n";
    out << "linewidth_increasing=" << (linewidth_increasing ? "true" : "false") << "\n";
    out << "redshift_decreasing=" << (redshift_decreasing ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < redshift_ratio_errors.size(); ++i)
        out << "redshift_ratio_error." << i << "=" << g17(redshift_ratio_errors[i]) << "\n";
    out << "worst_redshift_ratio_error=" << g17(worst_redshift_ratio_error) << "\n";
}

IntensityScan run_intensity_scan(const ScanSpec& spec, const std::vector<std::vector<double>>& a0_ladder,
                                 const ScanOptions& options) {
    IntensityScan result;
    for (std::size_t k = 0; k < a0_ladder.size(); ++k) {
        if (a0_ladder[k].size() != spec.laser.modes.size())
            throw ConfigError("a0_ladder", "each entry needs one a0 per laser mode");
        ScanSpec s = spec;
        for (std::size_t j = 0; j < s.laser.modes.size(); ++j) s.laser.modes[j].a0 = a0_ladder[k][j];
        ScanOptions o = options;
        if (options.checkpoint) o.checkpoint = options.checkpoint->string() + "." + std::to_string(k);
        result.tables.push_back(run_spectrum_scan(s, o));
    }
    result.report = band_merge_report(result.tables);
    return result;
}

ApertureReport angular_aperture_report(const std::vector<SpectrumTable>& tables) {
    ApertureReport report;
    for (const auto& t : tables) {
        const int n = static_cast<int>(t.spec.thetas.size());
        if (n < 3) throw std::invalid_argument("angular aperture needs at least three theta values");
        std::vector<double> theta(n), weight(n), moment(n);
        for (int i = 0; i < n; ++i) {
            const auto [w, v] = total_spectrum(t, i);
            theta[i] = t.spec.thetas[i];
            weight[i] = trapezoid(w, v);
            moment[i] = theta[i] * weight[i];
        }
        ApertureEntry e;
        for (const auto& m : t.spec.laser.modes) e.a0.push_back(m.a0);
        const double norm = trapezoid(theta, weight);
        e.mean_theta = norm > 0.0 ? trapezoid(theta, moment) / norm : 0.0;
        const double a_eff = std::sqrt(t.spec.laser.sum_a0_squared());
        const double gamma = t.spec.electron().lorentz_factor();
        e.scale = (a_eff > 0.0 ? a_eff : 1.0) / gamma;
        e.ratio = e.mean_theta / e.scale;
        e.order_unity = e.ratio >= 0.3 && e.ratio <= 3.0;
        report.entries.push_back(std::move(e));
    }
    report.widening = report.entries.size() > 1;
    for (std::size_t i = 0; i + 1 < report.entries.size(); ++i)
        if (!(report.entries[i + 1].mean_theta > report.entries[i].mean_theta)) report.widening = false;
    return report;
}

void ApertureReport::write(std::ostream& out) const {
    out << "[aperture]\n";
    out << "entries=" << entries.size() << "\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        out << "\n[aperture." << i << "]\n";
        out << "a0=" << join(e.a0) << "\n";
        out << "mean_theta_rad=" << g17(e.mean_theta) << "\n";
        out << "scale_rad=" << g17(e.scale) << "\n";
        out << "ratio=" << g17(e.ratio) << "\n";
        out << "order_unity=" << (e.order_unity ? "true" : "false") << "\n";
    }
    out << "\n[summary]\n";
    out << "widening=" << (widening ? "true" : "false") << "\n";
}

}  // namespace vncs
