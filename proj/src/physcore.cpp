#include "vncs/physcore.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "vncs/errors.hpp"

namespace vncs {

ElectronState ElectronState::head_on(double energy_ev, int spin) {
    if (!(energy_ev > kElectronMass)) throw std::invalid_argument("electron energy must exceed the rest mass");
    if (spin != 1 && spin != -1) throw std::invalid_argument("electron spin must be ±1");
    const double pz = std::sqrt((energy_ev - kElectronMass) * (energy_ev + kElectronMass));
    return {{energy_ev, 0.0, 0.0, pz}, spin};
}

void LaserConfig::validate() const {
    if (!(omega1_ev > 0.0)) throw std::invalid_argument("omega1 must be positive");
    if (n_cycle < 1) throw std::invalid_argument("n_cycle must be a positive integer");
    if (modes.empty()) throw std::invalid_argument("laser needs at least one mode");
    if (modes.front().harmonic != 1) throw std::invalid_argument("first laser mode must be the fundamental (nu = 1)");
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const auto& m = modes[j];
        if (m.helicity != 1 && m.helicity != -1) throw std::invalid_argument("helicity must be ±1");
        if (!(m.a0 >= 0.0) || !std::isfinite(m.a0)) throw std::invalid_argument("a0 must be finite and nonnegative");
        if (j > 0 && m.harmonic <= modes[j - 1].harmonic)
            throw std::invalid_argument("harmonic ratios must be strictly increasing integers");
    }
}

int LaserConfig::max_harmonic() const {
    int nu = 1;
    for (const auto& m : modes) nu = std::max(nu, m.harmonic);
    return nu;
}

double LaserConfig::sum_a0_squared() const {
    double sum = 0.0;
    for (const auto& m : modes) sum += m.a0 * m.a0;
    return sum;
}

FourVector photon_momentum(double omega, double theta, double phi) {
    const double st = std::sin(theta);
    return {omega, omega * st * std::cos(phi), omega * st * std::sin(phi), omega * std::cos(theta)};
}

namespace {

// eps - pz cos(theta), free of the cancellation at theta ~ 1/gamma.
double forward_lightcone(double energy, double pz, double theta) {
    const double sh = std::sin(0.5 * theta);
    return kElectronMass * kElectronMass / (energy + pz) + 2.0 * pz * sh * sh;
}

}  // namespace

double lightfront_s(double omega, double theta, const ElectronState& electron, double omega1) {
    const double e = electron.energy();
    const double pz = electron.momentum.z;
    const double kp = omega1 * (e + pz);
    const double kk = omega1 * omega * (1.0 + std::cos(theta));
    const double denom = kp - kk;
    if (!(denom > 0.0) || !(omega < kinematic_edge(theta, electron, omega1)))
        throw KinematicsError("beyond kinematic edge: omega' = " + std::to_string(omega) + " eV");
    return omega * forward_lightcone(e, pz, theta) / denom;
}

double photon_energy(double s, double theta, const ElectronState& electron, double omega1) {
    const double e = electron.energy();
    const double pz = electron.momentum.z;
    const double kp = omega1 * (e + pz);
    return s * kp / (forward_lightcone(e, pz, theta) + s * omega1 * (1.0 + std::cos(theta)));
}

double kinematic_edge(double theta, const ElectronState& electron, double omega1) {
    const double e = electron.energy();
    const double kp = omega1 * (e + electron.momentum.z);
    return std::min(e - kElectronMass, kp / (omega1 * (1.0 + std::cos(theta))));
}

FourVector Kinematics::scattered(double phi) const {
    const FourVector k1 = laser_wavevector(omega1);
    return electron() + k1 * s - photon(phi);
}

Kinematics make_kinematics(const ElectronState& electron, double omega1, double omega, double theta) {
    if (!(theta > 0.0 && theta < 0.5 * kPi)) throw std::invalid_argument("cone angle must lie in (0, pi/2)");
    if (!(omega > 0.0)) throw std::invalid_argument("photon energy must be positive");
    Kinematics k;
    k.omega = omega;
    k.theta = theta;
    k.omega1 = omega1;
    k.energy = electron.energy();
    k.pz = electron.momentum.z;
    k.s = lightfront_s(omega, theta, electron, omega1);
    k.kp = omega1 * (k.energy + k.pz);
    k.kpp = k.kp - omega1 * omega * (1.0 + std::cos(theta));
    k.kperp = omega * std::sin(theta);
    return k;
}

double effective_mass(const LaserConfig& config) {
    return kElectronMass * std::sqrt(1.0 + config.sum_a0_squared());
}

double gamma_star(const ElectronState& electron, const LaserConfig& config) {
    return electron.energy() / effective_mass(config);
}

double ponderomotive_shift(const FourVector& p, const FourVector& p_prime, const LaserConfig& config) {
    const FourVector k1 = laser_wavevector(config.omega1_ev);
    const double m2 = kElectronMass * kElectronMass;
    const double per_unit = 0.5 / dot(k1, p) - 0.5 / dot(k1, p_prime);
    return per_unit * m2 * config.sum_a0_squared();
}

double ponderomotive_shift(const Kinematics& kin, const LaserConfig& config) {
    const double m2 = kElectronMass * kElectronMass;
    return (0.5 / kin.kp - 0.5 / kin.kpp) * m2 * config.sum_a0_squared();
}

Interval channel_support(int harmonic_index, double beta) {
    if (beta > 0.0) throw std::invalid_argument("ponderomotive shift must be nonpositive");
    return {harmonic_index + beta, static_cast<double>(harmonic_index)};
}

}  // namespace vncs
