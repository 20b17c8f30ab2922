#pragma once

// Kinematics of a head-on electron / multifrequency laser collision.
// Natural units (hbar = c = 1), energies and momenta in eV, metric (+,-,-,-).

#include <cmath>
#include <numbers>
#include <vector>

namespace vncs {

inline constexpr double kElectronMass = 510998.95;  // eV
inline constexpr double kFineStructure = 1.0 / 137.035999084;
inline constexpr double kPi = std::numbers::pi;

struct FourVector {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr FourVector operator+(const FourVector& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    constexpr FourVector operator-(const FourVector& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    constexpr FourVector operator*(double f) const { return {t * f, x * f, y * f, z * f}; }
};

constexpr double dot(const FourVector& a, const FourVector& b) {
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

// Electron moving along +z with helicity label spin = +/-1 (twice the helicity).
struct ElectronState {
    FourVector momentum;
    int spin = +1;

    static ElectronState head_on(double energy_ev, int spin = +1);
    double energy() const { return momentum.t; }
    double lorentz_factor() const { return momentum.t / kElectronMass; }
};

struct LaserMode {
    int harmonic = 1;    // nu_j = omega_j / omega_1
    double a0 = 0.0;     // normalized amplitude
    int helicity = +1;   // Lambda_j
    double cep = 0.0;    // carrier-envelope phase, rad

    bool operator==(const LaserMode&) const = default;
};

struct LaserConfig {
    double omega1_ev = 1.55;
    std::vector<LaserMode> modes;
    int n_cycle = 10;

    // Throws std::invalid_argument on a broken invariant.
    void validate() const;
    int max_harmonic() const;
    double sum_a0_squared() const;

    bool operator==(const LaserConfig&) const = default;
};

struct PhotonMode {
    double energy = 0.0;  // eV
    double theta = 0.0;   // cone angle, rad
    int helicity = -1;

    double k_perp() const { return energy * std::sin(theta); }
    double k_z() const { return energy * std::cos(theta); }
};

// k_1 = omega_1 (1, 0, 0, -1).
constexpr FourVector laser_wavevector(double omega1) { return {omega1, 0.0, 0.0, -omega1}; }

FourVector photon_momentum(double omega, double theta, double phi);

// Light-front fraction s of the fundamental absorbed when emitting (omega, theta):
// s = (k'.p) / (k1.p - k1.k'). Throws KinematicsError beyond the kinematic edge.
double lightfront_s(double omega, double theta, const ElectronState& electron, double omega1);

// Inverse of lightfront_s at fixed theta.
double photon_energy(double s, double theta, const ElectronState& electron, double omega1);

// Largest photon energy admissible at angle theta (k1.p' -> 0 or the electron energy).
double kinematic_edge(double theta, const ElectronState& electron, double omega1);

// All scalar kinematics of one emission point. p' depends on the photon
// azimuth only through its transverse direction.
struct Kinematics {
    double omega = 0.0;
    double theta = 0.0;
    double s = 0.0;
    double omega1 = 0.0;
    double energy = 0.0;     // incoming electron energy
    double pz = 0.0;         // incoming electron momentum
    double kp = 0.0;         // k1.p
    double kpp = 0.0;        // k1.p'
    double kperp = 0.0;      // photon transverse momentum

    FourVector electron() const { return {energy, 0.0, 0.0, pz}; }
    FourVector photon(double phi) const { return photon_momentum(omega, theta, phi); }
    FourVector scattered(double phi) const;
};

Kinematics make_kinematics(const ElectronState& electron, double omega1, double omega, double theta);

double effective_mass(const LaserConfig& config);
double gamma_star(const ElectronState& electron, const LaserConfig& config);

// beta = sum_j (1/(2 k1.p) - 1/(2 k1.p')) m^2 a0_j^2
double ponderomotive_shift(const FourVector& p, const FourVector& p_prime, const LaserConfig& config);
double ponderomotive_shift(const Kinematics& kin, const LaserConfig& config);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

// Approximate s-support [N + beta, N] of a channel with harmonic index N. Requires beta <= 0.
Interval channel_support(int harmonic_index, double beta);

}  // namespace vncs
