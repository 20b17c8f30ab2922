#pragma once

// Plane-wave nonlinear Compton amplitude in a pulsed multifrequency field,
// obtained by direct quadrature over the laser phase:
//
//   M = C0 B0 + Cx Bx + Cy By + C2 B2,
//   B_h = int dphi h(phi) exp(i Phi(phi)),  h in {1, a_x, a_y, |a|^2},
//
// with the spinor coefficients
//   C0 = ubar' eps*-slash u
//   Cx = ubar' [ m/(2 k.p') xs k eps* + m/(2 k.p) eps* k xs ] u      (xs = unit x-slash)
//   C2 = m^2 (k.eps*) / (2 k.p k.p') ubar' k-slash u.
// B0 is defined through exp(i Phi)' = i Phi' exp(i Phi):  B0 = -(cx Bx + cy By + c2 B2) / s.

#include <array>
#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "vncs/laser_field.hpp"
#include "vncs/physcore.hpp"

namespace vncs {

using cplx = std::complex<double>;

struct QuadratureSettings {
    int points_per_cycle = 256;  // per fundamental cycle and per unit of the largest harmonic
    double tolerance = 1e-6;     // relative change allowed on grid doubling
    int max_refinements = 3;

    bool operator==(const QuadratureSettings&) const = default;
};

struct SpinLabels {
    int spin_in = +1;
    int spin_out = +1;
    int photon_helicity = -1;
};

struct ReducedIntegrals {
    cplx b0, bx, by, b2;
    std::vector<std::array<cplx, 2>> carrier;  // per mode: {+, -} carrier sign
    double convergence = 0.0;                  // relative change on the last grid doubling
    int intervals = 0;
};

struct SpinorCoefficients {
    cplx c0, cx, cy, c2;
};

struct AmplitudeSample {
    cplx value;
    double omega = 0.0;
    double theta = 0.0;
    double phi_k = 0.0;
    SpinLabels spins;
};

// Amplitudes on a uniform azimuth grid phi_k = 2 pi i / n for both final spins.
struct AzimuthalSamples {
    std::vector<double> phi;
    std::array<std::vector<cplx>, 2> amplitude;  // [0]: spin_out = +1, [1]: spin_out = -1
    double convergence = 0.0;

    const std::vector<cplx>& for_spin(int spin_out) const { return amplitude[spin_out > 0 ? 0 : 1]; }
};

class VolkovAmplitude {
public:
    explicit VolkovAmplitude(PulseField field, QuadratureSettings settings = {});

    const PulseField& field() const { return field_; }
    const QuadratureSettings& settings() const { return settings_; }

    ReducedIntegrals reduced_integrals(const Kinematics& kin, double phi_k) const;

    // Unit-integrand moment through a smooth adiabatic switch of `ramp_cycles`
    // fundamental cycles on both sides of the pulse (independent of the
    // integration-by-parts identity).
    cplx windowed_b0(const Kinematics& kin, double phi_k, double ramp_cycles) const;

    SpinorCoefficients spinor_coefficients(const Kinematics& kin, double phi_k, const SpinLabels& spins,
                                           cplx gauge_shift = 0.0) const;

    AmplitudeSample plane_wave_amplitude(const Kinematics& kin, double phi_k, const SpinLabels& spins) const;

    AzimuthalSamples azimuthal_samples(const Kinematics& kin, int n_phi, int spin_in, int photon_helicity) const;

    static cplx combine(const SpinorCoefficients& c, const ReducedIntegrals& b) {
        return c.c0 * b.b0 + c.cx * b.bx + c.cy * b.by + c.c2 * b.b2;
    }

private:
    const PhaseIntegrals& grid(int level) const;
    ReducedIntegrals integrate(const PhaseIntegrals& g, const PhaseCoefficients& pc, double& change) const;

    PulseField field_;
    QuadratureSettings settings_;
    int base_intervals_ = 0;
    mutable std::vector<std::unique_ptr<PhaseIntegrals>> grids_;
    mutable std::vector<std::once_flag> grid_flags_;
};

}  // namespace vncs
