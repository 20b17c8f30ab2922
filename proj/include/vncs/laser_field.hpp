#pragma once

// Multifrequency circularly polarized pulse
//   a(phi) = sum_j a0_j g(phi) (cos(nu_j phi + cep_j), Lambda_j sin(nu_j phi + cep_j)),
//   g(phi) = cos^2(phi / (2 n_cycle)),   |phi| <= pi n_cycle,
// with phi the phase of the fundamental. Every mode shares the same support,
// so all field quantities are finite trigonometric sums with exact antiderivatives.

#include <complex>
#include <vector>

#include "vncs/physcore.hpp"

namespace vncs {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// amplitude * cos(freq_units / n_cycle * phi + phase)
struct TrigTerm {
    int freq_units = 0;
    double amplitude = 0.0;
    double phase = 0.0;
};

class PulseField {
public:
    explicit PulseField(LaserConfig config);

    const LaserConfig& config() const { return config_; }
    double half_width() const { return half_width_; }
    double lower_edge() const { return -half_width_; }

    double envelope(double phi) const;
    Vec2 vector_potential(double phi) const;
    double a_squared(double phi) const;

    // Integrals from the pulse start to phi (constant beyond the trailing edge).
    double integral_ax(double phi) const { return antiderivative(terms_x_, phi); }
    double integral_ay(double phi) const { return antiderivative(terms_y_, phi); }
    double integral_a2(double phi) const { return antiderivative(terms_a2_, phi); }

    const std::vector<TrigTerm>& terms_a2() const { return terms_a2_; }

    // (1/2pi) int_{-pi}^{pi} |a|^2 / g^2: the cycle average of |a|^2 with the
    // envelope frozen at its central value. Composite Simpson with `points` intervals.
    double central_cycle_average_a2(int points = 4096) const;

private:
    double antiderivative(const std::vector<TrigTerm>& terms, double phi) const;

    LaserConfig config_;
    double half_width_ = 0.0;
    std::vector<TrigTerm> terms_x_;
    std::vector<TrigTerm> terms_y_;
    std::vector<TrigTerm> terms_a2_;
};

// Field samples and cumulative integrals on a uniform grid over the pulse support.
class PhaseIntegrals {
public:
    PhaseIntegrals(const PulseField& field, int intervals);

    int intervals() const { return intervals_; }
    double step() const { return step_; }
    double origin() const { return origin_; }
    double phi(int i) const { return origin_ + step_ * i; }

    std::vector<double> ax, ay, a2;
    std::vector<double> int_ax, int_ay, int_a2;
    // g(phi) exp(+i (nu_j phi + cep_j)) per mode.
    std::vector<std::vector<std::complex<double>>> carrier;

private:
    int intervals_ = 0;
    double step_ = 0.0;
    double origin_ = 0.0;
};

// Coefficients of the Volkov exponent
//   Phi(phi) = s phi + cx int a_x + cy int a_y + c2 int |a|^2,
// cx, cy = m k'_perp (cos, sin) phi_k / (k1.p'),  c2 = (m^2/2)(1/(k1.p') - 1/(k1.p)).
struct PhaseCoefficients {
    double s = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double c2 = 0.0;
};

PhaseCoefficients phase_coefficients(const Kinematics& kin, double phi_k);

double volkov_phase(const PulseField& field, const Kinematics& kin, double phi_k, double phi);

// Composite Simpson cumulative integral of uniformly sampled data (even interval count);
// odd nodes use the third-order half-panel rule.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h);

}  // namespace vncs
