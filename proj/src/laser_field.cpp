#include "vncs/laser_field.hpp"

#include <cmath>
#include <stdexcept>

namespace vncs {

namespace {

// Multiply sum of terms by g(phi) = 1/2 + cos(phi/N)/2 or g^2 = 3/8 + cos(u)/2 + cos(2u)/8.
void push_enveloped(std::vector<TrigTerm>& out, int units, double amp, double phase, bool squared) {
    if (!squared) {
        out.push_back({units, amp * 0.5, phase});
        out.push_back({units + 1, amp * 0.25, phase});
        out.push_back({units - 1, amp * 0.25, phase});
        return;
    }
    out.push_back({units, amp * 0.375, phase});
    out.push_back({units + 1, amp * 0.25, phase});
    out.push_back({units - 1, amp * 0.25, phase});
    out.push_back({units + 2, amp * 0.0625, phase});
    out.push_back({units - 2, amp * 0.0625, phase});
}

}  // namespace

PulseField::PulseField(LaserConfig config) : config_(std::move(config)) {
    config_.validate();
    const int n = config_.n_cycle;
    half_width_ = kPi * n;
    for (const auto& m : config_.modes) {
        push_enveloped(terms_x_, m.harmonic * n, m.a0, m.cep, false);
        push_enveloped(terms_y_, m.harmonic * n, m.helicity * m.a0, m.cep - 0.5 * kPi, false);
    }
    for (const auto& mj : config_.modes) {
        for (const auto& mk : config_.modes) {
            const int hh = mj.helicity * mk.helicity;
            const int units = (mj.harmonic - hh * mk.harmonic) * n;
            push_enveloped(terms_a2_, units, mj.a0 * mk.a0, mj.cep - hh * mk.cep, true);
        }
    }
}

double PulseField::envelope(double phi) const {
    if (std::abs(phi) >= half_width_) return 0.0;
    const double c = std::cos(phi / (2.0 * config_.n_cycle));
    return c * c;
}

Vec2 PulseField::vector_potential(double phi) const {
    const double g = envelope(phi);
    if (g == 0.0) return {};
    Vec2 a;
    for (const auto& m : config_.modes) {
        const double arg = m.harmonic * phi + m.cep;
        a.x += m.a0 * g * std::cos(arg);
        a.y += m.helicity * m.a0 * g * std::sin(arg);
    }
    return a;
}

double PulseField::a_squared(double phi) const {
    const Vec2 a = vector_potential(phi);
    return a.x * a.x + a.y * a.y;
}

double PulseField::antiderivative(const std::vector<TrigTerm>& terms, double phi) const {
    if (phi <= -half_width_) return 0.0;
    if (phi > half_width_) phi = half_width_;
    const double lo = -half_width_;
    const double n = config_.n_cycle;
    double sum = 0.0;
    for (const auto& t : terms) {
        if (t.freq_units == 0) {
            sum += t.amplitude * std::cos(t.phase) * (phi - lo);
        } else {
            const double w = t.freq_units / n;
            sum += t.amplitude * (std::sin(w * phi + t.phase) - std::sin(w * lo + t.phase)) / w;
        }
    }
    return sum;
}

double PulseField::central_cycle_average_a2(int points) const {
    if (points < 2 || points % 2) throw std::invalid_argument("Simpson needs an even interval count");
    const double h = 2.0 * kPi / points;
    double sum = 0.0;
    for (int i = 0; i <= points; ++i) {
        const double phi = -kPi + h * i;
        const double g = envelope(phi);
        const double w = (i == 0 || i == points) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * a_squared(phi) / (g * g);
    }
    return sum * h / 3.0 / (2.0 * kPi);
}

PhaseIntegrals::PhaseIntegrals(const PulseField& field, int intervals) : intervals_(intervals) {
    if (intervals < 2 || intervals % 2) throw std::invalid_argument("phase grid needs an even interval count");
    origin_ = field.lower_edge();
    step_ = 2.0 * field.half_width() / intervals;
    const std::size_t n = intervals + 1;
    const auto& modes = field.config().modes;
    ax.resize(n);
    ay.resize(n);
    a2.resize(n);
    int_ax.resize(n);
    int_ay.resize(n);
    int_a2.resize(n);
    carrier.assign(modes.size(), std::vector<std::complex<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double p = phi(static_cast<int>(i));
        const Vec2 a = field.vector_potential(p);
        ax[i] = a.x;
        ay[i] = a.y;
        a2[i] = a.x * a.x + a.y * a.y;
        int_ax[i] = field.integral_ax(p);
        int_ay[i] = field.integral_ay(p);
        int_a2[i] = field.integral_a2(p);
        const double g = field.envelope(p);
        for (std::size_t j = 0; j < modes.size(); ++j)
            carrier[j][i] = std::polar(g, modes[j].harmonic * p + modes[j].cep);
    }
}

PhaseCoefficients phase_coefficients(const Kinematics& kin, double phi_k) {
    PhaseCoefficients c;
    c.s = kin.s;
    const double lin = kElectronMass * kin.kperp / kin.kpp;
    c.cx = lin * std::cos(phi_k);
    c.cy = lin * std::sin(phi_k);
    c.c2 = 0.5 * kElectronMass * kElectronMass * (1.0 / kin.kpp - 1.0 / kin.kp);
    return c;
}

double volkov_phase(const PulseField& field, const Kinematics& kin, double phi_k, double phi) {
    const PhaseCoefficients c = phase_coefficients(kin, phi_k);
    return c.s * phi + c.cx * field.integral_ax(phi) + c.cy * field.integral_ay(phi) +
           c.c2 * field.integral_a2(phi);
}

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 3 || (n - 1) % 2) throw std::invalid_argument("cumulative Simpson needs an even interval count");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 2; i < n; i += 2) {
        out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        out[i - 1] = out[i - 2] + h / 12.0 * (5.0 * f[i - 2] + 8.0 * f[i - 1] - f[i]);
    }
    return out;
}

}  // namespace vncs
