#include <doctest.h>

#include <cmath>

#include "vncs/channel_planner.hpp"
#include "vncs/errors.hpp"
#include "vncs/volkov_amplitude.hpp"
#include "vncs/vortex_projection.hpp"

using namespace vncs;

namespace {

const ElectronState kGeV = ElectronState::head_on(1e9);
constexpr double kTheta = 2e-3;

LaserConfig modes(std::vector<LaserMode> m, int n_cycle = 10) {
    LaserConfig c;
    c.modes = std::move(m);
    c.n_cycle = n_cycle;
    return c;
}

Kinematics at_s(double s, double theta = kTheta) {
    return make_kinematics(kGeV, 1.55, photon_energy(s, theta, kGeV, 1.55), theta);
}

// s of the strongest no-flip emission in [lo, hi].
double peak_s(const VolkovAmplitude& amp, double lo, double hi) {
    double best = -1.0, where = lo;
    for (double s = lo; s <= hi; s += 0.002) {
        const double v = std::norm(amp.plane_wave_amplitude(at_s(s), 0.0, {+1, +1, -1}).value);
        if (v > best) best = v, where = s;
    }
    return where;
}

}  // namespace

TEST_CASE("no field, no emission") {
    const VolkovAmplitude amp{PulseField(modes({{1, 0.0, +1, 0.0}}))};
    const Kinematics kin = at_s(1.0);
    const ReducedIntegrals r = amp.reduced_integrals(kin, 0.4);
    CHECK(std::abs(r.bx) == 0.0);
    CHECK(std::abs(r.by) == 0.0);
    CHECK(std::abs(r.b2) == 0.0);
    for (int lam : {+1, -1})
        CHECK(std::abs(amp.plane_wave_amplitude(kin, 0.4, {+1, lam, -1}).value) == 0.0);
}

TEST_CASE("reduced integrals converge under grid doubling") {
    const VolkovAmplitude amp{PulseField(modes({{1, 1.3, +1, 0.0}, {2, 1.0, +1, 0.0}}))};
    for (double s : {0.4, 1.9, 3.2}) {
        const ReducedIntegrals r = amp.reduced_integrals(at_s(s), 1.1);
        CHECK(r.convergence < 1e-6);
        CHECK(std::isfinite(std::abs(r.b0)));
    }
}

TEST_CASE("an unreachable tolerance is reported as a quadrature failure") {
    QuadratureSettings q;
    q.points_per_cycle = 16;
    q.tolerance = 1e-15;
    q.max_refinements = 0;
    const VolkovAmplitude amp{PulseField(modes({{1, 2.0, +1, 0.0}})), q};
    CHECK_THROWS_AS(amp.reduced_integrals(at_s(1.5), 0.0), QuadratureError);
}

TEST_CASE("carrier moments peak near the harmonics") {
    const LaserConfig cfg = modes({{1, 0.5, +1, 0.0}});
    const VolkovAmplitude amp{PulseField(cfg)};
    std::vector<double> s_grid, value;
    for (double s = 0.3; s <= 3.6; s += 0.004) {
        const ReducedIntegrals r = amp.reduced_integrals(at_s(s), 0.0);
        s_grid.push_back(s);
        value.push_back(std::norm(r.carrier[0][0]) + std::norm(r.carrier[0][1]));
    }
    const double top = *std::max_element(value.begin(), value.end());
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < value.size(); ++i)
        if (value[i] > value[i - 1] && value[i] >= value[i + 1] && value[i] > 1e-3 * top) peaks.push_back(s_grid[i]);
    REQUIRE(peaks.size() >= 3);
    for (int n = 1; n <= 3; ++n) {
        const double beta = ponderomotive_shift(at_s(n), cfg);
        bool found = false;
        for (double p : peaks) found |= p >= n + beta - 0.05 && p <= n + 0.02;
        CHECK_MESSAGE(found, "harmonic " << n);
    }
    for (std::size_t i = 1; i + 1 < value.size(); ++i) {
        if (value[i] > value[i - 1] && value[i] >= value[i + 1] && value[i] > 0.05 * top) {
            const double n = std::round(s_grid[i]);
            CHECK(std::abs(s_grid[i] - n) < 0.1 * n);
        }
    }
}

TEST_CASE("gauge invariance") {
    const VolkovAmplitude amp{PulseField(modes({{1, 1.3, +1, 0.0}, {2, 1.0, +1, 0.0}}))};
    for (double s : {0.9, 1.85, 2.6}) {
        const Kinematics kin = at_s(s);
        for (int lam : {+1, -1}) {
            for (int lp : {+1, -1}) {
                const SpinLabels spins{+1, lam, lp};
                const ReducedIntegrals r = amp.reduced_integrals(kin, 0.7);
                const cplx base = VolkovAmplitude::combine(amp.spinor_coefficients(kin, 0.7, spins), r);
                if (std::abs(base) < 1e-6 * std::sqrt(kin.energy)) continue;
                for (cplx zeta : {cplx(1.0, 0.0), cplx(-0.4, 0.9), cplx(0.0, -1.0)}) {
                    const cplx shifted = VolkovAmplitude::combine(
                        amp.spinor_coefficients(kin, 0.7, spins, zeta / kin.omega), r);
                    CHECK(std::abs(shifted - base) / std::abs(base) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("integration by parts and adiabatic switching give the same probability") {
    for (const auto& cfg : {modes({{1, 1.3, +1, 0.0}}), modes({{1, 1.3, +1, 0.0}, {2, 1.0, +1, 0.0}})}) {
        const VolkovAmplitude amp{PulseField(cfg)};
        for (double s : {0.93, 1.85, 2.77}) {
            const Kinematics kin = at_s(s);
            const SpinLabels spins{+1, +1, -1};
            ReducedIntegrals r = amp.reduced_integrals(kin, 0.3);
            const SpinorCoefficients c = amp.spinor_coefficients(kin, 0.3, spins);
            const double p_ibp = std::norm(VolkovAmplitude::combine(c, r));
            r.b0 = amp.windowed_b0(kin, 0.3, 10.0);
            const double p_window = std::norm(VolkovAmplitude::combine(c, r));
            CHECK(std::abs(p_window - p_ibp) / p_ibp < 1e-3);
        }
    }
}

TEST_CASE("single-colour windings follow the selection rule") {
    for (int h1 : {+1, -1}) {
        const LaserConfig cfg = modes({{1, 1.3, h1, 0.0}});
        const VolkovAmplitude amp{PulseField(cfg)};
        for (int n = 1; n <= 3; ++n) {
            const double s = peak_s(amp, 0.75 * n, 1.0 * n);
            for (int lp : {+1, -1}) {
                const AzimuthalSamples smp = amp.azimuthal_samples(at_s(s), 64, +1, lp);
                for (int spin_out : {+1, -1}) {
                    const WindingSpectrum w = azimuthal_decompose(smp.for_spin(spin_out), false);
                    if (w.total_power() == 0.0) continue;
                    const ModePrediction pred = tam_of_channel({{n}}, cfg, +1, spin_out, lp);
                    CHECK(w.dominant() == pred.tam);
                    CHECK(w.power(pred.tam) / w.total_power() > 0.999);
                }
            }
        }
    }
}

TEST_CASE("azimuthal covariance") {
    const VolkovAmplitude amp{PulseField(modes({{1, 1.3, +1, 0.0}, {2, 1.0, +1, 0.0}}))};
    const Kinematics kin = at_s(1.85);
    const int n = 64;
    const double alpha = 0.37;
    std::vector<cplx> base(n), rotated(n);
    for (int i = 0; i < n; ++i) {
        const double phi = 2 * kPi * i / n;
        base[i] = amp.plane_wave_amplitude(kin, phi, {+1, +1, -1}).value;
        rotated[i] = amp.plane_wave_amplitude(kin, phi + alpha, {+1, +1, -1}).value;
    }
    const WindingSpectrum a = azimuthal_decompose(base), b = azimuthal_decompose(rotated);
    const double scale = std::sqrt(a.total_power());
    for (int m = a.min_winding(); m <= a.max_winding(); ++m)
        CHECK(std::abs(b.at(m) - a.at(m) * std::polar(1.0, m * alpha)) < 1e-8 * scale);
}

TEST_CASE("flipping every helicity mirrors the amplitude") {
    const LaserConfig cfg = modes({{1, 1.3, +1, 0.0}, {2, 1.0, +1, 0.0}});
    LaserConfig mirror = cfg;
    for (auto& m : mirror.modes) m.helicity = -m.helicity;
    const VolkovAmplitude a{PulseField(cfg)}, b{PulseField(mirror)};
    for (double s : {0.9, 1.85}) {
        const Kinematics kin = at_s(s);
        for (double phi : {0.0, 0.8, 2.5}) {
            for (int lam : {+1, -1}) {
                const cplx x = a.plane_wave_amplitude(kin, phi, {+1, lam, -1}).value;
                const cplx y = b.plane_wave_amplitude(kin, -phi, {-1, -lam, +1}).value;
                CHECK(std::abs(y) == doctest::Approx(std::abs(x)).epsilon(1e-8).scale(0.0));
            }
        }
    }
}

TEST_CASE("spin flip is subdominant at the main peaks") {
    const VolkovAmplitude amp{PulseField(modes({{1, 1.3, +1, 0.0}, {2, 1.0, +1, 0.0}}))};
    for (double s : {0.93, 1.85}) {
        for (int lp : {+1, -1}) {
            const AzimuthalSamples smp = amp.azimuthal_samples(at_s(s), 32, +1, lp);
            double keep = 0.0, flip = 0.0;
            for (int i = 0; i < 32; ++i) keep += std::norm(smp.for_spin(+1)[i]), flip += std::norm(smp.for_spin(-1)[i]);
            CHECK(flip < 1e-3 * keep);
        }
    }
}

TEST_CASE("finite-pulse azimuthal asymmetry of a single circular mode vanishes for long pulses") {
    auto variation = [](int n_cycle) {
        const VolkovAmplitude amp{PulseField(modes({{1, 1.3, +1, 0.0}}, n_cycle))};
        const double s = peak_s(amp, 0.75, 1.0);
        const AzimuthalSamples smp = amp.azimuthal_samples(at_s(s), 32, +1, -1);
        double lo = 1e300, hi = 0.0;
        for (const cplx& z : smp.for_spin(+1)) lo = std::min(lo, std::abs(z)), hi = std::max(hi, std::abs(z));
        return (hi - lo) / hi;
    };
    const double short_pulse = variation(10), long_pulse = variation(40);
    CHECK(short_pulse < 1e-4);
    CHECK(long_pulse < 1e-6);
    CHECK(long_pulse < 0.05 * short_pulse);
}
