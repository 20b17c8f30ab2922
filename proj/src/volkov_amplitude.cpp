#include "vncs/volkov_amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vncs/dirac.hpp"
#include "vncs/errors.hpp"

namespace vncs {

namespace {

constexpr int kMaxLevels = 8;

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// Composite Simpson over uniformly spaced samples (even interval count).
cplx simpson(const std::vector<cplx>& f, double h) {
    cplx sum = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += (i % 2 ? 4.0 : 2.0) * f[i];
    return sum * (h / 3.0);
}

}  // namespace

VolkovAmplitude::VolkovAmplitude(PulseField field, QuadratureSettings settings)
    : field_(std::move(field)), settings_(settings), grids_(kMaxLevels), grid_flags_(kMaxLevels) {
    if (settings_.points_per_cycle < 8) throw std::invalid_argument("points_per_cycle must be at least 8");
    if (settings_.max_refinements < 0 || settings_.max_refinements + 2 > kMaxLevels)
        throw std::invalid_argument("max_refinements out of range");
    int per_cycle = settings_.points_per_cycle * field_.config().max_harmonic();
    per_cycle += per_cycle % 2;
    base_intervals_ = per_cycle * field_.config().n_cycle;
}

const PhaseIntegrals& VolkovAmplitude::grid(int level) const {
    std::call_once(grid_flags_[level], [&] {
        grids_[level] = std::make_unique<PhaseIntegrals>(field_, base_intervals_ << (level + 1));
    });
    return *grids_[level];
}

ReducedIntegrals VolkovAmplitude::integrate(const PhaseIntegrals& g, const PhaseCoefficients& pc,
                                            double& change) const {
    const std::size_t modes = g.carrier.size();
    const int n = g.intervals();
    // Simpson weight classes: 0 ends, 1 odd, 2 (i % 4 == 2), 3 (i % 4 == 0, interior).
    std::array<std::vector<std::array<cplx, 2>>, 4> carr;
    for (auto& c : carr) c.assign(modes, {cplx{}, cplx{}});
    std::array<cplx, 4> sq{};
    for (int i = 0; i <= n; ++i) {
        const double phase = pc.s * g.phi(i) + pc.cx * g.int_ax[i] + pc.cy * g.int_ay[i] + pc.c2 * g.int_a2[i];
        const cplx e = std::polar(1.0, phase);
        const int cls = (i == 0 || i == n) ? 0 : (i % 2 ? 1 : (i % 4 == 2 ? 2 : 3));
        for (std::size_t j = 0; j < modes; ++j) {
            const cplx c = g.carrier[j][i];
            carr[cls][j][0] += e * c;
            carr[cls][j][1] += e * std::conj(c);
        }
        sq[cls] += e * g.a2[i];
    }
    const double h = g.step();
    auto fine = [&](auto get) { return (get(0) + 4.0 * get(1) + 2.0 * (get(2) + get(3))) * (h / 3.0); };
    auto coarse = [&](auto get) { return (get(0) + 4.0 * get(2) + 2.0 * get(3)) * (2.0 * h / 3.0); };

    ReducedIntegrals r;
    r.intervals = n;
    r.carrier.resize(modes);
    double norm = 0.0, diff = 0.0;
    for (std::size_t j = 0; j < modes; ++j) {
        for (int sgn = 0; sgn < 2; ++sgn) {
            auto get = [&](int cls) { return carr[cls][j][sgn]; };
            const cplx f = fine(get);
            r.carrier[j][sgn] = f;
            norm = std::max(norm, std::abs(f));
            diff = std::max(diff, std::abs(f - coarse(get)));
        }
    }
    {
        auto get = [&](int cls) { return sq[cls]; };
        r.b2 = fine(get);
        norm = std::max(norm, std::abs(r.b2));
        diff = std::max(diff, std::abs(r.b2 - coarse(get)));
    }
    change = norm > 0.0 ? diff / norm : 0.0;

    const auto& cfg = field_.config().modes;
    const cplx I(0.0, 1.0);
    for (std::size_t j = 0; j < modes; ++j) {
        const cplx plus = r.carrier[j][0], minus = r.carrier[j][1];
        r.bx += cfg[j].a0 * 0.5 * (plus + minus);
        r.by += double(cfg[j].helicity) * cfg[j].a0 * (plus - minus) / (2.0 * I);
    }
    r.b0 = -(pc.cx * r.bx + pc.cy * r.by + pc.c2 * r.b2) / pc.s;
    r.convergence = change;
    return r;
}

ReducedIntegrals VolkovAmplitude::reduced_integrals(const Kinematics& kin, double phi_k) const {
    const PhaseCoefficients pc = phase_coefficients(kin, phi_k);
    int level = 0;
    while ((1 << level) < 1.0 + kin.s / 10.0 && level + 1 < kMaxLevels) ++level;
    const int last = std::min(kMaxLevels - 1, level + settings_.max_refinements);
    double change = 0.0;
    for (; level <= last; ++level) {
        ReducedIntegrals r = integrate(grid(level), pc, change);
        if (change <= settings_.tolerance) return r;
    }
    std::ostringstream msg;
    msg << "quadrature failure at omega'=" << kin.omega << " eV, theta=" << kin.theta << " rad, phi_k=" << phi_k
        << ", s=" << kin.s << ": relative change " << change << " after " << settings_.max_refinements
        << " refinements";
    throw QuadratureError(msg.str());
}

cplx VolkovAmplitude::windowed_b0(const Kinematics& kin, double phi_k, double ramp_cycles) const {
    const PhaseCoefficients pc = phase_coefficients(kin, phi_k);
    const PhaseIntegrals& g = grid(0);
    const double h = g.step();
    int ramp = static_cast<int>(std::ceil(ramp_cycles * 2.0 * kPi / h));
    ramp += ramp % 2;
    const double length = ramp * h;
    const double lo = g.origin();
    const double hi = g.phi(g.intervals());
    const double tail_phase =
        pc.cx * g.int_ax.back() + pc.cy * g.int_ay.back() + pc.c2 * g.int_a2.back();

    std::vector<cplx> left(ramp + 1), right(ramp + 1), mid(g.intervals() + 1);
    for (int i = 0; i <= ramp; ++i) {
        const double phi = lo - length + i * h;
        left[i] = smooth_step(double(i) / ramp) * std::polar(1.0, pc.s * phi);
        const double phr = hi + i * h;
        right[i] = smooth_step(1.0 - double(i) / ramp) * std::polar(1.0, pc.s * phr + tail_phase);
    }
    for (int i = 0; i <= g.intervals(); ++i) {
        const double phase = pc.s * g.phi(i) + pc.cx * g.int_ax[i] + pc.cy * g.int_ay[i] + pc.c2 * g.int_a2[i];
        mid[i] = std::polar(1.0, phase);
    }
    return simpson(left, h) + simpson(mid, h) + simpson(right, h);
}

SpinorCoefficients VolkovAmplitude::spinor_coefficients(const Kinematics& kin, double phi_k,
                                                        const SpinLabels& spins, cplx gauge_shift) const {
    using namespace dirac;
    const double m = kElectronMass;
    const FourVector k1 = laser_wavevector(kin.omega1);
    const FourVector kprime = kin.photon(phi_k);
    const FourVector pp = kin.scattered(phi_k);

    const Spinor u = helicity_spinor(kin.energy, 0.0, 0.0, spins.spin_in);
    const double theta_e = std::atan2(std::hypot(pp.x, pp.y), pp.z);
    const Spinor uo = helicity_spinor(pp.t, theta_e, phi_k + kPi, spins.spin_out);

    CFourVector eps = dirac::conj(polarization(kin.theta, phi_k, spins.photon_helicity));
    eps.t += gauge_shift * kprime.t;
    eps.x += gauge_shift * kprime.x;
    eps.y += gauge_shift * kprime.y;
    eps.z += gauge_shift * kprime.z;

    const Matrix ks = slash(k1);
    const Matrix es = slash(eps);
    const Matrix xs = slash(FourVector{0.0, 1.0, 0.0, 0.0});
    const Matrix ys = slash(FourVector{0.0, 0.0, 1.0, 0.0});
    const double fo = m / (2.0 * kin.kpp);
    const double fi = m / (2.0 * kin.kp);

    SpinorCoefficients c;
    c.c0 = sandwich(uo, es, u);
    c.cx = sandwich(uo, (xs * ks * es) * fo + (es * ks * xs) * fi, u);
    c.cy = sandwich(uo, (ys * ks * es) * fo + (es * ks * ys) * fi, u);
    c.c2 = m * m * dot(k1, eps) / (2.0 * kin.kp * kin.kpp) * sandwich(uo, ks, u);
    return c;
}

AmplitudeSample VolkovAmplitude::plane_wave_amplitude(const Kinematics& kin, double phi_k,
                                                      const SpinLabels& spins) const {
    const ReducedIntegrals b = reduced_integrals(kin, phi_k);
    return {combine(spinor_coefficients(kin, phi_k, spins), b), kin.omega, kin.theta, phi_k, spins};
}

AzimuthalSamples VolkovAmplitude::azimuthal_samples(const Kinematics& kin, int n_phi, int spin_in,
                                                    int photon_helicity) const {
    if (n_phi < 1) throw std::invalid_argument("azimuth grid must be nonempty");
    AzimuthalSamples out;
    out.phi.resize(n_phi);
    out.amplitude[0].resize(n_phi);
    out.amplitude[1].resize(n_phi);
    for (int i = 0; i < n_phi; ++i) {
        const double phi_k = 2.0 * kPi * i / n_phi;
        out.phi[i] = phi_k;
        const ReducedIntegrals b = reduced_integrals(kin, phi_k);
        out.convergence = std::max(out.convergence, b.convergence);
        for (int k = 0; k < 2; ++k) {
            const SpinLabels spins{spin_in, k == 0 ? +1 : -1, photon_helicity};
            out.amplitude[k][i] = combine(spinor_coefficients(kin, phi_k, spins), b);
        }
    }
    return out;
}

}  // namespace vncs
