#include "vncs/vortex_projection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <set>

#include "vncs/bessel.hpp"
#include "vncs/channel_planner.hpp"
#include "vncs/errors.hpp"

namespace vncs {

namespace {

cplx minus_i_power(int m) {
    switch (((m % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

double wrap_phase(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

}  // namespace

WindingSpectrum::WindingSpectrum(std::vector<cplx> coefficients) : coeff_(std::move(coefficients)) {}

cplx WindingSpectrum::at(int m) const {
    if (m < min_winding() || m > max_winding()) return {};
    return coeff_[m - min_winding()];
}

double WindingSpectrum::total_power() const {
    double sum = 0.0;
    for (const auto& c : coeff_) sum += std::norm(c);
    return sum;
}

int WindingSpectrum::dominant() const {
    int best = 0;
    double best_power = -1.0;
    for (int m = min_winding(); m <= max_winding(); ++m) {
        if (power(m) > best_power) {
            best_power = power(m);
            best = m;
        }
    }
    return best;
}

WindingSpectrum azimuthal_decompose(std::span<const cplx> samples, bool check_aliasing) {
    const int n = static_cast<int>(samples.size());
    if (n < 2) throw std::invalid_argument("azimuthal decomposition needs at least two samples");
    std::vector<cplx> coeff(n);
    const int lo = -n / 2;
    for (int idx = 0; idx < n; ++idx) {
        const int m = lo + idx;
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) {
            // exact reduction of m k mod n keeps the twiddles accurate for large n
            const int r = static_cast<int>((static_cast<long long>(m) * k % n + n) % n);
            acc += samples[k] * std::polar(1.0, -2.0 * kPi * r / n);
        }
        coeff[idx] = minus_i_power(m) * acc / double(n);
    }
    WindingSpectrum spectrum(std::move(coeff));
    if (check_aliasing) {
        const double total = spectrum.total_power();
        const int edge = static_cast<int>(std::ceil(0.9 * (n / 2)));
        double outer = 0.0;
        for (int m = spectrum.min_winding(); m <= spectrum.max_winding(); ++m)
            if (std::abs(m) >= edge) outer += spectrum.power(m);
        if (total > 0.0 && outer > 1e-8 * total)
            throw AliasingError("winding content reaches the band edge (fraction " + std::to_string(outer / total) +
                                "); increase N_phi");
    }
    return spectrum;
}

double rate_prefactor(const Kinematics& kin) { return kFineStructure * kin.kperp / (kin.kp * kin.kpp); }

std::map<int, double> vortex_rate(const WindingSpectrum& spectrum, const Kinematics& kin, int photon_helicity) {
    const double pref = rate_prefactor(kin);
    std::map<int, double> rates;
    for (int m = spectrum.min_winding(); m <= spectrum.max_winding(); ++m)
        rates[m - photon_helicity] = pref * spectrum.power(m);
    return rates;
}

VortexDecomposition decompose(std::span<const cplx> samples, const Kinematics& kin, int spin_in, int spin_out,
                              int photon_helicity, bool check_aliasing) {
    VortexDecomposition d;
    d.photon = {kin.omega, kin.theta, photon_helicity};
    d.spin_in = spin_in;
    d.spin_out = spin_out;
    d.tam = azimuthal_decompose(samples, check_aliasing);
    d.rates = vortex_rate(d.tam, kin, photon_helicity);
    for (const auto& [ell, r] : d.rates) d.total_rate += r;
    return d;
}

double selection_rule_fraction(const WindingSpectrum& spectrum, const LaserConfig& config, int n_max, int spin_in,
                               int spin_out) {
    std::set<int> allowed;
    for (const auto& ch : enumerate_channels(config, n_max))
        allowed.insert(tam_of_channel(ch, config, spin_in, spin_out, +1).tam);
    const double total = spectrum.total_power();
    if (total == 0.0) return 1.0;
    double on_rule = 0.0;
    for (int m : allowed) on_rule += spectrum.power(m);
    return on_rule / total;
}

double SuperpositionState::weight(int ell) const {
    auto it = coefficients.find(ell);
    return it == coefficients.end() ? 0.0 : std::norm(it->second);
}

std::vector<int> SuperpositionState::modes_by_weight() const {
    std::vector<int> modes;
    for (const auto& [ell, c] : coefficients) modes.push_back(ell);
    std::stable_sort(modes.begin(), modes.end(), [&](int a, int b) { return weight(a) > weight(b); });
    return modes;
}

SuperpositionState superposition_state(const std::map<int, cplx>& coefficients, double floor, double pair_threshold) {
    double total = 0.0;
    int lead = 0;
    double lead_power = -1.0;
    for (const auto& [ell, c] : coefficients) {
        total += std::norm(c);
        if (std::norm(c) > lead_power) {
            lead_power = std::norm(c);
            lead = ell;
        }
    }
    if (!(total > floor)) throw NoEmissionError("no emission at this point");

    const cplx rotate = std::polar(1.0 / std::sqrt(total), -std::arg(coefficients.at(lead)));
    SuperpositionState state;
    for (const auto& [ell, c] : coefficients) state.coefficients[ell] = c * rotate;
    state.coefficients[lead] = std::abs(state.coefficients[lead]);

    std::vector<int> strong;
    for (const auto& [ell, c] : state.coefficients)
        if (std::norm(c) >= pair_threshold) strong.push_back(ell);
    for (std::size_t a = 0; a < strong.size(); ++a) {
        for (std::size_t b = a + 1; b < strong.size(); ++b) {
            const cplx c1 = state.coefficients[strong[a]];
            const cplx c2 = state.coefficients[strong[b]];
            ModePair p;
            p.ell_low = strong[a];
            p.ell_high = strong[b];
            p.delta_ell = strong[b] - strong[a];
            p.delta = wrap_phase(std::arg(c2 * std::conj(c1)));
            p.visibility = 2.0 * std::abs(c1 * c2) / (std::norm(c1) + std::norm(c2));
            state.pairs.push_back(p);
        }
    }
    return state;
}

std::map<int, cplx> oam_coefficients(const VortexDecomposition& d) {
    std::map<int, cplx> out;
    for (int m = d.tam.min_winding(); m <= d.tam.max_winding(); ++m) out[m - d.photon.helicity] = d.tam.at(m);
    return out;
}

double first_ring_argument(int ell) {
    ell = std::abs(ell);
    if (ell == 0) return 2.404825557695773;
    // |J_l| rises monotonically to its first maximum, located between l and l + 2 l^{1/3} + 2.
    double lo = ell, hi = ell + 2.0 * std::cbrt(double(ell)) + 2.0;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        if (bessel_j(ell, a) > bessel_j(ell, b)) {
            hi = b;
            b = a;
            a = hi - g * (hi - lo);
        } else {
            lo = a;
            a = b;
            b = lo + g * (hi - lo);
        }
    }
    return 0.5 * (lo + hi);
}

TransverseProfile transverse_profile(const SuperpositionState& state, double kperp, ProfileGrid grid) {
    if (!(kperp > 0.0)) throw std::invalid_argument("transverse momentum must be positive");
    if (grid.radial < 2 || grid.azimuthal < 3) throw std::invalid_argument("profile grid too small");
    TransverseProfile p;
    p.radial = grid.radial;
    p.azimuthal = grid.azimuthal;
    p.kperp = kperp;
    if (grid.r_max > 0.0) {
        p.r_max = grid.r_max;
    } else {
        int lmax = 0;
        for (const auto& [ell, c] : state.coefficients)
            if (std::norm(c) > 0.0) lmax = std::max(lmax, std::abs(ell));
        p.r_max = 3.0 * first_ring_argument(lmax) / kperp;
    }
    p.field.assign(static_cast<std::size_t>(p.radial) * p.azimuthal, cplx{});
    for (const auto& [ell, c] : state.coefficients) {
        if (c == cplx{}) continue;
        const cplx weight = c * minus_i_power(ell);
        for (int i = 0; i < p.radial; ++i) {
            const double x = kperp * p.r(i);
            const double j = bessel_j(ell, x);
            if (j == 0.0) continue;
            for (int k = 0; k < p.azimuthal; ++k) {
                const int r = static_cast<int>(((static_cast<long long>(ell) * k) % p.azimuthal + p.azimuthal) % p.azimuthal);
                p.field[static_cast<std::size_t>(i) * p.azimuthal + k] +=
                    weight * j * std::polar(1.0, 2.0 * kPi * r / p.azimuthal);
            }
        }
    }
    return p;
}

int TransverseProfile::dominant_ring() const {
    int best = 0;
    double best_mean = -1.0;
    for (int i = 1; i < radial; ++i) {
        double mean = 0.0;
        for (int j = 0; j < azimuthal; ++j) mean += intensity(i, j);
        mean *= r(i);
        if (mean > best_mean) {
            best_mean = mean;
            best = i;
        }
    }
    return best;
}

int TransverseProfile::count_azimuthal_minima(int i) const {
    double lo = intensity(i, 0), hi = lo;
    for (int j = 1; j < azimuthal; ++j) lo = std::min(lo, intensity(i, j)), hi = std::max(hi, intensity(i, j));
    if (hi - lo <= 1e-9 * hi) return 0;  // uniform up to rounding
    int count = 0;
    for (int j = 0; j < azimuthal; ++j) {
        const double prev = intensity(i, (j + azimuthal - 1) % azimuthal);
        const double cur = intensity(i, j);
        const double next = intensity(i, (j + 1) % azimuthal);
        if (cur < prev && cur <= next) ++count;
    }
    return count;
}

int TransverseProfile::phase_winding(int i) const {
    double total = 0.0;
    for (int j = 0; j < azimuthal; ++j) total += std::arg(at(i, (j + 1) % azimuthal) / at(i, j));
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

double azimuthal_factor(int delta_ell, double delta, double phi) {
    if (delta_ell == 0) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) std::clog << "warning: azimuthal factor with delta_ell = 0 is constant\n";
    }
    return 1.0 + std::cos(delta_ell * phi + delta);
}

}  // namespace vncs
