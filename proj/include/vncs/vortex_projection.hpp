#pragma once

// Projection of plane-wave amplitudes onto Bessel vortex modes.
//
// A Bessel mode |k'_z, k'_perp, m', Lambda'> is a coherent superposition of
// plane waves on the emission cone weighted by exp(i m' phi_k), so its
// amplitude is the azimuthal Fourier coefficient of the plane-wave amplitude,
// carried with the (-i)^{m'} phase of the vortex-resolved rate.

#include <complex>
#include <map>
#include <span>
#include <vector>

#include "vncs/physcore.hpp"

namespace vncs {

using cplx = std::complex<double>;

// Coefficients c_{m'} = (-i)^{m'} (1/N) sum_k A(phi_k) exp(-i m' phi_k), m' in [-N/2, N/2).
class WindingSpectrum {
public:
    WindingSpectrum() = default;
    explicit WindingSpectrum(std::vector<cplx> coefficients);

    int size() const { return static_cast<int>(coeff_.size()); }
    int min_winding() const { return -size() / 2; }
    int max_winding() const { return min_winding() + size() - 1; }
    cplx at(int m) const;
    double power(int m) const { return std::norm(at(m)); }
    double total_power() const;
    // Winding with the largest power.
    int dominant() const;

private:
    std::vector<cplx> coeff_;
};

// Throws AliasingError when the outer 10% of the winding band holds more than
// 1e-8 of the power.
WindingSpectrum azimuthal_decompose(std::span<const cplx> samples, bool check_aliasing = true);

// alpha k'_perp / ((k1.p)(k1.p')): converts |c_{m'}|^2 into d^2W / (d omega' d theta).
double rate_prefactor(const Kinematics& kin);

// Per-mode rates keyed by OAM l' = m' - Lambda' (m' is the measured photon TAM).
std::map<int, double> vortex_rate(const WindingSpectrum& spectrum, const Kinematics& kin, int photon_helicity);

struct VortexDecomposition {
    PhotonMode photon;
    int spin_in = +1;
    int spin_out = +1;
    WindingSpectrum tam;
    std::map<int, double> rates;  // l' -> d^2W / (d omega' d theta), 1/eV/rad
    double total_rate = 0.0;
};

VortexDecomposition decompose(std::span<const cplx> samples, const Kinematics& kin, int spin_in, int spin_out,
                              int photon_helicity, bool check_aliasing = true);

// Fraction of power on windings that some channel of `config` with
// 1 <= N(n) <= n_max can produce for the given spins.
double selection_rule_fraction(const WindingSpectrum& spectrum, const LaserConfig& config, int n_max,
                               int spin_in, int spin_out);

struct ModePair {
    int ell_low = 0;
    int ell_high = 0;
    int delta_ell = 0;
    double delta = 0.0;       // phase offset in (-pi, pi] of cos(delta_ell phi + delta)
    double visibility = 0.0;  // 2|c1 c2| / (|c1|^2 + |c2|^2)
};

struct SuperpositionState {
    std::map<int, cplx> coefficients;  // l' -> normalized amplitude
    std::vector<ModePair> pairs;

    double weight(int ell) const;
    std::vector<int> modes_by_weight() const;
};

// Normalizes so that sum |c|^2 = 1 and the largest coefficient is real positive.
// Pairs are formed among modes whose weight is at least pair_threshold.
// Throws NoEmissionError if the total power is not above `floor`.
SuperpositionState superposition_state(const std::map<int, cplx>& coefficients, double floor = 0.0,
                                       double pair_threshold = 1e-3);

// Convenience: l'-keyed coefficients of a decomposition.
std::map<int, cplx> oam_coefficients(const VortexDecomposition& d);

struct ProfileGrid {
    int radial = 256;
    int azimuthal = 256;
    double r_max = 0.0;  // 1/eV; 0 selects 3x the first ring radius of the largest |l'|
};

struct TransverseProfile {
    int radial = 0;
    int azimuthal = 0;
    double r_max = 0.0;
    double kperp = 0.0;
    std::vector<cplx> field;  // row-major [radial][azimuthal]

    double r(int i) const { return r_max * i / (radial - 1); }
    double phi(int j) const { return 2.0 * kPi * j / azimuthal; }
    cplx at(int i, int j) const { return field[static_cast<std::size_t>(i) * azimuthal + j]; }
    double intensity(int i, int j) const { return std::norm(at(i, j)); }
    double phase(int i, int j) const { return std::arg(at(i, j)); }

    // Radial index carrying the most ring power (r times the azimuthal mean intensity).
    int dominant_ring() const;
    // Strict local minima of the intensity around the ring at radial index i (periodic);
    // zero for rings uniform to 1e-9.
    int count_azimuthal_minima(int i) const;
    // Net number of 2 pi phase advances once around ring i.
    int phase_winding(int i) const;
};

// x at the first maximum of |J_l(x)| (first zero for l = 0).
double first_ring_argument(int ell);

// Psi(r, phi) = sum_l c_l (-i)^l J_l(k'_perp r) exp(i l phi)
TransverseProfile transverse_profile(const SuperpositionState& state, double kperp, ProfileGrid grid = {});

// F = 1 + cos(delta_ell phi + delta). Warns once if delta_ell == 0.
double azimuthal_factor(int delta_ell, double delta, double phi);

}  // namespace vncs
