#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <sstream>

#include "vncs/errors.hpp"
#include "vncs/profile_io.hpp"
#include "vncs/volkov_amplitude.hpp"
#include "vncs/vortex_projection.hpp"

using namespace vncs;

namespace {

const ElectronState kGeV = ElectronState::head_on(1e9);

std::vector<cplx> sampled(int n, const std::function<cplx(double)>& f) {
    std::vector<cplx> v(n);
    for (int i = 0; i < n; ++i) v[i] = f(2 * kPi * i / n);
    return v;
}

cplx minus_i_pow(int m) {
    static const cplx table[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return table[((m % 4) + 4) % 4];
}

SuperpositionState equal_pair(int l1, int l2, double delta = 0.0) {
    return superposition_state({{l1, cplx(1.0, 0.0)}, {l2, std::polar(1.0, delta)}});
}

LaserConfig laser(std::vector<LaserMode> m) {
    LaserConfig c;
    c.modes = std::move(m);
    return c;
}


}  // namespace

TEST_CASE("constant samples only feed winding zero") {
    const WindingSpectrum w = azimuthal_decompose(sampled(64, [](double) { return cplx(2.0, -1.0); }));
    CHECK(w.at(0) == cplx(2.0, -1.0));
    for (int m = w.min_winding(); m <= w.max_winding(); ++m)
        if (m != 0) CHECK(std::abs(w.at(m)) < 1e-15);
    CHECK(w.dominant() == 0);
}

TEST_CASE("a pure winding is recovered with the vortex phase") {
    const WindingSpectrum w = azimuthal_decompose(sampled(64, [](double p) { return std::polar(1.0, 3 * p); }));
    CHECK(std::abs(w.at(3) - minus_i_pow(3)) < 1e-14);
    CHECK(w.power(3) == doctest::Approx(1.0));
    CHECK(w.total_power() == doctest::Approx(1.0));
    CHECK(w.min_winding() == -32);
    CHECK(w.max_winding() == 31);
}

TEST_CASE("Parseval holds for arbitrary samples") {
    auto samples = sampled(64, [](double p) {
        return cplx(std::cos(5 * p) + 0.3, std::sin(2 * p) * std::exp(std::cos(p)));
    });
    double mean = 0.0;
    for (const auto& z : samples) mean += std::norm(z) / samples.size();
    const WindingSpectrum w = azimuthal_decompose(samples, false);
    CHECK(std::abs(w.total_power() - mean) / mean < 1e-14);
}

TEST_CASE("winding content near the band edge is reported as aliasing") {
    auto high = sampled(64, [](double p) { return std::polar(1.0, 30 * p) + 1.0; });
    CHECK_THROWS_AS(azimuthal_decompose(high), AliasingError);
    CHECK_NOTHROW(azimuthal_decompose(high, false));
}

TEST_CASE("doubling the azimuth grid leaves band-limited coefficients unchanged") {
    auto f = [](double p) { return std::polar(0.6, 2 * p) + std::polar(0.3, -5 * p + 1.0) + cplx(0.1, 0.2); };
    const WindingSpectrum a = azimuthal_decompose(sampled(64, f)), b = azimuthal_decompose(sampled(128, f));
    for (int m = a.min_winding(); m <= a.max_winding(); ++m) CHECK(std::abs(a.at(m) - b.at(m)) < 1e-10);
}

TEST_CASE("vortex rates") {
    const Kinematics kin = make_kinematics(kGeV, 1.55, 1.4e6, 2e-3);
    const WindingSpectrum zero(std::vector<cplx>(64));
    for (const auto& [ell, rate] : vortex_rate(zero, kin, -1)) CHECK(rate == 0.0);

    const WindingSpectrum w = azimuthal_decompose(sampled(64, [](double p) { return std::polar(2.0, 1 * p); }));
    const auto rates = vortex_rate(w, kin, -1);
    CHECK(rates.at(2) == doctest::Approx(4.0 * rate_prefactor(kin)));
    CHECK(rate_prefactor(kin) == doctest::Approx(kFineStructure * kin.kperp / (kin.kp * kin.kpp)));
}

TEST_CASE("single colour first harmonic is a pure l' = 2 vortex") {
    const LaserConfig cfg = laser({{1, 1.3, +1, 0.0}});
    const VolkovAmplitude amp{PulseField(cfg)};
    const Kinematics kin = make_kinematics(kGeV, 1.55, photon_energy(0.934, 2e-3, kGeV, 1.55), 2e-3);
    const AzimuthalSamples smp = amp.azimuthal_samples(kin, 64, +1, -1);
    const VortexDecomposition d = decompose(smp.for_spin(+1), kin, +1, +1, -1);
    int best = 0;
    for (const auto& [ell, rate] : d.rates)
        if (rate > d.rates.at(best)) best = ell;
    CHECK(best == 2);
    CHECK(d.rates.at(2) / d.total_rate > 0.999);

    // Total rate against a direct azimuthal average of |M|^2 on an independent grid.
    double mean = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i)
        mean += std::norm(amp.plane_wave_amplitude(kin, 2 * kPi * (i + 0.5) / n, {+1, +1, -1}).value) / n;
    CHECK(d.total_rate == doctest::Approx(rate_prefactor(kin) * mean).epsilon(1e-10));
}

TEST_CASE("two-colour degenerate peak populates windings 1 and 2") {
    const LaserConfig cfg = laser({{1, 1.3, +1, 0.0}, {2, 1.0, +1, 0.0}});
    const VolkovAmplitude amp{PulseField(cfg)};
    const Kinematics kin = make_kinematics(kGeV, 1.55, 2.62e6, 2e-3);
    const AzimuthalSamples smp = amp.azimuthal_samples(kin, 64, +1, -1);
    const WindingSpectrum w = azimuthal_decompose(smp.for_spin(+1));
    CHECK((w.power(1) + w.power(2)) / w.total_power() > 0.9);
    CHECK(selection_rule_fraction(w, cfg, 12, +1, +1) <= 1.0);
}

TEST_CASE("selection-rule fraction of allowed and forbidden windings") {
    const LaserConfig cfg = laser({{1, 1.0, +1, 0.0}});
    const WindingSpectrum allowed = azimuthal_decompose(sampled(64, [](double p) { return std::polar(1.0, 3 * p); }));
    CHECK(selection_rule_fraction(allowed, cfg, 12, +1, +1) == doctest::Approx(1.0));
    const WindingSpectrum forbidden =
        azimuthal_decompose(sampled(64, [](double p) { return std::polar(1.0, -2 * p); }));
    CHECK(selection_rule_fraction(forbidden, cfg, 12, +1, +1) == doctest::Approx(0.0));
}

TEST_CASE("superposition states") {
    const SuperpositionState one = superposition_state({{3, cplx(0.0, -2.0)}});
    CHECK(one.pairs.empty());
    CHECK(one.coefficients.at(3) == cplx(1.0, 0.0));

    const SuperpositionState two = superposition_state({{2, cplx(0.0, 1.0)}, {3, cplx(-1.0, 0.0)}});
    REQUIRE(two.pairs.size() == 1);
    CHECK(two.pairs[0].delta_ell == 1);
    CHECK(two.pairs[0].visibility == doctest::Approx(1.0));
    CHECK(two.weight(2) == doctest::Approx(0.5));
    CHECK(two.weight(3) == doctest::Approx(0.5));

    const SuperpositionState lead = superposition_state({{2, cplx(0.3, 0.4)}, {5, cplx(-1.0, 1.0)}});
    CHECK(lead.coefficients.at(5).imag() == doctest::Approx(0.0));
    CHECK(lead.coefficients.at(5).real() > 0.0);
    double norm = 0.0;
    for (const auto& [ell, c] : lead.coefficients) norm += std::norm(c);
    CHECK(norm == doctest::Approx(1.0));
    CHECK(lead.pairs[0].delta > -kPi);
    CHECK(lead.pairs[0].delta <= kPi);
    CHECK(lead.modes_by_weight().front() == 5);

    CHECK_THROWS_WITH_AS(superposition_state({{1, cplx(1e-20, 0.0)}}, 1e-30), "no emission at this point",
                         NoEmissionError);
}

TEST_CASE("single-mode profile is a uniform ring with phase winding l") {
    for (int ell : {0, 1, 2, 3, -2}) {
        const TransverseProfile p = transverse_profile(superposition_state({{ell, cplx(1.0, 0.0)}}), 5e3, {64, 128, 0.0});
        const int ring = p.dominant_ring();
        double lo = 1e300, hi = 0.0;
        for (int j = 0; j < p.azimuthal; ++j) lo = std::min(lo, p.intensity(ring, j)), hi = std::max(hi, p.intensity(ring, j));
        CHECK((hi - lo) / hi < 1e-12);
        CHECK(p.count_azimuthal_minima(ring) == 0);
        if (ell != 0) CHECK(p.phase_winding(ring) == ell);
    }
}

TEST_CASE("profiles are periodic and nonnegative") {
    const SuperpositionState st = superposition_state({{2, cplx(0.8, 0.0)}, {3, cplx(0.0, 0.6)}});
    const TransverseProfile p = transverse_profile(st, 4e3, {32, 64, 0.0});
    for (int i = 0; i < p.radial; ++i) {
        for (int j = 0; j < p.azimuthal; ++j) {
            CHECK(p.intensity(i, j) >= 0.0);
            cplx direct = 0.0;
            const double phi = p.phi(j) + 2 * kPi;
            for (const auto& [ell, c] : st.coefficients)
                direct += c * minus_i_pow(ell) * std::cyl_bessel_j(double(std::abs(ell)), p.kperp * p.r(i)) *
                          (ell < 0 && (ell % 2) ? -1.0 : 1.0) * std::polar(1.0, ell * phi);
            CHECK(std::abs(direct - p.at(i, j)) < 1e-12);
        }
    }
}

TEST_CASE("notch count equals the OAM separation") {
    CHECK(transverse_profile(equal_pair(2, 3), 5e3).count_azimuthal_minima(transverse_profile(equal_pair(2, 3), 5e3).dominant_ring()) == 1);
    for (int low : {0, 1, 2, 3}) {
        for (int d = 1; d <= 5; ++d) {
            for (double delta : {0.0, 0.7, -2.0}) {
                const TransverseProfile p = transverse_profile(equal_pair(low, low + d, delta), 5e3);
                CHECK_MESSAGE(p.count_azimuthal_minima(p.dominant_ring()) == d, "l = " << low << ", dl = " << d);
            }
        }
    }
}

TEST_CASE("ring radius follows the first Bessel maximum") {
    CHECK(first_ring_argument(0) == doctest::Approx(2.404825557695773));
    for (int ell = 1; ell <= 10; ++ell) {
        const double x = first_ring_argument(ell);
        const double h = 1e-5;
        CHECK(std::abs(std::cyl_bessel_j(ell + 0.0, x + h) - std::cyl_bessel_j(ell + 0.0, x - h)) < 1e-9);
        CHECK(x > ell);
    }
}

TEST_CASE("azimuthal interference factor") {
    CHECK(azimuthal_factor(1, 0.0, kPi) == doctest::Approx(0.0));
    CHECK(azimuthal_factor(2, 0.0, kPi / 2) == doctest::Approx(0.0));
    CHECK(azimuthal_factor(2, 0.0, 3 * kPi / 2) == doctest::Approx(0.0).scale(1.0));
    for (int d = 1; d <= 5; ++d) {
        double integral = 0.0;
        const int n = 720;
        for (int i = 0; i < n; ++i) {
            const double f = azimuthal_factor(d, 0.4, 2 * kPi * i / n);
            CHECK(f >= 0.0);
            CHECK(f <= 2.0);
            integral += f * 2 * kPi / n;
        }
        CHECK(integral == doctest::Approx(2 * kPi));
        CHECK(azimuthal_factor(d, 0.4, 0.3) == doctest::Approx(azimuthal_factor(d, 0.4, 0.3 + 2 * kPi / d)));
    }
    CHECK(azimuthal_factor(0, 0.5, 1.0) == doctest::Approx(1.0 + std::cos(0.5)));
}

TEST_CASE("profile export") {
    const auto dir = std::filesystem::temp_directory_path() / "vncs_profile_export";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const SuperpositionState st = equal_pair(2, 3);
    const TransverseProfile p = transverse_profile(st, 5e3, {16, 24, 0.0});
    write_intensity_pgm(dir / "i.pgm", p);
    write_phase_pgm(dir / "p.pgm", p);
    const auto files = write_profile_raw(dir, "x", p, st);
    CHECK(files.size() == 3);

    std::ifstream in(dir / "i.pgm", std::ios::binary);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    CHECK(magic == "P5");
    CHECK(w == 24);
    CHECK(h == 16);
    CHECK(maxval == 255);
    CHECK(std::filesystem::file_size(dir / "x_intensity.f64") == 16 * 24 * sizeof(double));
    CHECK(std::filesystem::file_size(dir / "x_phase.f64") == 16 * 24 * sizeof(double));

    std::ifstream raw(dir / "x_intensity.f64", std::ios::binary);
    double first = -1.0;
    raw.read(reinterpret_cast<char*>(&first), sizeof first);
    CHECK(first == p.intensity(0, 0));

    std::ifstream side(dir / "x.txt");
    std::stringstream text;
    text << side.rdbuf();
    CHECK(text.str().find("radial=16\n") != std::string::npos);
    CHECK(text.str().find("modes=") != std::string::npos);

    CHECK(phase_to_gray(-kPi) == 0);
    CHECK(phase_to_gray(kPi) == 255);
    CHECK(phase_to_gray(0.0) == 128);
    std::filesystem::remove_all(dir);
}
