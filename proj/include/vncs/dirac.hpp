#pragma once

// Minimal Dirac algebra in the Dirac representation, metric (+,-,-,-).

#include <array>
#include <complex>

#include "vncs/physcore.hpp"

namespace vncs::dirac {

using cplx = std::complex<double>;

struct CFourVector {
    cplx t, x, y, z;
};

inline CFourVector to_complex(const FourVector& v) { return {v.t, v.x, v.y, v.z}; }

inline cplx dot(const FourVector& a, const CFourVector& b) {
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

using Spinor = std::array<cplx, 4>;

struct Matrix {
    std::array<cplx, 16> m{};

    cplx& operator()(int r, int c) { return m[r * 4 + c]; }
    cplx operator()(int r, int c) const { return m[r * 4 + c]; }

    Matrix operator*(const Matrix& o) const {
        Matrix out;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                cplx acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += (*this)(r, k) * o(k, c);
                out(r, c) = acc;
            }
        return out;
    }
    Matrix operator+(const Matrix& o) const {
        Matrix out;
        for (int i = 0; i < 16; ++i) out.m[i] = m[i] + o.m[i];
        return out;
    }
    Matrix operator*(cplx f) const {
        Matrix out;
        for (int i = 0; i < 16; ++i) out.m[i] = m[i] * f;
        return out;
    }
    Spinor operator*(const Spinor& u) const {
        Spinor out{};
        for (int r = 0; r < 4; ++r)
            for (int k = 0; k < 4; ++k) out[r] += (*this)(r, k) * u[k];
        return out;
    }
};

// v-slash = gamma^0 v^t - gamma^1 v^x - gamma^2 v^y - gamma^3 v^z
inline Matrix slash(const CFourVector& v) {
    const cplx I(0.0, 1.0);
    Matrix s;
    // gamma^0 = diag(1,1,-1,-1); gamma^k = [[0, sigma_k], [-sigma_k, 0]]
    s(0, 0) = v.t;
    s(1, 1) = v.t;
    s(2, 2) = -v.t;
    s(3, 3) = -v.t;
    // -v.x gamma^1 - v.y gamma^2 - v.z gamma^3; upper-right block = -(sigma.v), lower-left = +(sigma.v)
    const cplx s00 = v.z, s01 = v.x - I * v.y, s10 = v.x + I * v.y, s11 = -v.z;
    s(0, 2) = -s00;
    s(0, 3) = -s01;
    s(1, 2) = -s10;
    s(1, 3) = -s11;
    s(2, 0) = s00;
    s(2, 1) = s01;
    s(3, 0) = s10;
    s(3, 1) = s11;
    return s;
}

inline Matrix slash(const FourVector& v) { return slash(to_complex(v)); }

// ubar' M u = (u')^dagger gamma^0 M u
inline cplx sandwich(const Spinor& out, const Matrix& op, const Spinor& in) {
    const Spinor mu = op * in;
    return std::conj(out[0]) * mu[0] + std::conj(out[1]) * mu[1] - std::conj(out[2]) * mu[2] -
           std::conj(out[3]) * mu[3];
}

// Helicity spinor for momentum with polar angle theta, azimuth phi; helicity label +/-1.
// Two-spinors chi_+ = (cos t/2, e^{i phi} sin t/2), chi_- = (-e^{-i phi} sin t/2, cos t/2).
inline Spinor helicity_spinor(double energy, double theta, double phi, int helicity) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    std::array<cplx, 2> chi;
    if (helicity > 0)
        chi = {cplx(c, 0.0), std::polar(s, phi)};
    else
        chi = {-std::polar(s, -phi), cplx(c, 0.0)};
    const double up = std::sqrt(energy + kElectronMass);
    const double down = helicity * std::sqrt(energy - kElectronMass);
    return {up * chi[0], up * chi[1], down * chi[0], down * chi[1]};
}

// Helicity polarization vector R(phi, theta, 0) (x + i Lambda y)/sqrt(2), zero time component.
inline CFourVector polarization(double theta, double phi, int helicity) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx I(0.0, 1.0);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    return {0.0, r * (ct * cp - I * double(helicity) * sp), r * (ct * sp + I * double(helicity) * cp), -r * st};
}

inline CFourVector conj(const CFourVector& v) { return {std::conj(v.t), std::conj(v.x), std::conj(v.y), std::conj(v.z)}; }

}  // namespace vncs::dirac
