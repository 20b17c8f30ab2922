#include "vncs/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace vncs {

namespace {

double series(int n, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= half / k;
    double sum = term;
    const double q = -half * half;
    for (int k = 1; k < 200; ++k) {
        term *= q / (double(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double miller(int n, double x) {
    // Start well above both n and x so the minimal solution dominates.
    int start = static_cast<int>(std::max<double>(n, x)) + 40 + static_cast<int>(2.0 * std::sqrt(std::max<double>(n, x) * 20.0));
    start += start % 2;
    double next = 0.0, cur = 1e-300, result = 0.0, norm = 0.0;
    for (int k = start; k > 0; --k) {
        const double prev = (2.0 * k / x) * cur - next;
        next = cur;
        cur = prev;  // J_{k-1} (unnormalized)
        if (std::abs(cur) > 1e250) {
            next *= 1e-250;
            cur *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        if (k - 1 == n) result = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
    }
    norm += cur;  // J_0
    return result / norm;
}

}  // namespace

double bessel_j(int order, double x) {
    if (x < 0.0 || !std::isfinite(x)) throw std::domain_error("bessel_j requires finite x >= 0");
    if (order < 0) {
        const double v = bessel_j(-order, x);
        return (order % 2) ? -v : v;
    }
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    if (x < 1.0 || x * x < 0.1 * (order + 1)) return series(order, x);
    return miller(order, x);
}

}  // namespace vncs
