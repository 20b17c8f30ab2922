#pragma once

namespace vncs {

// Cylindrical Bessel function of the first kind J_n(x) for integer order and
// x >= 0. Negative orders use J_{-n} = (-1)^n J_n. Miller backward recurrence
// normalized by J_0 + 2 sum J_{2k} = 1; power series for small x.
double bessel_j(int order, double x);

}  // namespace vncs
