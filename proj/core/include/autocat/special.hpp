#pragma once

namespace autocat {

/// ln Gamma(x) for x > 0. Evaluated in extended precision and rounded once,
/// so results are within about one ulp; reentrant (no signgam side effect).
double log_gamma(double x);

/// ln[Gamma(x + k) / Gamma(x)], the log rising factorial, for x > 0, k >= 0.
double log_rising(double x, double k);

/// ln n!
double log_factorial(long long n);

}  // namespace autocat
