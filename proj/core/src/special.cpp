#include "autocat/special.hpp"

#include <cmath>

#include "autocat/error.hpp"

namespace autocat {

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma needs a positive argument");
  int sign = 0;
  return static_cast<double>(::lgammal_r(static_cast<long double>(x), &sign));
}

double log_rising(double x, double k) {
  if (k == 0.0) return 0.0;
  if (!(x > 0.0)) throw DomainError("log_rising needs a positive base");
  int sign = 0;
  const long double lx = static_cast<long double>(x);
  return static_cast<double>(::lgammal_r(lx + k, &sign) - ::lgammal_r(lx, &sign));
}

double log_factorial(long long n) {
  if (n < 0) throw DomainError("log_factorial of a negative number");
  int sign = 0;
  return static_cast<double>(::lgammal_r(static_cast<long double>(n) + 1.0L, &sign));
}

}  // namespace autocat
