#include "uolab/rational.hpp"

#include <cmath>

namespace uolab {

Rat rational_from_double(double v, long long max_den) {
  if (!std::isfinite(v)) throw std::domain_error("rational_from_double: non-finite input");
  if (max_den < 1) throw std::invalid_argument("rational_from_double: max_den must be >= 1");
  bool negative = v < 0.0;
  double x = negative ? -v : v;

  // Convergents p_k/q_k of the continued fraction of x; stop at the last
  // one whose denominator stays within the bound.
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int iter = 0; iter < 64; ++iter) {
    double a_floor = std::floor(frac);
    if (a_floor > 9.2e18) break;
    long long a = static_cast<long long>(a_floor);
    __int128 p2 = static_cast<__int128>(a) * p1 + p0;
    __int128 q2 = static_cast<__int128>(a) * q1 + q0;
    if (q2 > max_den || p2 > INT64_MAX) break;
    p0 = p1; q0 = q1;
    p1 = static_cast<long long>(p2); q1 = static_cast<long long>(q2);
    double rem = frac - a_floor;
    if (rem < 1e-18 * std::max(1.0, x)) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) throw std::overflow_error("rational_from_double: no convergent within bound");
  return Rat(negative ? -p1 : p1, q1);
}

}  // namespace uolab
