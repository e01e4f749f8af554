#include "trisym/moments.hpp"

#include "trisym/error.hpp"

#include <numeric>
#include <string>

namespace trisym {

// p! q! / (p+q+2)! = 1 / ((p+q+1)(p+q+2) C(p+q, p)); the numerator is always 1
// and C(40, 20) * 41 * 42 still fits in 64 bits.
RationalMoment monomial_moment(int p, int q) {
  if (p < 0 || q < 0 || p + q > kMaxMomentOrder) {
    throw Error(ErrorCode::OutOfRange, "monomial exponents (" + std::to_string(p) + ", " +
                                           std::to_string(q) + ") outside 0 <= p+q <= 40");
  }
  const int n = p + q;
  const int r = std::min(p, q);
  std::int64_t binom = 1;
  for (int i = 1; i <= r; ++i) {
    binom = binom * (n - r + i) / i;
  }
  return {p, q, 1, binom * (n + 1) * (n + 2)};
}

}  // namespace trisym
