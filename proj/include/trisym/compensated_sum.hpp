#pragma once

#include <cmath>

namespace trisym {

/// Neumaier's variant of Kahan summation. The result depends only on the
/// order in which terms are added, so a fixed order gives reproducible sums.
template <class Real>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(const Real& init) : sum_(init) {}

  void add(const Real& x) {
    using std::abs;
    const Real t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(const Real& x) {
    add(x);
    return *this;
  }

  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

}  // namespace trisym
