#pragma once

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <span>
#include <stdexcept>

namespace grnrules {

struct TestResult {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;
};

inline double sample_mean(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v;
  return s / x.size();
}

inline double sample_variance(std::span<const double> x) {
  const double m = sample_mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

// Welch's unequal-variance t test with Welch-Satterthwaite degrees of
// freedom and a two-tailed p from the t-distribution.
inline TestResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_t: samples need at least 2 values");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const double va = sample_variance(a);
  const double vb = sample_variance(b);
  TestResult res;
  const double se2 = va / na + vb / nb;
  if (se2 == 0.0) {
    // Degenerate: both samples constant.
    if (ma == mb) return {0.0, na + nb - 2.0, 1.0};
    return {ma > mb ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity(),
            na + nb - 2.0, 0.0};
  }
  res.t = (ma - mb) / std::sqrt(se2);
  res.dof = se2 * se2 /
            (va * va / (na * na * (na - 1)) + vb * vb / (nb * nb * (nb - 1)));
  const boost::math::students_t dist(res.dof);
  res.p = 2.0 * boost::math::cdf(dist, -std::abs(res.t));
  return res;
}

}  // namespace grnrules
