#pragma once

#include <array>
#include <cmath>
#include <string>

#include "hbsm/errors.hpp"

namespace hbsm::detail {

// 10-point Gauss-Legendre rule on [-1, 1], positive half (symmetric).
inline constexpr std::array<double, 5> kGaussNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
    0.8650633666889845107320967, 0.9739065285171717200779640};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
    0.1494513491505805931457763, 0.0666713443086881375935688};

template <typename F>
double gauss_legendre(F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    const double dx = half * kGaussNodes[i];
    sum += kGaussWeights[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

template <typename F>
double integrate_adaptive(F& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_legendre(f, a, mid);
  const double right = gauss_legendre(f, mid, b);
  if (std::abs(left + right - whole) <= tol) return left + right;
  if (depth <= 0) {
    throw NumericalError("quadrature did not converge on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "]");
  }
  return integrate_adaptive(f, a, mid, left, 0.5 * tol, depth - 1) +
         integrate_adaptive(f, mid, b, right, 0.5 * tol, depth - 1);
}

/// Adaptive Gauss-Legendre integration of f on [a, b] to absolute tolerance
/// `tol`; throws NumericalError when the subdivision budget runs out.
template <typename F>
double integrate(F&& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double whole = gauss_legendre(f, a, b);
  return integrate_adaptive(f, a, b, whole, tol, 40);
}

}  // namespace hbsm::detail
