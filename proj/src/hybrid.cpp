#include "hbsm/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hbsm {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

void require_cut(const PovmDiagonal& diag, int n_cut) {
  if (n_cut < 1 || static_cast<std::size_t>(n_cut) >= diag.size()) {
    throw DomainError("photon cut " + std::to_string(n_cut) + " outside the element of length " +
                      std::to_string(diag.size()));
  }
}

}  // namespace

Reflectivity::Reflectivity(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("reflectivity must lie in [0, 1], got " + std::to_string(value));
  }
}

PovmDiagonal assemble_hbsm(const HbsmParams& params, std::size_t length) {
  const double r = params.reflectivity.value();
  const double t = 1.0 - r;
  const auto hd = hd_windowed(params.window, params.eta_hd, length);
  const auto spd = spd_on_off(params.eta_spd, length);

  std::vector<double> entries(length, 0.0);
  for (std::size_t n = 0; n < length; ++n) {
    const int nn = static_cast<int>(n);
    double sum = 0.0;
    for (int k = 1; k <= nn; ++k) {  // spd[0] = 0
      sum += detail::binomial(nn, k) * std::pow(t, nn - k) * std::pow(r, k) *
             hd[static_cast<std::size_t>(nn - k)] * spd[static_cast<std::size_t>(k)];
    }
    entries[n] = sum;
  }
  return PovmDiagonal(std::move(entries), "hbsm");
}

PovmDiagonal assemble_hbsm_by_conjugation(const HbsmParams& params, std::size_t length) {
  if (length == 0) return PovmDiagonal({}, "hbsm");
  const Truncation trunc(static_cast<int>(length) - 1);
  const auto hd = hd_windowed(params.window, params.eta_hd, length);
  const auto spd = spd_on_off(params.eta_spd, length);

  // Mode 0 carries the input and exits towards the homodyne detector, mode 1
  // is the vacuum port whose output is the reflected (tapped) arm.
  const std::vector<ModeLabel> modes = {0, 1};
  std::vector<double> entries(length, 0.0);
  for (std::size_t n = 0; n < length; ++n) {
    const auto input = MultiModeState::fock(modes, trunc, {static_cast<int>(n), 0});
    const auto out = apply_bs(input, 0, 1, params.reflectivity.value());
    const auto tapped = condition_on_povm(out, 1, spd, 0.0);
    if (!tapped.has_support()) continue;
    const auto& rho = tapped.state->matrix();
    double homodyne = 0.0;
    for (std::size_t m = 0; m < length; ++m) homodyne += hd[m] * rho(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)).real();
    entries[n] = tapped.probability * homodyne;
  }
  return PovmDiagonal(std::move(entries), "hbsm");
}

double closed_form_diag(const HbsmParams& params, int n) {
  const double r = params.reflectivity.value();
  const double es = params.eta_spd.value();
  const double eh = params.eta_hd.value();
  const double d = params.window.delta();
  const bool open = params.window.is_unbounded();
  const double erf_half = open ? 1.0 : std::erf(d / 2.0);
  // Delta * exp(-Delta^2 / 4), vanishing for an unbounded window
  const double gauss = open ? 0.0 : d * std::exp(-d * d / 4.0);
  const double d2 = open ? 0.0 : d * d;
  const double d4 = d2 * d2;
  const double res = es * r;

  switch (n) {
    case 0:
      return 0.0;
    case 1:
      return res * erf_half;
    case 2:
      return res * (erf_half * (2.0 - res) + 2.0 * kInvSqrtPi * gauss * eh * (r - 1.0));
    case 3:
      return res * erf_half * (res * (res - 3.0) + 3.0) -
             0.75 * kInvSqrtPi * gauss * es * eh * (r - 1.0) * r *
                 ((d2 - 6.0) * eh * (r - 1.0) + 4.0 * res - 8.0);
    case 4: {
      const double bracket = 9.0 * (d2 - 6.0) * eh * (r - 1.0) * (res - 2.0) +
                             (d4 - 20.0 * d2 + 60.0) * eh * eh * (r - 1.0) * (r - 1.0) +
                             24.0 * res * (res - 3.0) + 72.0;
      return res / 6.0 *
             (kInvSqrtPi * gauss * eh * (r - 1.0) * bracket -
              6.0 * erf_half * (res - 2.0) * (res * (res - 2.0) + 2.0));
    }
    default:
      throw DomainError("closed-form diagonal available for n <= 4 only, got n = " + std::to_string(n));
  }
}

AsymptoticElements asymptotic_elements(const HbsmParams& params) {
  const double base = params.reflectivity.value() * params.window.delta() * params.eta_spd.value() * kInvSqrtPi;
  return {base, 2.0 * base * (1.0 - params.eta_hd.value())};
}

double asymptotic_purity(Efficiency eta_hd) {
  const double e = eta_hd.value();
  return (1.0 + 4.0 * (e - 1.0) * (e - 1.0)) / ((3.0 - 2.0 * e) * (3.0 - 2.0 * e));
}

std::optional<double> purity(const PovmDiagonal& diag, int n_cut, double floor) {
  require_cut(diag, n_cut);
  double sum = 0.0;
  double squares = 0.0;
  for (int n = 1; n <= n_cut; ++n) {
    const double e = diag[static_cast<std::size_t>(n)];
    sum += e;
    squares += e * e;
  }
  if (sum < floor) return std::nullopt;
  return squares / (sum * sum);
}

double pnr_purity_limit(Efficiency eta) {
  const double e = eta.value();
  return (4.0 * e * e - 8.0 * e + 5.0) / ((3.0 - 2.0 * e) * (3.0 - 2.0 * e));
}

double p_max(const PovmDiagonal& diag, int n_cut) {
  require_cut(diag, n_cut);
  const auto& e = diag.entries();
  return *std::max_element(e.begin(), e.begin() + n_cut + 1);
}

double diagonal_trace(const PovmDiagonal& diag, int n_last) {
  require_cut(diag, n_last);
  const auto& e = diag.entries();
  double sum = 0.0;
  for (int n = 0; n <= n_last; ++n) sum += e[static_cast<std::size_t>(n)];
  return sum;
}

}  // namespace hbsm
