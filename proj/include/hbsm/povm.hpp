#pragma once

// Phase-insensitive detector models stored as diagonal POVM elements over
// photon number.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hbsm/errors.hpp"

namespace hbsm {

/// Default number of photon-number entries (n = 0..5) in a detector element.
inline constexpr std::size_t kDefaultPovmLength = 6;

/// Detection efficiency in [0, 1].
class Efficiency {
 public:
  explicit Efficiency(double value);
  double value() const { return value_; }

 private:
  double value_;
};

/// Quadrature acceptance width around q = 0. Infinity means unconditioned
/// homodyne detection.
class Window {
 public:
  explicit Window(double delta);
  static Window unbounded() { return Window(std::numeric_limits<double>::infinity()); }

  double delta() const { return delta_; }
  bool is_unbounded() const { return std::isinf(delta_); }

 private:
  double delta_;
};

/// Number of multiplexed on-off detectors in a photon-number-resolving
/// detector; `infinite()` selects the analytic N -> infinity element.
class Multiplexing {
 public:
  explicit Multiplexing(int detectors);
  static Multiplexing infinite() { return Multiplexing(); }

  bool is_infinite() const { return !count_.has_value(); }
  int count() const;

 private:
  Multiplexing() = default;
  std::optional<int> count_;
};

/// Diagonal of a phase-insensitive POVM element; entries()[n] is the
/// detection probability for the Fock state |n>.
class PovmDiagonal {
 public:
  /// Entries must lie in [0, 1]; round-off within 1e-12 of the bounds is
  /// clamped, anything further out throws DomainError.
  PovmDiagonal(std::vector<double> entries, std::string label = {});

  const std::vector<double>& entries() const { return entries_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t n) const { return entries_.at(n); }

  static PovmDiagonal ones(std::size_t length, std::string label = "identity");

 private:
  std::vector<double> entries_;
  std::string label_;
};

/// Click element of an on-off detector: 1 - (1 - eta)^n.
PovmDiagonal spd_on_off(Efficiency eta, std::size_t length = kDefaultPovmLength);

/// Fock-state quadrature wavefunction psi_n(x) with vacuum density
/// exp(-x^2)/sqrt(pi). Evaluated with the normalized Hermite recurrence.
double hd_wavefunction(int n, double x);

/// Lossless acceptance d[n] = integral of psi_n(x)^2 over [-delta/2, delta/2].
std::vector<double> hd_window_acceptance(Window window, std::size_t length);

/// Window-integrated homodyne element at a fixed detection phase theta,
/// lossless: M[m][n] = e^{i (n - m) theta} * integral psi_m psi_n.
Eigen::MatrixXcd hd_window_matrix(Window window, double theta, std::size_t length);

/// Phase-averaged windowed homodyne element with Bernoulli loss.
PovmDiagonal hd_windowed(Window window, Efficiency eta_hd, std::size_t length = kDefaultPovmLength);

/// Binomial photon-loss map applied to a diagonal element:
///   out[n] = sum_m C(n,m) eta^m (1-eta)^(n-m) in[m].
PovmDiagonal bernoulli_loss(const PovmDiagonal& diag, Efficiency eta);

/// Exactly-one-click element of `detectors` uniformly multiplexed on-off
/// detectors with common efficiency eta.
PovmDiagonal pnr_single_click(Efficiency eta, Multiplexing detectors,
                              std::size_t length = kDefaultPovmLength);

namespace detail {

double binomial(int n, int k);

}  // namespace detail

}  // namespace hbsm

