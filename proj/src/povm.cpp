#include "hbsm/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hbsm/detail/quadrature.hpp"

namespace hbsm {

namespace {

constexpr double kEntryTolerance = 1e-12;
constexpr double kQuadratureTolerance = 1e-13;
// psi_n(x)^2 for n <= 10 is below 1e-600 past this point.
constexpr double kQuadratureCutoff = 40.0;

}  // namespace

namespace detail {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

}  // namespace detail

Efficiency::Efficiency(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("efficiency must lie in [0, 1], got " + std::to_string(value));
  }
}

Window::Window(double delta) : delta_(delta) {
  if (!(delta > 0.0)) throw DomainError("window width must be positive, got " + std::to_string(delta));
}

Multiplexing::Multiplexing(int detectors) : count_(detectors) {
  if (detectors < 1) throw DomainError("multiplexed detector count must be at least 1");
}

int Multiplexing::count() const {
  if (!count_) throw DomainError("infinite multiplexing has no finite count");
  return *count_;
}

PovmDiagonal::PovmDiagonal(std::vector<double> entries, std::string label)
    : entries_(std::move(entries)), label_(std::move(label)) {
  for (std::size_t n = 0; n < entries_.size(); ++n) {
    double& e = entries_[n];
    if (!(e >= -kEntryTolerance && e <= 1.0 + kEntryTolerance)) {
      throw DomainError("POVM entry " + std::to_string(n) + " = " + std::to_string(e) +
                        " outside [0, 1]");
    }
    e = std::clamp(e, 0.0, 1.0);
  }
}

PovmDiagonal PovmDiagonal::ones(std::size_t length, std::string label) {
  return PovmDiagonal(std::vector<double>(length, 1.0), std::move(label));
}

PovmDiagonal spd_on_off(Efficiency eta, std::size_t length) {
  std::vector<double> entries(length);
  for (std::size_t n = 0; n < length; ++n) {
    entries[n] = 1.0 - std::pow(1.0 - eta.value(), static_cast<double>(n));
  }
  return PovmDiagonal(std::move(entries), "on-off");
}

double hd_wavefunction(int n, double x) {
  if (n < 0) throw DomainError("Fock index must be non-negative");
  const double psi0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return psi0;
  double prev = psi0;
  double cur = std::numbers::sqrt2 * x * psi0;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hd_window_acceptance(Window window, std::size_t length) {
  std::vector<double> accept(length, 1.0);
  if (window.is_unbounded()) return accept;
  const double half = std::min(0.5 * window.delta(), kQuadratureCutoff);
  for (std::size_t n = 0; n < length; ++n) {
    const int k = static_cast<int>(n);
    auto density = [k](double x) {
      const double psi = hd_wavefunction(k, x);
      return psi * psi;
    };
    // even integrand
    accept[n] = std::min(1.0, 2.0 * detail::integrate(density, 0.0, half, kQuadratureTolerance));
  }
  return accept;
}

Eigen::MatrixXcd hd_window_matrix(Window window, double theta, std::size_t length) {
  const auto len = static_cast<Eigen::Index>(length);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(len, len);
  const double half = window.is_unbounded() ? kQuadratureCutoff : std::min(0.5 * window.delta(), kQuadratureCutoff);
  for (int m = 0; m < static_cast<int>(length); ++m) {
    for (int n = m; n < static_cast<int>(length); ++n) {
      double overlap = 0.0;
      if ((m + n) % 2 == 0) {
        auto integrand = [m, n](double x) { return hd_wavefunction(m, x) * hd_wavefunction(n, x); };
        overlap = 2.0 * detail::integrate(integrand, 0.0, half, kQuadratureTolerance);
      }
      const std::complex<double> phase = std::polar(1.0, (n - m) * theta);
      out(m, n) = overlap * phase;
      out(n, m) = std::conj(out(m, n));
    }
  }
  return out;
}

PovmDiagonal bernoulli_loss(const PovmDiagonal& diag, Efficiency eta) {
  const double e = eta.value();
  const auto& in = diag.entries();
  std::vector<double> out(in.size(), 0.0);
  for (std::size_t n = 0; n < in.size(); ++n) {
    const int nn = static_cast<int>(n);
    double sum = 0.0;
    for (int m = 0; m <= nn; ++m) {
      sum += detail::binomial(nn, m) * std::pow(e, m) * std::pow(1.0 - e, nn - m) * in[static_cast<std::size_t>(m)];
    }
    out[n] = sum;
  }
  return PovmDiagonal(std::move(out), diag.label());
}

PovmDiagonal hd_windowed(Window window, Efficiency eta_hd, std::size_t length) {
  PovmDiagonal lossless(hd_window_acceptance(window, length), "homodyne-window");
  return bernoulli_loss(lossless, eta_hd);
}

PovmDiagonal pnr_single_click(Efficiency eta, Multiplexing detectors, std::size_t length) {
  const double e = eta.value();
  std::vector<double> entries(length, 0.0);
  for (std::size_t n = 1; n < length; ++n) {
    const int nn = static_cast<int>(n);
    if (detectors.is_infinite()) {
      // only the k = 1 term survives N^(1-k) as N -> infinity
      entries[n] = nn * e * std::pow(1.0 - e, nn - 1);
      continue;
    }
    const double count = detectors.count();
    double sum = 0.0;
    for (int k = 1; k <= nn; ++k) {
      sum += detail::binomial(nn, k) * std::pow(e, k) * std::pow(1.0 - e, nn - k) * std::pow(count, 1 - k);
    }
    entries[n] = sum;
  }
  std::string label = detectors.is_infinite() ? "pnr-inf" : "pnr-" + std::to_string(detectors.count());
  return PovmDiagonal(std::move(entries), std::move(label));
}

}  // namespace hbsm
