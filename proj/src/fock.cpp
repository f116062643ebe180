#include "hbsm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>


#include "hbsm/povm.hpp"

namespace hbsm {

namespace {

constexpr double kLeakTolerance = 1e-14;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

std::size_t total_dim(std::size_t mode_count, const Truncation& trunc) {
  std::size_t dim = 1;
  for (std::size_t i = 0; i < mode_count; ++i) dim *= trunc.local_dim();
  return dim;
}

// Stride of mode position `pos` in the flat index.
std::size_t stride_of(std::size_t pos, std::size_t mode_count, const Truncation& trunc) {
  std::size_t stride = 1;
  for (std::size_t i = pos + 1; i < mode_count; ++i) stride *= trunc.local_dim();
  return stride;
}

void require_unique(const std::vector<ModeLabel>& modes) {
  auto sorted = modes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("duplicate mode label");
  }
}

}  // namespace

Truncation::Truncation(int n_max) : n_max_(n_max) {
  if (n_max < 0 || n_max > kMaxPhotons) {
    throw DomainError("photon cutoff must lie in [0, " + std::to_string(kMaxPhotons) +
                      "], got " + std::to_string(n_max));
  }
}

std::size_t basis_index(std::span<const int> occupation, const Truncation& trunc) {
  std::size_t index = 0;
  for (int n : occupation) {
    if (n < 0 || n > trunc.n_max()) {
      throw DomainError("occupation " + std::to_string(n) + " outside the photon cutoff");
    }
    index = index * trunc.local_dim() + static_cast<std::size_t>(n);
  }
  return index;
}

Occupation basis_occupation(std::size_t index, std::size_t mode_count, const Truncation& trunc) {
  Occupation occ(mode_count, 0);
  for (std::size_t i = mode_count; i-- > 0;) {
    occ[i] = static_cast<int>(index % trunc.local_dim());
    index /= trunc.local_dim();
  }
  return occ;
}

// --- PureKet ---------------------------------------------------------------

PureKet::PureKet(std::vector<ModeLabel> modes, Truncation trunc, ComplexVector amplitudes)
    : modes_(std::move(modes)), trunc_(trunc), amplitudes_(std::move(amplitudes)) {
  require_unique(modes_);
  if (static_cast<std::size_t>(amplitudes_.size()) != total_dim(modes_.size(), trunc_)) {
    throw DomainError("ket dimension does not match modes and cutoff");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw DomainError("ket is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
  }
}

PureKet PureKet::from_terms(std::vector<ModeLabel> modes, Truncation trunc,
                            const std::vector<std::pair<Occupation, Complex>>& terms) {
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(total_dim(modes.size(), trunc)));
  for (const auto& [occ, amp] : terms) {
    if (occ.size() != modes.size()) throw DomainError("occupation length differs from mode count");
    amps(static_cast<Eigen::Index>(basis_index(occ, trunc))) += amp;
  }
  return PureKet(std::move(modes), trunc, std::move(amps));
}

Complex PureKet::amplitude(std::span<const int> occupation) const {
  return amplitudes_(static_cast<Eigen::Index>(basis_index(occupation, trunc_)));
}

// --- MultiModeState --------------------------------------------------------

MultiModeState::MultiModeState(std::vector<ModeLabel> modes, Truncation trunc, ComplexMatrix matrix)
    : modes_(std::move(modes)), trunc_(trunc), matrix_(std::move(matrix)) {}

MultiModeState MultiModeState::from_matrix(std::vector<ModeLabel> modes, Truncation trunc,
                                           ComplexMatrix matrix) {
  require_unique(modes);
  const auto dim = total_dim(modes.size(), trunc);
  if (static_cast<std::size_t>(matrix.rows()) != dim || matrix.rows() != matrix.cols()) {
    throw DomainError("density matrix dimension does not match modes and cutoff");
  }
  MultiModeState state(std::move(modes), trunc, std::move(matrix));
  state.validate();
  return state;
}

MultiModeState MultiModeState::from_ket(const PureKet& ket) {
  const auto& v = ket.amplitudes();
  return MultiModeState(ket.modes(), ket.truncation(), v * v.adjoint());
}

MultiModeState MultiModeState::fock(std::vector<ModeLabel> modes, Truncation trunc,
                                    const Occupation& occupation) {
  if (occupation.size() != modes.size()) throw DomainError("occupation length differs from mode count");
  return from_ket(PureKet::from_terms(std::move(modes), trunc, {{occupation, Complex{1.0, 0.0}}}));
}

std::size_t MultiModeState::mode_position(ModeLabel label) const {
  auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) throw DomainError("unknown mode label " + std::to_string(label));
  return static_cast<std::size_t>(it - modes_.begin());
}

void MultiModeState::validate() const {
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTolerance) {
    throw DomainError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const double tr = trace();
  if (!(tr > 0.0) || tr > 1.0 + kTraceTolerance) {
    throw DomainError("density matrix trace " + std::to_string(tr) + " outside (0, 1]");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  const double smallest = solver.eigenvalues().minCoeff();
  if (smallest < -kPsdTolerance) {
    throw DomainError("density matrix is not positive semidefinite (eigenvalue " +
                      std::to_string(smallest) + ")");
  }
}

// --- operations ------------------------------------------------------------

MultiModeState tensor(const MultiModeState& a, const MultiModeState& b) {
  if (!(a.truncation() == b.truncation())) throw DomainError("tensor: mismatched photon cutoffs");
  std::vector<ModeLabel> modes = a.modes();
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  require_unique(modes);

  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  ComplexMatrix out(ma.rows() * mb.rows(), ma.cols() * mb.cols());
  for (Eigen::Index i = 0; i < ma.rows(); ++i) {
    for (Eigen::Index j = 0; j < ma.cols(); ++j) {
      out.block(i * mb.rows(), j * mb.cols(), mb.rows(), mb.cols()) = ma(i, j) * mb;
    }
  }
  return MultiModeState(std::move(modes), a.truncation(), std::move(out));
}

double bs_fock_amplitude(int n1, int n2, int m1, int m2, double reflectivity) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
    throw DomainError("reflectivity must lie in [0, 1]");
  }
  if (n1 < 0 || n2 < 0 || m1 < 0 || m2 < 0) throw DomainError("photon counts must be non-negative");
  if (n1 + n2 != m1 + m2) return 0.0;

  const double t = std::sqrt(1.0 - reflectivity);
  const double r = std::sqrt(reflectivity);
  // a+^n1 -> sum_j C(n1,j) t^j r^(n1-j) a+^j b+^(n1-j)
  // b+^n2 -> sum_k C(n2,k) t^k (-r)^(n2-k) b+^k a+^(n2-k)
  // Output a+ power is j + n2 - k = m1.
  double sum = 0.0;
  for (int j = 0; j <= n1; ++j) {
    const int k = j + n2 - m1;
    if (k < 0 || k > n2) continue;
    const double sign = ((n2 - k) % 2 == 0) ? 1.0 : -1.0;
    sum += detail::binomial(n1, j) * detail::binomial(n2, k) * std::pow(t, j + k) * std::pow(r, n1 - j + n2 - k) * sign;
  }
  const double norm = 0.5 * (log_factorial(m1) + log_factorial(m2) - log_factorial(n1) - log_factorial(n2));
  return sum * std::exp(norm);
}

Eigen::MatrixXd bs_matrix(double reflectivity, const Truncation& trunc) {
  const auto d = static_cast<int>(trunc.local_dim());
  Eigen::MatrixXd bs = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      const int total = n1 + n2;
      for (int m1 = std::max(0, total - (d - 1)); m1 <= std::min(total, d - 1); ++m1) {
        bs(m1 * d + (total - m1), n1 * d + n2) = bs_fock_amplitude(n1, n2, m1, total - m1, reflectivity);
      }
    }
  }
  return bs;
}

namespace {

struct Hop {
  Eigen::Index out, in;
  double amp;
};

// Nonzero entries of the beamsplitter unitary on the full register. `weight(in)` is the
// population of basis state `in`; blocks the cutoff cannot hold must carry none of it.
template <class Weight>
std::vector<Hop> bs_hops(std::size_t pa, std::size_t pb, std::size_t modes, const Truncation& trunc,
                         double reflectivity, Weight weight) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
    throw DomainError("reflectivity must lie in [0, 1]");
  }
  if (pa == pb) throw DomainError("beamsplitter needs two distinct modes");
  const int n_max = trunc.n_max();
  const std::size_t dim = total_dim(modes, trunc);
  const std::size_t sa = stride_of(pa, modes, trunc);
  const std::size_t sb = stride_of(pb, modes, trunc);

  std::vector<Hop> hops;
  for (std::size_t in = 0; in < dim; ++in) {
    const int n1 = static_cast<int>((in / sa) % trunc.local_dim());
    const int n2 = static_cast<int>((in / sb) % trunc.local_dim());
    const int total = n1 + n2;
    if (total > n_max && weight(in) > kLeakTolerance) {
      throw NumericalError("beamsplitter output exceeds the photon cutoff " + std::to_string(n_max) +
                           "; raise n_max");
    }
    const std::size_t base = in - static_cast<std::size_t>(n1) * sa - static_cast<std::size_t>(n2) * sb;
    for (int m1 = std::max(0, total - n_max); m1 <= std::min(total, n_max); ++m1) {
      const int m2 = total - m1;
      const double amp = bs_fock_amplitude(n1, n2, m1, m2, reflectivity);
      if (amp == 0.0) continue;
      const std::size_t out = base + static_cast<std::size_t>(m1) * sa + static_cast<std::size_t>(m2) * sb;
      hops.push_back({static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in), amp});
    }
  }
  return hops;
}

}  // namespace

MultiModeState apply_bs(const MultiModeState& state, ModeLabel first, ModeLabel second,
                        double reflectivity) {
  const auto& rho = state.matrix();
  const auto hops = bs_hops(state.mode_position(first), state.mode_position(second), state.mode_count(),
                            state.truncation(), reflectivity, [&](std::size_t i) {
                              const auto k = static_cast<Eigen::Index>(i);
                              return std::abs(rho(k, k));
                            });
  // At most n_max + 1 real entries per column, so U rho U^T is applied as two scatters over
  // whole columns rather than through a generic sparse product.
  const auto n = rho.rows();
  const ComplexMatrix rho_t = rho.transpose();
  ComplexMatrix left_t = ComplexMatrix::Zero(n, n);  // (U rho)^T
  for (const auto& h : hops) left_t.col(h.out) += h.amp * rho_t.col(h.in);
  const ComplexMatrix left = left_t.transpose();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& h : hops) out.col(h.out) += h.amp * left.col(h.in);
  return MultiModeState(state.modes(), state.truncation(), std::move(out));
}

PureKet apply_bs(const PureKet& ket, ModeLabel first, ModeLabel second, double reflectivity) {
  const auto& v = ket.amplitudes();
  const auto position = [&](ModeLabel label) {
    const auto it = std::find(ket.modes().begin(), ket.modes().end(), label);
    if (it == ket.modes().end()) throw DomainError("mode " + std::to_string(label) + " is not part of the state");
    return static_cast<std::size_t>(it - ket.modes().begin());
  };
  const auto hops = bs_hops(position(first), position(second), ket.modes().size(), ket.truncation(), reflectivity,
                            [&](std::size_t i) { return std::norm(v(static_cast<Eigen::Index>(i))); });
  ComplexVector out = ComplexVector::Zero(v.size());
  for (const auto& h : hops) out(h.out) += h.amp * v(h.in);
  // renormalize away the rounding so the ket constructor's unit-norm check holds
  out /= out.norm();
  return PureKet(ket.modes(), ket.truncation(), std::move(out));
}

MultiModeState partial_trace(const MultiModeState& state, std::span<const ModeLabel> keep) {
  if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
  const auto& trunc = state.truncation();
  const std::size_t modes = state.mode_count();

  std::vector<bool> kept(modes, false);
  for (ModeLabel label : keep) {
    const auto pos = state.mode_position(label);
    if (kept[pos]) throw DomainError("partial_trace: duplicate mode in keep set");
    kept[pos] = true;
  }
  std::vector<ModeLabel> out_modes;
  for (std::size_t i = 0; i < modes; ++i) {
    if (kept[i]) out_modes.push_back(state.modes()[i]);
  }
  const std::size_t traced_count = modes - out_modes.size();
  const std::size_t out_dim = total_dim(out_modes.size(), trunc);
  const std::size_t traced_dim = total_dim(traced_count, trunc);

  // Split every full index into (kept index, traced index).
  const std::size_t dim = state.dim();
  std::vector<std::size_t> kept_idx(dim), traced_idx(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto occ = basis_occupation(i, modes, trunc);
    std::size_t k = 0, t = 0;
    for (std::size_t m = 0; m < modes; ++m) {
      if (kept[m]) k = k * trunc.local_dim() + static_cast<std::size_t>(occ[m]);
      else t = t * trunc.local_dim() + static_cast<std::size_t>(occ[m]);
    }
    kept_idx[i] = k;
    traced_idx[i] = t;
  }
  // full index lookup by (kept, traced)
  std::vector<std::size_t> full(out_dim * traced_dim);
  for (std::size_t i = 0; i < dim; ++i) full[kept_idx[i] * traced_dim + traced_idx[i]] = i;

  const auto& rho = state.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
  for (std::size_t r = 0; r < out_dim; ++r) {
    for (std::size_t c = 0; c < out_dim; ++c) {
      Complex sum{0.0, 0.0};
      for (std::size_t t = 0; t < traced_dim; ++t) {
        sum += rho(static_cast<Eigen::Index>(full[r * traced_dim + t]),
                   static_cast<Eigen::Index>(full[c * traced_dim + t]));
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sum;
    }
  }
  return MultiModeState(std::move(out_modes), trunc, std::move(out));
}

MultiModeState partial_trace(const PureKet& ket, std::span<const ModeLabel> keep) {
  if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
  const auto& trunc = ket.truncation();
  const auto& labels = ket.modes();
  const std::size_t modes = labels.size();
  std::vector<bool> kept(modes, false);
  for (ModeLabel label : keep) {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw DomainError("mode " + std::to_string(label) + " is not part of the state");
    const auto pos = static_cast<std::size_t>(it - labels.begin());
    if (kept[pos]) throw DomainError("partial_trace: duplicate mode in keep set");
    kept[pos] = true;
  }
  std::vector<ModeLabel> out_modes;
  for (std::size_t i = 0; i < modes; ++i) {
    if (kept[i]) out_modes.push_back(labels[i]);
  }
  const auto out_dim = static_cast<Eigen::Index>(total_dim(out_modes.size(), trunc));
  const auto traced_dim = static_cast<Eigen::Index>(total_dim(modes - out_modes.size(), trunc));

  // amplitudes reshaped to (kept, traced); the reduced state is M M^dagger
  const auto& v = ket.amplitudes();
  ComplexMatrix m = ComplexMatrix::Zero(out_dim, traced_dim);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == Complex{0.0, 0.0}) continue;
    const auto occ = basis_occupation(static_cast<std::size_t>(i), modes, trunc);
    Eigen::Index k = 0, t = 0;
    for (std::size_t j = 0; j < modes; ++j) {
      if (kept[j]) k = k * static_cast<Eigen::Index>(trunc.local_dim()) + occ[j];
      else t = t * static_cast<Eigen::Index>(trunc.local_dim()) + occ[j];
    }
    m(k, t) = v(i);
  }
  ComplexMatrix out = m * m.adjoint();
  return MultiModeState(std::move(out_modes), trunc, std::move(out));
}

ConditionedState condition_on_povm(const MultiModeState& state, ModeLabel mode,
                                   const PovmDiagonal& element, double probability_floor) {
  const auto& trunc = state.truncation();
  const auto& weights = element.entries();
  if (weights.size() < trunc.local_dim()) {
    throw DomainError("POVM element '" + element.label() + "' is shorter than the photon cutoff");
  }
  const std::size_t pos = state.mode_position(mode);
  const std::size_t modes = state.mode_count();
  if (modes < 2) throw DomainError("conditioning needs at least one unmeasured mode");
  const std::size_t stride = stride_of(pos, modes, trunc);
  const std::size_t d = trunc.local_dim();
  const std::size_t dim = state.dim();
  const std::size_t out_dim = dim / d;

  // Index of the remaining modes: drop the digit at `pos`.
  auto reduced = [&](std::size_t i) {
    const std::size_t high = i / (stride * d);
    const std::size_t low = i % stride;
    return high * stride + low;
  };

  const auto& rho = state.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t ni = (i / stride) % d;
    if (weights[ni] == 0.0) continue;
    const std::size_t ri = reduced(i);
    // partner columns carry the same photon number on the measured mode
    for (std::size_t rj = 0; rj < out_dim; ++rj) {
      const std::size_t high = rj / stride;
      const std::size_t low = rj % stride;
      const std::size_t j = (high * d + ni) * stride + low;
      out(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(rj)) +=
          weights[ni] * rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }

  std::vector<ModeLabel> out_modes = state.modes();
  out_modes.erase(out_modes.begin() + static_cast<std::ptrdiff_t>(pos));

  ConditionedState result;
  result.probability = std::clamp(out.trace().real(), 0.0, 1.0);
  if (result.probability <= 0.0 || result.probability < probability_floor) return result;
  out /= out.trace().real();
  result.state = MultiModeState(std::move(out_modes), trunc, std::move(out));
  return result;
}

double fidelity_pure(const MultiModeState& state, const PureKet& target) {
  if (state.modes() != target.modes() || !(state.truncation() == target.truncation())) {
    throw DomainError("fidelity: state and target live on different modes or cutoffs");
  }
  const auto& t = target.amplitudes();
  const double overlap = (t.adjoint() * state.matrix() * t)(0, 0).real();
  return std::clamp(overlap / state.trace(), 0.0, 1.0);
}

}  // namespace hbsm
