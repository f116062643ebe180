#pragma once

// Truncated multi-mode Fock-space algebra.
//
// States are dense density matrices over the tensor-product Fock basis with
// row-major mode ordering (the last listed mode varies fastest). Every mode
// shares one photon-number cutoff.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hbsm/errors.hpp"

namespace hbsm {

class PovmDiagonal;
struct ConditionedState;

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ModeLabel = int;

/// Probability below which a measurement outcome is treated as having no
/// support on the state.
inline constexpr double kDefaultProbabilityFloor = 1e-15;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-12;

/// Photon-number cutoff shared by all modes of a state.
class Truncation {
 public:
  static constexpr int kMaxPhotons = 10;

  explicit Truncation(int n_max = 4);

  int n_max() const { return n_max_; }
  std::size_t local_dim() const { return static_cast<std::size_t>(n_max_) + 1; }

  friend bool operator==(const Truncation&, const Truncation&) = default;

 private:
  int n_max_;
};

/// Photon-number configuration of every mode, in mode order.
using Occupation = std::vector<int>;

/// Flat basis index <-> occupation numbers for `mode_count` modes.
std::size_t basis_index(std::span<const int> occupation, const Truncation& trunc);
Occupation basis_occupation(std::size_t index, std::size_t mode_count, const Truncation& trunc);

/// A normalized pure state over a set of modes.
class PureKet {
 public:
  /// Throws DomainError unless the amplitudes have unit norm (1e-12).
  PureKet(std::vector<ModeLabel> modes, Truncation trunc, ComplexVector amplitudes);

  /// Builds a ket from (occupation, amplitude) pairs; the result is
  /// normalized only if the pairs already are.
  static PureKet from_terms(std::vector<ModeLabel> modes, Truncation trunc,
                            const std::vector<std::pair<Occupation, Complex>>& terms);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  const Truncation& truncation() const { return trunc_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  Complex amplitude(std::span<const int> occupation) const;

 private:
  std::vector<ModeLabel> modes_;
  Truncation trunc_;
  ComplexVector amplitudes_;
};

/// Density operator over an ordered list of modes.
///
/// Instances built through `from_matrix` are validated against the
/// Hermiticity, positivity and trace invariants. Operations in this header
/// preserve those invariants analytically and skip re-validation.
class MultiModeState {
 public:
  static MultiModeState from_matrix(std::vector<ModeLabel> modes, Truncation trunc,
                                    ComplexMatrix matrix);
  static MultiModeState from_ket(const PureKet& ket);
  /// Single-mode or multi-mode Fock state |n_1 ... n_M>.
  static MultiModeState fock(std::vector<ModeLabel> modes, Truncation trunc,
                             const Occupation& occupation);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  const Truncation& truncation() const { return trunc_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t mode_count() const { return modes_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  double trace() const { return matrix_.trace().real(); }
  /// Position of `label` in the mode list; throws DomainError if absent.
  std::size_t mode_position(ModeLabel label) const;

  /// Checks every invariant; throws DomainError on violation.
  void validate() const;

 private:
  MultiModeState(std::vector<ModeLabel> modes, Truncation trunc, ComplexMatrix matrix);

  friend MultiModeState tensor(const MultiModeState&, const MultiModeState&);
  friend MultiModeState apply_bs(const MultiModeState&, ModeLabel, ModeLabel, double);
  friend MultiModeState partial_trace(const MultiModeState&, std::span<const ModeLabel>);
  friend MultiModeState partial_trace(const PureKet&, std::span<const ModeLabel>);
  friend ConditionedState condition_on_povm(const MultiModeState&, ModeLabel,
                                            const PovmDiagonal&, double);

  std::vector<ModeLabel> modes_;
  Truncation trunc_;
  ComplexMatrix matrix_;
};

/// Outcome of conditioning a state on one measured mode.
struct ConditionedState {
  /// Normalized state of the unmeasured modes; empty when the outcome has no
  /// support (probability below the floor).
  std::optional<MultiModeState> state;
  double probability = 0.0;

  bool has_support() const { return state.has_value(); }
};

MultiModeState tensor(const MultiModeState& a, const MultiModeState& b);

/// <m1,m2| BS(R) |n1,n2> for the convention
///   a+ -> sqrt(T) a+ + sqrt(R) b+,   b+ -> sqrt(T) b+ - sqrt(R) a+,   T = 1 - R.
/// Non-conserving photon numbers give exactly zero.
double bs_fock_amplitude(int n1, int n2, int m1, int m2, double reflectivity);

/// Two-mode beamsplitter matrix over a local cutoff, indexed by
/// (n1 * d + n2). Entries whose output leaves the cutoff are dropped.
Eigen::MatrixXd bs_matrix(double reflectivity, const Truncation& trunc);

/// rho -> BS rho BS^dagger on the ordered pair (first, second); `first`
/// plays the role of mode a in the convention above. Throws NumericalError
/// if the state has weight on photon blocks that the cutoff cannot hold.
MultiModeState apply_bs(const MultiModeState& state, ModeLabel first, ModeLabel second,
                        double reflectivity);
PureKet apply_bs(const PureKet& ket, ModeLabel first, ModeLabel second, double reflectivity);

/// Traces out every mode not listed in `keep` (result keeps the original
/// relative order of the kept modes).
MultiModeState partial_trace(const MultiModeState& state, std::span<const ModeLabel> keep);
/// Same for a pure state, without forming the full density matrix first.
MultiModeState partial_trace(const PureKet& ket, std::span<const ModeLabel> keep);

/// Measures `mode` with a phase-insensitive POVM element and discards it.
ConditionedState condition_on_povm(const MultiModeState& state, ModeLabel mode,
                                   const PovmDiagonal& element,
                                   double probability_floor = kDefaultProbabilityFloor);

/// <t|rho|t> / Tr(rho), clipped into [0, 1].
double fidelity_pure(const MultiModeState& state, const PureKet& target);

}  // namespace hbsm
