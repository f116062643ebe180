#pragma once

// The hybrid measurement (or a comparison detector) used inside
// single-photon heralding, teleportation and entanglement swapping.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hbsm/fock.hpp"
#include "hbsm/hybrid.hpp"
#include "hbsm/povm.hpp"

namespace hbsm {

struct ProtocolOutcome {
  /// Empty when the detector has no support on the state.
  std::optional<double> fidelity;
  double success_prob = 0.0;
  /// Probability of exactly one (two) photons at the detected port.
  double single_photon_prob = 0.0;
  double two_photon_prob = 0.0;
};

enum class InputKind { kPure, kMixed };

/// Which beamsplitter output is detected in the swapping protocol. kPlus
/// heralds (|01> + |10>)/sqrt(2) on the remote modes, kMinus the
/// antisymmetric state.
enum class SwapPort { kPlus, kMinus };

/// Validated input weight in [0, 1].
double require_weight(double weight, const char* name);

// --- heralding --------------------------------------------------------------

/// Measures mode 2 of sqrt(c11)|11> + sqrt(1-c11)|22> (or the diagonal
/// mixture) and scores mode 1 against |1>.
ProtocolOutcome herald(double c11, const PovmDiagonal& detector, InputKind kind = InputKind::kPure,
                       Truncation trunc = Truncation{});

/// Fidelity of mode 1 with |1> when mode 2 is simply discarded.
double herald_baseline(double c11, Truncation trunc = Truncation{});

// --- teleportation ----------------------------------------------------------

/// Post-beamsplitter state of the teleportation circuit for a fixed input
/// weight; evaluate() conditions it on any detector.
///
/// Mode 1 holds sqrt(1-c1)|0> + sqrt(c1)|1>, modes (2, 3) the resource
/// (|01> + |10>)/sqrt(2). A balanced beamsplitter mixes modes 1 and 2, mode 2
/// is detected, mode 1 is discarded and mode 3 is compared with the input.
class TeleportSetup {
 public:
  explicit TeleportSetup(double c1, Truncation trunc = Truncation{});
  ProtocolOutcome evaluate(const PovmDiagonal& detector) const;
  double input_weight() const { return c1_; }

 private:
  double c1_;
  MultiModeState mixed_;
  PureKet target_;
};

ProtocolOutcome teleport(double c1, const PovmDiagonal& detector, Truncation trunc = Truncation{});

// --- entanglement swapping --------------------------------------------------

/// Two copies of sqrt(c01)|01> + sqrt(1-c01)|10> on modes (1, 2) and (3, 4).
/// The second mode of each pair (modes 2 and 4) meets on a balanced
/// beamsplitter; one output port is detected, the other discarded, and the
/// remote modes (1, 3) are scored against the heralded Bell state.
class SwapSetup {
 public:
  explicit SwapSetup(double c01, Truncation trunc = Truncation{}, SwapPort port = SwapPort::kPlus);
  ProtocolOutcome evaluate(const PovmDiagonal& detector) const;
  double input_weight() const { return c01_; }

 private:
  double c01_;
  ModeLabel detected_;
  ModeLabel discarded_;
  MultiModeState mixed_;
  PureKet target_;
};

ProtocolOutcome swap(double c01, const PovmDiagonal& detector, Truncation trunc = Truncation{},
                     SwapPort port = SwapPort::kPlus);

// --- detector comparison ----------------------------------------------------

/// A detector family parameterized by the single-photon detector efficiency.
struct HbsmDetector {
  Reflectivity reflectivity;
  Window window;
  Efficiency eta_hd;
};
struct PnrDetector {
  Multiplexing detectors;
};
struct OnOffDetector {};

struct DetectorSpec {
  std::variant<HbsmDetector, PnrDetector, OnOffDetector> kind;

  PovmDiagonal build(Efficiency eta_spd, std::size_t length = kDefaultPovmLength) const;
  std::string label() const;
};

enum class Benchmark { kPurity, kHerald, kTeleport, kSwap };

struct CompareSettings {
  /// Input weight for the protocol benchmarks (c11, c1 or c01).
  double weight = 0.5;
  int n_cut = 2;
  Truncation trunc{};
};

struct ComparisonRow {
  double eta_spd;
  std::string detector;
  /// Purity or fidelity; empty when undefined.
  std::optional<double> value;
  /// P_max for the purity benchmark, success probability otherwise.
  double probability;
};

/// Rows ordered by efficiency, then by detector list order.
std::vector<ComparisonRow> compare_detectors(Benchmark benchmark, const CompareSettings& settings,
                                             const std::vector<DetectorSpec>& detectors,
                                             const std::vector<double>& eta_grid);

enum class CrossoverMetric { kPurity, kTeleportFidelity, kSwapFidelity };

struct CrossoverResult {
  /// Efficiency at which the PNR detector starts to beat the hybrid one;
  /// empty when the sign of the difference never changes on (0, 1].
  std::optional<double> efficiency;
  /// Final bracket width.
  double bracket = 0.0;
};

/// Scans eta_spd on (0, 1] and bisects the first sign change of
/// metric(HBSM) - metric(PNR) down to a bracket below `tolerance`.
CrossoverResult find_crossover(CrossoverMetric metric, const HbsmDetector& hybrid, Multiplexing pnr,
                               const CompareSettings& settings = {}, double tolerance = 1e-4);

}  // namespace hbsm
