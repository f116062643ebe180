#pragma once

// Success element of the hybrid Bell-state measurement: a tap beamsplitter
// sends a fraction R of the light to an on-off detector while the
// transmitted light is conditioned on a homodyne quadrature window around
// zero. Both detectors must fire.

#include <cstddef>
#include <optional>

#include "hbsm/fock.hpp"
#include "hbsm/povm.hpp"

namespace hbsm {

/// Beamsplitter reflectivity in [0, 1].
class Reflectivity {
 public:
  explicit Reflectivity(double value);
  double value() const { return value_; }

 private:
  double value_;
};

struct HbsmParams {
  Reflectivity reflectivity;
  Window window;
  Efficiency eta_spd;
  Efficiency eta_hd;
};

/// Diagonal of the success element. entries[n] sums the tap routings of n
/// photons: k reflected to the on-off detector, n - k transmitted to the
/// windowed homodyne detector.
PovmDiagonal assemble_hbsm(const HbsmParams& params, std::size_t length = kDefaultPovmLength);

/// Same element built by explicitly conjugating (homodyne x on-off) with the
/// tap beamsplitter acting on |n, 0>. Used to cross-check assemble_hbsm.
PovmDiagonal assemble_hbsm_by_conjugation(const HbsmParams& params, std::size_t length = kDefaultPovmLength);

/// Closed-form diagonal entries for n <= 4 (erf / Gaussian / polynomial
/// terms). Throws DomainError for n > 4.
double closed_form_diag(const HbsmParams& params, int n);

/// Leading behaviour for small R and window: {Pi_11, Pi_22}.
struct AsymptoticElements {
  double single_photon;
  double two_photon;
};
AsymptoticElements asymptotic_elements(const HbsmParams& params);

/// Limit of the element purity as R, window -> 0.
double asymptotic_purity(Efficiency eta_hd);

/// (Pi_11^2 + Pi_22^2) / (Pi_11 + Pi_22)^2. Empty when Pi_11 + Pi_22 falls
/// below `floor` (the ratio is 0/0 there). Only n_cut = 2 is meaningful for
/// this benchmark; larger cuts extend the sums to entries 1..n_cut.
std::optional<double> purity(const PovmDiagonal& diag, int n_cut = 2,
                             double floor = kDefaultProbabilityFloor);

/// Purity limit of the infinitely multiplexed detector:
/// (4 eta^2 - 8 eta + 5) / (3 - 2 eta)^2.
double pnr_purity_limit(Efficiency eta);

/// Largest detection probability over all states, max_{n <= n_cut} entries[n].
double p_max(const PovmDiagonal& diag, int n_cut = 2);

/// Sum of entries 0..n_last, the normalization used for diagonal displays.
double diagonal_trace(const PovmDiagonal& diag, int n_last = 4);

}  // namespace hbsm
