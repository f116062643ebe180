#include "hbsm/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace hbsm {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

PovmDiagonal fock_projector(int n, const Truncation& trunc) {
  std::vector<double> entries(trunc.local_dim(), 0.0);
  entries[static_cast<std::size_t>(n)] = 1.0;
  return PovmDiagonal(std::move(entries), "|" + std::to_string(n) + ">");
}

double event_probability(const MultiModeState& state, ModeLabel mode, int photons) {
  return condition_on_povm(state, mode, fock_projector(photons, state.truncation()), 0.0).probability;
}

// Conditions `mode`, then scores what remains against `target`.
ProtocolOutcome score(const MultiModeState& state, ModeLabel mode, const PovmDiagonal& detector,
                      const PureKet& target) {
  ProtocolOutcome out;
  const auto conditioned = condition_on_povm(state, mode, detector);
  out.success_prob = conditioned.probability;
  if (conditioned.has_support()) out.fidelity = fidelity_pure(*conditioned.state, target);
  out.single_photon_prob = event_probability(state, mode, 1);
  out.two_photon_prob = event_probability(state, mode, 2);
  return out;
}

std::size_t povm_length(const Truncation& trunc) {
  return std::max(kDefaultPovmLength, trunc.local_dim());
}

}  // namespace

double require_weight(double weight, const char* name) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(weight));
  }
  return weight;
}

// --- heralding --------------------------------------------------------------

ProtocolOutcome herald(double c11, const PovmDiagonal& detector, InputKind kind, Truncation trunc) {
  require_weight(c11, "c11");
  const std::vector<ModeLabel> modes = {1, 2};
  MultiModeState input = [&] {
    if (kind == InputKind::kPure) {
      return MultiModeState::from_ket(PureKet::from_terms(
          modes, trunc, {{{1, 1}, Complex{std::sqrt(c11), 0.0}}, {{2, 2}, Complex{std::sqrt(1.0 - c11), 0.0}}}));
    }
    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(trunc.local_dim() * trunc.local_dim()),
                                            static_cast<Eigen::Index>(trunc.local_dim() * trunc.local_dim()));
    const auto one = static_cast<Eigen::Index>(basis_index(std::array{1, 1}, trunc));
    const auto two = static_cast<Eigen::Index>(basis_index(std::array{2, 2}, trunc));
    rho(one, one) = c11;
    rho(two, two) = 1.0 - c11;
    return MultiModeState::from_matrix(modes, trunc, std::move(rho));
  }();
  const auto target = PureKet::from_terms({1}, trunc, {{{1}, Complex{1.0, 0.0}}});
  return score(input, 2, detector, target);
}

double herald_baseline(double c11, Truncation trunc) {
  require_weight(c11, "c11");
  const auto input = MultiModeState::from_ket(PureKet::from_terms(
      {1, 2}, trunc, {{{1, 1}, Complex{std::sqrt(c11), 0.0}}, {{2, 2}, Complex{std::sqrt(1.0 - c11), 0.0}}}));
  const std::array<ModeLabel, 1> keep = {1};
  const auto target = PureKet::from_terms({1}, trunc, {{{1}, Complex{1.0, 0.0}}});
  return fidelity_pure(partial_trace(input, keep), target);
}

// --- teleportation ----------------------------------------------------------

namespace {

MultiModeState teleport_mixed(double c1, const Truncation& trunc) {
  const double a0 = std::sqrt(1.0 - c1) * kInvSqrt2;
  const double a1 = std::sqrt(c1) * kInvSqrt2;
  // (sqrt(c0)|0> + sqrt(c1)|1>)_1 (|01> + |10>)_{23} / sqrt(2)
  const auto ket = PureKet::from_terms({1, 2, 3}, trunc,
                                       {{{0, 0, 1}, Complex{a0, 0.0}},
                                        {{0, 1, 0}, Complex{a0, 0.0}},
                                        {{1, 0, 1}, Complex{a1, 0.0}},
                                        {{1, 1, 0}, Complex{a1, 0.0}}});
  const std::array<ModeLabel, 2> keep = {2, 3};
  return partial_trace(apply_bs(ket, 1, 2, 0.5), keep);
}

}  // namespace

TeleportSetup::TeleportSetup(double c1, Truncation trunc)
    : c1_(require_weight(c1, "c1")),
      mixed_(teleport_mixed(c1, trunc)),
      target_(PureKet::from_terms({3}, trunc,
                                  {{{0}, Complex{std::sqrt(1.0 - c1), 0.0}}, {{1}, Complex{std::sqrt(c1), 0.0}}})) {}

ProtocolOutcome TeleportSetup::evaluate(const PovmDiagonal& detector) const {
  return score(mixed_, 2, detector, target_);
}

ProtocolOutcome teleport(double c1, const PovmDiagonal& detector, Truncation trunc) {
  return TeleportSetup(c1, trunc).evaluate(detector);
}

// --- entanglement swapping --------------------------------------------------

namespace {

MultiModeState swap_mixed(double c01, const Truncation& trunc, ModeLabel discarded) {
  const double a01 = std::sqrt(c01);
  const double a10 = std::sqrt(1.0 - c01);
  // (a01|01> + a10|10>)_{12} (a01|01> + a10|10>)_{34}
  const auto input = PureKet::from_terms({1, 2, 3, 4}, trunc,
                                         {{{0, 1, 0, 1}, Complex{a01 * a01, 0.0}},
                                          {{0, 1, 1, 0}, Complex{a01 * a10, 0.0}},
                                          {{1, 0, 0, 1}, Complex{a10 * a01, 0.0}},
                                          {{1, 0, 1, 0}, Complex{a10 * a10, 0.0}}});
  const auto mixed = apply_bs(input, 2, 4, 0.5);
  std::vector<ModeLabel> keep;
  for (ModeLabel m : {1, 2, 3, 4}) {
    if (m != discarded) keep.push_back(m);
  }
  return partial_trace(mixed, keep);
}

PureKet swap_target(SwapPort port, const Truncation& trunc) {
  const double sign = port == SwapPort::kPlus ? 1.0 : -1.0;
  return PureKet::from_terms({1, 3}, trunc,
                             {{{1, 0}, Complex{kInvSqrt2, 0.0}}, {{0, 1}, Complex{sign * kInvSqrt2, 0.0}}});
}

}  // namespace

SwapSetup::SwapSetup(double c01, Truncation trunc, SwapPort port)
    : c01_(require_weight(c01, "c01")),
      detected_(port == SwapPort::kPlus ? 4 : 2),
      discarded_(port == SwapPort::kPlus ? 2 : 4),
      mixed_(swap_mixed(c01, trunc, discarded_)),
      target_(swap_target(port, trunc)) {}

ProtocolOutcome SwapSetup::evaluate(const PovmDiagonal& detector) const {
  return score(mixed_, detected_, detector, target_);
}

ProtocolOutcome swap(double c01, const PovmDiagonal& detector, Truncation trunc, SwapPort port) {
  return SwapSetup(c01, trunc, port).evaluate(detector);
}

// --- detector comparison ----------------------------------------------------

PovmDiagonal DetectorSpec::build(Efficiency eta_spd, std::size_t length) const {
  struct Builder {
    Efficiency eta;
    std::size_t length;
    PovmDiagonal operator()(const HbsmDetector& d) const {
      return assemble_hbsm(HbsmParams{d.reflectivity, d.window, eta, d.eta_hd}, length);
    }
    PovmDiagonal operator()(const PnrDetector& d) const { return pnr_single_click(eta, d.detectors, length); }
    PovmDiagonal operator()(const OnOffDetector&) const { return spd_on_off(eta, length); }
  };
  return std::visit(Builder{eta_spd, length}, kind);
}

std::string DetectorSpec::label() const {
  struct Labeler {
    std::string operator()(const HbsmDetector& d) const {
      auto fmt = [](double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
      };
      return "hbsm(R=" + fmt(d.reflectivity.value()) + ",delta=" + fmt(d.window.delta()) +
             ",eta_hd=" + fmt(d.eta_hd.value()) + ")";
    }
    std::string operator()(const PnrDetector& d) const {
      return d.detectors.is_infinite() ? "pnr(N=inf)" : "pnr(N=" + std::to_string(d.detectors.count()) + ")";
    }
    std::string operator()(const OnOffDetector&) const { return "on-off"; }
  };
  return std::visit(Labeler{}, kind);
}

namespace {

// Evaluates one benchmark for detectors built at varying efficiencies; the
// protocol state is prepared once.
class BenchmarkEvaluator {
 public:
  BenchmarkEvaluator(Benchmark benchmark, const CompareSettings& settings)
      : benchmark_(benchmark), settings_(settings) {
    if (benchmark == Benchmark::kTeleport) teleport_.emplace(settings.weight, settings.trunc);
    if (benchmark == Benchmark::kSwap) swap_.emplace(settings.weight, settings.trunc);
  }

  // (value, probability)
  std::pair<std::optional<double>, double> operator()(const PovmDiagonal& detector) const {
    switch (benchmark_) {
      case Benchmark::kPurity:
        return {purity(detector, settings_.n_cut), p_max(detector, settings_.n_cut)};
      case Benchmark::kHerald: {
        const auto out = herald(settings_.weight, detector, InputKind::kPure, settings_.trunc);
        return {out.fidelity, out.success_prob};
      }
      case Benchmark::kTeleport: {
        const auto out = teleport_->evaluate(detector);
        return {out.fidelity, out.success_prob};
      }
      case Benchmark::kSwap: {
        const auto out = swap_->evaluate(detector);
        return {out.fidelity, out.success_prob};
      }
    }
    throw DomainError("unknown benchmark");
  }

 private:
  Benchmark benchmark_;
  CompareSettings settings_;
  std::optional<TeleportSetup> teleport_;
  std::optional<SwapSetup> swap_;
};

}  // namespace

std::vector<ComparisonRow> compare_detectors(Benchmark benchmark, const CompareSettings& settings,
                                             const std::vector<DetectorSpec>& detectors,
                                             const std::vector<double>& eta_grid) {
  const BenchmarkEvaluator evaluate(benchmark, settings);
  const auto length = povm_length(settings.trunc);
  std::vector<ComparisonRow> rows;
  rows.reserve(eta_grid.size() * detectors.size());
  for (double eta : eta_grid) {
    const Efficiency efficiency(eta);
    for (const auto& spec : detectors) {
      const auto [value, probability] = evaluate(spec.build(efficiency, length));
      rows.push_back({eta, spec.label(), value, probability});
    }
  }
  return rows;
}

CrossoverResult find_crossover(CrossoverMetric metric, const HbsmDetector& hybrid, Multiplexing pnr,
                               const CompareSettings& settings, double tolerance) {
  const Benchmark benchmark = metric == CrossoverMetric::kPurity           ? Benchmark::kPurity
                              : metric == CrossoverMetric::kTeleportFidelity ? Benchmark::kTeleport
                                                                             : Benchmark::kSwap;
  const BenchmarkEvaluator evaluate(benchmark, settings);
  const auto length = povm_length(settings.trunc);
  const DetectorSpec hybrid_spec{hybrid};
  const DetectorSpec pnr_spec{PnrDetector{pnr}};

  // Positive while the hybrid detector wins.
  auto advantage = [&](double eta) {
    const Efficiency efficiency(eta);
    const auto h = evaluate(hybrid_spec.build(efficiency, length)).first;
    const auto p = evaluate(pnr_spec.build(efficiency, length)).first;
    if (!h || !p) {
      throw NumericalError("crossover metric undefined at eta_spd = " + std::to_string(eta));
    }
    return *h - *p;
  };

  constexpr int kScanPoints = 100;
  double lo = 1.0 / kScanPoints;
  double f_lo = advantage(lo);
  for (int k = 2; k <= kScanPoints; ++k) {
    const double hi = static_cast<double>(k) / kScanPoints;
    const double f_hi = advantage(hi);
    if (f_lo > 0.0 && f_hi <= 0.0) {
      double a = lo;
      double b = hi;
      while (b - a >= tolerance) {
        const double mid = 0.5 * (a + b);
        if (advantage(mid) > 0.0) a = mid;
        else b = mid;
      }
      return {0.5 * (a + b), b - a};
    }
    lo = hi;
    f_lo = f_hi;
  }
  return {};
}

}  // namespace hbsm
