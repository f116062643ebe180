#include <doctest.h>

#include <cmath>

#include "hbsm/protocols.hpp"

using namespace hbsm;

namespace {

PovmDiagonal hbsm_detector(double R = 0.1, double delta = 0.1, double eta_spd = 0.5, double eta_hd = 0.9,
                           std::size_t length = kDefaultPovmLength) {
  return assemble_hbsm({Reflectivity(R), Window(delta), Efficiency(eta_spd), Efficiency(eta_hd)}, length);
}

PovmDiagonal projector(int n, std::size_t length) {
  std::vector<double> e(length, 0.0);
  e[static_cast<std::size_t>(n)] = 1.0;
  return PovmDiagonal(e);
}

const PovmDiagonal kIdealOnOff = spd_on_off(Efficiency(1.0));
const PovmDiagonal kIdealPnr = pnr_single_click(Efficiency(1.0), Multiplexing::infinite());

}  // namespace

TEST_CASE("reference values from an independent state-vector simulation") {
  // tests/oracles/oracles.py: numpy tensors, expm beamsplitter, mpmath windows
  struct Row {
    double c;
    double f_herald, p_herald, f_tele, p_tele, f_swap, p_swap;
  };
  const Row rows[] = {
      {0.25, 0.5004768039292613, 0.0014079568062505151, 0.98080305937326817, 0.00076325864611169166,
       0.947463436611239, 0.00055779175367152295},
      {0.5, 0.75035743252171516, 0.0018781708341172876, 0.92868811739821966, 0.00082186756976067592,
       0.8573762347964391, 0.00082186756976067603},
      {0.75, 0.90017151856537259, 0.0023483848619840595, 0.8502287350119424, 0.00088047649340965975,
       0.66709035770319813, 0.00079222744826745858},
  };
  const auto det = hbsm_detector();
  for (const auto& r : rows) {
    CAPTURE(r.c);
    const auto h = herald(r.c, det);
    const auto t = teleport(r.c, det);
    const auto s = swap(r.c, det);
    CHECK(std::abs(*h.fidelity - r.f_herald) < 1e-12);
    CHECK(std::abs(h.success_prob - r.p_herald) < 1e-15);
    CHECK(std::abs(*t.fidelity - r.f_tele) < 1e-12);
    CHECK(std::abs(t.success_prob - r.p_tele) < 1e-15);
    CHECK(std::abs(*s.fidelity - r.f_swap) < 1e-12);
    CHECK(std::abs(s.success_prob - r.p_swap) < 1e-15);
  }
}

TEST_CASE("heralding") {
  const auto det = hbsm_detector();
  CHECK(*herald(1.0, det).fidelity == doctest::Approx(1.0));
  for (double c : {0.1, 0.5, 0.9}) {
    CHECK(*herald(c, kIdealOnOff).fidelity == doctest::Approx(c).epsilon(1e-13));
    CHECK(herald_baseline(c) == doctest::Approx(c).epsilon(1e-13));
  }
  // the element is phase insensitive, so coherences between |11> and |22> never matter
  for (double c : {0.0, 0.2, 0.5, 0.77, 1.0}) {
    for (const auto& d : {det, kIdealOnOff, pnr_single_click(Efficiency(0.4), Multiplexing(2))}) {
      const auto pure = herald(c, d, InputKind::kPure);
      const auto mixed = herald(c, d, InputKind::kMixed);
      CHECK(std::abs(pure.success_prob - mixed.success_prob) < 1e-12);
      REQUIRE(pure.fidelity.has_value() == mixed.fidelity.has_value());
      if (pure.fidelity) CHECK(std::abs(*pure.fidelity - *mixed.fidelity) < 1e-12);
    }
  }
  // a narrow window beats doing nothing for every interior weight
  for (int k = 1; k < 100; ++k) {
    const double c = k / 100.0;
    CHECK(*herald(c, det).fidelity > herald_baseline(c));
  }
}

TEST_CASE("teleportation") {
  for (double c1 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto out = teleport(c1, hbsm_detector());
    CHECK(std::abs(out.single_photon_prob - 0.25) < 1e-12);
    CHECK(std::abs(out.two_photon_prob - c1 / 4.0) < 1e-12);
    CHECK(*teleport(c1, kIdealPnr).fidelity == doctest::Approx(1.0).epsilon(1e-12));
  }
  // hybrid beats a perfect on-off detector across the input weights
  for (double R : {0.01, 0.1, 0.3, 0.5}) {
    const auto det = hbsm_detector(R);
    for (int k = 1; k <= 100; ++k) {
      const double c1 = k / 100.0;
      CHECK(*teleport(c1, det).fidelity > *teleport(c1, kIdealOnOff).fidelity);
    }
  }
}

TEST_CASE("entanglement swapping") {
  for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto out = swap(c, hbsm_detector());
    CHECK(std::abs(out.single_photon_prob - c * (1.0 - c)) < 1e-12);
    CHECK(std::abs(out.two_photon_prob - 0.5 * c * c) < 1e-12);
  }
  const auto empty = swap(0.0, hbsm_detector());
  CHECK(empty.success_prob == 0.0);
  CHECK_FALSE(empty.fidelity.has_value());
  CHECK(*swap(1.0, kIdealOnOff).fidelity == doctest::Approx(0.0).epsilon(1e-12));

  // the other output port heralds the other Bell state
  for (double c : {0.1, 0.4, 0.5, 0.9}) {
    for (const auto& d : {hbsm_detector(), kIdealOnOff, pnr_single_click(Efficiency(0.7), Multiplexing(5))}) {
      const auto plus = swap(c, d, Truncation{}, SwapPort::kPlus);
      const auto minus = swap(c, d, Truncation{}, SwapPort::kMinus);
      CHECK(std::abs(plus.success_prob - minus.success_prob) < 1e-12);
      CHECK(std::abs(*plus.fidelity - *minus.fidelity) < 1e-12);
    }
  }
  for (double R : {0.01, 0.1, 0.3, 0.5}) {
    const auto det = hbsm_detector(R);
    for (int k = 1; k < 100; ++k) {
      const double c = k / 100.0;
      CHECK(*swap(c, det).fidelity > *swap(c, kIdealOnOff).fidelity);
    }
  }
}

TEST_CASE("success probability decomposes over photon-number outcomes") {
  const Truncation t;
  const std::size_t len = kDefaultPovmLength;
  const std::vector<PovmDiagonal> detectors = {hbsm_detector(0.3, 1.0, 0.7, 0.8), kIdealOnOff,
                                               pnr_single_click(Efficiency(0.5), Multiplexing(2))};
  for (double c : {0.2, 0.6}) {
    const TeleportSetup tele(c, t);
    const SwapSetup sw(c, t);
    for (const auto& d : detectors) {
      double p_herald = 0.0, p_tele = 0.0, p_swap = 0.0;
      for (int n = 0; n <= t.n_max(); ++n) {
        const auto proj = projector(n, len);
        p_herald += herald(c, proj).success_prob * d[static_cast<std::size_t>(n)];
        p_tele += tele.evaluate(proj).success_prob * d[static_cast<std::size_t>(n)];
        p_swap += sw.evaluate(proj).success_prob * d[static_cast<std::size_t>(n)];
      }
      CHECK(std::abs(herald(c, d).success_prob - p_herald) < 1e-12);
      CHECK(std::abs(tele.evaluate(d).success_prob - p_tele) < 1e-12);
      CHECK(std::abs(sw.evaluate(d).success_prob - p_swap) < 1e-12);
      for (const auto& out : {herald(c, d), tele.evaluate(d), sw.evaluate(d)}) {
        CHECK(out.success_prob >= 0.0);
        CHECK(out.success_prob <= 1.0);
        if (out.fidelity) CHECK((*out.fidelity >= 0.0 && *out.fidelity <= 1.0));
      }
    }
  }
}

TEST_CASE("results do not depend on the photon-number cutoff") {
  const std::size_t len = 7;
  const std::vector<PovmDiagonal> detectors = {hbsm_detector(0.1, 0.1, 0.5, 0.9, len),
                                               hbsm_detector(0.5, 2.0, 0.9, 0.6, len),
                                               pnr_single_click(Efficiency(0.8), Multiplexing(2), len)};
  for (double c : {0.1, 0.5, 0.9}) {
    for (const auto& d : detectors) {
      const auto pairs = {std::pair{herald(c, d, InputKind::kPure, Truncation(4)), herald(c, d, InputKind::kPure, Truncation(6))},
                          std::pair{teleport(c, d, Truncation(4)), teleport(c, d, Truncation(6))},
                          std::pair{swap(c, d, Truncation(4)), swap(c, d, Truncation(6))}};
      for (const auto& [a, b] : pairs) {
        CHECK(std::abs(a.success_prob - b.success_prob) < 1e-10);
        CHECK(std::abs(*a.fidelity - *b.fidelity) < 1e-10);
      }
    }
  }
}

TEST_CASE("detector comparison") {
  const std::vector<DetectorSpec> specs = {
      {HbsmDetector{Reflectivity(0.1), Window(0.1), Efficiency(0.9)}},
      {PnrDetector{Multiplexing(1)}},
      {PnrDetector{Multiplexing(2)}},
      {OnOffDetector{}},
  };
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);
  const auto rows = compare_detectors(Benchmark::kPurity, {}, specs, grid);
  REQUIRE(rows.size() == grid.size() * specs.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& h = rows[4 * i];
    const auto& n1 = rows[4 * i + 1];
    const auto& n2 = rows[4 * i + 2];
    const auto& on = rows[4 * i + 3];
    CHECK(h.detector == "hbsm(R=0.1,delta=0.1,eta_hd=0.9)");
    CHECK(*h.value > *n1.value);
    CHECK(*h.value > *n2.value);
    CHECK(*n1.value == doctest::Approx(*on.value).epsilon(1e-14));
    CHECK(n1.probability == doctest::Approx(on.probability).epsilon(1e-14));
  }

  // below the crossover the hybrid measurement still wins teleportation
  const std::vector<DetectorSpec> pair = {{HbsmDetector{Reflectivity(0.1), Window(0.1), Efficiency(0.9)}},
                                          {PnrDetector{Multiplexing::infinite()}}};
  std::vector<double> low;
  for (int k = 1; k < 79; ++k) low.push_back(k / 100.0);
  const auto tele = compare_detectors(Benchmark::kTeleport, {}, pair, low);
  for (std::size_t i = 0; i < low.size(); ++i) CHECK(*tele[2 * i].value >= *tele[2 * i + 1].value);
}

TEST_CASE("crossover efficiencies") {
  const HbsmDetector hybrid{Reflectivity(0.1), Window(0.1), Efficiency(0.9)};
  // brentq root of the same difference in the independent simulation
  const double oracle = 0.8512114735;
  for (auto metric : {CrossoverMetric::kPurity, CrossoverMetric::kTeleportFidelity, CrossoverMetric::kSwapFidelity}) {
    const auto r = find_crossover(metric, hybrid, Multiplexing::infinite());
    REQUIRE(r.efficiency.has_value());
    CHECK(std::abs(*r.efficiency - oracle) < 1e-4);
    CHECK(r.bracket < 1e-4);
  }
  // a two-detector PNR never catches up on purity
  CHECK_FALSE(find_crossover(CrossoverMetric::kPurity, hybrid, Multiplexing(2)).efficiency.has_value());
}

TEST_CASE("weights are validated") {
  CHECK_THROWS_AS(herald(1.2, kIdealOnOff), DomainError);
  CHECK_THROWS_AS(teleport(-0.1, kIdealOnOff), DomainError);
  CHECK_THROWS_AS(swap(2.0, kIdealOnOff), DomainError);
}
