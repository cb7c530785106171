// Randomized property checks. The acceptance binary runs the same families
// at full scale; these keep the unit suite fast.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ddsim/engine.hpp"
#include "ddsim/polarization.hpp"
#include "oracles.hpp"

using namespace ddsim;

namespace {

PureState random_state(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  return PureState::normalized({n(g), n(g)}, {n(g), n(g)});
}

// Rate held constant between echo nodes x = k tau.
ProfileSource node_aligned(std::size_t segments_per_node, std::uint64_t seed) {
  return [segments_per_node, seed](const SegmentGrid& grid, std::uint64_t trial) {
    std::mt19937_64 g(seed * 1000003 + trial);
    std::uniform_real_distribution<double> rate(-200.0, 200.0);
    std::vector<double> rates(grid.segment_count());
    double r = 0;
    for (std::size_t j = 0; j < rates.size(); ++j) {
      if (j % segments_per_node == 0) r = rate(g);
      rates[j] = r;
    }
    return profile_from_rates(grid, rates);
  };
}

}  // namespace

TEST(Property, RandomCompositionsStayUnitary) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> a(-10, 10);
  Unitary2 u = Unitary2::identity();
  EvolutionChain chain(PureState::diagonal().projector());
  for (int i = 0; i < 20000; ++i) {
    const auto step = (i % 2) ? dephasing_unitary(a(g)) : pulse_unitary(a(g), a(g));
    u = step * u;
    chain.apply(step);
    ASSERT_LT(u.unitarity_deviation(), 1e-12) << i;
  }
  EXPECT_TRUE(chain.state().invariant_violation().empty());
}

TEST(Property, FidelityBoundedAndAveragesPhysical) {
  std::mt19937_64 g(2);
  for (int i = 0; i < 2000; ++i) {
    std::vector<DensityMatrix> rhos{random_state(g).projector(), random_state(g).projector(),
                                    DensityMatrix::maximally_mixed()};
    const auto avg = average_states(rhos);
    ASSERT_TRUE(avg.invariant_violation().empty());
    const double f = fidelity(random_state(g), avg);
    ASSERT_GE(f, 0.0);
    ASSERT_LE(f, 1.0);
  }
}

TEST(Property, PerfectPulsesRefocusNodeAlignedProfiles) {
  std::mt19937_64 g(3);
  for (int round = 0; round < 20; ++round) {
    SimConfig cfg;
    cfg.fiber_length_m = 5.0 + round;
    cfg.schedule.kind = round % 2 ? SequenceKind::kKdd : SequenceKind::kCpmg;
    cfg.schedule.pulses = round % 2 ? 20 * (1 + round % 3) : 2 * (1 + round);
    cfg.schedule.base_phase_rad = 0.37 * round;
    cfg.schedule.cpmg_axis_rad = 0.21 * round;
    cfg.trials = 6;
    cfg.input_states = {{"a", random_state(g)}, {"b", random_state(g)}};
    cfg.profile_source = node_aligned(cfg.segments_per_interval, round);
    for (const auto& s : run_ensemble(cfg).states) {
      EXPECT_GE(s.fidelity_mean, 1 - 1e-9) << round;
    }
  }
}

TEST(Property, HalfIntervalProfileIsNotRefocused) {
  // Phase confined to the first half-interval survives any echo train.
  SimConfig cfg;
  cfg.fiber_length_m = 1.0;
  cfg.schedule = {SequenceKind::kCpmg, 4};
  cfg.trials = 1;
  cfg.input_states = {{"D", PureState::diagonal()}};
  cfg.profile_source = [](const SegmentGrid& grid, std::uint64_t) {
    std::vector<double> inc(grid.segment_count(), 0.0);
    for (std::size_t j = 0; j < grid.segment_count() / 8; ++j) inc[j] = 0.1;  // x < tau/2
    return NoiseProfile(inc);
  };
  EXPECT_NEAR(run_ensemble(cfg).states[0].fidelity_mean, oracle::free_d_fidelity(0.4), 1e-12);
}

TEST(Property, GaussianIncrementDecay) {
  // Independent zero-mean increments: F(D) = (1 + e^{-n v / 2}) / 2.
  SimConfig cfg;
  cfg.fiber_length_m = 1.0;
  cfg.schedule = {SequenceKind::kFree, 0};
  cfg.segments_per_interval = 10;
  cfg.trials = 20000;
  cfg.input_states = {{"D", PureState::diagonal()}};
  const double v = 0.02;
  cfg.profile_source = [v](const SegmentGrid& grid, std::uint64_t trial) {
    auto s = RandomStream::for_trial(5, trial, Substream::kAuxiliary);
    return gaussian_increment_profile(grid, v, s);
  };
  const auto r = run_ensemble(cfg).states[0];
  EXPECT_NEAR(r.fidelity_mean, oracle::gaussian_d_decay(10, v), 3 * r.fidelity_stderr);
}

TEST(Property, HorizontalVerticalImmuneToDephasing) {
  SimConfig cfg;
  cfg.schedule = {SequenceKind::kFree, 0};
  cfg.trials = 50;
  cfg.input_states = {{"H", PureState::horizontal()}, {"V", PureState::vertical()}};
  for (const auto& s : run_ensemble(cfg).states) EXPECT_NEAR(s.fidelity_mean, 1.0, 1e-12);
}
