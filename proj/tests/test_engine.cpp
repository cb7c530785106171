#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ddsim/engine.hpp"
#include "ddsim/errors.hpp"
#include "oracles.hpp"

using namespace ddsim;

namespace {

SimConfig small_config(SequenceKind kind, long long pulses, double sigma) {
  SimConfig c;
  c.fiber_length_m = 10.0;
  c.schedule.kind = kind;
  c.schedule.pulses = pulses;
  c.error_model.sigma_fraction = sigma;
  c.birefringence.correlation_length_m = 1.5;
  c.trials = 13;  // not a multiple of the lane count
  c.master_seed = 77;
  c.input_states = {{"H", PureState::horizontal()},
                    {"D", PureState::diagonal()},
                    {"R", PureState::right_circular()},
                    {"X", PureState::normalized({0.3, 0.1}, {-0.2, 0.9})}};
  return c;
}

// Per-segment density-matrix evolution of one realization.
oracle::M2 oracle_output(const TrialRealization& r, const PureState& psi) {
  std::vector<oracle::Plate> plates;
  for (const auto& e : r.schedule.events()) {
    plates.push_back({r.grid.boundary_index(e.position_m), e.axis_phase_rad, e.angle_rad});
  }
  const auto inc = r.profile.phase_increments();
  return oracle::evolve_segments(oracle::projector(psi.alpha(), psi.beta()),
                                 std::vector<double>(inc.begin(), inc.end()), plates);
}

}  // namespace

TEST(Engine, TrialMatchesPerSegmentOracle) {
  for (auto [kind, pulses] : {std::pair{SequenceKind::kFree, 0LL},
                              std::pair{SequenceKind::kCpmg, 6LL},
                              std::pair{SequenceKind::kKdd, 40LL}}) {
    const auto cfg = small_config(kind, pulses, 0.02);
    for (std::uint64_t t = 0; t < 5; ++t) {
      const auto real = realize_trial(cfg, t);
      const auto out = run_trial(cfg, t);
      ASSERT_EQ(out.states.size(), cfg.input_states.size());
      for (std::size_t s = 0; s < cfg.input_states.size(); ++s) {
        const auto ref = oracle_output(real, cfg.input_states[s].state);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            EXPECT_NEAR(out.states[s](i, j).real(), ref[i][j].real(), 1e-10);
            EXPECT_NEAR(out.states[s](i, j).imag(), ref[i][j].imag(), 1e-10);
          }
      }
    }
  }
}

TEST(Engine, EnsembleMatchesOracleAverage) {
  const auto cfg = small_config(SequenceKind::kKdd, 20, 0.01);
  const auto res = run_ensemble(cfg);
  for (std::size_t s = 0; s < cfg.input_states.size(); ++s) {
    const auto& psi = cfg.input_states[s].state;
    oracle::M2 avg{};
    double sum = 0, sq = 0;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
      const auto rho = oracle_output(realize_trial(cfg, t), psi);
      const double f = oracle::overlap(psi.alpha(), psi.beta(), rho);
      sum += f;
      sq += f * f;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) avg[i][j] += rho[i][j] / double(cfg.trials);
    }
    const double n = double(cfg.trials);
    const double mean = sum / n;
    const double se = std::sqrt((sq - n * mean * mean) / (n - 1) / n);
    EXPECT_NEAR(res.states[s].fidelity_mean, oracle::overlap(psi.alpha(), psi.beta(), avg), 1e-10);
    EXPECT_NEAR(res.states[s].fidelity_mean, mean, 1e-10);
    EXPECT_NEAR(res.states[s].fidelity_stderr, se, 1e-8);
    EXPECT_NEAR(res.states[s].averaged(0, 1).real(), avg[0][1].real(), 1e-10);
  }
}

TEST(Engine, DeterministicAcrossThreadCounts) {
  auto cfg = small_config(SequenceKind::kCpmg, 40, 0.01);
  cfg.trials = 300;
  cfg.threads = 1;
  const auto a = run_ensemble(cfg);
  cfg.threads = 3;
  const auto b = run_ensemble(cfg);
  const auto c = run_ensemble(cfg);
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    EXPECT_EQ(a.states[s].fidelity_mean, b.states[s].fidelity_mean);
    EXPECT_EQ(a.states[s].fidelity_stderr, b.states[s].fidelity_stderr);
    EXPECT_EQ(b.states[s].fidelity_mean, c.states[s].fidelity_mean);
  }
}

TEST(Engine, KernelVariantsAgree) {
  if (!kernels::avx2_available()) GTEST_SKIP() << "no AVX2";
  auto cfg = small_config(SequenceKind::kKdd, 200, 0.01);
  cfg.trials = 64;
  cfg.record_trajectory = true;
  cfg.kernel = kernels::KernelKind::kScalar;
  const auto s = run_ensemble(cfg);
  cfg.kernel = kernels::KernelKind::kAvx2;
  const auto v = run_ensemble(cfg);
  EXPECT_EQ(s.kernel_used, kernels::KernelKind::kScalar);
  EXPECT_EQ(v.kernel_used, kernels::KernelKind::kAvx2);
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    EXPECT_NEAR(s.states[i].fidelity_mean, v.states[i].fidelity_mean, 1e-12);
    for (std::size_t k = 0; k < s.states[i].trajectory_fidelity.size(); ++k) {
      ASSERT_NEAR(s.states[i].trajectory_fidelity[k], v.states[i].trajectory_fidelity[k], 1e-12);
    }
  }
}

TEST(Engine, PlusMinusInjection) {
  SimConfig cfg;
  cfg.fiber_length_m = 1.0;
  cfg.schedule = {SequenceKind::kFree, 0};
  cfg.segments_per_interval = 1;
  cfg.trials = 2;
  const double dphi = 0.3;
  cfg.profile_source = [dphi](const SegmentGrid&, std::uint64_t trial) {
    return NoiseProfile({trial % 2 == 0 ? dphi : -dphi});
  };
  const auto res = run_ensemble(cfg);
  EXPECT_NEAR(res.states[0].fidelity_mean, 1.0, 1e-15);  // H
  EXPECT_NEAR(res.states[1].fidelity_mean, 1.0, 1e-15);  // V
  EXPECT_NEAR(res.states[2].fidelity_mean, 0.977668244562803, 1e-12);
  EXPECT_NEAR(res.states[2].fidelity_mean, oracle::two_profile_d_fidelity(dphi), 1e-12);
}

TEST(Engine, SingleSegmentFreeOracle) {
  SimConfig cfg;
  cfg.fiber_length_m = 1.0;
  cfg.schedule = {SequenceKind::kFree, 0};
  cfg.segments_per_interval = 1;
  cfg.trials = 1;
  cfg.profile_source = [](const SegmentGrid&, std::uint64_t) { return NoiseProfile({0.3}); };
  EXPECT_NEAR(run_ensemble(cfg).states[2].fidelity_mean, 0.9776682445628029, 1e-12);
}

TEST(Engine, FreeEvolutionSignature) {
  SimConfig cfg;
  cfg.schedule = {SequenceKind::kFree, 0};
  cfg.trials = 200;
  const auto res = run_ensemble(cfg);
  EXPECT_NEAR(res.states[0].fidelity_mean, 1.0, 1e-12);
  EXPECT_NEAR(res.states[1].fidelity_mean, 1.0, 1e-12);
  EXPECT_LT(res.states[2].fidelity_mean, 0.9);
  EXPECT_NEAR(res.states[0].fidelity_stderr, 0.0, 1e-15);
  EXPECT_GT(res.states[2].fidelity_stderr, 0.0);
}

TEST(Engine, NoNoiseNoErrorIsPerfect) {
  SimConfig cfg;
  cfg.birefringence.rayleigh.scale_deg_per_m = 0.0;
  cfg.schedule = {SequenceKind::kKdd, 800};
  cfg.trials = 8;
  for (const auto& s : run_ensemble(cfg).states) EXPECT_NEAR(s.fidelity_mean, 1.0, 1e-12);
}

TEST(Engine, StderrShrinksWithTrials) {
  SimConfig cfg;
  cfg.schedule = {SequenceKind::kCpmg, 100};
  cfg.trials = 400;
  const double se1 = run_ensemble(cfg).states[2].fidelity_stderr;
  cfg.trials = 1600;
  const double se2 = run_ensemble(cfg).states[2].fidelity_stderr;
  EXPECT_NEAR(se1 / se2, 2.0, 0.4);
}

TEST(Engine, TrajectoryShape) {
  auto cfg = small_config(SequenceKind::kCpmg, 8, 0.0);
  cfg.record_trajectory = true;
  const auto res = run_ensemble(cfg);
  ASSERT_EQ(res.trajectory_positions_m.size(), 9u);
  EXPECT_NEAR(res.trajectory_positions_m[0], 10.0 / 16, 1e-12);
  EXPECT_DOUBLE_EQ(res.trajectory_positions_m.back(), 10.0);
  for (const auto& s : res.states) {
    ASSERT_EQ(s.trajectory_fidelity.size(), 9u);
    EXPECT_NEAR(s.trajectory_fidelity.back(), s.fidelity_mean, 1e-12);
  }
}

TEST(Engine, CommonRandomNumbersAcrossSequences) {
  // The noise profile of a trial does not depend on the sequence or errors.
  auto a = small_config(SequenceKind::kCpmg, 20, 0.0);
  auto b = small_config(SequenceKind::kKdd, 20, 0.01);
  const auto ra = realize_trial(a, 4);
  const auto rb = realize_trial(b, 4);
  ASSERT_EQ(ra.profile.size(), rb.profile.size());
  for (std::size_t j = 0; j < ra.profile.size(); ++j) {
    EXPECT_EQ(ra.profile.phase_increments()[j], rb.profile.phase_increments()[j]);
  }
}

TEST(Engine, ValidationNamesField) {
  SimConfig cfg;
  cfg.schedule = {SequenceKind::kKdd, 810};
  try {
    cfg.validate();
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("pulses"), std::string::npos);
  }
  cfg.schedule = {SequenceKind::kFree, 4};
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg.schedule = {SequenceKind::kCpmg, 4};
  cfg.segments_per_interval = 3;
  EXPECT_THROW(cfg.validate(), UsageError);
  cfg.segments_per_interval = 8;
  cfg.input_states.clear();
  EXPECT_THROW(cfg.validate(), UsageError);
  EXPECT_THROW(sweep({}), UsageError);
}

TEST(Engine, SweepKeepsOrder) {
  std::vector<SimConfig> cfgs{small_config(SequenceKind::kCpmg, 2, 0.0),
                              small_config(SequenceKind::kKdd, 20, 0.0)};
  const auto res = sweep(cfgs);
  ASSERT_EQ(res.size(), 2u);
  EXPECT_EQ(res[0].config.schedule.kind, SequenceKind::kCpmg);
  EXPECT_EQ(res[1].config.schedule.kind, SequenceKind::kKdd);
}
