#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ddsim/errors.hpp"
#include "ddsim/kernels.hpp"
#include "oracles.hpp"

using namespace ddsim::kernels;

namespace {

struct Batch {
  std::size_t n;
  std::vector<double> dephase, rotation, axis_cos, axis_sin;

  ChainBatch view() const { return {n, dephase, rotation, axis_cos, axis_sin}; }
};

Batch random_batch(std::size_t n, unsigned seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> phase(-3.0, 3.0), err(-0.05, 0.05), ax(0, 6.3);
  Batch b{n, std::vector<double>((n + 1) * kLanes), std::vector<double>(n * kLanes),
          std::vector<double>(n), std::vector<double>(n)};
  for (auto& x : b.dephase) x = phase(g);
  for (auto& x : b.rotation) x = std::numbers::pi * (1 + err(g));
  for (std::size_t k = 0; k < n; ++k) {
    const double a = ax(g);
    b.axis_cos[k] = std::cos(a);
    b.axis_sin[k] = std::sin(a);
  }
  return b;
}

// Column (a, b) of Z_N P_N ... P_1 Z_0 for one lane, by 2x2 products.
std::pair<oracle::C, oracle::C> oracle_column(const Batch& b, std::size_t lane) {
  oracle::M2 u = oracle::dephase(b.dephase[lane]);
  for (std::size_t k = 0; k < b.n; ++k) {
    const double axis = std::atan2(b.axis_sin[k], b.axis_cos[k]);
    u = oracle::mul(oracle::plate(axis, b.rotation[k * kLanes + lane]), u);
    u = oracle::mul(oracle::dephase(b.dephase[(k + 1) * kLanes + lane]), u);
  }
  return {u[0][0], u[1][0]};
}

}  // namespace

TEST(ChainScalar, MatchesOracleProduct) {
  const auto b = random_batch(37, 1);
  Su2Columns out;
  chain_scalar(b.view(), out, {});
  for (std::size_t l = 0; l < kLanes; ++l) {
    const auto [a, bb] = oracle_column(b, l);
    EXPECT_NEAR(out.a_re[l], a.real(), 1e-12);
    EXPECT_NEAR(out.a_im[l], a.imag(), 1e-12);
    EXPECT_NEAR(out.b_re[l], bb.real(), 1e-12);
    EXPECT_NEAR(out.b_im[l], bb.imag(), 1e-12);
  }
}

TEST(ChainScalar, ZeroPulses) {
  Batch b{0, {0.1, 0.2, 0.3, 0.4}, {}, {}, {}};
  Su2Columns out;
  chain_scalar(b.view(), out, {});
  for (std::size_t l = 0; l < kLanes; ++l) {
    EXPECT_NEAR(out.a_re[l], std::cos(b.dephase[l] / 2), 1e-15);
    EXPECT_NEAR(out.a_im[l], std::sin(b.dephase[l] / 2), 1e-15);
    EXPECT_EQ(out.b_re[l], 0.0);
  }
}

TEST(ChainScalar, TrajectoryEndsAtOutput) {
  const auto b = random_batch(9, 2);
  Su2Columns out;
  std::vector<double> traj(trajectory_size(b.n));
  chain_scalar(b.view(), out, traj);
  const std::size_t last = b.n * kColumnComponents * kLanes;
  for (std::size_t l = 0; l < kLanes; ++l) {
    EXPECT_EQ(traj[last + 0 * kLanes + l], out.a_re[l]);
    EXPECT_EQ(traj[last + 3 * kLanes + l], out.b_im[l]);
  }
}

TEST(ChainScalar, StaysUnitOverLongChains) {
  const auto b = random_batch(50000, 3);
  Su2Columns out;
  chain_scalar(b.view(), out, {});
  for (std::size_t l = 0; l < kLanes; ++l) {
    const double norm = out.a_re[l] * out.a_re[l] + out.a_im[l] * out.a_im[l] +
                        out.b_re[l] * out.b_re[l] + out.b_im[l] * out.b_im[l];
    EXPECT_NEAR(norm, 1.0, 1e-13);
  }
}

TEST(Dispatch, ResolveAndParse) {
  EXPECT_EQ(resolve(KernelKind::kScalar), KernelKind::kScalar);
  EXPECT_EQ(resolve(KernelKind::kAuto),
            avx2_available() ? KernelKind::kAvx2 : KernelKind::kScalar);
  if (!avx2_available()) {
    EXPECT_THROW(resolve(KernelKind::kAvx2), ddsim::UsageError);
  }
  for (auto k : {KernelKind::kAuto, KernelKind::kScalar, KernelKind::kAvx2}) {
    EXPECT_EQ(parse_kernel_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_kernel_kind("neon"), ddsim::UsageError);
  EXPECT_EQ(select_chain(KernelKind::kScalar), &chain_scalar);
}

TEST(SincosScalar, MatchesStd) {
  std::vector<double> x{0.0, 1e-9, 0.5, -2.0, 100.0};
  std::vector<double> s(x.size()), c(x.size());
  sincos_scalar(x, s, c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_DOUBLE_EQ(s[i], std::sin(x[i]));
    EXPECT_DOUBLE_EQ(c[i], std::cos(x[i]));
  }
}

#if defined(DDSIM_HAVE_AVX2)

class Avx2 : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!avx2_available()) GTEST_SKIP() << "CPU lacks AVX2/FMA";
  }
};

TEST_F(Avx2, SincosAccuracy) {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> d(-200.0, 200.0);
  std::vector<double> x(4096);
  for (auto& v : x) v = d(g);
  x[0] = 0.0;
  x[1] = std::numbers::pi;
  x[2] = -std::numbers::pi / 2;
  x[3] = 1e-300;
  std::vector<double> s(x.size()), c(x.size());
  sincos_avx2(x, s, c);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ASSERT_NEAR(s[i], std::sin(x[i]), 4e-16) << x[i];
    ASSERT_NEAR(c[i], std::cos(x[i]), 4e-16) << x[i];
  }
}

TEST_F(Avx2, SincosTailLengths) {
  for (std::size_t n : {1u, 3u, 5u, 7u}) {
    std::vector<double> x(n, 0.7), s(n), c(n);
    sincos_avx2(x, s, c);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s[i], std::sin(0.7), 4e-16);
  }
}

TEST_F(Avx2, ChainMatchesScalar) {
  for (std::size_t n : {0u, 1u, 2u, 20u, 800u, 20001u}) {
    const auto b = random_batch(n, 10 + static_cast<unsigned>(n));
    Su2Columns s, v;
    std::vector<double> ts(trajectory_size(n)), tv(trajectory_size(n));
    chain_scalar(b.view(), s, ts);
    chain_avx2(b.view(), v, tv);
    const double tol = 1e-13 * std::sqrt(static_cast<double>(n + 1));
    for (std::size_t l = 0; l < kLanes; ++l) {
      EXPECT_NEAR(s.a_re[l], v.a_re[l], tol);
      EXPECT_NEAR(s.a_im[l], v.a_im[l], tol);
      EXPECT_NEAR(s.b_re[l], v.b_re[l], tol);
      EXPECT_NEAR(s.b_im[l], v.b_im[l], tol);
    }
    for (std::size_t i = 0; i < ts.size(); ++i) ASSERT_NEAR(ts[i], tv[i], tol) << i;
  }
}

#endif
