#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "scjitai/dynamics.hpp"
#include "scjitai/errors.hpp"

namespace scjitai {
namespace {

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

SimState state_with(int c, double h, double d) {
  SimState s;
  s.context.c = c;
  s.h = h;
  s.d = d;
  return s;
}

TEST(Params, DefaultsMatchModelTable) {
  const DynamicsParams p;
  EXPECT_EQ(p.sigma, 0.4);
  EXPECT_EQ(p.delta_h, 0.1);
  EXPECT_EQ(p.eps_h, 0.05);
  EXPECT_EQ(p.delta_d, 0.1);
  EXPECT_EQ(p.eps_d, 0.4);
  EXPECT_EQ(p.rho1, 50.0);
  EXPECT_EQ(p.rho2, 200.0);
  EXPECT_EQ(p.m_s, 0.1);
  EXPECT_EQ(p.d_threshold, 0.99);
  EXPECT_EQ(p.horizon, 50);
  EXPECT_NO_THROW(p.validate());
}

TEST(Params, ValidationRejectsOutOfDomain) {
  DynamicsParams p;
  p.sigma = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.eps_d = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.horizon = 0;
  EXPECT_THROW(p.validate(), ConfigError);

  StochasticityConfig s;
  s.a_hd = -0.1;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.kappa_eps_d = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = {};
  s.mode = NoiseMode::uniform;
  s.sigma_s = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Params, VersionMapping) {
  EXPECT_EQ(noise_mode_from_version(0), NoiseMode::deterministic);
  EXPECT_EQ(noise_mode_from_version(1), NoiseMode::uniform);
  EXPECT_EQ(noise_mode_from_version(2), NoiseMode::beta);
  EXPECT_THROW(noise_mode_from_version(3), ConfigError);
  EXPECT_EQ(noise_mode_from_string("beta"), NoiseMode::beta);
  EXPECT_THROW(noise_mode_from_string("gaussian"), ConfigError);
}

TEST(Posterior, MidpointAndKnownValue) {
  EXPECT_EQ(context_posterior(0.5, 0.4), 0.5);
  EXPECT_NEAR(context_posterior(1.0, 0.4), 1.0 / (1.0 + std::exp(-3.125)), 1e-15);
}

TEST(Posterior, MatchesTwoDensityBayesRule) {
  RngState rng(1);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const double sigma = 0.05 + 3.0 * rng.uniform01();
    const double x = -2.0 + 5.0 * rng.uniform01();
    const double f1 = normal_pdf(x, 1.0, sigma);
    const double f0 = normal_pdf(x, 0.0, sigma);
    // Subnormal densities lose relative precision, so the direct ratio is no oracle there.
    if (f0 < 1e-290 || f1 < 1e-290) continue;
    const double direct = f1 / (f0 + f1);
    const double p = context_posterior(x, sigma);
    EXPECT_LE(std::abs(p - direct) / direct, 1e-12) << "x=" << x << " sigma=" << sigma;
    ++checked;
  }
  EXPECT_GT(checked, 7000);
}

TEST(Posterior, StrictlyIncreasingInX) {
  for (double sigma : {0.1, 0.4, 2.0}) {
    double prev = -1.0;
    for (double x = -0.5; x <= 1.5; x += 0.01) {
      const double p = context_posterior(x, sigma);
      EXPECT_GE(p, prev);
      if (p > 1e-12 && p < 1.0 - 1e-12) { EXPECT_GT(p, prev); }
      prev = p;
    }
  }
}

TEST(GenContext, InferredContextFollowsPosterior) {
  RngState rng(2);
  for (int i = 0; i < 5000; ++i) {
    const auto ctx = gen_context(0.4, rng);
    EXPECT_TRUE(ctx.c == 0 || ctx.c == 1);
    EXPECT_EQ(ctx.l, ctx.p > 0.5 ? 1 : 0);
    EXPECT_DOUBLE_EQ(ctx.p, context_posterior(ctx.x, 0.4));
  }
  EXPECT_THROW(gen_context(0.0, rng), DomainError);
}

TEST(GenContext, ErrorRateCurve) {
  const std::pair<double, double> table[] = {{0.2, 0.01}, {0.4, 0.10}, {1.0, 0.30}, {2.0, 0.40}, {10.0, 0.48}};
  RngState rng(3);
  for (auto [sigma, expected] : table) {
    int wrong = 0;
    for (int i = 0; i < 5000; ++i) {
      const auto ctx = gen_context(sigma, rng);
      wrong += ctx.l != ctx.c;
    }
    EXPECT_NEAR(wrong / 5000.0, expected, 0.03) << "sigma=" << sigma;
  }
}

TEST(EpisodeParams, DeterministicPassThrough) {
  RngState rng(4);
  const DynamicsParams base;
  const auto ep = sample_episode_params(base, {}, rng);
  EXPECT_EQ(ep, (EpisodeParams{0.1, 0.05, 0.1, 0.4}));
}

TEST(EpisodeParams, UniformWithinInterval) {
  RngState rng(5);
  StochasticityConfig st;
  st.mode = NoiseMode::uniform;
  st.a_de = 0.5;
  for (int i = 0; i < 1000; ++i) {
    const auto ep = sample_episode_params({}, st, rng);
    EXPECT_GE(ep.delta_d, 0.075);
    EXPECT_LE(ep.delta_d, 0.125);
    EXPECT_GE(ep.eps_d, 0.3);
    EXPECT_LE(ep.eps_d, 0.5);
  }
}

TEST(EpisodeParams, UniformClampsWideWidths) {
  RngState rng(6);
  DynamicsParams base;
  base.eps_d = 0.9;
  StochasticityConfig st;
  st.mode = NoiseMode::uniform;
  st.a_de = 1.0;
  bool hit_one = false;
  for (int i = 0; i < 2000; ++i) {
    const auto ep = sample_episode_params(base, st, rng);
    ASSERT_LE(ep.eps_d, 1.0);
    hit_one |= ep.eps_d == 1.0;
  }
  EXPECT_TRUE(hit_one);
}

TEST(EpisodeParams, BetaMean) {
  RngState rng(7);
  StochasticityConfig st;
  st.mode = NoiseMode::beta;
  st.kappa_delta_h = st.kappa_eps_h = st.kappa_delta_d = st.kappa_eps_d = 1000.0;
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += sample_episode_params({}, st, rng).eps_d;
  EXPECT_NEAR(sum / 10000.0, 0.4, 0.4 * 0.02);
}

TEST(StepDeterministic, NoMessage) {
  RngState rng(8);
  const auto r = step_deterministic(state_with(0, 0.5, 0.3), 0, EpisodeParams::from({}), {}, rng);
  EXPECT_DOUBLE_EQ(r.h_hat, 0.45);
  EXPECT_EQ(r.d_hat, 0.3);
  EXPECT_EQ(r.s_hat, 0.1);
}

TEST(StepDeterministic, MatchingContextMessage) {
  RngState rng(9);
  const auto r = step_deterministic(state_with(1, 0.0, 0.5), 3, EpisodeParams::from({}), {}, rng);
  EXPECT_DOUBLE_EQ(r.h_hat, 0.05);
  EXPECT_DOUBLE_EQ(r.d_hat, 0.45);
  EXPECT_DOUBLE_EQ(r.s_hat, 0.1 + (1.0 - 0.05) * 200.0);
}

TEST(StepDeterministic, WrongContextSaturates) {
  RngState rng(10);
  const auto r = step_deterministic(state_with(1, 0.2, 0.8), 2, EpisodeParams::from({}), {}, rng);
  EXPECT_EQ(r.d_hat, 1.0);
  EXPECT_EQ(r.s_hat, 0.1);
}

TEST(StepDeterministic, NonContextualMessage) {
  RngState rng(11);
  const auto r = step_deterministic(state_with(0, 0.0, 0.5), 1, EpisodeParams::from({}), {}, rng);
  EXPECT_DOUBLE_EQ(r.h_hat, 0.05);
  EXPECT_DOUBLE_EQ(r.d_hat, 0.45);
  EXPECT_DOUBLE_EQ(r.s_hat, 0.1 + 0.95 * 50.0);
}

TEST(StepDeterministic, RejectsBadAction) {
  RngState rng(12);
  EXPECT_THROW(step_deterministic(state_with(0, 0, 0), 4, EpisodeParams::from({}), {}, rng), DomainError);
  EXPECT_THROW(step_deterministic(state_with(0, 0, 0), -1, EpisodeParams::from({}), {}, rng), DomainError);
}

TEST(StepDeterministic, MonotoneActionSemantics) {
  RngState rng(13);
  const auto ep = EpisodeParams::from({});
  for (int i = 0; i < 2000; ++i) {
    const int c = static_cast<int>(rng.below(2));
    const double h = rng.uniform01();
    const double d = rng.uniform01();
    const auto s = state_with(c, h, d);
    for (int a = 0; a < kNumActions; ++a) {
      const auto r = step_deterministic(s, a, ep, {}, rng);
      if (a == 0) {
        EXPECT_LE(r.h_hat, h);
        EXPECT_EQ(r.d_hat, d);
      } else {
        EXPECT_GE(r.h_hat, h);
      }
      if (a == 1 || a == c + 2) { EXPECT_LE(r.d_hat, d); }
      if (a == (1 - c) + 2) { EXPECT_GE(r.d_hat, d); }
    }
  }
}

TEST(StepDeterministic, SurplusOrdering) {
  const DynamicsParams base;
  for (double h : {0.0, 0.3, 0.99}) {
    for (int c : {0, 1}) {
      const double matched = expected_step_count(base, c + 2, c, h);
      const double generic = expected_step_count(base, 1, c, h);
      const double none = expected_step_count(base, 0, c, h);
      EXPECT_GT(matched, generic);
      EXPECT_GT(generic, none);
    }
  }
}

TEST(StateNoise, DeterministicIsIdentity) {
  RngState rng(14);
  const auto v = apply_state_noise(0.3, 0.6, 120.0, {}, rng);
  EXPECT_EQ(v.h, 0.3);
  EXPECT_EQ(v.d, 0.6);
  EXPECT_EQ(v.s, 120.0);
}

TEST(StateNoise, UniformBounds) {
  RngState rng(15);
  StochasticityConfig st;
  st.mode = NoiseMode::uniform;
  st.a_hd = 0.2;
  st.sigma_s = 20.0;
  double s_sum = 0.0, s_sum2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto v = apply_state_noise(0.5, 0.75, 200.0, st, rng);
    ASSERT_GE(v.h, 0.45);
    ASSERT_LE(v.h, 0.55);
    ASSERT_GE(v.d, 0.675);
    ASSERT_LE(v.d, 0.825);
    s_sum += v.s;
    s_sum2 += v.s * v.s;
  }
  const double mean = s_sum / n;
  const double sd = std::sqrt((s_sum2 - n * mean * mean) / (n - 1));
  EXPECT_NEAR(mean, 200.0, 2.0);
  EXPECT_NEAR(sd, 20.0, 1.0);
}

TEST(StateNoise, UniformClampsNearOne) {
  RngState rng(16);
  StochasticityConfig st;
  st.mode = NoiseMode::uniform;
  st.a_hd = 0.5;
  for (int i = 0; i < 1000; ++i) {
    const auto v = apply_state_noise(0.95, 1.0, 100.0, st, rng);
    ASSERT_LE(v.h, 1.0);
    ASSERT_LE(v.d, 1.0);
  }
}

TEST(StateNoise, BetaEndpointsPassThrough) {
  RngState rng(17);
  StochasticityConfig st;
  st.mode = NoiseMode::beta;
  for (int i = 0; i < 100; ++i) {
    const auto v = apply_state_noise(0.0, 1.0, 50.0, st, rng);
    EXPECT_EQ(v.h, 0.0);
    EXPECT_EQ(v.d, 1.0);
  }
}

TEST(Transition, DeterministicStaircase) {
  DynamicsParams base;
  base.sigma = 0.01;
  RngStreams rng(3);
  SimState s = initial_state(base, rng.context);
  const auto ep = EpisodeParams::from(base);
  for (int k = 1; k <= 15; ++k) {
    s = transition(s, 3, ep, base, {}, rng);
    EXPECT_NEAR(s.h, 0.05 * k, 1e-12);
    EXPECT_EQ(s.t, k);
  }
}

TEST(Transition, BoundednessInEveryMode) {
  for (auto mode : {NoiseMode::deterministic, NoiseMode::uniform, NoiseMode::beta}) {
    StochasticityConfig st;
    st.mode = mode;
    st.a_hd = 0.5;
    st.a_de = 0.5;
    st.sigma_s = 20.0;
    st.kappa_h = st.kappa_d = 5.0;
    const DynamicsParams base;
    RngStreams rng(99);
    RngState actions(100);
    for (int ep_i = 0; ep_i < 50; ++ep_i) {
      const auto ep = sample_episode_params(base, st, rng.noise);
      SimState s = initial_state(base, rng.context);
      for (int t = 0; t < 50; ++t) {
        s = transition(s, static_cast<int>(actions.below(4)), ep, base, st, rng);
        ASSERT_GE(s.h, 0.0);
        ASSERT_LE(s.h, 1.0);
        ASSERT_GE(s.d, 0.0);
        ASSERT_LE(s.d, 1.0);
        ASSERT_GE(s.context.p, 0.0);
        ASSERT_LE(s.context.p, 1.0);
        ASSERT_GT(s.s, 0.0);
        ASSERT_TRUE(std::isfinite(s.s));
      }
    }
  }
}

TEST(Transition, SeededReplayIsIdentical) {
  StochasticityConfig st;
  st.mode = NoiseMode::beta;
  st.sigma_s = 10.0;
  auto run = [&] {
    RngStreams rng(5);
    std::vector<SimState> out;
    SimState s = initial_state({}, rng.context);
    const auto ep = sample_episode_params({}, st, rng.noise);
    for (int t = 0; t < 40; ++t) out.push_back(s = transition(s, t % 4, ep, {}, st, rng));
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(Transition, ZeroWidthUniformMatchesDeterministicHD) {
  StochasticityConfig uni;
  uni.mode = NoiseMode::uniform;
  uni.sigma_s = 15.0;
  const DynamicsParams base;
  RngStreams a(21), b(21);
  SimState sa = initial_state(base, a.context);
  SimState sb = initial_state(base, b.context);
  const auto ea = sample_episode_params(base, {}, a.noise);
  const auto eb = sample_episode_params(base, uni, b.noise);
  EXPECT_EQ(ea, eb);
  RngState actions(22);
  for (int t = 0; t < 200; ++t) {
    const int act = static_cast<int>(actions.below(4));
    sa = transition(sa, act, ea, base, {}, a);
    sb = transition(sb, act, eb, base, uni, b);
    ASSERT_EQ(sa.h, sb.h);
    ASSERT_EQ(sa.d, sb.d);
    ASSERT_EQ(sa.context, sb.context);
  }
}

}  // namespace
}  // namespace scjitai
