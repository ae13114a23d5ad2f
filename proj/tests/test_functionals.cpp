#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lwrctl/functionals.hpp"
#include "support.hpp"

using namespace lwrctl;
using ref::Q;

namespace {

GridState profile(std::function<double(double)> u, std::size_t n = 200) {
  return init_from_profile(0.0, 1.0, n, u, FluxModel(1.0));
}

double sinusoid(double x) { return 1.0 / 3.0 + 0.2 * std::sin(2.0 * std::numbers::pi * x); }

}  // namespace

TEST(Functionals, LyapunovExamples) {
  const FunctionalParams p;
  EXPECT_EQ(lyapunov_v(profile([&](double) { return p.u_star; }), p), 0.0);
  EXPECT_NEAR(lyapunov_v(profile([&](double) { return p.u_star + 0.1; }), p), 0.005, 1e-15);
  // Independent quadrature of 1/2 * integral of (0.2 sin)^2 on a fine grid.
  double quad = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    quad += 0.5 * std::pow(sinusoid(x) - 1.0 / 3.0, 2) / n;
  }
  EXPECT_NEAR(quad, 0.01, 1e-9);
  EXPECT_NEAR(lyapunov_v(profile(sinusoid), p), quad, 1e-4);
}

TEST(Functionals, BarrierExamples) {
  const FunctionalParams p;
  EXPECT_DOUBLE_EQ(barrier_b(profile([](double) { return 0.0; }), p), 0.0625);
  EXPECT_NEAR(barrier_b(profile([](double) { return 0.25; }), p), 0.0, 1e-15);
  double quad = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) quad += std::pow(sinusoid((i + 0.5) / n), 2) / n;
  EXPECT_NEAR(1.0 / 16.0 - quad, 1.0 / 16.0 - (1.0 / 9.0 + 0.02), 1e-9);
  EXPECT_NEAR(barrier_b(profile(sinusoid), p), 1.0 / 16.0 - quad, 1e-3);
}

TEST(Functionals, GExamples) {
  const FluxModel m(1.0);
  const FunctionalParams p;
  EXPECT_EQ(g_eval(p.u_star, p.u_star, p, m), 0.0);
  EXPECT_EQ(ref::hq(Q(1, 3), Q(1, 3)), Q(-7, 162));
  EXPECT_NEAR(g_eval(0.0, 1.0 / 3.0, p, m), 7.0 / 162.0, 1e-15);
}

TEST(Functionals, KExamples) {
  const FluxModel m(1.0);
  EXPECT_EQ(ref::mtq(Q(1, 2)), Q(1, 24));
  EXPECT_EQ(ref::mtq(Q(1)), Q(-1, 6));
  EXPECT_NEAR(k_eval(0.0, 0.5, m), -1.0 / 24.0, 1e-15);
  EXPECT_NEAR(k_eval(1.0, 0.0, m), -1.0 / 6.0, 1e-15);
  for (double s : {0.0, 0.2, 0.5, 0.9}) EXPECT_EQ(k_eval(s, s, m), 0.0);
}

TEST(Functionals, PotentialsMatchReference) {
  const FluxModel m(1.0);
  FunctionalParams p;
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    p.u_star = ref::uniform(rng, 0, 1);
    const double s = ref::uniform(rng, 0, 1);
    const double z = ref::uniform(rng, 0, 1);
    EXPECT_NEAR(g_eval(s, z, p, m), ref::h(s, p.u_star) - ref::h(z, p.u_star), 1e-15);
    EXPECT_NEAR(k_eval(s, z, m), ref::mt(s) - ref::mt(z), 1e-15);
  }
}

TEST(Functionals, CocycleIdentity) {
  const FluxModel m(1.0);
  const FunctionalParams p;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double s = ref::uniform(rng, 0, 1);
    const double z = ref::uniform(rng, 0, 1);
    const double w = ref::uniform(rng, 0, 1);
    EXPECT_LE(std::abs(g_eval(s, z, p, m) + g_eval(z, w, p, m) - g_eval(s, w, p, m)), 1e-14);
    EXPECT_LE(std::abs(k_eval(s, z, m) + k_eval(z, w, m) - k_eval(s, w, m)), 1e-14);
    EXPECT_EQ(g_eval(s, s, p, m), 0.0);
  }
}

TEST(Functionals, PartialDerivativeSigns) {
  const FluxModel m(1.0);
  for (double u_star : {0.2, 1.0 / 3.0, 0.7}) {
    FunctionalParams p;
    p.u_star = u_star;
    const double delta = p.delta(m);
    const double gamma = p.gamma(m);
    const double eps = 1e-6;
    const double z0 = 0.6;
    for (int i = 1; i < 400; ++i) {
      const double x = i / 400.0;
      if (std::abs(x - delta) < 1e-3 || std::abs(x - gamma) < 1e-3 || std::abs(x - 0.5) < 1e-3) continue;
      const double dgs = (g_eval(x + eps, z0, p, m) - g_eval(x - eps, z0, p, m)) / (2 * eps);
      if (x < delta || x > gamma) EXPECT_LT(dgs, 0.0) << "s=" << x;
      else EXPECT_GT(dgs, 0.0) << "s=" << x;

      const double dgz = (g_eval(z0, x + eps, p, m) - g_eval(z0, x - eps, p, m)) / (2 * eps);
      EXPECT_NEAR(dgz, (x - u_star) * (x - 0.5) / 0.5, 1e-8);

      const double dks = (k_eval(x + eps, z0, m) - k_eval(x - eps, z0, m)) / (2 * eps);
      const double dkz = (k_eval(z0, x + eps, m) - k_eval(z0, x - eps, m)) / (2 * eps);
      if (x < 0.5) {
        EXPECT_GT(dks, 0.0);
        EXPECT_LT(dkz, 0.0);
      } else {
        EXPECT_GT(dkz, 0.0);
      }
    }
  }
}

TEST(Functionals, BudgetExamples) {
  FunctionalParams p;
  EXPECT_EQ(budget_c(0.0, p), 0.0);
  p.alpha_gain = 0.05;
  p.c_cap = INFINITY;
  EXPECT_DOUBLE_EQ(budget_c(0.01, p), 5e-4);
  p.alpha_gain = 1.0;
  p.c_cap = 1e-3;
  EXPECT_DOUBLE_EQ(budget_c(0.01, p), 1e-3);
  EXPECT_THROW(budget_c(-1e-3, p), DomainError);

  FunctionalParams q;
  EXPECT_EQ(budget_d(0.0, q), 0.0);
  EXPECT_DOUBLE_EQ(budget_d(0.06, q), 0.03);
  EXPECT_DOUBLE_EQ(budget_d(-0.02, q), -0.01);
  q.d_cap = 0.01;
  EXPECT_DOUBLE_EQ(budget_d(0.06, q), 0.01);
  EXPECT_DOUBLE_EQ(budget_d(-0.06, q), -0.03);
}

TEST(Functionals, BudgetsAreMonotone) {
  FunctionalParams p;
  p.d_cap = 0.02;
  double prev_c = -1.0;
  double prev_d = -1.0;
  for (int i = -1000; i <= 1000; ++i) {
    const double x = i * 1e-4;
    const double d = budget_d(x, p);
    EXPECT_GE(d, prev_d);
    prev_d = d;
    if (x >= 0.0) {
      const double c = budget_c(x, p);
      EXPECT_GE(c, prev_c);
      prev_c = c;
    }
  }
}

TEST(Functionals, SignBounds) {
  const FunctionalParams p;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const GridState s = profile([&](double) { return ref::uniform(rng, 0, 1); }, 50);
    EXPECT_GE(lyapunov_v(s, p), 0.0);
    EXPECT_LE(barrier_b(s, p), p.u_bar * p.u_bar);
  }
}

TEST(Functionals, DeltaGammaAndValidation) {
  const FluxModel m(1.0);
  FunctionalParams p;
  EXPECT_DOUBLE_EQ(p.delta(m), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(p.gamma(m), 0.5);
  p.u_star = 0.8;
  EXPECT_DOUBLE_EQ(p.delta(m), 0.5);
  EXPECT_DOUBLE_EQ(p.gamma(m), 0.8);
  p.u_star = 2.0;
  EXPECT_THROW(p.validate(m), DomainError);
  FunctionalParams q;
  q.alpha_gain = 0.0;
  EXPECT_THROW(q.validate(m), DomainError);
}
