#include <gtest/gtest.h>

#include <random>

#include "lwrctl/flux_model.hpp"
#include "lwrctl/lwr_solver.hpp"
#include "support.hpp"

using namespace lwrctl;

TEST(FluxModel, FluxValues) {
  const FluxModel m(1.0);
  EXPECT_EQ(flux_eval(m, 0.0), 0.0);
  EXPECT_EQ(flux_eval(m, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(flux_eval(m, 0.5), 0.25);
  EXPECT_DOUBLE_EQ(m.capacity(), 0.25);
  EXPECT_DOUBLE_EQ(FluxModel(2.0).flux(1.0), 0.5);
}

TEST(FluxModel, SpeedValues) {
  const FluxModel m(1.0);
  EXPECT_EQ(flux_deriv(m, 0.5), 0.0);
  EXPECT_EQ(flux_deriv(m, 0.0), 1.0);
  EXPECT_EQ(flux_deriv(m, 1.0), -1.0);
  EXPECT_EQ(FluxModel(3.0).speed(FluxModel(3.0).critical()), 0.0);
}

TEST(FluxModel, PrimitiveValues) {
  const FluxModel m(1.0);
  EXPECT_EQ(flux_primitive(m, 0.0), 0.0);
  EXPECT_NEAR(flux_primitive(m, 1.0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(flux_primitive(m, 0.5), 1.0 / 12.0, 1e-15);
}

TEST(FluxModel, RejectsOutOfRangeDensity) {
  const FluxModel m(1.0);
  EXPECT_THROW(flux_eval(m, -0.01), DomainError);
  EXPECT_THROW(flux_eval(m, 1.01), DomainError);
  EXPECT_THROW(godunov_flux(m, 0.5, 1.5), DomainError);
  EXPECT_THROW(FluxModel(0.0), DomainError);
  EXPECT_THROW(FluxModel(-1.0), DomainError);
}

TEST(FluxModel, ClampsRoundoffDrift) {
  const FluxModel m(1.0);
  EXPECT_EQ(m.checked(-1e-13), 0.0);
  EXPECT_EQ(m.checked(1.0 + 1e-13), 1.0);
  EXPECT_EQ(flux_eval(m, 1.0 + 5e-13), 0.0);
}

TEST(FluxModel, GodunovExamples) {
  const FluxModel m(1.0);
  EXPECT_EQ(godunov_flux(m, 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(godunov_flux(m, 1.0, 0.0), 0.25);
  // Shock with both states in free flow: upwind from the left.
  EXPECT_DOUBLE_EQ(godunov_flux(m, 0.1, 0.3), ref::f(0.1));
  // Congested on both sides: upwind from the right.
  EXPECT_DOUBLE_EQ(godunov_flux(m, 0.7, 0.9), ref::f(0.9));
}

TEST(FluxModel, GodunovConsistency) {
  const FluxModel m(1.0);
  for (int i = 0; i <= 10000; ++i) {
    const double u = i / 10000.0;
    EXPECT_EQ(godunov_flux(m, u, u), flux_eval(m, u)) << "u=" << u;
  }
}

TEST(FluxModel, GodunovMatchesMinMaxDefinition) {
  // For a concave flux the Godunov flux is min f over [uL, uR] when uL <= uR
  // and max f over [uR, uL] otherwise.
  const FluxModel m(1.0);
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 60; ++j) {
      const double uL = i / 60.0;
      const double uR = j / 60.0;
      const double lo = std::min(uL, uR);
      const double hi = std::max(uL, uR);
      double best = uL <= uR ? 1e9 : -1e9;
      for (int k = 0; k <= 600; ++k) {
        const double u = lo + (hi - lo) * k / 600.0;
        best = uL <= uR ? std::min(best, ref::f(u)) : std::max(best, ref::f(u));
      }
      if (lo <= 0.5 && 0.5 <= hi && uL > uR) best = 0.25;
      EXPECT_NEAR(godunov_flux(m, uL, uR), best, 1e-14) << uL << " " << uR;
    }
  }
}

TEST(FluxModel, GodunovIsMonotone) {
  const FluxModel m(1.0);
  const int n = 200;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = i / double(n);
      const double a = j / double(n);
      const double b = (j + 1) / double(n);
      EXPECT_LE(godunov_flux(m, a, u), godunov_flux(m, b, u));
      EXPECT_GE(godunov_flux(m, u, a), godunov_flux(m, u, b));
    }
  }
}

TEST(FluxModel, PrimitiveDifferentiatesToFlux) {
  const FluxModel m(1.0);
  for (double h : {1e-2, 5e-3}) {
    for (int i = 1; i < 100; ++i) {
      const double u = i / 100.0;
      if (u - h < 0.0 || u + h > 1.0) continue;
      const double fd = (m.primitive(u + h) - m.primitive(u - h)) / (2.0 * h);
      // Central difference error for a cubic is exactly F'''h^2/6 = h^2/3.
      EXPECT_NEAR(fd, m.flux(u), h * h / 3.0 + 1e-13);
    }
  }
}

TEST(FluxModel, RiemannExamples) {
  const FluxModel m(1.0);
  EXPECT_NEAR(shock_speed(m, 0.1, 0.8), 0.1, 1e-15);
  EXPECT_EQ(exact_riemann_sample(m, 0.1, 0.8, 0.0), 0.1);
  EXPECT_EQ(exact_riemann_sample(m, 0.1, 0.8, 0.2), 0.8);
  EXPECT_NEAR(shock_speed(m, 0.2, 0.8), 0.0, 1e-15);
  EXPECT_EQ(exact_riemann_sample(m, 0.2, 0.8, -1e-9), 0.2);
  EXPECT_EQ(exact_riemann_sample(m, 0.9, 0.1, 0.0), 0.5);
  EXPECT_EQ(exact_riemann_sample(m, 0.4, 0.4, 0.3), 0.4);
}

TEST(FluxModel, RiemannSampleMatchesReference) {
  const FluxModel m(1.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double uL = ref::uniform(rng, 0, 1);
    const double uR = ref::uniform(rng, 0, 1);
    const double xi = ref::uniform(rng, -1.2, 1.2);
    EXPECT_NEAR(exact_riemann_sample(m, uL, uR, xi), ref::riemann(uL, uR, xi), 1e-14);
  }
}

TEST(FluxModel, RiemannSampleAgreesWithFineGodunov) {
  const FluxModel m(1.0);
  std::mt19937_64 rng(11);
  const std::size_t n = 400;
  const double dx = 1.0 / n;
  for (int trial = 0; trial < 8; ++trial) {
    const double uL = ref::uniform(rng, 0, 1);
    const double uR = ref::uniform(rng, 0, 1);
    GridState s = init_from_profile(0.0, 1.0, n, [&](double x) { return x < 0.5 ? uL : uR; }, m);
    s = advance_interval(s, {uL, uR}, 0.5, kDefaultCfl, m);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err += dx * std::abs(s.cells[i] - exact_riemann_sample(m, uL, uR, (s.center(i) - 0.5) / 0.5));
    }
    EXPECT_LE(err, 2.0 * dx) << "uL=" << uL << " uR=" << uR;
  }
}
