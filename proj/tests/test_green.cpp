#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "hn/dynamics.hpp"
#include "hn/finite.hpp"
#include "hn/green.hpp"

using namespace hn;

static const double kGolden = 0.6180339887498949;

static BaseSystem free_base() { return BaseSystem::rotation(kGolden, 0.0); }
static Potential zero_pot() { return Potential::fourier({}); }

TEST_CASE("decay fit recovers a geometric rate exactly") {
  GreenWindow gw;
  gw.W = 10;
  int side = 2 * gw.W + 1;
  gw.entries.assign(static_cast<std::size_t>(side) * side, cplx(0.0));
  gw.underflow.assign(gw.entries.size(), 0);
  for (int m = -gw.W; m <= gw.W; ++m)
    for (int n = -gw.W; n <= gw.W; ++n)
      if (m >= n) gw.entries[gw.idx(m, n)] = std::pow(2.0, -(m - n));
  DecayFit fit = decay_fit(gw);
  CHECK(!fit.insufficient_right);
  CHECK(fit.rate_right == doctest::Approx(std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("forward regime on the free model") {
  BaseSystem b = free_base();
  GreenWindow gw = green_forward(b, zero_pot(), b.initial_phase, cplx(0.0), 1.0, 20);
  CHECK(gw.regime == GreenRegime::E_minus_forward);

  SUBCASE("upper triangle vanishes exactly") {
    for (int m = -gw.W; m <= gw.W; ++m)
      for (int n = m; n <= gw.W; ++n)
        CHECK(gw.at(m, n) == cplx(0.0));
  }
  SUBCASE("decay rate meets the bound") {
    DecayFit fit = decay_fit(gw);
    CHECK(!fit.insufficient_right);
    CHECK(fit.rate_right >= 0.95);
  }
  SUBCASE("inverse identity on the interior") {
    CHECK(inverse_residual(gw, b, zero_pot(), b.initial_phase) < 1e-10);
  }
}

TEST_CASE("hyperbolic regime on the free model") {
  BaseSystem b = free_base();
  double L = std::log((3.0 + std::sqrt(5.0)) / 2.0);  // 0.9624
  GreenWindow gw = green_hyperbolic(b, zero_pot(), b.initial_phase, cplx(3.0), 0.5, 20);
  CHECK(gw.regime == GreenRegime::E_plus_hyperbolic);

  SUBCASE("rates match the displayed exponents") {
    DecayFit fit = decay_fit(gw);
    CHECK(!fit.insufficient_right);
    CHECK(!fit.insufficient_left);
    // below the diagonal (m > n) the weight e^{(n-m)g} adds g to the rate;
    // above the diagonal it subtracts g
    CHECK(fit.rate_left >= L - 0.5 - 0.05);
    CHECK(std::abs(fit.rate_left - (L - 0.5)) < 0.1);
    CHECK(std::abs(fit.rate_right - (L + 0.5)) < 0.1);
    CHECK(std::abs(fit.rate_right - fit.rate_left - 2.0 * 0.5) < 0.1);
  }
  SUBCASE("inverse identity on the interior") {
    CHECK(inverse_residual(gw, b, zero_pot(), b.initial_phase) < 1e-8);
  }
}

TEST_CASE("regime preconditions are enforced") {
  BaseSystem b = free_base();
  // forward needs L < g: free E=3 has L=0.962 > g=0.5
  CHECK_THROWS_AS(green_forward(b, zero_pot(), b.initial_phase, cplx(3.0), 0.5, 10),
                  std::invalid_argument);
  // hyperbolic needs L > g: free E=3, g=2
  CHECK_THROWS_AS(green_hyperbolic(b, zero_pot(), b.initial_phase, cplx(3.0), 2.0, 10),
                  std::invalid_argument);
  // hyperbolic needs UH at g=0: free E=1 is elliptic
  CHECK_THROWS_AS(green_hyperbolic(b, zero_pot(), b.initial_phase, cplx(1.0), 0.2, 10),
                  std::invalid_argument);
}

static double resolvent_bound(const GreenWindow& gw) {
  int side = 2 * gw.W + 1;
  std::mt19937_64 rng(777);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::vector<cplx> psi(side, 0.0);
    double norm = 0.0;
    for (int n = -gw.W / 3; n <= gw.W / 3; ++n) {
      psi[n + gw.W] = cplx(nd(rng), nd(rng));
      norm += std::norm(psi[n + gw.W]);
    }
    norm = std::sqrt(norm);
    double out = 0.0;
    for (int m = -gw.W; m <= gw.W; ++m) {
      cplx acc = 0.0;
      for (int n = -gw.W; n <= gw.W; ++n) acc += gw.at(m, n) * psi[n + gw.W];
      out += std::norm(acc);
    }
    worst = std::max(worst, std::sqrt(out) / norm);
  }
  return worst;
}

TEST_CASE("resolvent bound is stable under window doubling") {
  BaseSystem b = free_base();
  Potential p = Potential::cosine(1.0);
  GreenWindow g1 = green_forward(b, p, b.initial_phase, cplx(0.0, 0.0), 1.5, 20);
  GreenWindow g2 = green_forward(b, p, b.initial_phase, cplx(0.0, 0.0), 1.5, 40);
  double c1 = resolvent_bound(g1), c2 = resolvent_bound(g2);
  CHECK(c2 < 1.5 * c1 + 0.1);
}

TEST_CASE("valid green windows imply spectral exclusion") {
  BaseSystem b = free_base();
  // forward at E=0, g=1: PBC cloud at g=1 lies on the ellipse, min distance
  // from 0 is 2sinh(1)
  FiniteOperator op = build_operator(b, zero_pot(), b.initial_phase, 256, 1.0,
                                     Boundary::periodic);
  auto ev = eigenvalues(op).eigenvalues;
  green_forward(b, zero_pot(), b.initial_phase, cplx(0.0), 1.0, 10);
  double dmin = 1e300;
  for (cplx z : ev) dmin = std::min(dmin, std::abs(z));
  CHECK(dmin > 0.5);

  // hyperbolic at E=3, g=0.5
  FiniteOperator op2 = build_operator(b, zero_pot(), b.initial_phase, 256, 0.5,
                                      Boundary::periodic);
  auto ev2 = eigenvalues(op2).eigenvalues;
  green_hyperbolic(b, zero_pot(), b.initial_phase, cplx(3.0), 0.5, 10);
  double dmin2 = 1e300;
  for (cplx z : ev2) dmin2 = std::min(dmin2, std::abs(z - cplx(3.0)));
  CHECK(dmin2 > 0.5);
}
