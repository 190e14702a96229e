#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "hn/dos.hpp"
#include "hn/dynamics.hpp"
#include "hn/grid.hpp"
#include "hn/spectrum.hpp"

using namespace hn;

static const double kGolden = 0.6180339887498949;
static const double kPi = 3.14159265358979323846;

static BaseSystem free_base() { return BaseSystem::rotation(kGolden, 0.0); }
static Potential zero_pot() { return Potential::fourier({}); }

static LyapunovField oracle_field(const GridSpec& grid) {
  LyapunovField f;
  f.grid = grid;
  std::size_t total = static_cast<std::size_t>(grid.nx) * grid.ny;
  f.value.resize(total);
  f.stderr_.assign(total, 1e-9);
  f.flag.assign(total, 0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      f.at(i, j) = oracle_free_L(grid.node(i, j));
  return f;
}

TEST_CASE("counting measure has n uniform atoms") {
  BaseSystem b = free_base();
  EmpiricalMeasure mu = empirical_dos(b, Potential::cosine(1.0), b.initial_phase, 3, 0.0);
  REQUIRE(mu.atoms.size() == 3);
  CHECK(mu.total == doctest::Approx(1.0).epsilon(1e-12));
  for (const Atom& a : mu.atoms) CHECK(a.weight == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("free atoms lie on the circulant loci") {
  BaseSystem b = free_base();
  EmpiricalMeasure mu1 = empirical_dos(b, zero_pot(), b.initial_phase, 64, 1.0);
  double a = 2.0 * std::cosh(1.0), bb = 2.0 * std::sinh(1.0);
  for (const Atom& at : mu1.atoms)
    CHECK(std::abs(std::hypot(at.location.real() / a, at.location.imag() / bb) - 1.0) < 1e-9);

  EmpiricalMeasure mu0 = empirical_dos(b, zero_pot(), b.initial_phase, 64, 0.0);
  for (const Atom& at : mu0.atoms) {
    CHECK(std::abs(at.location.imag()) < 1e-9);
    CHECK(std::abs(at.location.real()) < 2.0 + 1e-9);
  }
}

TEST_CASE("log potential closed forms") {
  EmpiricalMeasure single{{{cplx(0.0), 1.0}}, 1.0};
  CHECK(log_potential(single, cplx(std::exp(1.0))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(log_potential(single, cplx(0.0)) ==
        -std::numeric_limits<double>::infinity());

  BaseSystem b = free_base();
  EmpiricalMeasure mu = empirical_dos(b, zero_pot(), b.initial_phase, 512, 0.0);
  CHECK(std::abs(log_potential(mu, cplx(3.0)) - std::log((3.0 + std::sqrt(5.0)) / 2.0)) < 1e-2);
}

TEST_CASE("log potential is translation covariant") {
  BaseSystem b = free_base();
  EmpiricalMeasure mu = empirical_dos(b, Potential::cosine(1.0), b.initial_phase, 32, 0.5);
  cplx c(0.37, -1.21), z(2.5, 0.4);
  EmpiricalMeasure shifted = mu;
  for (Atom& a : shifted.atoms) a.location += c;
  CHECK(log_potential(shifted, z + c) == log_potential(mu, z));
}

TEST_CASE("log potential matches total log z at large z") {
  BaseSystem b = free_base();
  EmpiricalMeasure mu = empirical_dos(b, Potential::cosine(2.0), b.initial_phase, 128, 0.5);
  cplx z(1000.0, 0.0);
  CHECK(std::abs(log_potential(mu, z) - mu.total * std::log(std::abs(z))) < 0.01);
}

TEST_CASE("subharmonic mean value inequality") {
  BaseSystem b = free_base();
  EmpiricalMeasure mu = empirical_dos(b, zero_pot(), b.initial_phase, 64, 0.5);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(-2.0, 2.0);
  const double h = 0.05;
  int tested = 0;
  while (tested < 100) {
    cplx z(ux(rng), uy(rng));
    double dmin = 1e300;
    for (const Atom& a : mu.atoms) dmin = std::min(dmin, std::abs(a.location - z));
    if (dmin < 2.0 * h) continue;  // stay off the atom set
    double center = log_potential(mu, z);
    double avg = 0.0;
    for (int k = 0; k < 32; ++k) {
      double th = 2.0 * kPi * k / 32;
      avg += log_potential(mu, z + h * cplx(std::cos(th), std::sin(th)));
    }
    avg /= 32.0;
    CHECK(center <= avg + 1e-9);
    ++tested;
  }
}

TEST_CASE("thouless identity and limit at the free model") {
  BaseSystem b = free_base();
  LyapunovCfg lcfg;
  lcfg.n_steps = 50000;
  lcfg.n_phases = 2;
  SUBCASE("g=0, E=3") {
    ThoulessReport rep = thouless_check(b, zero_pot(), b.initial_phase, 512, 0.0,
                                        {cplx(3.0)}, lcfg);
    REQUIRE(rep.probes.size() == 1);
    CHECK(!rep.probes[0].too_close);
    CHECK(rep.max_identity_gap() < 1e-6);
    CHECK(std::abs(rep.probes[0].charpoly_rate - 0.962424) < 5e-3);
    CHECK(std::abs(rep.probes[0].l_plus - 0.962424) < 5e-3);
  }
  SUBCASE("g=1, E=0 inside the ellipse") {
    ThoulessReport rep = thouless_check(b, zero_pot(), b.initial_phase, 512, 1.0,
                                        {cplx(0.0)}, lcfg);
    CHECK(rep.max_identity_gap() < 1e-6);
    CHECK(std::abs(rep.probes[0].charpoly_rate - 1.0) < 5e-3);
    CHECK(rep.probes[0].l_plus == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("cosine at a complex probe") {
    ThoulessReport rep = thouless_check(b, Potential::cosine(2.0), b.initial_phase, 1024,
                                        0.0, {cplx(0.0, 5.0)}, lcfg);
    CHECK(rep.max_identity_gap() < 1e-6);
    CHECK(rep.max_limit_gap() < 1e-2);
  }
}

TEST_CASE("thouless flags probes on top of eigenvalues") {
  BaseSystem b = free_base();
  // -2cos(pi/17) is a Dirichlet eigenvalue; PBC n=16 has eigenvalue -2
  ThoulessReport rep = thouless_check(b, zero_pot(), b.initial_phase, 16, 0.0,
                                      {cplx(-2.0), cplx(5.0)});
  REQUIRE(rep.probes.size() == 2);
  CHECK(rep.probes[0].too_close);
  CHECK(!rep.probes[1].too_close);
}

TEST_CASE("density vanishes where L is harmonic") {
  GridSpec grid{-1.0, 1.0, 0.5, 1.5, 41, 41};
  DensityGrid d = dos_density_from_L(oracle_field(grid), 0.0);
  for (int j = 1; j + 1 < grid.ny; ++j)
    for (int i = 1; i + 1 < grid.nx; ++i)
      if (!d.band[static_cast<std::size_t>(j) * grid.nx + i])
        CHECK(std::abs(d.at(i, j)) < 1e-3);
}

TEST_CASE("density mass is one over a spectrum-covering window") {
  GridSpec grid{-4.0, 4.0, -3.0, 3.0, 201, 151};
  DensityGrid d = dos_density_from_L(oracle_field(grid), 1.0);
  CHECK(d.mass() > 0.95);
  CHECK(d.mass() < 1.05);
}

TEST_CASE("support identity for the free model") {
  GridSpec grid{-3.5, 3.5, -2.6, 2.6, 141, 141};
  LyapunovField f = oracle_field(grid);
  SpectrumSet s = assemble_spectrum(f, 1.0, {{-2.0, 2.0}}, {});
  BaseSystem b = free_base();
  EmpiricalMeasure mu = empirical_dos(b, zero_pot(), b.initial_phase, 1024, 1.0);
  SupportReport rep = support_vs_spectrum(mu, s);
  CHECK(rep.hausdorff_out < 3.0 * s.grid_step);
  CHECK(rep.hausdorff_in < 3.0 * s.grid_step);
}

TEST_CASE("bounded lipschitz distance contracts with n") {
  BaseSystem b = free_base();
  Potential p = Potential::cosine(2.0);
  EmpiricalMeasure m256 = empirical_dos(b, p, b.initial_phase, 256, 0.5);
  EmpiricalMeasure m512 = empirical_dos(b, p, b.initial_phase, 512, 0.5);
  CHECK(bounded_lipschitz_distance(m256, m256) == 0.0);
  CHECK(bounded_lipschitz_distance(m256, m512) < 2e-2);
}

TEST_CASE("hausdorff helpers") {
  std::vector<cplx> a{{0.0, 0.0}, {1.0, 0.0}};
  std::vector<cplx> bl{{0.0, 0.0}};
  CHECK(directed_hausdorff(a, bl) == doctest::Approx(1.0));
  CHECK(directed_hausdorff(bl, a) == doctest::Approx(0.0));
  CHECK(hausdorff_distance(a, bl) == doctest::Approx(1.0));
}
