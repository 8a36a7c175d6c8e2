#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "taubnut/errors.hpp"
#include "taubnut/spectrum.hpp"

using namespace taubnut;
using namespace taubnut::spectrum;

namespace {

ModelParams model(int N, double eta, double k = 1.0, double hbar = 1.0) {
  ModelParams p;
  p.N = N;
  p.eta = eta;
  p.k = k;
  p.hbar = hbar;
  return p;
}

// Both roots of η²E² + 2(kη + ħ²s²)E + k² = 0 by the textbook formula,
// in the cancellation-free form.
std::pair<double, double> quadratic_roots(double eta, double k, double hs2) {
  const double b = 2.0 * (k * eta + hs2);
  const double disc = std::sqrt(b * b - 4.0 * eta * eta * k * k);
  const double q = -0.5 * (b + disc);
  return {k * k / q, q / (eta * eta)};
}

// Number of monomials of degree d in N variables, counted by recursion.
std::uint64_t monomials(int N, int d) {
  if (d < 0) return 0;
  if (N == 1) return 1;
  std::uint64_t c = 0;
  for (int i = 0; i <= d; ++i) c += monomials(N - 1, d - i);
  return c;
}

int sign_changes(const std::function<double(double)>& f, double a, double b, int samples) {
  int changes = 0;
  double prev = f(a);
  for (int i = 1; i <= samples; ++i) {
    const double v = f(a + (b - a) * i / samples);
    if (v * prev < 0.0) ++changes;
    if (v != 0.0) prev = v;
  }
  return changes;
}

}  // namespace

TEST_CASE("Coulomb energies") {
  CHECK(coulomb_energy(model(3, 0), 0, 0) == doctest::Approx(-0.5));
  CHECK(coulomb_energy(model(3, 0, 1.0, 2.0), 0, 0) == doctest::Approx(-0.125));
  CHECK(coulomb_energy(model(2, 0), 0, 0) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(coulomb_energy(model(3, 0, -1.0), 0, 0), NonAttractive);
  CHECK(principal_s(model(5, 0), 2) == 4.0);
}

TEST_CASE("closed-form energy examples") {
  CHECK(energy(model(3, 0), 0, 0).E == doctest::Approx(-0.5).epsilon(1e-15));
  const auto lvl = energy(model(3, 1), 0, 0);
  CHECK(lvl.E == doctest::Approx(-2.0 + std::sqrt(3.0)).epsilon(1e-15));
  CHECK(lvl.E == doctest::Approx(-0.2679491924).epsilon(1e-10));
  CHECK(lvl.K == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-15));
  // Root of 0.04E² + 2.4E + 1 = 0: (−2.4 + √5.6)/0.08.
  CHECK(energy(model(3, 0.2), 0, 0).E == doctest::Approx((-2.4 + std::sqrt(5.6)) / 0.08).epsilon(1e-14));
  CHECK(energy(model(3, 0.2), 0, 0).E == doctest::Approx(-0.41960108450).epsilon(1e-10));
  CHECK(std::abs(quadratic_residual(model(3, 1), lvl)) < 1e-14);

  CHECK_THROWS_AS(energy(model(3, -0.1), 0, 0), SectorError);
  CHECK_THROWS_AS(energy(model(3, 1, -1.0), 0, 0), SectorError);
  CHECK_THROWS_AS(energy(model(3, 1, 0.0), 0, 0), SectorError);
  CHECK_THROWS_AS(energy(model(3, 0), 0, 0, Branch::flipped), SectorError);
  CHECK_THROWS_AS(energy(model(3, 0), -1, 0), BadParams);
}

TEST_CASE("energy matches the independent quadratic root") {
  for (int N : {2, 3, 5, 8}) {
    for (double eta : {0.01, 0.2, 1.0, 5.0, 40.0}) {
      for (double k : {0.5, 1.0, 3.0}) {
        for (double hbar : {0.5, 1.0}) {
          const ModelParams p = model(N, eta, k, hbar);
          for (int n = 0; n <= 4; ++n) {
            for (int l = 0; l <= 3; ++l) {
              const double s = principal_s(p, n + l);
              const auto [phys, other] = quadratic_roots(eta, k, hbar * hbar * s * s);
              const auto lvl = energy(p, n, l);
              CHECK(lvl.E == doctest::Approx(phys).epsilon(1e-13));
              CHECK(energy(p, n, l, Branch::flipped).E == doctest::Approx(other).epsilon(1e-12));
              CHECK(lvl.E < 0.0);
              CHECK(lvl.K > 0.0);
              CHECK(std::abs(quadratic_residual(p, lvl)) < 1e-12 * k * k);
              CHECK(std::abs(casimir_relation_residual(p, lvl)) < 1e-12 * std::max(1.0, hbar * hbar * s * s));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("η = 0 reduces the quadratic to 2ħ²s²E + k² = 0") {
  const ModelParams p = model(4, 0.0, 1.7, 0.8);
  for (int fn = 0; fn < 6; ++fn) {
    const auto lvl = energy(p, fn, 0);
    const double s = principal_s(p, fn);
    CHECK(std::abs(2 * p.hbar * p.hbar * s * s * lvl.E + p.k * p.k) < 1e-14);
  }
}

TEST_CASE("Casimir identity") {
  const ModelParams p = model(3, 1);
  const auto lvl = energy(p, 0, 0);
  CHECK(-(std::pow(std::sqrt(3.0) - 1.0, 2)) / (2 * (-2 + std::sqrt(3.0))) - 1.0 == doctest::Approx(0.0));
  CHECK(std::abs(casimir_relation_residual(p, lvl)) < 1e-14);
  for (double eta : {0.0, 0.2, 1.0, 5.0}) {
    for (int fn = 0; fn <= 10; ++fn) {
      const auto l = energy(model(3, eta), fn, 0);
      const double s2 = std::pow(principal_s(model(3, eta), fn), 2);
      CHECK(std::abs(casimir_relation_residual(model(3, eta), l)) < 1e-12 * s2);
    }
  }
}

TEST_CASE("flat limit and accumulation") {
  for (int fn = 0; fn <= 4; ++fn) {
    for (int l = 0; l <= fn; ++l) {
      const double E = energy(model(3, 1e-8), fn - l, l).E;
      const double C = coulomb_energy(model(3, 1e-8), fn - l, l);
      CHECK(std::abs(E - C) < 1e-7 * std::abs(C));
      CHECK(std::abs(energy(model(3, 1e-8), fn - l, l, Branch::flipped).E) > 1e6);
    }
  }
  const ModelParams p = model(3, 1);
  CHECK(std::abs(energy(p, 100, 0).E) < 1e-3);
  double prev_gap = INFINITY;
  for (int fn = 0; fn < 30; ++fn) {
    const double gap = energy(p, fn + 1, 0).E - energy(p, fn, 0).E;
    CHECK(gap > 0.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("energy series") {
  const auto s = energy_series(model(3, 0), 0, 0);
  CHECK(s.E0 == doctest::Approx(-0.5));
  CHECK(s.c1 == doctest::Approx(0.5));
  CHECK(s.c2 == doctest::Approx(-0.625));
  for (int N : {2, 3, 6}) {
    for (int fn : {0, 1, 3}) {
      const ModelParams p0 = model(N, 0.0, 1.3, 0.9);
      const auto c = energy_series(p0, fn, 0);
      double prev = INFINITY;
      for (double eta : {1e-2, 5e-3, 2.5e-3}) {
        ModelParams p = p0;
        p.eta = eta;
        const double remainder = energy(p, fn, 0).E - (c.E0 + c.c1 * eta + c.c2 * eta * eta);
        if (N == 3 && fn == 0 && eta == 1e-2) CHECK(std::abs(remainder) < 1e-5);
        // Bounded remainder / η³ means roughly ×8 drop per halving.
        if (prev != INFINITY) CHECK(std::abs(remainder) / prev == doctest::Approx(0.125).epsilon(0.05));
        prev = std::abs(remainder);
      }
    }
  }
  CHECK(energy(model(3, 0), 0, 0).E == energy_series(model(3, 0), 0, 0).E0);
}

TEST_CASE("degeneracy") {
  CHECK(degeneracy(3, 0) == 1);
  CHECK(degeneracy(3, 1) == 4);
  CHECK(degeneracy(3, 2) == 9);
  for (int N = 2; N <= 7; ++N) {
    for (int l = 0; l <= 9; ++l) CHECK(harmonic_dimension(N, l) == monomials(N, l) - monomials(N, l - 2));
    for (int fn = 0; fn <= 9; ++fn) {
      std::uint64_t total = 0;
      for (int l = 0; l <= fn; ++l) total += monomials(N, l) - monomials(N, l - 2);
      CHECK(degeneracy(N, fn) == total);
    }
  }
  for (int fn = 0; fn <= 8; ++fn) CHECK(degeneracy(3, fn) == static_cast<std::uint64_t>((fn + 1) * (fn + 1)));
  // E depends on n and l only through n + l.
  for (double eta : {0.0, 0.2, 1.0}) {
    for (int fn = 0; fn <= 8; ++fn) {
      const double E0 = energy(model(3, eta), fn, 0).E;
      for (int l = 1; l <= fn; ++l) CHECK(energy(model(3, eta), fn - l, l).E == E0);
    }
  }
}

TEST_CASE("Kummer parameters on the spectrum") {
  for (double eta : {0.0, 0.4, 2.0}) {
    const ModelParams p = model(4, eta);
    for (int n = 0; n <= 5; ++n) {
      for (int l = 0; l <= 3; ++l) {
        const auto lvl = energy(p, n, l);
        CHECK(kummer_alpha(p, l, lvl.E) == doctest::Approx(n).epsilon(1e-12));
        CHECK(kummer_beta(p, l) == 2 * l + 3);
      }
    }
  }
  CHECK(kummer_rho(model(3, 0), -0.5, 2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(kummer_alpha(model(3, 0), 0, 0.1), PositiveEnergy);
}

TEST_CASE("eigenfunctions") {
  const ModelParams hydrogen = model(3, 0);
  const auto g = energy(hydrogen, 0, 0);
  for (double r : {0.1, 1.0, 3.0}) {
    CHECK(eigenfunction_radial(hydrogen, g, Gauge::direct, r) == doctest::Approx(std::exp(-r)).epsilon(1e-15));
  }
  const ModelParams p = model(3, 1);
  const auto lvl = energy(p, 2, 1);
  CHECK(eigenfunction_radial(p, lvl, Gauge::conformal, 1.0) / eigenfunction_radial(p, lvl, Gauge::direct, 1.0) ==
        doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));

  // Node count equals n.
  for (int n = 0; n <= 4; ++n) {
    for (int l = 0; l <= 2; ++l) {
      const auto level = energy(p, n, l);
      const double u_scale = p.hbar * p.hbar * principal_s(p, n + l) / level.K;
      auto f = [&](double r) { return eigenfunction_radial(p, level, Gauge::direct, r); };
      CHECK(sign_changes(f, 1e-6, 60.0 * u_scale, 20000) == n);
    }
  }
  CHECK_THROWS_AS(eigenfunction_radial(p, lvl, Gauge::direct, 0.0), DomainError);
}

TEST_CASE("normalization") {
  const auto g = energy(model(3, 0), 0, 0);
  CHECK(normalization_constant(model(3, 0), g, Gauge::direct) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(normalization_constant(model(3, 0), g, Gauge::conformal) == doctest::Approx(2.0).epsilon(1e-12));
  // k → 2k: Φ = e^{−kr}, ∫e^{−2kr} r² dr = 1/(4k³), so c = 2k^{3/2}.
  const auto g2 = energy(model(3, 0, 2.0), 0, 0);
  CHECK(normalization_constant(model(3, 0, 2.0), g2, Gauge::direct) == doctest::Approx(2.0 * std::pow(2.0, 1.5)).epsilon(1e-12));

  // Φ_c²w_c = f^{2−N}Φ_d² · r^{N−1}f^N = Φ_d²w_d, so normalized densities coincide.
  for (double eta : {0.2, 1.0, 3.0}) {
    for (int N : {2, 3, 5}) {
      const ModelParams p = model(N, eta);
      for (int n = 0; n <= 3; ++n) {
        const auto lvl = energy(p, n, 1);
        const double cd = normalization_constant(p, lvl, Gauge::direct);
        const double cc = normalization_constant(p, lvl, Gauge::conformal);
        for (double r : {0.3, 2.0}) {
          const double dens_d = std::pow(cd * eigenfunction_radial(p, lvl, Gauge::direct, r), 2) * radial_measure(p, Gauge::direct, r);
          const double dens_c = std::pow(cc * eigenfunction_radial(p, lvl, Gauge::conformal, r), 2) * radial_measure(p, Gauge::conformal, r);
          CHECK(dens_d == doctest::Approx(dens_c).epsilon(1e-10));
        }
      }
    }
  }
  CHECK_THROWS_AS(normalization_constant(model(3, -1), QuantumLevel{0, 0, 0, -0.3, 1.3}, Gauge::direct), SectorError);
}

TEST_CASE("overlaps and measures") {
  const ModelParams p = model(3, 1);
  const auto a = energy(p, 0, 0), b = energy(p, 1, 0);
  CHECK(overlap(p, a, a, Gauge::conformal, Gauge::conformal) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(overlap(p, a, b, Gauge::conformal, Gauge::conformal)) < 1e-10);
  CHECK(std::abs(overlap(p, a, b, Gauge::direct, Gauge::direct)) < 1e-10);
  CHECK(std::abs(overlap(p, a, b, Gauge::conformal, Gauge::direct)) > 1e-3);
  CHECK_THROWS_AS(overlap(p, a, energy(p, 0, 1), Gauge::direct, Gauge::direct), BadParams);
  CHECK(radial_measure(p, Gauge::direct, 2.0) == doctest::Approx(4.0 * 1.5));
  CHECK(radial_measure(p, Gauge::conformal, 2.0) == doctest::Approx(4.0 * std::pow(1.5, 1.5)));
}

TEST_CASE("quantum effective potential") {
  CHECK(quantum_effective_potential(model(3, 0), 0, 1.0) == doctest::Approx(-1.0));
  // At η = 0, N = 3 it collapses to ħ²l(l+1)/(2r²) − k/r.
  for (int l = 0; l <= 3; ++l) {
    for (double r : {0.3, 1.0, 4.0}) {
      CHECK(quantum_effective_potential(model(3, 0), l, r) == doctest::Approx(l * (l + 1) / (2 * r * r) - 1 / r));
    }
  }
  const ModelParams p = model(3, 1);
  CHECK(quantum_effective_potential(p, 0, 1e-8) > 1e6);
  CHECK(std::abs(quantum_effective_potential(p, 0, 1e8)) < 1e-7);
}

TEST_CASE("effective potential minima") {
  const auto m = quantum_effective_minimum(model(3, 0), 1);
  CHECK(m.r_min == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(m.value == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(coulomb_effective_minimum_radius(model(3, 0), 1) == doctest::Approx(2.0));

  try {
    quantum_effective_minimum(model(3, 0), 0);
    FAIL("expected NoMinimum");
  } catch (const NoMinimum& e) {
    CHECK(e.kind() == NoMinimum::Kind::unbounded_at_origin);
  }
  try {
    quantum_effective_minimum(model(2, 1), 0);
    FAIL("expected NoMinimum");
  } catch (const NoMinimum& e) {
    CHECK(e.kind() == NoMinimum::Kind::no_local_minimum);
  }

  // η = 0 minima follow r₀ = ħ²(l(l+N−2) + (N−1)(N−3)/4)/k.
  for (int N : {3, 4, 6}) {
    for (int l = 1; l <= 3; ++l) {
      CHECK(quantum_effective_minimum(model(N, 0), l).r_min ==
            doctest::Approx(coulomb_effective_minimum_radius(model(N, 0), l)).epsilon(1e-6));
    }
  }
  // For η > 0 and N ≥ 3 the minimum is unique and interior.
  for (double eta : {0.2, 1.0, 4.0}) {
    for (int l = 0; l <= 2; ++l) {
      const ModelParams q = model(3, eta);
      const auto mm = quantum_effective_minimum(q, l);
      CHECK(mm.r_min > 0.0);
      CHECK(quantum_effective_potential(q, l, mm.r_min * 0.99) > mm.value);
      CHECK(quantum_effective_potential(q, l, mm.r_min * 1.01) > mm.value);
    }
  }
}
