#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pictk/potentials.hpp"
#include "pictk/sampling.hpp"

using namespace pictk;

TEST_CASE("focal parameters") {
  const FocalParams p = FocalParams::make(4, 1.0, 5.0, 100.0);
  CHECK(p.beta > 0);
  CHECK(p.first_break() < p.second_break());
  CHECK(FocalParams::violations(4, 1.0, 5.0, 100.0).empty());
  CHECK_FALSE(FocalParams::violations(4, 1.0, 1.0, 100.0).empty());
  CHECK_THROWS_AS(FocalParams::make(4, 1.0, 1.0, 100.0), std::domain_error);
  CHECK_THROWS_AS(FocalParams::make(4, -1.0, 5.0, 100.0), std::domain_error);
}

TEST_CASE("focal potential derivatives match finite differences") {
  const FocalParams p = FocalParams::make(6, 1.5, 40.0, 200.0);
  for (Orientation o : {Orientation::N, Orientation::D}) {
    const PiecewisePotential f = make_focal_potential(p, o);
    CHECK(f.continuity_defect() < 1e-12);
    const double b1 = p.first_break(), b2 = p.second_break();
    for (double x : {0.3 * b1, 0.7 * b1, b1 + 0.25 * (b2 - b1), b1 + 0.75 * (b2 - b1),
                     b2 + 1.0}) {
      const long double h = 1e-5L;
      const PotentialValue v = f.eval(x);
      const long double fd1 = (f.eval(x + h).f - f.eval(x - h).f) / (2 * h);
      const long double fd2 = (f.eval(x + h).df - f.eval(x - h).df) / (2 * h);
      CHECK(static_cast<double>(std::abs(fd1 - v.df)) < 1e-6 * (1 + std::abs((double)v.df)));
      CHECK(static_cast<double>(std::abs(fd2 - v.d2f)) < 1e-5 * (1 + std::abs((double)v.d2f)));
    }
    // Vanishes past the second breakpoint.
    CHECK(f.eval(b2 + 0.5).f == 0.0L);
    // Middle piece: -f'' + f'^2/2 = -(n-2) sigma/4 for the N profile.
    const PotentialValue m = f.eval(0.5 * (b1 + b2));
    const long double d1 = f.sign() * m.df, d2 = f.sign() * m.d2f;
    CHECK(static_cast<double>(-d2 + d1 * d1 / 2) == doctest::Approx(-(6 - 2) * 1.5 / 4));
  }
}

TEST_CASE("focal checks pass on admissible parameters") {
  const FocalParams p = FocalParams::make(4, 1.0, 5.0, 100.0);
  CHECK(check_focal_regularity(p, 18.01).pass);
  CHECK(check_focal_boundary(p).pass);
  for (Orientation o : {Orientation::N, Orientation::D}) {
    std::vector<MarginSample> curve;
    const Report r = verify_focal_inequality(p, 18.01, o, {10000, 1e-9}, &curve);
    CHECK(r.pass);
    CHECK(r.min_margin() > 0);
    CHECK(curve.size() >= 10000);
    CHECK(r.details.at("middle_identity_residual").get<double>() < 1e-9);
  }
  // Focal radius below 9 sqrt(n/sigma) fails regularity.
  CHECK_FALSE(check_focal_regularity(p, 17.0).pass);
}

TEST_CASE("cutoff") {
  const ChiCutoff chi = make_chi(0.9);
  for (int i = 0; i <= 1000; ++i) {
    const double x = 1.2 * i / 1000.0;
    if (x <= 0.5) CHECK(chi.value(x) == doctest::Approx(-x));
    CHECK(chi.d1(x) <= 1e-12);
    CHECK(chi.d1(x) >= -1.0 - 1e-12);
    CHECK(chi.d2(x) >= -1e-12);
    const double h = 1e-6;
    if (x > h) {
      CHECK(std::abs((chi.value(x + h) - chi.value(x - h)) / (2 * h) - chi.d1(x)) < 1e-6);
      CHECK(std::abs((chi.d1(x + h) - chi.d1(x - h)) / (2 * h) - chi.d2(x)) < 1e-4);
    }
  }
  CHECK(chi.value(1.1) == doctest::Approx(chi.plateau_value()));
  CHECK(check_chi(chi, 10000).pass);
  CHECK_THROWS_AS(make_chi(0.7), std::domain_error);
}

TEST_CASE("bandwidth constants") {
  CHECK(L_chain_constant(4) == doctest::Approx(160.0 / std::numbers::pi).epsilon(1e-14));
  for (int n = 5; n < 200; ++n) CHECK(L_chain_constant(n) < L_chain_constant(n - 1));
  CHECK(L_chain_constant(4) < 51.0);
  CHECK(check_L_chain(4, 1.0, 0.5).pass);
  BandwidthParams p{4, 1.0, 0.3, 1e-13, 5.0, 4.0};
  const double flat = bandwidth_laplace_term(p);
  p.Lambda = 1e-7;
  CHECK(bandwidth_laplace_term(p) == doctest::Approx(flat).epsilon(1e-9));
}

TEST_CASE("pointwise form bounds hold under their preconditions") {
  Rng rng = make_rng(31);
  for (int n : {4, 6}) {
    for (int t = 0; t < 200; ++t) {
      const SymBilinear A = random_symmetric(rng, n - 1);
      FormElement tan(n), nor(n);
      for (int i = 1; i < n; ++i) {
        nor.set(MultiIndex(n, {i, n}), gaussian(rng));
        for (int j = i + 1; j < n; ++j) tan.set(MultiIndex(n, {i, j}), gaussian(rng));
      }
      CHECK(boundary_form_bounds(A, tan, ConvexityMode::TwoConvex).min_margin() > -1e-10);
      CHECK(boundary_form_bounds(A, nor, ConvexityMode::NMinusTwoConvex).min_margin() > -1e-10);

      const double rf = uniform(rng, 1.0, 20.0), lam = uniform(rng, 0.1, 10.0);
      const double rho = uniform(rng, 0.0, 0.5 * rf);
      // Spectrum in [-2/r_f, -2/r_f + cap/n] keeps the trace below cap.
      const double cap = (n - 1) * lam / ((n - 1) + lam * rho);
      const SymBilinear H = random_symmetric_spectrum(rng, n, -2.0 / rf, -2.0 / rf + cap / n);
      CHECK(hessian_form_bounds(H, random_real_form(rng, n, 2), rf, lam, rho).min_margin() >
            -1e-10);
    }
  }
}
