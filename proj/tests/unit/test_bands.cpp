#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pictk/bands.hpp"
#include "pictk/error.hpp"

using namespace pictk;

namespace {

SearchConfig quick_search() {
  SearchConfig c;
  c.restarts = 32;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("warping derivatives") {
  const double h = 1e-5;
  for (const Warping& w : {Warping::sine(1.3, 0.7, 0.2), Warping::linear(2.0, 0.5),
                           Warping::constant(3.0),
                           Warping::table({0.0, 0.5, 1.0, 1.5}, {1.0, 1.2, 1.1, 1.4})}) {
    for (double r : {0.3, 0.8, 1.2}) {
      CHECK((w.value(r + h) - w.value(r - h)) / (2 * h) == doctest::Approx(w.d1(r)).epsilon(1e-7));
      CHECK((w.d1(r + h) - w.d1(r - h)) / (2 * h) == doctest::Approx(w.d2(r)).epsilon(1e-5));
    }
  }
  const Warping t = Warping::table({0.0, 0.5, 1.0}, {1.0, 2.0, 1.5});
  CHECK(t.value(0.5) == doctest::Approx(2.0));
  CHECK(t.d2(0.0) == doctest::Approx(0.0));
  CHECK(Warping::sine().radial_curvature(0.4) == doctest::Approx(1.0));
  CHECK(Warping::from_json(t.to_json()).value(0.7) == doctest::Approx(t.value(0.7)));
  CHECK_THROWS_AS(Warping::table({0.0, 0.0}, {1.0, 1.0}), InputError);
  CHECK_THROWS_AS(Warping::from_json(nlohmann::json::parse(R"({"kind": "cosh"})")), InputError);
}

TEST_CASE("band curvature of model warpings") {
  // phi = sin r is the round sphere: sectional curvature 1 everywhere.
  const WarpedBand S{5, 0.3, 1.2, Warping::sine()};
  const CurvTensor R = band_curvature_at(S, 0.7);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) CHECK(sectional(R, i, j) == doctest::Approx(1.0));
  CHECK(R.bianchi_defect() < 1e-12);
  // phi = r is flat space.
  const WarpedBand F{4, 0.5, 2.0, Warping::linear()};
  const CurvTensor Z = band_curvature_at(F, 1.0);
  for (double v : Z.data()) CHECK(std::abs(v) < 1e-12);
  // phi = 1 is the cylinder S^{n-1} x R.
  const WarpedBand C{4, 0.0, 1.0, Warping::constant(1.0)};
  const CurvTensor Y = band_curvature_at(C, 0.5);
  CHECK(sectional(Y, 0, 1) == doctest::Approx(1.0));
  CHECK(sectional(Y, 0, 3) == doctest::Approx(0.0));
  CHECK_THROWS_AS(band_curvature_at(S, 2.0), std::out_of_range);
}

TEST_CASE("sigma-PIC profile") {
  const WarpedBand S{4, 0.3, 1.2, Warping::sine()};
  // Round unit sphere: isotropic curvature 4.
  CHECK(sigma_pic_profile(S, 3.5, 4, quick_search()).pass);
  CHECK_FALSE(sigma_pic_profile(S, 4.5, 4, quick_search()).pass);
}

TEST_CASE("boundary geometry") {
  const WarpedBand S{4, std::numbers::pi / 4, std::numbers::pi / 2, Warping::sine()};
  const SymBilinear lower = boundary_shape(S, BandEnd::Lower);
  const SymBilinear upper = boundary_shape(S, BandEnd::Upper);
  CHECK(lower.rows() == 3);
  CHECK(std::abs(lower(0, 0)) == doctest::Approx(1.0));  // cot(pi/4)
  CHECK(std::abs(upper(0, 0)) < 1e-12);                  // cot(pi/2)
  CHECK(width(S) == doctest::Approx(std::numbers::pi / 4));
  const FocalRadius fr = focal_radius_model(S, BandEnd::Lower);
  CHECK(fr.radius <= width(S) + 1e-12);
  CHECK(fr.radius > 0);
}

TEST_CASE("k-convexity defect") {
  SymBilinear A = SymBilinear::Zero(3, 3);
  A.diagonal() << -3.0, 1.0, 1.5;
  CHECK(k_convexity_defect(A, 1) == doctest::Approx(3.0));
  CHECK(k_convexity_defect(A, 2) == doctest::Approx(2.0));
  CHECK(k_convexity_defect(A, 3) == doctest::Approx(0.5));
  CHECK(k_convexity_defect(SymBilinear::Identity(3, 3), 1) == 0.0);
  CHECK_THROWS_AS(k_convexity_defect(A, 4), std::invalid_argument);
}

TEST_CASE("counterexample") {
  const Report r = counterexample_report({4, 2, 1.0, 3.0}, quick_search());
  CHECK(r.pass);
  CHECK(r.details.at("width_lower_bound").get<double>() == 4.0);
  CHECK(r.details.at("betti_k").get<int>() == 2);
  CHECK(r.details.at("curvature_margin").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(CounterexampleSpec({3, 2, 1.0, 3.0}).validate(), std::domain_error);
  CHECK_THROWS_AS(CounterexampleSpec({6, 5, 1.0, 3.0}).validate(), std::domain_error);
  CHECK_THROWS_AS(CounterexampleSpec({4, 2, 1.0, 1.0}).validate(), std::domain_error);
}

TEST_CASE("band JSON") {
  const WarpedBand B = WarpedBand::from_json(nlohmann::json::parse(
      R"({"n": 4, "r0": 0.5, "r1": 1.0, "phi": {"kind": "sin"}})"));
  CHECK(B.phi.kind() == Warping::Kind::Sin);
  CHECK_THROWS_AS(WarpedBand::from_json(nlohmann::json::parse(
                      R"({"n": 4, "r0": 2.0, "r1": 4.0, "phi": {"kind": "sin"}})")),
                  InputError);
  CHECK_THROWS_AS(WarpedBand::load("/nonexistent/band.json"), InputError);
}
