#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pictk/curvature.hpp"
#include "pictk/error.hpp"
#include "pictk/sampling.hpp"

using namespace pictk;

namespace {

SearchConfig quick_search() {
  SearchConfig c;
  c.restarts = 48;
  c.threads = 1;
  return c;
}

// Ricci by direct contraction.
Eigen::MatrixXd oracle_ricci(const CurvTensor& R) {
  const int n = R.dim();
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ric(i, j) += R(i, k, j, k);
  return ric;
}

}  // namespace

TEST_CASE("Kulkarni-Nomizu product of symmetric forms is algebraic curvature") {
  Rng rng = make_rng(11);
  for (int n = 2; n <= 6; ++n) {
    const CurvTensor R = kulkarni_nomizu(random_symmetric(rng, n), random_symmetric(rng, n));
    CHECK(R.symmetry_defect() < 1e-12);
    CHECK(R.bianchi_defect() < 1e-12);
  }
  const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(5, 5);
  const CurvTensor gg = kulkarni_nomizu(g, g);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) CHECK(sectional(gg, i, j) == doctest::Approx(2.0));
  CHECK_THROWS_AS(kulkarni_nomizu(g, Eigen::MatrixXd::Identity(4, 4)), DimensionError);
}

TEST_CASE("constant curvature and sphere products") {
  const CurvTensor C = constant_curvature_tensor(5, 0.7);
  CHECK(sectional(C, 0, 3) == doctest::Approx(0.7));
  CHECK(scalar_curvature(C) == doctest::Approx(0.7 * 20));
  const CurvTensor P = sphere_product_tensor(3, 2);
  CHECK(sectional(P, 0, 1) == doctest::Approx(1.0));
  CHECK(sectional(P, 0, 3) == doctest::Approx(0.0));
  CHECK(sectional(P, 3, 4) == doctest::Approx(0.0));
  const Eigen::MatrixXd ric = ricci(P);
  CHECK((ric - oracle_ricci(P)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(ric(0, 0) == doctest::Approx(2.0));
  CHECK(ric(4, 4) == doctest::Approx(0.0));
}

TEST_CASE("isotropic curvature on explicit frames") {
  // Constant sectional c gives 4c on every frame.
  Rng rng = make_rng(12);
  const CurvTensor C = constant_curvature_tensor(6, 0.3);
  for (int t = 0; t < 10; ++t) CHECK(iso_curvature(C, random_frame(rng, 6)) == doctest::Approx(1.2));
  // S^3 x S^1 on the standard frame: R_1313 + R_1414 + R_2323 + R_2424 = 1 + 0 + 1 + 0.
  CHECK(iso_curvature(sphere_product_tensor(3, 1), Frame4::standard(4)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(iso_curvature(C, Frame4::standard(5)), DimensionError);
}

TEST_CASE("frame search and sigma-PIC verdicts") {
  const CurvTensor S4 = constant_curvature_tensor(4, 0.5);
  const auto cfg = quick_search();
  CHECK(min_isotropic(S4, cfg).value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(is_sigma_pic(S4, 1.5, cfg).pass);
  CHECK_FALSE(is_sigma_pic(S4, 2.5, cfg).pass);
  const MinIsoResult a = min_isotropic(sphere_product_tensor(3, 1), cfg);
  const MinIsoResult b = min_isotropic(sphere_product_tensor(3, 1), cfg);
  CHECK(a.value == b.value);
  CHECK(a.argmin.gram_defect() < 1e-10);
  CHECK(a.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("Weitzenboeck operator") {
  Rng rng = make_rng(13);
  SUBCASE("constant curvature K acts as k(n-k)K on k-forms") {
    const int n = 5;
    const CurvTensor C = constant_curvature_tensor(n, 0.4);
    for (int k = 0; k <= n; ++k) {
      const FormElement w = random_form(rng, n, k);
      CHECK(max_abs_diff(weitzenboeck_clifford_trace(C, w), (k * (n - k) * 0.4) * w) < 1e-11);
    }
  }
  SUBCASE("on 1-forms it is the Ricci tensor") {
    const int n = 5;
    const CurvTensor R = random_curvature(rng, n);
    const Eigen::MatrixXd ric = oracle_ricci(R);
    for (int i = 0; i < n; ++i) {
      const FormElement out = weitzenboeck_clifford_trace(R, FormElement::basis(n, {i + 1}));
      for (int j = 0; j < n; ++j) CHECK(std::abs(out[1u << j] - ric(j, i)) < 1e-11);
    }
  }
  SUBCASE("matrix formula agrees with the Clifford trace") {
    for (int n : {4, 5, 6}) {
      const CurvTensor R = random_curvature(rng, n);
      const WeitzOperator a = weitzenboeck_on_two_forms(R);
      CHECK((a.m - weitzenboeck_clifford_matrix(R).m).cwiseAbs().maxCoeff() < 1e-11);
      CHECK(a.hermitian_defect() < 1e-12);
    }
  }
  SUBCASE("lower bound check on the round sphere is sharp") {
    const Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
    const CurvTensor R = (1.0 / 8.0) * kulkarni_nomizu(g, g);
    const WeitzBoundReport w = weitzenboeck_lower_bound_check(R, 1.0, quick_search());
    CHECK(w.pass);
    CHECK(w.lambda_min == doctest::Approx(1.0));
    CHECK(std::abs(w.margin) < 1e-8);
    CHECK_THROWS_AS(weitzenboeck_lower_bound_check(constant_curvature_tensor(5, 1.0), 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("curvature JSON") {
  const CurvTensor P = sphere_product_tensor(3, 1);
  const CurvTensor Q = curvature_from_json(curvature_to_json(P));
  CHECK(Q.dim() == 4);
  for (std::size_t i = 0; i < P.data().size(); ++i) CHECK(P.data()[i] == Q.data()[i]);
  // A lone R_1213 entry breaks nothing but a lone R_1234 breaks Bianchi.
  const auto bad = nlohmann::json::parse(
      R"({"n": 4, "components": [{"i": 1, "j": 2, "k": 3, "l": 4, "v": 1.0}]})");
  CHECK_THROWS_AS(curvature_from_json(bad), InputError);
  CHECK_THROWS_AS(curvature_from_json(nlohmann::json::parse(R"({"n": 4})")), InputError);
  CHECK_THROWS_AS(load_curvature("/nonexistent/tensor.json"), InputError);
}
