#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pictk/error.hpp"
#include "pictk/hodge.hpp"
#include "pictk/sampling.hpp"

using namespace pictk;

namespace {

// Boundary of a triangle: a circle with three edges.
SimplicialComplex triangle_circle() {
  return SimplicialComplex::from_facets({{0, 1}, {1, 2}, {0, 2}}, {}, "circle3");
}

// Two triangles glued along an edge: a disk.
SimplicialComplex square_disk() {
  return SimplicialComplex::from_facets({{0, 1, 2}, {1, 2, 3}}, {}, "square");
}

std::string complex_path(const char* name) {
  return std::string(PICTK_DATA_DIR) + "/complexes/" + name + ".json";
}

}  // namespace

TEST_CASE("complex construction") {
  const SimplicialComplex D = square_disk();
  CHECK(D.dim() == 2);
  CHECK(D.count(0) == 4);
  CHECK(D.count(1) == 5);
  CHECK(D.count(2) == 2);
  CHECK(D.euler_characteristic() == 1);
  CHECK(D.has_boundary());
  // The shared edge {1,2} is interior.
  CHECK_FALSE(D.on_boundary(1, D.index({1, 2})));
  CHECK(D.on_boundary(1, D.index({0, 1})));
  CHECK(D.interior(0).empty());
  CHECK(D.index({0, 3}) == -1);
  CHECK_FALSE(triangle_circle().has_boundary());
  CHECK_THROWS_AS(SimplicialComplex::from_simplices({{0}, {0, 1}}), InputError);
  CHECK(SimplicialComplex::from_json(D.to_json()).count(1) == 5);
}

TEST_CASE("coboundary") {
  const SimplicialComplex D = square_disk();
  CHECK(coboundary_square_defect(D) == 0);
  const Eigen::MatrixXi d0 = triangle_circle().coboundary(0);
  CHECK(d0.rows() == 3);
  CHECK(d0.cols() == 3);
  // Each edge row is (-1 at the lower vertex, +1 at the upper vertex).
  CHECK(d0.rowwise().sum().cwiseAbs().maxCoeff() == 0);
  CHECK(d0.cwiseAbs().sum() == 6);
}

TEST_CASE("exact rank") {
  Eigen::MatrixXi A(3, 3);
  A << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  CHECK(exact_rank(A) == 2);
  // Nearly singular in floating point but full rank over the rationals.
  Eigen::MatrixXd H(3, 3);
  H << 1.0, 1.0 / 2, 1.0 / 3, 1.0 / 2, 1.0 / 3, 1.0 / 4, 1.0 / 3, 1.0 / 4, 1.0 / 5;
  CHECK(exact_rank(H) == 3);
  CHECK(exact_rank(Eigen::MatrixXi(Eigen::MatrixXi::Zero(2, 4))) == 0);
}

TEST_CASE("Betti numbers of small complexes") {
  const SimplicialComplex C = triangle_circle();
  CHECK(betti(C, 0) == 1);
  CHECK(betti(C, 1) == 1);
  const SimplicialComplex D = square_disk();
  CHECK(betti(D, 0) == 1);
  CHECK(betti(D, 1) == 0);
  CHECK(betti(D, 2) == 0);
  CHECK(betti_relative(D, 0) == 0);
  CHECK(betti_relative(D, 1) == 0);
  CHECK(betti_relative(D, 2) == 1);
}

TEST_CASE("bundled complexes") {
  const SimplicialComplex A = SimplicialComplex::load(complex_path("annulus"));
  CHECK(betti(A, 1) == 1);
  CHECK(betti_relative(A, 1) == 1);
  CHECK(A.euler_characteristic() == 0);
  const SimplicialComplex T = SimplicialComplex::load(complex_path("torus"));
  CHECK(betti(T, 1) == 2);
  CHECK(T.euler_characteristic() == 0);
  const SimplicialComplex S = SimplicialComplex::load(complex_path("solid_torus"));
  CHECK(betti(S, 1) == 1);
  CHECK(betti_relative(S, 2) == 1);
  CHECK_THROWS_AS(SimplicialComplex::load("/nonexistent/complex.json"), InputError);
}

TEST_CASE("twisted complex") {
  Rng rng = make_rng(71);
  const SimplicialComplex A = SimplicialComplex::load(complex_path("annulus"));
  std::vector<double> f(static_cast<std::size_t>(A.vertices()));
  for (double& v : f) v = uniform(rng, -3.0, 3.0);
  for (auto bc : {BoundaryCondition::Absolute, BoundaryCondition::Relative}) {
    const TwistedComplex T = TwistedComplex::make(A, f, bc);
    for (int k = 0; k < A.dim(); ++k) {
      const Eigen::MatrixXd d0 = twisted_coboundary(T, k);
      const Eigen::MatrixXd d1 = twisted_coboundary(T, k + 1);
      if (d1.rows() > 0 && d0.cols() > 0) CHECK((d1 * d0).cwiseAbs().maxCoeff() < 1e-9 * (1 + d0.norm() * d1.norm()));
      CHECK(twisted_square_exact_zero(T, k));
    }
    for (int k = 0; k <= A.dim(); ++k) {
      const Eigen::MatrixXd L = twisted_laplacian(T, k);
      if (L.size() > 0) CHECK((L - L.transpose()).cwiseAbs().maxCoeff() < 1e-9 * (1 + L.norm()));
      const int target = bc == BoundaryCondition::Absolute ? betti(A, k) : betti_relative(A, k);
      for (Mass m : {Mass::Identity, Mass::Weighted}) {
        const HarmonicDimension h = harmonic_dimension(T, k, m);
        CHECK(h.dimension == target);
        CHECK(h.exact_dimension == target);
      }
    }
  }
  // The relative complex only uses interior simplices.
  const TwistedComplex R = TwistedComplex::make(A, f, BoundaryCondition::Relative);
  CHECK(R.cochain_dim(0) == static_cast<int>(A.interior(0).size()));
  CHECK_THROWS_AS(TwistedComplex::make(A, {1.0}, BoundaryCondition::Absolute), std::invalid_argument);
}
