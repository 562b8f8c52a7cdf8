#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pictk/error.hpp"
#include "pictk/grid.hpp"
#include "pictk/sampling.hpp"

using namespace pictk;

namespace {

FieldSpec spec_from(const char* text, int n) {
  return FieldSpec::from_json(nlohmann::json::parse(text), n, 1.0);
}

ScalarSpec scalar_from(const char* text, int n) {
  return ScalarSpec::from_json(nlohmann::json::parse(text), n, 1.0);
}

const char* kScalar = R"({"radial": [0.1, 0.3, 0.4],
  "terms": [{"amp": 0.3, "k": [1, 0], "phase": 0.0, "radial": [1.0, 0.5]}]})";

}  // namespace

TEST_CASE("grid geometry and quadrature") {
  const FlatBandGrid g = FlatBandGrid::make(4, 2.0, 17, std::vector<int>{8, 6, 1}, 1.5);
  CHECK(g.nodes() == 17u * 8 * 6);
  CHECK(g.h() == doctest::Approx(2.0 / 16));
  double total = 0.0;
  for (std::size_t i = 0; i < g.nodes(); ++i) total += g.weight(i);
  CHECK(total == doctest::Approx(2.0 * 1.5 * 1.5 * 1.5));
  const std::size_t node = g.stride(0) * 3 + g.stride(3) * 5;
  CHECK(g.coord(node, 0) == 3);
  CHECK(g.coord(node, 3) == 5);
  CHECK(g.position(node, 3) == doctest::Approx(5 * g.h()));
  CHECK_THROWS_AS(FlatBandGrid::make(4, 1.0, 4, 8, 1.0), InputError);
  CHECK_THROWS_AS(FlatBandGrid::make(4, -1.0, 16, 8, 1.0), InputError);
  CHECK_THROWS_AS(FlatBandGrid::make(4, 1.0, 16, std::vector<int>{8, 8}, 1.0), InputError);
}

TEST_CASE("difference stencils are exact on quadratics") {
  // f = 1 + 2r - 3r^2 on the 0-form and theta^1 slots.
  const int n = 3;
  const FlatBandGrid g = FlatBandGrid::make(n, 1.0, 9, std::vector<int>{4, 1}, 1.0);
  const FieldSpec s = spec_from(R"({"terms": [
      {"basis": [], "amp": 1.0, "k": [0, 0], "radial": [1.0, 2.0, -3.0]},
      {"basis": [1], "amp": 2.0, "k": [0, 0], "radial": [1.0, 2.0, -3.0]}]})", n);
  const FormField F = sample(g, s);
  const FormField D = partial(F, n - 1);
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    const double r = g.position(i, n - 1);
    CHECK(D.at(i)[0] == doctest::Approx(2.0 - 6.0 * r).epsilon(1e-12));
    CHECK(D.at(i)[1] == doctest::Approx(2.0 * (2.0 - 6.0 * r)).epsilon(1e-12));
  }
  // Constant directions differentiate to zero.
  CHECK(sup_norm(partial(F, 1)) == 0.0);
}

TEST_CASE("grid operators") {
  const int n = 4;
  const FlatBandGrid g = FlatBandGrid::make(n, 1.0, 17, std::vector<int>{12, 12, 1}, 1.0);
  const FormField F =
      sample(g, FieldSpec::random(n, 1.0, -1, 6, {true, true, false}, 41));
  const double scale = 1.0 + sup_norm(F) / (g.h() * g.h());
  CHECK(sup_norm(d_grid(d_grid(F))) < 1e-12 * scale);
  CHECK(sup_norm(dstar_grid(dstar_grid(F))) < 1e-12 * scale);
  CHECK(dirac_paths_residual(F) < 1e-12 * scale);
  // d + d* squares to the difference Laplacian with a sign.
  const FormField DD = d_grid(dstar_grid(F)) + dstar_grid(d_grid(F));
  CHECK(sup_norm(DD + laplacian_grid(F)) < 1e-10 * scale);
}

TEST_CASE("residuals decrease at second order") {
  const int n = 3;
  const ScalarSpec f = scalar_from(kScalar, n);
  const FieldSpec a = FieldSpec::random(n, 1.0, -1, 6, {true, false}, 51);
  const FieldSpec b = FieldSpec::random(n, 1.0, -1, 6, {true, false}, 52);
  std::vector<double> conj, lap, dirac;
  for (int level = 0; level < 2; ++level) {
    const FlatBandGrid g =
        FlatBandGrid::make(n, 1.0, 16 << level, std::vector<int>{16 << level, 1}, 1.0);
    const ScalarField fs = sample(g, f);
    const FormField A = sample(g, a), B = sample(g, b);
    conj.push_back(conjugation_residual(A, fs));
    lap.push_back(green_residual_laplace(A, B));
    dirac.push_back(green_residual_dirac(A, B, fs));
  }
  CHECK(std::log2(conj[0] / conj[1]) == doctest::Approx(2.0).epsilon(0.2));
  CHECK(std::log2(lap[0] / lap[1]) == doctest::Approx(2.0).epsilon(0.2));
  CHECK(std::log2(dirac[0] / dirac[1]) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("scale_exp inverts") {
  const int n = 3;
  const FlatBandGrid g = FlatBandGrid::make(n, 1.0, 9, std::vector<int>{4, 4}, 1.0);
  const FormField F = sample(g, FieldSpec::random(n, 1.0, 1, 3, {true, true}, 7));
  const ScalarField f = sample(g, scalar_from(kScalar, n));
  CHECK(sup_norm(scale_exp(scale_exp(F, f, 1.0), f, -1.0) - F) < 1e-14 * (1 + sup_norm(F)));
}

TEST_CASE("pointwise identities") {
  Rng rng = make_rng(61);
  const int n = 5;
  const Vector nu = basis_vector(n, n - 1);
  for (int t = 0; t < 20; ++t) {
    const FormElement w = random_real_form(rng, n);
    const BoundarySplit s = boundary_split(nu, w);
    const Vector gf = random_vector(rng, n);
    CHECK(chi_eigenform_boundary_identity(s.tangential, gf, nu, 1) < 1e-12);
    CHECK(chi_eigenform_boundary_identity(s.normal, gf, nu, -1) < 1e-12);
    CHECK(contraction_trace_identity(random_symmetric(rng, n), w) < 1e-10);
  }
  const FormElement mixed = FormElement::basis(n, {1}) + FormElement::basis(n, {n});
  CHECK_THROWS_AS(chi_eigenform_boundary_identity(mixed, Vector(n, 0.0), nu, 1),
                  std::domain_error);
}

TEST_CASE("scalar spec derivatives") {
  const ScalarSpec f = scalar_from(kScalar, 3);
  const Vector x{0.2, 0.7, 0.4};
  const double h = 1e-5;
  const Vector g = f.gradient(x);
  const SymBilinear H = f.hessian(x);
  for (int i = 0; i < 3; ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    CHECK((f.value(xp) - f.value(xm)) / (2 * h) == doctest::Approx(g[i]).epsilon(1e-7));
    const Vector gp = f.gradient(xp), gm = f.gradient(xm);
    for (int j = 0; j < 3; ++j)
      CHECK((gp[j] - gm[j]) / (2 * h) == doctest::Approx(H(i, j)).epsilon(1e-6));
  }
  CHECK(f.laplacian(x) == doctest::Approx(H.trace()));
}

TEST_CASE("grid config JSON") {
  const auto j = nlohmann::json::parse(R"({
    "n": 3, "L": 1.0, "N_r": 16, "N_t": [8, 1], "ell": 1.0,
    "fields": [{"random": {"degree": 1, "terms": 3, "seed": 5, "active": [true, false]}}],
    "f": {"radial": [0.0, 1.0]}})");
  const GridConfig c = GridConfig::from_json(j);
  CHECK(c.grid.Nt == std::vector<int>{8, 1});
  CHECK(c.fields.size() == 1);
  CHECK(c.fields[0].degree() == 1);
  CHECK(GridConfig::from_json(c.to_json()).to_json() == c.to_json());
  CHECK_THROWS_AS(GridConfig::from_json(nlohmann::json::parse(R"({"L": 1})")), InputError);
  CHECK_THROWS_AS(GridConfig::load("/nonexistent/grid.json"), InputError);
}
