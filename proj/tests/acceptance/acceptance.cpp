// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 on any failure.
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pictk/bands.hpp"
#include "pictk/comparison.hpp"
#include "pictk/curvature.hpp"
#include "pictk/exterior.hpp"
#include "pictk/grid.hpp"
#include "pictk/hodge.hpp"
#include "pictk/potentials.hpp"
#include "pictk/sampling.hpp"
#include "pictk/suites.hpp"

#ifndef PICTK_COMPLEX_DIR
#error "PICTK_COMPLEX_DIR must point at the bundled complexes"
#endif

namespace {

using namespace pictk;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

// Sign of the permutation sorting the concatenation of I and J, by counting
// inversions; 0 when they share an index.
int inversion_sign(std::uint32_t I, std::uint32_t J) {
  if (I & J) return 0;
  std::vector<int> seq;
  for (int b = 0; b < 32; ++b)
    if (I >> b & 1u) seq.push_back(b);
  for (int b = 0; b < 32; ++b)
    if (J >> b & 1u) seq.push_back(b);
  int inv = 0;
  for (std::size_t a = 0; a < seq.size(); ++a)
    for (std::size_t b = a + 1; b < seq.size(); ++b) inv += seq[a] > seq[b];
  return inv % 2 ? -1 : 1;
}

// 1. c(v)c(w) + c(w)c(v) = -2<v,w>, ct(v)ct(w) + ct(w)ct(v) = 2<v,w>,
//    c(v)ct(w) + ct(w)c(v) = 0.
Outcome clifford_relations() {
  double worst = 0.0;
  Rng rng = make_rng(kDefaultSeed, 1);
  for (int n = 4; n <= 8; ++n) {
    const std::uint32_t full = 1u << n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double g = i == j ? 1.0 : 0.0;
        for (std::uint32_t m = 0; m < full; ++m) {
          const FormElement a = FormElement::basis(MultiIndex::from_mask(n, m));
          const FormElement cc = clifford_c_basis(i, clifford_c_basis(j, a)) +
                                 clifford_c_basis(j, clifford_c_basis(i, a));
          const FormElement tt = clifford_ct_basis(i, clifford_ct_basis(j, a)) +
                                 clifford_ct_basis(j, clifford_ct_basis(i, a));
          const FormElement ct = clifford_c_basis(i, clifford_ct_basis(j, a)) +
                                 clifford_ct_basis(j, clifford_c_basis(i, a));
          worst = std::max({worst, max_abs_diff(cc, (-2.0 * g) * a),
                            max_abs_diff(tt, (2.0 * g) * a), ct.max_abs()});
          // Wedge sign against an inversion count.
          const std::uint32_t e = 1u << i;
          const int s = inversion_sign(e, m);
          const FormElement expect =
              s == 0 ? FormElement(n) : FormElement::basis(MultiIndex::from_mask(n, e | m), s);
          worst = std::max(worst, max_abs_diff(wedge_basis(i, a), expect));
        }
      }
    }
    for (int t = 0; t < 1000; ++t) {
      const Vector v = random_vector(rng, n), w = random_vector(rng, n);
      const FormElement a = random_form(rng, n);
      const double g = dot(v, w);
      const double scale = 1.0 + vnorm(v) * vnorm(w) * a.norm();
      const FormElement cc = clifford_c(v, clifford_c(w, a)) + clifford_c(w, clifford_c(v, a));
      const FormElement tt = clifford_ct(v, clifford_ct(w, a)) + clifford_ct(w, clifford_ct(v, a));
      const FormElement ct = clifford_c(v, clifford_ct(w, a)) + clifford_ct(w, clifford_c(v, a));
      worst = std::max({worst, max_abs_diff(cc, (-2.0 * g) * a) / scale,
                        max_abs_diff(tt, (2.0 * g) * a) / scale, ct.max_abs() / scale});
    }
  }
  return {worst < 1e-12, "max defect " + fmt(worst) + ", n 4..8, 1000 random per n"};
}

// 2. Operator formula vs Clifford trace on 2-forms.
Outcome weitzenboeck_double_path() {
  Rng rng = make_rng(kDefaultSeed, 2);
  double worst = 0.0;
  for (int n : {4, 6}) {
    for (int t = 0; t < 100; ++t) {
      const CurvTensor R = random_curvature(rng, n);
      worst = std::max(worst, (weitzenboeck_on_two_forms(R).m -
                               weitzenboeck_clifford_matrix(R).m).cwiseAbs().maxCoeff());
    }
  }
  return {worst < 1e-10, "max entry difference " + fmt(worst) + " over 200 tensors"};
}

// 3. R = sigma/8 g o g gives (n-2) sigma / 2 times the identity.
Outcome constant_curvature_sharpness() {
  double worst = 0.0;
  for (double sigma : {0.5, 1.0, 3.0}) {
    for (int n : {4, 6, 8}) {
      const SymBilinear g = SymBilinear::Identity(n, n);
      const WeitzOperator W = weitzenboeck_on_two_forms((sigma / 8.0) * kulkarni_nomizu(g, g));
      const Eigen::MatrixXd target =
          Eigen::MatrixXd::Identity(n * (n - 1) / 2, n * (n - 1) / 2) * ((n - 2) * sigma / 2.0);
      worst = std::max(worst, (W.m - target).cwiseAbs().maxCoeff());
    }
  }
  return {worst < 1e-10, "max defect " + fmt(worst)};
}

// 4. Frame search on S^3 x S^1 and the shift property.
Outcome pic_frame_search() {
  const SearchConfig cfg;
  const CurvTensor P = sphere_product_tensor(3, 1);
  const double a = min_isotropic(P, cfg).value;
  const double b = min_isotropic(P, cfg).value;
  Rng rng = make_rng(kDefaultSeed, 4);
  const SymBilinear g = SymBilinear::Identity(4, 4);
  const CurvTensor gg = kulkarni_nomizu(g, g);
  double shift = 0.0;
  for (int t = 0; t < 20; ++t) {
    const CurvTensor R = random_curvature(rng, 4);
    const double tau = uniform(rng, -2.0, 2.0);
    shift = std::max(shift, std::abs(min_isotropic(R + (tau / 8.0) * gg, cfg).value -
                                     min_isotropic(R, cfg).value - tau));
  }
  const bool ok = std::abs(a - 2.0) <= 1e-6 && a == b && shift <= 1e-8;
  return {ok, "S3xS1 min " + fmt(a) + (a == b ? " (repeatable)" : " (NOT repeatable)") +
                  ", shift defect " + fmt(shift)};
}

// Scalar Riccati u' = K - u^2 with u(0) = u0, closed form.
double riccati_scalar(double K, double u0, double t) {
  const double s = std::sqrt(K);
  const double th = std::tanh(s * t);
  return s * (u0 + s * th) / (s + u0 * th);
}

// 5. Barriers against the Riccati oracle, the pole and the flat limits.
Outcome comparison_barriers() {
  Rng rng = make_rng(kDefaultSeed, 5);
  double umbilic = 0.0, closed = 0.0;
  for (int t = 0; t < 20; ++t) {
    ComparisonParams p;
    p.n = 2 + static_cast<int>(uniform(rng, 0.0, 7.0));
    p.K = uniform(rng, 0.05, 2.0);
    p.Lambda = uniform(rng, 0.0, 3.0);
    p.rho = uniform(rng, 0.0, 1.0);
    const double barrier = laplace_upper_negative_boundary(p);
    const auto r = riccati_oracle(
        RotSymModel::constant_curvature(p.n, p.K, -p.Lambda / (p.n - 1)), p.rho);
    umbilic = std::max(umbilic, r.crossed ? kInf : std::abs(r.trace - barrier));
    // Each principal curvature of the umbilic model solves the scalar equation.
    const double u = riccati_scalar(p.K, p.Lambda / (p.n - 1), p.rho);
    closed = std::max(closed, std::abs((p.n - 1) * u - barrier));
  }
  double pole = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double K = uniform(rng, 0.1, 2.0);
    const double Lambda = std::sqrt(K) * uniform(rng, 1.2, 4.0);
    const double exact = std::atanh(std::sqrt(K) / Lambda) / std::sqrt(K);
    pole = std::max({pole, std::abs(positive_boundary_pole(K, Lambda) - exact),
                     std::abs(positive_boundary_pole_bisect(K, Lambda) - exact)});
  }
  double flat = 0.0;
  for (int n = 2; n <= 8; ++n) {
    for (double rf : {0.5, 3.0, 20.0}) {
      const ComparisonParams p{n, 0.0, 1.0, 0.25 * rf, rf};
      const ComparisonParams q{n, 1e-12, 1.0, 0.25 * rf, rf};
      for (const auto& c : {p, q}) {
        flat = std::max({flat, std::abs(hessian_lower_focal(c) + 2.0 / rf),
                         std::abs(laplace_lower_focal(c) + 2.0 * (n - 1) / rf)});
      }
    }
  }
  const bool ok = umbilic <= 1e-6 && closed <= 1e-6 && pole <= 1e-9 && flat <= 1e-9;
  return {ok, "oracle " + fmt(umbilic) + ", closed form " + fmt(closed) + ", pole " +
                  fmt(pole) + ", flat " + fmt(flat)};
}

// 6. Random focal potentials.
Outcome focal_suite() {
  Rng rng = make_rng(kDefaultSeed, 6);
  const int dims[] = {4, 6, 8};
  int draws = 0, failures = 0;
  double worst = kInf, identity = 0.0;
  while (draws < 100) {
    const int n = dims[std::uniform_int_distribution<int>(0, 2)(rng)];
    const double sigma = uniform(rng, 0.5, 4.0);
    const double base = n * std::sqrt(sigma);
    const double lambda = base * uniform(rng, 1.0, 100.0);
    const double lambda_bar = base * uniform(rng, 1.0, 100.0);
    const double unit = std::sqrt(n / sigma);
    const double r_f = unit * uniform(rng, 9.0, 20.0);
    if (!(lambda > base) || !(lambda_bar > base) || !(r_f > 9.0 * unit)) continue;
    if (!FocalParams::violations(n, sigma, lambda, lambda_bar).empty()) continue;
    ++draws;
    const FocalParams p = FocalParams::make(n, sigma, lambda, lambda_bar);
    std::vector<Report> rs = {check_focal_regularity(p, r_f), check_focal_boundary(p)};
    for (Orientation o : {Orientation::N, Orientation::D}) {
      rs.push_back(verify_focal_inequality(p, r_f, o));
      // Independent check of the middle piece on its open interval.
      const PiecewisePotential f = make_focal_potential(p, o);
      const double x = 0.5 * (p.first_break() + p.second_break());
      const PotentialValue v = f.eval(x);
      // Undo the orientation sign to recover the N profile.
      const long double d1 = f.sign() * v.df, d2 = f.sign() * v.d2f;
      const double lhs = static_cast<double>(-d2 + 0.5L * d1 * d1);
      identity = std::max(identity, std::abs(lhs + (n - 2) * sigma / 4.0));
    }
    for (const auto& r : rs) {
      if (!r.pass || !(r.min_margin() > 0.0)) ++failures;
      worst = std::min(worst, r.min_margin());
    }
  }
  return {failures == 0 && identity <= 1e-9,
          std::to_string(failures) + " failing checks, min margin " + fmt(worst) +
              ", middle identity " + fmt(identity)};
}

// 7. Constant chain, bandwidth draws and the cutoff.
Outcome bandwidth_suite() {
  double maxc = 0.0;
  bool decreasing = true;
  for (int n = 4; n <= 2000; ++n) {
    const double c = 32.0 * (n + 1) / (std::numbers::pi * (n - 3));
    decreasing = decreasing && (n == 4 || c < maxc);
    maxc = std::max(maxc, c);
    if (std::abs(L_chain_constant(n) - c) > 1e-12 * c) decreasing = false;
  }
  const bool constant = std::abs(L_chain_constant(4) - 160.0 / std::numbers::pi) <= 1e-9 &&
                        maxc < 51.0 && decreasing && check_L_chain(4, 1.0, 0.5).pass;

  Rng rng = make_rng(kDefaultSeed, 7);
  const int dims[] = {4, 6, 8};
  int draws = 0, failures = 0;
  double mu = kInf;
  while (draws < 500) {
    BandwidthParams p;
    p.n = dims[std::uniform_int_distribution<int>(0, 2)(rng)];
    p.sigma = uniform(rng, 0.25, 4.0);
    const double s = std::sqrt(p.sigma);
    p.delta = uniform(rng, 0.0, 0.5 * s);
    p.Lambda = uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : uniform(rng, 0.0, 2.0 * s);
    p.r_f = uniform(rng, 1.0, 40.0) / s;
    p.L = bandwidth_bound(p.sigma, p.delta) * uniform(rng, 1.0001, 2.0) + 1e-9;
    const Report r = verify_bandwidth_margin(p);
    if (!r.details.at("hypotheses_hold").get<bool>()) continue;
    ++draws;
    if (!r.pass) ++failures;
    mu = std::min(mu, r.min_margin());
  }

  const ChiCutoff chi = make_chi();
  bool chi_ok = check_chi(chi, 10000).pass;
  // Independent spot checks: linear start, monotone C^1 values, flat tail.
  for (int i = 0; i <= 10000; ++i) {
    const double x = 1.5 * i / 10000.0;
    if (x <= 0.5 && std::abs(chi.value(x) + x) > 1e-12) chi_ok = false;
    if (chi.d1(x) > 1e-12 || chi.d1(x) < -1.0 - 1e-12) chi_ok = false;
    if (x >= chi.plateau_end() && std::abs(chi.d1(x)) > 1e-12) chi_ok = false;
  }
  return {constant && failures == 0 && chi_ok,
          "160/pi = " + fmt(160.0 / std::numbers::pi) + ", 500 draws min mu " + fmt(mu) +
              ", " + std::to_string(failures) + " failures, cutoff " + (chi_ok ? "ok" : "bad")};
}

// 8. Pointwise lemma certification.
Outcome pointwise_lemmas() {
  Rng rng = make_rng(kDefaultSeed, 8);
  double hess = kInf, bnd = kInf;
  for (int n : {4, 6}) {
    for (int t = 0; t < 10000; ++t) {
      const double rf = uniform(rng, 1.0, 50.0);
      const double lam = uniform(rng, 0.1, 100.0);
      const double rho = uniform(rng, 0.0, 0.5 * rf);
      const double cap = (n - 1) * lam / ((n - 1) + lam * rho);
      Eigen::VectorXd u(n);
      for (int i = 0; i < n; ++i) u[i] = uniform(rng, 0.0, 1.0);
      Eigen::VectorXd ev = Eigen::VectorXd::Constant(n, -2.0 / rf);
      ev += (cap + 2.0 * n / rf) * uniform(rng, 0.0, 1.0) * u / u.sum();
      const Eigen::MatrixXd Q = random_orthogonal(rng, n);
      SymBilinear H = Q * ev.asDiagonal() * Q.transpose();
      H = 0.5 * (H + H.transpose());
      hess = std::min(hess, hessian_form_bounds(H, random_real_form(rng, n, 2), rf, lam, rho)
                                .min_margin());

      const SymBilinear A = random_symmetric(rng, n - 1);
      FormElement tan(n), nor(n);
      for (int i = 1; i < n; ++i) {
        nor.set(MultiIndex(n, {i, n}), gaussian(rng));
        for (int j = i + 1; j < n; ++j) tan.set(MultiIndex(n, {i, j}), gaussian(rng));
      }
      bnd = std::min({bnd, boundary_form_bounds(A, tan, ConvexityMode::TwoConvex).min_margin(),
                      boundary_form_bounds(A, nor, ConvexityMode::NMinusTwoConvex).min_margin()});
    }
  }
  return {hess >= -1e-10 && bnd >= -1e-10,
          "min hessian margin " + fmt(hess) + ", min boundary margin " + fmt(bnd)};
}

// 9. Grid convergence orders at N_r 16, 32, 64.
Outcome grid_orders() {
  const GridConfig cfg = GridConfig::from_json(nlohmann::json::parse(R"({
    "n": 4, "L": 1.0, "N_r": 16, "N_t": [16, 16, 1], "ell": 1.0,
    "fields": [
      {"random": {"degree": -1, "terms": 8, "seed": 2333, "active": [true, true, false]}},
      {"random": {"degree": -1, "terms": 8, "seed": 2334, "active": [true, true, false]}}
    ],
    "f": {"radial": [0.1, 0.3, 0.4],
          "terms": [{"amp": 0.3, "k": [1, 0, 0], "phase": 0.0, "radial": [1.0, 0.5]}]}
  })"));
  const ConvergenceStudy s = convergence_study(cfg, 3);
  bool ok = true;
  std::string detail;
  for (const char* fam : {"green_dirac", "green_laplace", "twisted_weitzenboeck"}) {
    const auto o = s.orders(fam);
    if (o.size() != 2) ok = false;
    detail += std::string(detail.empty() ? "" : ", ") + fam;
    for (double x : o) {
      ok = ok && std::abs(x - 2.0) <= 0.3;
      detail += " " + fmt(x);
    }
  }
  return {ok, "orders " + detail};
}

// 10. Twisted harmonic dimensions against known Betti numbers.
Outcome discrete_hodge() {
  // Absolute and relative Betti numbers of the bundled spaces.
  const std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> known = {
      {"interval", {{1, 0}, {0, 1}}},
      {"circle", {{1, 1}, {1, 1}}},
      {"disk", {{1, 0, 0}, {0, 0, 1}}},
      {"annulus", {{1, 1, 0}, {0, 1, 1}}},
      {"moebius", {{1, 1, 0}, {0, 0, 0}}},
      {"torus", {{1, 2, 1}, {1, 2, 1}}},
      {"solid_torus", {{1, 1, 0, 0}, {0, 0, 1, 1}}},
      {"s2_x_s1", {{1, 1, 1, 1}, {1, 1, 1, 1}}},
  };
  int mismatches = 0, complexes = 0, fallbacks = 0;
  bool dd = true;
  Rng rng = make_rng(kDefaultSeed, 10);
  for (const auto& [name, betti_pair] : known) {
    const SimplicialComplex K =
        SimplicialComplex::load(std::string(PICTK_COMPLEX_DIR) + "/" + name + ".json");
    ++complexes;
    for (int k = 0; k <= K.dim(); ++k) {
      mismatches += betti(K, k) != betti_pair.first[k];
      mismatches += betti_relative(K, k) != betti_pair.second[k];
    }
    for (int t = 0; t < 50; ++t) {
      std::vector<double> f(static_cast<std::size_t>(K.vertices()));
      for (double& v : f) v = uniform(rng, -5.0, 5.0);
      for (auto bc : {BoundaryCondition::Absolute, BoundaryCondition::Relative}) {
        const TwistedComplex T = TwistedComplex::make(K, f, bc);
        const auto& target =
            bc == BoundaryCondition::Absolute ? betti_pair.first : betti_pair.second;
        for (int k = 0; k <= K.dim(); ++k) {
          for (Mass m : {Mass::Identity, Mass::Weighted}) {
            const HarmonicDimension h = harmonic_dimension(T, k, m);
            mismatches += h.dimension != target[k];
            fallbacks += h.exact_fallback;
          }
          dd = dd && twisted_square_exact_zero(T, k);
        }
      }
    }
  }
  return {mismatches == 0 && dd,
          std::to_string(complexes) + " complexes x 50 twists, " + std::to_string(mismatches) +
              " mismatches, " + std::to_string(fallbacks) + " exact fallbacks, d_f d_f " +
              (dd ? "= 0" : "!= 0")};
}

// 11. Counterexample arithmetic for n = 4, k = 2, sigma = 1, L = 3.
Outcome counterexample() {
  const Report r = counterexample_report(CounterexampleSpec{4, 2, 1.0, 3.0});
  const double curv = r.details.at("curvature_margin").get<double>();
  const double width = r.details.at("width_lower_bound").get<double>();
  const int b = r.details.at("betti_k").get<int>();
  const bool ok = r.pass && std::abs(curv - 1.0) <= 1e-6 && width == 2 * 3.0 - 2 &&
                  width > 3.0 && b == 2;
  return {ok, "curvature margin " + fmt(curv) + ", width bound " + fmt(width) + ", Betti " +
                  std::to_string(b)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"clifford relations", clifford_relations},
      {"weitzenboeck double path", weitzenboeck_double_path},
      {"constant-curvature sharpness", constant_curvature_sharpness},
      {"PIC frame search", pic_frame_search},
      {"comparison barriers", comparison_barriers},
      {"focal potentials", focal_suite},
      {"bandwidth", bandwidth_suite},
      {"pointwise lemmas", pointwise_lemmas},
      {"grid identities", grid_orders},
      {"discrete hodge", discrete_hodge},
      {"counterexample", counterexample},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s criterion %2zu %-30s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
