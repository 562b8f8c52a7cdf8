#include "pictk/bands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "pictk/comparison.hpp"
#include "pictk/error.hpp"

namespace pictk {

Warping Warping::constant(double value) {
  Warping w;
  w.kind_ = Kind::Const;
  w.p0_ = value;
  return w;
}

Warping Warping::sine(double amplitude, double freq, double phase) {
  Warping w;
  w.kind_ = Kind::Sin;
  w.p0_ = amplitude;
  w.p1_ = freq;
  w.p2_ = phase;
  return w;
}

Warping Warping::linear(double slope, double intercept) {
  Warping w;
  w.kind_ = Kind::Linear;
  w.p0_ = slope;
  w.p1_ = intercept;
  return w;
}

Warping Warping::table(std::vector<double> r, std::vector<double> phi) {
  if (r.size() != phi.size() || r.size() < 2) {
    throw InputError("warping table needs matching r/phi arrays of length >= 2");
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw InputError("warping table r must increase");
  }
  Warping w;
  w.kind_ = Kind::Table;
  w.r_ = std::move(r);
  w.y_ = std::move(phi);
  // Natural spline second derivatives by the tridiagonal recurrence.
  const std::size_t n = w.r_.size();
  w.m_.assign(n, 0.0);
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (w.r_[i] - w.r_[i - 1]) / (w.r_[i + 1] - w.r_[i - 1]);
    const double p = sig * w.m_[i - 1] + 2.0;
    w.m_[i] = (sig - 1.0) / p;
    const double dy = (w.y_[i + 1] - w.y_[i]) / (w.r_[i + 1] - w.r_[i]) -
                      (w.y_[i] - w.y_[i - 1]) / (w.r_[i] - w.r_[i - 1]);
    u[i] = (6.0 * dy / (w.r_[i + 1] - w.r_[i - 1]) - sig * u[i - 1]) / p;
  }
  w.m_[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) {
    w.m_[k] = w.m_[k] * w.m_[k + 1] + u[k];
  }
  w.m_[0] = 0.0;
  return w;
}

Warping Warping::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "const") return constant(j.value("value", 1.0));
  if (kind == "sin") {
    return sine(j.value("amplitude", 1.0), j.value("freq", 1.0),
                j.value("phase", 0.0));
  }
  if (kind == "linear") return linear(j.value("slope", 1.0), j.value("intercept", 0.0));
  if (kind == "table") {
    return table(j.at("r").get<std::vector<double>>(),
                 j.at("phi").get<std::vector<double>>());
  }
  throw InputError("unknown warping kind: " + kind);
}

nlohmann::json Warping::to_json() const {
  switch (kind_) {
    case Kind::Const:
      return {{"kind", "const"}, {"value", p0_}};
    case Kind::Sin:
      return {{"kind", "sin"}, {"amplitude", p0_}, {"freq", p1_}, {"phase", p2_}};
    case Kind::Linear:
      return {{"kind", "linear"}, {"slope", p0_}, {"intercept", p1_}};
    case Kind::Table:
      return {{"kind", "table"}, {"r", r_}, {"phi", y_}};
  }
  return {};
}

std::size_t Warping::span(double r) const {
  const auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t k = static_cast<std::size_t>(it - r_.begin());
  k = std::clamp<std::size_t>(k, 1, r_.size() - 1);
  return k - 1;
}

double Warping::value(double r) const {
  switch (kind_) {
    case Kind::Const:
      return p0_;
    case Kind::Sin:
      return p0_ * std::sin(p1_ * r + p2_);
    case Kind::Linear:
      return p0_ * r + p1_;
    case Kind::Table: {
      if (r < r_.front()) return y_.front() + d1(r_.front()) * (r - r_.front());
      if (r > r_.back()) return y_.back() + d1(r_.back()) * (r - r_.back());
      const std::size_t k = span(r);
      const double h = r_[k + 1] - r_[k];
      const double a = (r_[k + 1] - r) / h;
      const double b = (r - r_[k]) / h;
      return a * y_[k] + b * y_[k + 1] +
             ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
    }
  }
  return 0.0;
}

double Warping::d1(double r) const {
  switch (kind_) {
    case Kind::Const:
      return 0.0;
    case Kind::Sin:
      return p0_ * p1_ * std::cos(p1_ * r + p2_);
    case Kind::Linear:
      return p0_;
    case Kind::Table: {
      const double rc = std::clamp(r, r_.front(), r_.back());
      const std::size_t k = span(rc);
      const double h = r_[k + 1] - r_[k];
      const double a = (r_[k + 1] - rc) / h;
      const double b = (rc - r_[k]) / h;
      return (y_[k + 1] - y_[k]) / h -
             (3.0 * a * a - 1.0) * h * m_[k] / 6.0 +
             (3.0 * b * b - 1.0) * h * m_[k + 1] / 6.0;
    }
  }
  return 0.0;
}

double Warping::d2(double r) const {
  switch (kind_) {
    case Kind::Const:
    case Kind::Linear:
      return 0.0;
    case Kind::Sin:
      return -p0_ * p1_ * p1_ * std::sin(p1_ * r + p2_);
    case Kind::Table: {
      if (r < r_.front() || r > r_.back()) return 0.0;
      const std::size_t k = span(r);
      const double h = r_[k + 1] - r_[k];
      const double a = (r_[k + 1] - r) / h;
      const double b = (r - r_[k]) / h;
      return a * m_[k] + b * m_[k + 1];
    }
  }
  return 0.0;
}

double Warping::radial_curvature(double r) const {
  switch (kind_) {
    case Kind::Const:
    case Kind::Linear:
      return 0.0;
    case Kind::Sin:
      return p1_ * p1_;
    case Kind::Table:
      return -d2(r) / value(r);
  }
  return 0.0;
}

void WarpedBand::validate() const {
  if (n < 2 || n > kMaxDim) throw InputError("band dimension out of range");
  if (!(r1 >= r0)) throw InputError("band needs r0 <= r1");
  const int samples = 256;
  for (int i = 0; i <= samples; ++i) {
    const double r = r0 + (r1 - r0) * i / samples;
    if (!(phi.value(r) > 0)) throw InputError("warping must be positive on the band");
  }
}

WarpedBand WarpedBand::from_json(const nlohmann::json& j) {
  try {
    WarpedBand b;
    b.n = j.at("n").get<int>();
    b.r0 = j.at("r0").get<double>();
    b.r1 = j.at("r1").get<double>();
    b.phi = Warping::from_json(j.at("phi"));
    b.validate();
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed band spec: " + std::string(e.what()));
  }
}

WarpedBand WarpedBand::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open band file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed band file: " + std::string(e.what()));
  }
  return from_json(j);
}

CurvTensor band_curvature_at(const WarpedBand& B, double r) {
  const double slack = 1e-12 * std::max(1.0, std::abs(B.r1) + std::abs(B.r0));
  if (r < B.r0 - slack || r > B.r1 + slack) {
    throw std::out_of_range("radius outside the band");
  }
  const int n = B.n;
  const double phi = B.phi.value(r);
  const double dphi = B.phi.d1(r);
  const double k_ss = (1.0 - dphi * dphi) / (phi * phi);
  const double k_rs = B.phi.radial_curvature(r);
  SymBilinear P = SymBilinear::Identity(n, n);
  P(n - 1, n - 1) = 0.0;
  SymBilinear Q = SymBilinear::Zero(n, n);
  Q(n - 1, n - 1) = 1.0;
  return (0.5 * k_ss) * kulkarni_nomizu(P, P) + k_rs * kulkarni_nomizu(P, Q);
}

Report sigma_pic_profile(const WarpedBand& B, double sigma, int samples,
                         const SearchConfig& cfg) {
  if (B.n < 4) throw std::invalid_argument("PIC profile needs n >= 4");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  B.validate();
  Report rep;
  rep.check = "sigma_pic_profile";
  rep.params = {{"n", B.n}, {"r0", B.r0}, {"r1", B.r1}, {"phi", B.phi.to_json()},
                {"sigma", sigma}, {"samples", samples}, {"seed", cfg.seed},
                {"restarts", cfg.restarts}};
  rep.tolerance = cfg.tolerance;
  nlohmann::json values = nlohmann::json::array();
  double worst = std::numeric_limits<double>::infinity();
  double worst_r = B.r0;
  Frame4 witness;
  for (int i = 0; i < samples; ++i) {
    const double r =
        samples == 1 ? 0.5 * (B.r0 + B.r1)
                     : B.r0 + (B.r1 - B.r0) * i / (samples - 1);
    const MinIsoResult m = min_isotropic(band_curvature_at(B, r), cfg);
    values.push_back({{"r", r}, {"min_isotropic", m.value}});
    if (m.value < worst) {
      worst = m.value;
      worst_r = r;
      witness = m.argmin;
    }
  }
  rep.add_region("min_isotropic-sigma", worst - sigma);
  nlohmann::json frame = nlohmann::json::array();
  for (int c = 0; c < 4; ++c) {
    frame.push_back(std::vector<double>(witness.e.col(c).data(),
                                        witness.e.col(c).data() + witness.e.rows()));
  }
  rep.details = {{"profile", values},
                 {"worst_r", worst_r},
                 {"witness_frame", frame},
                 {"stochastic", true}};
  rep.pass = worst >= sigma - cfg.tolerance;
  return rep;
}

SymBilinear boundary_shape(const WarpedBand& B, BandEnd end) {
  const double r = end == BandEnd::Upper ? B.r1 : B.r0;
  const double s = end == BandEnd::Upper ? 1.0 : -1.0;
  const double k = s * B.phi.d1(r) / B.phi.value(r);
  return k * SymBilinear::Identity(B.n - 1, B.n - 1);
}

double k_convexity_defect(const SymBilinear& A, int k) {
  require_symmetric(A, 1e-12);
  if (k < 1 || k > A.rows()) throw std::invalid_argument("k out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  return std::max(0.0, -ev.head(k).sum());
}

double width(const WarpedBand& B) { return B.r1 - B.r0; }

FocalRadius focal_radius_model(const WarpedBand& B, BandEnd end) {
  const double w = width(B);
  RotSymModel model;
  model.n = B.n;
  model.A0 = boundary_shape(B, end);
  const Warping phi = B.phi;
  const double start = end == BandEnd::Upper ? B.r1 : B.r0;
  const double dir = end == BandEnd::Upper ? -1.0 : 1.0;
  const int d = B.n - 1;
  model.radial_sectional = [phi, start, dir, d](double t) {
    return Eigen::MatrixXd(phi.radial_curvature(start + dir * t) *
                           Eigen::MatrixXd::Identity(d, d));
  };
  const double horizon = 2.0 * w + 1.0;
  const RiccatiResult res = riccati_oracle(model, horizon, 1e-4);
  FocalRadius out;
  out.crossed = res.crossed;
  out.crossing = res.crossed ? res.crossing : horizon;
  out.radius = res.crossed ? std::min(res.crossing, w) : w;
  return out;
}

void CounterexampleSpec::validate() const {
  if (n < 4) throw std::domain_error("counterexample needs n >= 4");
  if (k < 2 || k > n - 2) throw std::domain_error("k must lie in [2, n-2]");
  if (!(sigma > 0)) throw std::domain_error("sigma must be positive");
  if (!(L > 2.0 / std::sqrt(sigma))) {
    throw std::domain_error("counterexample needs L > 2/sqrt(sigma)");
  }
}

Report counterexample_report(const CounterexampleSpec& S, const SearchConfig& cfg) {
  S.validate();
  Report rep;
  rep.check = "counterexample";
  rep.params = {{"n", S.n}, {"k", S.k}, {"sigma", S.sigma}, {"L", S.L},
                {"seed", cfg.seed}, {"restarts", cfg.restarts}};
  rep.tolerance = 1e-6;

  // (i) S^{n-1} x R rescaled so that curvature scales with sigma.
  const CurvTensor R = S.sigma * sphere_product_tensor(S.n - 1, 1);
  const MinIsoResult m = min_isotropic(R, cfg);
  const double curvature_margin = m.value - S.sigma;

  // (iv) distance between the removed balls minus their radii.
  const double ball_radius = 1.0 / std::sqrt(S.sigma);
  const double width_lower = 2.0 * S.L - 2.0 * ball_radius;

  // (ii) Betti arithmetic 2 b_k(Omega^c) + b_k(M_1 minus two balls).
  const int b_block = 1;
  const int b_punctured = 0;
  const int betti = 2 * b_block + b_punctured;

  rep.add_region("curvature", curvature_margin);
  rep.add_region("width", width_lower - S.L);
  rep.add_region("betti", static_cast<double>(betti));
  rep.details = {
      {"min_isotropic", m.value},
      {"curvature_margin", curvature_margin},
      {"cylinder_length", 4.0 * S.L},
      {"ball_centers", {0.0, 2.0 * S.L}},
      {"width_lower_bound", width_lower},
      {"betti_k", betti},
      {"betti_terms", {{"block_complement", b_block}, {"punctured_cylinder", b_punctured}}},
      {"boundary_bound", "|A| <= C(n,k) sqrt(sigma), C from |D phi_i| + |D^2 phi_i| < 100"},
      {"boundary_bound_symbolic", true}};
  rep.pass = curvature_margin >= -rep.tolerance && width_lower > S.L && betti == 2;
  return rep;
}

}  // namespace pictk
