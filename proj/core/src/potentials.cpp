#include "pictk/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pictk/bands.hpp"
#include "pictk/error.hpp"

namespace pictk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long double kPiL = std::numbers::pi_v<long double>;

struct FocalDerivedL {
  long double beta, rho_sigma, rho_lambda, a, b, lambda_bar;
};

FocalDerivedL derive_long(int n, double sigma, double lambda, double lambda_bar) {
  FocalDerivedL d;
  const long double s = sigma;
  d.beta = std::sqrt((n - 2) * s / 8.0L);
  d.rho_sigma = (n - 1) * std::sqrt(15.0L / (n * s));
  d.rho_lambda =
      std::atan(1.0L / (1.0L + 2.0L * static_cast<long double>(lambda) / d.beta)) /
      d.beta;
  d.lambda_bar = lambda_bar;
  const long double y = d.beta / d.lambda_bar;
  d.a = 2.0L * d.beta * std::cos(y) / std::sin(y);
  d.b = -2.0L * std::log(std::sin(y));
  return d;
}

}  // namespace

std::vector<std::string> FocalParams::violations(int n, double sigma,
                                                 double lambda,
                                                 double lambda_bar) {
  std::vector<std::string> v;
  if (n < 4 || n % 2 != 0) v.push_back("n must be even and >= 4");
  if (!(sigma > 0)) {
    v.push_back("sigma must be positive");
    return v;
  }
  const double floor = n * std::sqrt(sigma);
  if (!(lambda > floor)) v.push_back("lambda must exceed n sqrt(sigma)");
  if (!(lambda_bar > floor)) v.push_back("lambda_bar must exceed n sqrt(sigma)");
  if (!v.empty()) return v;
  const FocalDerivedL d = derive_long(n, sigma, lambda, lambda_bar);
  if (!(d.rho_lambda > 0 && d.rho_lambda < d.rho_sigma)) {
    v.push_back("rho_lambda must lie in (0, rho_sigma)");
  }
  if (!(1.0L / d.lambda_bar < kPiL / (4.0L * d.beta))) {
    v.push_back("1/lambda_bar must be below pi/(4 beta)");
  }
  if (!(1.0L / d.lambda_bar <= d.rho_lambda)) {
    v.push_back("1/lambda_bar must not exceed rho_lambda");
  }
  return v;
}

FocalParams FocalParams::make(int n, double sigma, double lambda,
                              double lambda_bar) {
  const auto v = violations(n, sigma, lambda, lambda_bar);
  if (!v.empty()) throw std::domain_error("focal parameters: " + v.front());
  const FocalDerivedL d = derive_long(n, sigma, lambda, lambda_bar);
  FocalParams p;
  p.n = n;
  p.sigma = sigma;
  p.lambda = lambda;
  p.lambda_bar = lambda_bar;
  p.beta = static_cast<double>(d.beta);
  p.rho_sigma = static_cast<double>(d.rho_sigma);
  p.rho_lambda = static_cast<double>(d.rho_lambda);
  p.a = static_cast<double>(d.a);
  p.b = static_cast<double>(d.b);
  return p;
}

double FocalParams::first_break() const {
  return rho_sigma - rho_lambda + 1.0 / lambda_bar;
}

double FocalParams::second_break() const {
  return rho_sigma - rho_lambda + kPi / (2.0 * beta);
}

PiecewisePotential::PiecewisePotential(std::vector<double> breaks,
                                       std::vector<Piece> pieces, double sign)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)), sign_(sign) {
  if (pieces_.size() != breaks_.size() + 1) {
    throw std::invalid_argument("need one more piece than breakpoints");
  }
  if (!std::is_sorted(breaks_.begin(), breaks_.end())) {
    throw std::invalid_argument("breakpoints must be ordered");
  }
}

PotentialValue PiecewisePotential::eval(long double x, int side) const {
  std::size_t i = 0;
  while (i < breaks_.size() &&
         (x > breaks_[i] || (x == breaks_[i] && side > 0))) {
    ++i;
  }
  PotentialValue v = pieces_[i](x);
  v.f *= sign_;
  v.df *= sign_;
  v.d2f *= sign_;
  return v;
}

double PiecewisePotential::continuity_defect() const {
  double m = 0.0;
  for (double b : breaks_) {
    const PotentialValue l = eval(b, -1);
    const PotentialValue r = eval(b, +1);
    const long double sf = 1.0L + std::max(std::abs(l.f), std::abs(r.f));
    const long double sd = 1.0L + std::max(std::abs(l.df), std::abs(r.df));
    m = std::max(m, static_cast<double>(std::abs(l.f - r.f) / sf));
    m = std::max(m, static_cast<double>(std::abs(l.df - r.df) / sd));
  }
  return m;
}

PiecewisePotential make_focal_potential(const FocalParams& p, Orientation o) {
  FocalParams::make(p.n, p.sigma, p.lambda, p.lambda_bar);
  const FocalDerivedL d = derive_long(p.n, p.sigma, p.lambda, p.lambda_bar);
  const long double shift = d.rho_lambda - d.rho_sigma;
  const long double inv_lb = 1.0L / d.lambda_bar;

  auto linear = [d, shift, inv_lb](long double rho) {
    const long double u = rho + shift;
    return PotentialValue{-d.a * (u - inv_lb) + d.b, -d.a, 0.0L};
  };
  auto log_sin = [d, shift](long double rho) {
    const long double x = d.beta * (rho + shift);
    const long double s = std::sin(x);
    const long double c = std::cos(x);
    return PotentialValue{-2.0L * std::log(s), -2.0L * d.beta * c / s,
                          2.0L * d.beta * d.beta / (s * s)};
  };
  auto zero = [](long double) { return PotentialValue{0.0L, 0.0L, 0.0L}; };

  return PiecewisePotential({p.first_break(), p.second_break()},
                            {linear, log_sin, zero},
                            o == Orientation::N ? 1.0 : -1.0);
}

Report check_focal_regularity(const FocalParams& p, double r_f) {
  Report rep;
  rep.check = "focal_regularity";
  rep.params = {{"n", p.n}, {"sigma", p.sigma}, {"lambda", p.lambda},
                {"lambda_bar", p.lambda_bar}, {"r_f", r_f}};
  rep.tolerance = 1e-10;
  const double scale = std::sqrt(p.n / p.sigma);
  const double support_end = p.rho_sigma + kPi / (2.0 * p.beta);
  const double half_bound = 4.5 * scale;
  rep.add_region("support_chain", half_bound - support_end);
  rep.add_region("focal_radius", r_f - 9.0 * scale);
  const double defect_n = make_focal_potential(p, Orientation::N).continuity_defect();
  const double defect_d = make_focal_potential(p, Orientation::D).continuity_defect();
  const double defect = std::max(defect_n, defect_d);
  rep.add_region("continuity", rep.tolerance - defect);
  rep.details = {{"support_end", support_end},
                 {"second_breakpoint", p.second_break()},
                 {"half_bound", half_bound},
                 {"continuity_defect", defect},
                 {"vanishes_beyond_half_rf", p.second_break() <= 0.5 * r_f}};
  rep.pass = support_end < half_bound && half_bound <= 0.5 * r_f &&
             r_f > 9.0 * scale && defect <= rep.tolerance &&
             p.second_break() <= 0.5 * r_f;
  return rep;
}

Report check_focal_boundary(const FocalParams& p) {
  if (p.lambda_bar < p.n * std::sqrt(p.sigma)) {
    throw std::domain_error("boundary check needs lambda_bar >= n sqrt(sigma)");
  }
  Report rep;
  rep.check = "focal_boundary";
  rep.params = {{"n", p.n}, {"sigma", p.sigma}, {"lambda_bar", p.lambda_bar}};
  rep.tolerance = 0.0;
  const double y = p.beta / p.lambda_bar;
  const double y_max = 1.0 / std::sqrt(8.0 * p.n);
  const double two_y_cot = 2.0 * y / std::tan(y);
  const PotentialValue v0 = make_focal_potential(p, Orientation::N).eval(0.0L);
  const double normal_ratio = static_cast<double>(-v0.df) / p.lambda_bar;
  rep.add_region("y_bound", y_max - y);
  rep.add_region("two_y_cot_y", two_y_cot - 1.0);
  rep.add_region("normal_derivative", normal_ratio - 1.0);
  rep.details = {{"y", y},
                 {"y_max", y_max},
                 {"two_y_cot_y", two_y_cot},
                 {"normal_derivative_over_lambda_bar", normal_ratio}};
  rep.pass = y <= y_max && y < 1.0 && two_y_cot >= 1.0 && normal_ratio >= 1.0;
  return rep;
}

Report verify_focal_inequality(const FocalParams& p, double r_f, Orientation o,
                               const FocalGrid& grid,
                               std::vector<MarginSample>* curve) {
  const double scale = std::sqrt(p.n / p.sigma);
  if (!(r_f > 9.0 * scale)) {
    throw std::domain_error("focal inequality needs r_f > 9 sqrt(n/sigma)");
  }
  if (grid.points < 10000) {
    throw std::invalid_argument("focal grid needs at least 1e4 points");
  }
  const PiecewisePotential f = make_focal_potential(p, o);
  const long double n = p.n;
  const long double half_gap = (n - 2) * p.sigma / 2.0L;
  const long double quarter_gap = (n - 2) * p.sigma / 4.0L;
  const long double hess_const =
      o == Orientation::N ? 4.0L * (n - 2) / r_f : 8.0L / r_f;

  struct Sample {
    long double rho;
    int side;
  };
  std::vector<Sample> samples;
  for (int i = 0; i <= grid.points; ++i) {
    samples.push_back({static_cast<long double>(r_f) * i / grid.points, 1});
  }
  for (double b : f.breakpoints()) {
    samples.push_back({b, -1});
    samples.push_back({b, 1});
    samples.push_back({b - grid.breakpoint_offset, 1});
    samples.push_back({b + grid.breakpoint_offset, 1});
  }
  samples.push_back({p.rho_sigma, 1});
  samples.push_back({0.5L * r_f, 1});
  samples.push_back({0.5L * r_f + grid.breakpoint_offset, 1});
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.rho < b.rho || (a.rho == b.rho && a.side < b.side);
  });

  const double inf = std::numeric_limits<double>::infinity();
  double m_outer = inf, m_mid = inf, m_inner = inf;
  double identity_residual = 0.0;
  const double b1 = f.breakpoints()[0];
  const double b2 = f.breakpoints()[1];
  for (const Sample& s : samples) {
    const PotentialValue v = f.eval(s.rho, s.side);
    const long double C =
        (n - 1) * p.lambda / ((n - 1) + p.lambda * s.rho) + hess_const;
    long double lhs;
    if (o == Orientation::N) {
      lhs = C * v.df - v.d2f + v.df * v.df;
    } else {
      lhs = -C * v.df + v.d2f + v.df * v.df;
    }
    const double margin = static_cast<double>(lhs + half_gap);
    const double rho = static_cast<double>(s.rho);
    if (rho > 0.5 * r_f) {
      m_outer = std::min(m_outer, margin);
    } else if (rho >= p.rho_sigma) {
      m_mid = std::min(m_mid, margin);
    } else {
      m_inner = std::min(m_inner, margin);
    }
    const bool middle_piece = (rho > b1 && rho < b2) ||
                              (rho == b1 && s.side > 0) ||
                              (rho == b2 && s.side < 0);
    if (middle_piece) {
      const long double id = o == Orientation::N
                                 ? -v.d2f + v.df * v.df / 2.0L + quarter_gap
                                 : v.d2f + v.df * v.df / 2.0L + quarter_gap;
      identity_residual =
          std::max(identity_residual, static_cast<double>(std::abs(id)));
    }
    if (curve) {
      curve->push_back({rho, static_cast<double>(lhs),
                        static_cast<double>(-half_gap), margin});
    }
  }

  Report rep;
  rep.check = o == Orientation::N ? "focal_inequality_N" : "focal_inequality_D";
  rep.params = {{"n", p.n}, {"sigma", p.sigma}, {"lambda", p.lambda},
                {"lambda_bar", p.lambda_bar}, {"r_f", r_f},
                {"grid_points", grid.points}};
  rep.tolerance = 1e-9;
  rep.add_region("rho>r_f/2", m_outer);
  rep.add_region("r_f/2>=rho>=rho_sigma", m_mid);
  rep.add_region("rho<rho_sigma", m_inner);
  rep.details = {{"middle_identity_residual", identity_residual},
                 {"outer_expected", static_cast<double>(half_gap)},
                 {"rho_sigma", p.rho_sigma},
                 {"breakpoints", {b1, b2}},
                 {"samples", samples.size()}};
  rep.pass = m_outer > 0 && m_mid > 0 && m_inner > 0 &&
             identity_residual < rep.tolerance;
  return rep;
}

ChiCutoff::ChiCutoff(double plateau_end) : plateau_end_(plateau_end) {
  if (!(plateau_end > 0.75 && plateau_end <= 1.0)) {
    throw std::domain_error("plateau end must lie in (3/4, 1]");
  }
  const double x0 = 0.5;
  const double w = plateau_end - x0;
  const double eps = 0.5 * (w - 0.25);
  height_ = 1.0 / (w - eps);
  const double jerk = height_ / eps;

  knots_.push_back({0.0, 0.0, -1.0, 0.0, 0.0});
  auto advance = [this](double x_next, double d3_next) {
    const Knot& k = knots_.back();
    const double s = x_next - k.x;
    Knot n{x_next,
           k.f + k.d1 * s + k.d2 * s * s / 2.0 + k.d3 * s * s * s / 6.0,
           k.d1 + k.d2 * s + k.d3 * s * s / 2.0, k.d2 + k.d3 * s, d3_next};
    knots_.push_back(n);
  };
  advance(x0, jerk);
  knots_.back().d2 = 0.0;
  advance(x0 + eps, 0.0);
  knots_.back().d2 = height_;
  advance(plateau_end - eps, -jerk);
  advance(plateau_end, 0.0);
  knots_.back().d1 = 0.0;
  knots_.back().d2 = 0.0;
  plateau_ = knots_.back().f;
}

const ChiCutoff::Knot& ChiCutoff::segment(double x) const {
  if (x < 0) throw std::domain_error("cutoff is defined on [0, inf)");
  std::size_t i = knots_.size() - 1;
  while (i > 0 && knots_[i].x > x) --i;
  return knots_[i];
}

double ChiCutoff::value(double x) const {
  const Knot& k = segment(x);
  const double s = x - k.x;
  return k.f + k.d1 * s + k.d2 * s * s / 2.0 + k.d3 * s * s * s / 6.0;
}

double ChiCutoff::d1(double x) const {
  const Knot& k = segment(x);
  const double s = x - k.x;
  return k.d1 + k.d2 * s + k.d3 * s * s / 2.0;
}

double ChiCutoff::d2(double x) const {
  const Knot& k = segment(x);
  return k.d2 + k.d3 * (x - k.x);
}

ChiCutoff make_chi(double plateau_end) { return ChiCutoff(plateau_end); }

Report check_chi(const ChiCutoff& chi, int samples) {
  Report rep;
  rep.check = "chi_cutoff";
  rep.params = {{"plateau_end", chi.plateau_end()}, {"samples", samples}};
  rep.tolerance = 1e-12;
  const double inf = std::numeric_limits<double>::infinity();
  double m_linear = inf, m_d1 = inf, m_d2 = inf, m_plateau = inf;
  const double x_max = 1.25;
  for (int i = 0; i <= samples; ++i) {
    const double x = x_max * i / samples;
    const double v = chi.value(x);
    const double d1 = chi.d1(x);
    const double d2 = chi.d2(x);
    if (x <= 0.5) m_linear = std::min(m_linear, -std::abs(v + x));
    m_d1 = std::min({m_d1, d1 + 1.0, -d1});
    m_d2 = std::min({m_d2, d2, 4.0 - d2});
    if (x >= chi.plateau_end()) {
      m_plateau = std::min(
          m_plateau, -std::max({std::abs(d1), std::abs(d2),
                                std::abs(v - chi.plateau_value())}));
    }
  }
  rep.add_region("linear_part", m_linear);
  rep.add_region("first_derivative", m_d1);
  rep.add_region("second_derivative", m_d2);
  rep.add_region("plateau", m_plateau);
  rep.details = {{"plateau_value", chi.plateau_value()},
                 {"bump_height", chi.bump_height()},
                 {"d1_at_0", chi.d1(0.0)}};
  rep.pass = rep.min_margin() >= -rep.tolerance;
  return rep;
}

double BandwidthParams::r() const { return std::min(0.5 * L, 0.5 * r_f); }

double bandwidth_laplace_term(const BandwidthParams& p) {
  const double r = p.r();
  const double lr = p.Lambda * r;
  if (lr < kFlatLambdaR) return (p.n - 1) * p.delta / r;
  return (p.n - 1) * p.delta * p.Lambda / std::tanh(lr);
}

double bandwidth_margin(const BandwidthParams& p) {
  const double r = p.r();
  return 0.5 * (p.n - 2) * p.sigma - bandwidth_laplace_term(p) -
         4.0 * p.delta / r - 2.0 * p.delta * p.delta;
}

double bandwidth_bound(double sigma, double delta) {
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
  const double s = std::sqrt(sigma);
  return 51.0 / s * std::atan(delta / s);
}

double L_chain_constant(int n) {
  if (n <= 3) throw std::invalid_argument("chain constant needs n >= 4");
  return 32.0 * (n + 1) / (kPi * (n - 3));
}

Report verify_bandwidth_margin(const BandwidthParams& p) {
  Report rep;
  rep.check = "bandwidth_margin";
  rep.params = {{"n", p.n},         {"sigma", p.sigma}, {"delta", p.delta},
                {"Lambda", p.Lambda}, {"r_f", p.r_f},   {"L", p.L}};
  rep.tolerance = 0.0;
  if (!(p.sigma > 0) || !(p.r_f > 0) || !(p.L > 0) || p.delta < 0 ||
      p.Lambda < 0) {
    throw std::invalid_argument("bandwidth parameters out of range");
  }
  const double s = std::sqrt(p.sigma);
  const double r = p.r();
  const int n = p.n;
  const double inf = std::numeric_limits<double>::infinity();
  const double ric_cap =
      p.Lambda > 0 ? (n - 2) * p.sigma / (10.0 * (n - 1) * p.Lambda) : inf;
  const double focal_cap = (n - 3) * p.sigma * p.r_f / (8.0 * (n + 1));
  const double r_cap = (n - 3) * p.sigma * r / (4.0 * (n + 1));
  const double root_cap = 0.5 * s;
  const double L_min = bandwidth_bound(p.sigma, p.delta);

  nlohmann::json hyp = {
      {"n_even_ge_4", n >= 4 && n % 2 == 0},
      {"delta_below_ricci_cap", p.delta < ric_cap},
      {"delta_below_focal_cap", p.delta < focal_cap},
      {"delta_below_root_cap", p.delta < root_cap},
      {"width_above_bound", p.L > L_min},
      {"delta_below_r_cap", p.delta < r_cap}};
  bool hyp_ok = true;
  for (const auto& [k, v] : hyp.items()) hyp_ok = hyp_ok && v.get<bool>();

  const double mu = bandwidth_margin(p);
  const double lr = p.Lambda * r;
  const double base = 0.5 * (n - 2) * p.sigma;
  double case_bound;
  std::string which;
  if (lr <= 1.0) {
    which = "Lambda_r<=1";
    case_bound = base - 2.0 * (n + 1) * p.delta / r - 2.0 * p.delta * p.delta;
  } else {
    which = "Lambda_r>1";
    case_bound = base - 2.0 * (n - 1) * p.delta * p.Lambda - 4.0 * p.delta / r -
                 2.0 * p.delta * p.delta;
  }
  rep.add_region("mu", mu);
  rep.details = {{"r", r},
                 {"mu", mu},
                 {"laplace_term", bandwidth_laplace_term(p)},
                 {"flat_dispatch", lr < kFlatLambdaR},
                 {"hypotheses", hyp},
                 {"hypotheses_hold", hyp_ok},
                 {"case", which},
                 {"case_lower_bound", case_bound},
                 {"width_lower_limit", L_min},
                 {"caps", {{"ricci", number(ric_cap)},
                           {"focal", focal_cap},
                           {"r", r_cap},
                           {"root", root_cap}}}};
  rep.pass = mu > 0;
  return rep;
}

Report check_L_chain(int n, double sigma, double delta) {
  Report rep;
  rep.check = "L_chain";
  rep.params = {{"n", n}, {"sigma", sigma}, {"delta", delta}};
  rep.tolerance = 1e-12;
  const double c4 = L_chain_constant(4);
  double worst = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (int m = 4; m <= 4096; ++m) {
    const double c = L_chain_constant(m);
    worst = std::max(worst, c);
    if (m > 4 && c > L_chain_constant(m - 1)) monotone = false;
  }
  double arctan_min = std::numeric_limits<double>::infinity();
  const int grid = 10000;
  for (int i = 0; i <= grid; ++i) {
    const double y = static_cast<double>(i) / grid;
    arctan_min = std::min(arctan_min, std::atan(y) - 0.25 * kPi * y);
  }
  const double s = std::sqrt(sigma);
  const double y = delta / s;
  const bool y_ok = y < 1.0;
  double chain_gap = 0.0;
  if (y_ok && n > 3) {
    chain_gap = L_chain_constant(n) / s * std::atan(y) -
                8.0 * (n + 1) * delta / ((n - 3) * sigma);
  }
  rep.add_region("constant_51", 51.0 - worst);
  rep.add_region("arctan_bound", arctan_min);
  rep.add_region("chain", chain_gap);
  rep.details = {{"max_constant", worst},
                 {"constant_n4", c4},
                 {"constant_n4_minus_160_over_pi", c4 - 160.0 / kPi},
                 {"monotone_decreasing", monotone},
                 {"delta_over_sqrt_sigma", y},
                 {"chain_applicable", y_ok}};
  rep.pass = worst < 51.0 && monotone && std::abs(c4 - 160.0 / kPi) < 1e-9 &&
             arctan_min >= -rep.tolerance && y_ok && chain_gap >= -rep.tolerance;
  return rep;
}

Report hessian_form_bounds(const SymBilinear& H, const FormElement& omega,
                           double r_f, double lambda, double rho) {
  const int n = omega.dim();
  require_symmetric(H, 1e-12);
  if (H.rows() != n) throw DimensionError("Hessian does not match the form");
  if (n % 2 != 0 || n < 4) throw std::invalid_argument("needs even n >= 4");
  if (!omega.is_homogeneous(2)) throw std::invalid_argument("omega must be a 2-form");
  if (!(r_f > 0)) throw std::invalid_argument("r_f must be positive");

  Report rep;
  rep.check = "hessian_form_bounds";
  rep.params = {{"n", n}, {"r_f", r_f}, {"lambda", lambda}, {"rho", rho}};
  rep.tolerance = 1e-10;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double tr = H.trace();
  const double lap_cap = (n - 1) * lambda / ((n - 1) + lambda * rho);
  const bool hyp = lmin >= -2.0 / r_f - 1e-12 && tr <= lap_cap + 1e-12;

  const double w2 = omega.norm2();
  std::vector<FormElement> wed, intr;
  for (int i = 0; i < n; ++i) {
    wed.push_back(wedge_basis(i, omega));
    intr.push_back(interior_basis(i, omega));
  }
  double s_wedge = 0.0, s_int = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (H(i, j) == 0.0) continue;
      s_wedge += H(i, j) * inner(wed[i], wed[j]).real();
      s_int += H(i, j) * inner(intr[i], intr[j]).real();
    }
  const double c1 = lap_cap + 4.0 * (n - 2) / r_f;
  const double c2 = lap_cap + 8.0 / r_f;
  const double lhs1 = tr * w2 - 2.0 * s_wedge;
  const double lhs2 = -tr * w2 + 2.0 * s_int;
  const double norm = w2 > 0 ? w2 : 1.0;
  rep.add_region("wedge_display", (c1 * w2 - lhs1) / norm);
  rep.add_region("interior_display", (lhs2 + c2 * w2) / norm);
  rep.details = {{"hypotheses_met", hyp},
                 {"lambda_min", lmin},
                 {"trace", tr},
                 {"laplace_cap", lap_cap},
                 {"margins_per_unit_norm", true}};
  rep.pass = hyp && rep.min_margin() >= -rep.tolerance;
  return rep;
}

Report boundary_form_bounds(const SymBilinear& A, const FormElement& omega,
                            ConvexityMode mode) {
  const int n = omega.dim();
  require_symmetric(A, 1e-12);
  if (A.rows() != n - 1) throw DimensionError("A must act on R^{n-1}");
  if (!omega.is_homogeneous(2)) throw std::invalid_argument("omega must be a 2-form");
  const Vector nu = basis_vector(n, n - 1);
  const BoundarySplit split = boundary_split(nu, omega);
  const double scale = std::max(1.0, omega.max_abs());
  if (mode == ConvexityMode::TwoConvex && split.normal.max_abs() > 1e-12 * scale) {
    throw std::invalid_argument("two-convex mode needs a tangential form");
  }
  if (mode == ConvexityMode::NMinusTwoConvex &&
      split.tangential.max_abs() > 1e-12 * scale) {
    throw std::invalid_argument("(n-2)-convex mode needs a normal form");
  }
  const int k = mode == ConvexityMode::TwoConvex ? 2 : n - 2;
  const double lam = k_convexity_defect(A, k);

  double contraction = 0.0;
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) {
      if (A(i, j) == 0.0) continue;
      FormElement t = mode == ConvexityMode::TwoConvex
                          ? wedge_basis(i, interior_basis(j, omega))
                          : interior_basis(i, wedge_basis(j, omega));
      contraction += A(i, j) * inner(t, omega).real();
    }
  const double w2 = omega.norm2();
  Report rep;
  rep.check = mode == ConvexityMode::TwoConvex ? "boundary_form_two_convex"
                                               : "boundary_form_n_minus_two_convex";
  rep.params = {{"n", n}, {"k", k}};
  rep.tolerance = 1e-10;
  const double norm = w2 > 0 ? w2 : 1.0;
  rep.add_region("contraction", (contraction + lam * w2) / norm);
  rep.details = {{"lambda", lam}, {"contraction", contraction}, {"norm2", w2}};
  rep.pass = rep.min_margin() >= -rep.tolerance;
  return rep;
}

}  // namespace pictk
