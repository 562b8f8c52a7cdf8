#include "pictk/comparison.hpp"

#include <cmath>
#include <stdexcept>

#include "pictk/error.hpp"

namespace pictk {

void validate(const ComparisonParams& p) {
  if (p.n < 2) throw std::invalid_argument("comparison needs n >= 2");
  if (p.K < 0 || p.Lambda < 0 || p.rho < 0) {
    throw std::invalid_argument("K, Lambda and rho must be nonnegative");
  }
}

double laplace_upper_negative_boundary(const ComparisonParams& p) {
  validate(p);
  const double m = p.n - 1.0;
  if (p.K < kFlatK) return m * p.Lambda / (m + p.Lambda * p.rho);
  const double s = std::sqrt(p.K);
  const double t = std::tanh(s * p.rho);
  return m * s * (p.Lambda + m * s * t) / (m * s + p.Lambda * t);
}

double hessian_upper_negative_boundary(const ComparisonParams& p) {
  validate(p);
  if (p.K < kFlatK) return p.Lambda / (1.0 + p.Lambda * p.rho);
  const double s = std::sqrt(p.K);
  const double t = std::tanh(s * p.rho);
  return s * (p.Lambda + s * t) / (s + p.Lambda * t);
}

double positive_boundary_pole(double K, double Lambda) {
  if (K <= 0) throw std::domain_error("positive-boundary barrier needs K > 0");
  const double s = std::sqrt(K);
  if (Lambda <= s) return INFINITY;
  return std::atanh(s / Lambda) / s;
}

double positive_boundary_pole_bisect(double K, double Lambda, double tol) {
  if (K <= 0) throw std::domain_error("positive-boundary barrier needs K > 0");
  const double s = std::sqrt(K);
  if (Lambda <= s) return INFINITY;
  auto den = [&](double r) { return s - Lambda * std::tanh(s * r); };
  double lo = 0.0;
  double hi = 1.0 / s;
  while (den(hi) > 0) hi *= 2.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (den(mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PositiveBarrier laplace_upper_positive_boundary(const ComparisonParams& p) {
  validate(p);
  if (p.K <= 0) throw std::domain_error("positive-boundary barrier needs K > 0");
  const double s = std::sqrt(p.K);
  const double t = std::tanh(s * p.rho);
  PositiveBarrier out;
  out.has_pole = p.Lambda > s;
  out.pole = positive_boundary_pole(p.K, p.Lambda);
  const double den = s - p.Lambda * t;
  if (den <= 0) {
    out.pole_beyond = true;
    out.value = -INFINITY;
    return out;
  }
  out.value = (p.n - 1.0) * s * (s * t - p.Lambda) / den;
  return out;
}

double hessian_lower_focal(const ComparisonParams& p) {
  if (p.r_f <= 0) throw std::invalid_argument("focal radius must be positive");
  if (p.K < kFlatK) return -2.0 / p.r_f;
  const double s = std::sqrt(p.K);
  return -s / std::tanh(0.5 * p.r_f * s);
}

double laplace_lower_focal(const ComparisonParams& p) {
  return (p.n - 1.0) * hessian_lower_focal(p);
}

bool focal_bound_valid(const ComparisonParams& p) { return p.rho <= 0.5 * p.r_f; }

RotSymModel RotSymModel::constant_curvature(int n, double K,
                                            const Eigen::MatrixXd& A0) {
  if (A0.rows() != n - 1 || A0.cols() != n - 1) {
    throw DimensionError("shape operator must be (n-1) x (n-1)");
  }
  RotSymModel m;
  m.n = n;
  m.A0 = A0;
  m.radial_sectional = [n, K](double) {
    return Eigen::MatrixXd(-K * Eigen::MatrixXd::Identity(n - 1, n - 1));
  };
  return m;
}

RotSymModel RotSymModel::constant_curvature(int n, double K, double a0) {
  return constant_curvature(n, K, a0 * Eigen::MatrixXd::Identity(n - 1, n - 1));
}

namespace {

struct JacobiState {
  Eigen::MatrixXd Y;
  Eigen::MatrixXd Yp;
};

JacobiState rk4_step(const RotSymModel& m, double t, const JacobiState& s,
                     double h) {
  auto rhs = [&](double tt, const JacobiState& x) {
    return JacobiState{x.Yp, -m.radial_sectional(tt) * x.Y};
  };
  const JacobiState k1 = rhs(t, s);
  const JacobiState s2{s.Y + 0.5 * h * k1.Y, s.Yp + 0.5 * h * k1.Yp};
  const JacobiState k2 = rhs(t + 0.5 * h, s2);
  const JacobiState s3{s.Y + 0.5 * h * k2.Y, s.Yp + 0.5 * h * k2.Yp};
  const JacobiState k3 = rhs(t + 0.5 * h, s3);
  const JacobiState s4{s.Y + h * k3.Y, s.Yp + h * k3.Yp};
  const JacobiState k4 = rhs(t + h, s4);
  return JacobiState{
      s.Y + (h / 6.0) * (k1.Y + 2.0 * k2.Y + 2.0 * k3.Y + k4.Y),
      s.Yp + (h / 6.0) * (k1.Yp + 2.0 * k2.Yp + 2.0 * k3.Yp + k4.Yp)};
}

bool singular(const JacobiState& s, double det0_sign) {
  const double det = s.Y.determinant();
  if (det * det0_sign <= 0) return true;
  const Eigen::MatrixXd S = s.Yp * s.Y.inverse();
  return S.cwiseAbs().maxCoeff() > 1e8;
}

double top_eigenvalue(const JacobiState& s) {
  const Eigen::MatrixXd S = s.Yp * s.Y.inverse();
  const Eigen::MatrixXd sym = 0.5 * (S + S.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

double curvature_norm(const RotSymModel& m, double t) {
  const Eigen::MatrixXd R = m.radial_sectional(t);
  const Eigen::MatrixXd sym = 0.5 * (R + R.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

// A step crosses a focal point when Y degenerates, or when the top eigenvalue
// of S rises faster than S' = -S^2 - R allows; the latter catches zeros of
// even multiplicity where det Y keeps its sign.
bool crosses(const RotSymModel& m, double t, const JacobiState& from, double h,
             const JacobiState& to) {
  if (singular(to, 1.0)) return true;
  const double r = std::max({curvature_norm(m, t), curvature_norm(m, t + 0.5 * h),
                             curvature_norm(m, t + h)});
  const double before = top_eigenvalue(from);
  return top_eigenvalue(to) > before + 2.0 * h * (r + 1.0) + 1e-9 * (1.0 + std::abs(before));
}

}  // namespace

RiccatiResult riccati_oracle(const RotSymModel& model, double rho, double step) {
  const int d = model.n - 1;
  if (d < 1) throw std::invalid_argument("model needs n >= 2");
  if (model.A0.rows() != d || model.A0.cols() != d) {
    throw DimensionError("shape operator must be (n-1) x (n-1)");
  }
  if (rho < 0) throw std::invalid_argument("rho must be nonnegative");
  const double h0 = step > 0 ? step : 1e-4 * std::max(1.0, rho);

  JacobiState s{Eigen::MatrixXd::Identity(d, d), -model.A0};
  RiccatiResult out;
  double t = 0.0;
  while (t < rho) {
    const double h = std::min(h0, rho - t);
    const JacobiState next = rk4_step(model, t, s, h);
    if (crosses(model, t, s, h, next)) {
      // Bisect on the step length from the last regular state.
      double lo = 0.0;
      double hi = h;
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (crosses(model, t, s, mid, rk4_step(model, t, s, mid))) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      out.crossed = true;
      out.crossing = t + 0.5 * (lo + hi);
      return out;
    }
    s = next;
    t += h;
  }
  out.S = s.Yp * s.Y.inverse();
  out.trace = out.S.trace();
  return out;
}

double index_form(const Profile& prof, const ComparisonParams& p, int panels) {
  validate(p);
  if (std::abs(prof.f(1.0) - 1.0) > 1e-12) {
    throw std::invalid_argument("index-form profile must satisfy f(1) = 1");
  }
  int m = std::max(panels, 10000);
  if (m % 2) ++m;
  const double h = 1.0 / m;
  const double c = (p.n - 1.0);
  const double k2 = p.K * p.rho * p.rho;
  auto integrand = [&](double t) {
    const double f = prof.f(t);
    const double df = prof.df(t);
    return c * df * df + c * k2 * f * f;
  };
  double s = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < m; ++i) {
    s += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
  }
  const double f0 = prof.f(0.0);
  return s * h / 3.0 + f0 * f0 * p.Lambda * p.rho;
}

Profile optimal_profile(const ComparisonParams& p) {
  validate(p);
  const double lam = std::sqrt(p.K) * p.rho;
  const double m = p.n - 1.0;
  if (p.K < kFlatK || lam < 1e-12) {
    if (p.Lambda * p.rho == 0.0) {
      return {[](double) { return 1.0; }, [](double) { return 0.0; }};
    }
    // Linear profile with f'(0)/f(0) = Lambda rho/(n-1).
    const double c = p.Lambda * p.rho / m;
    return {[c](double t) { return (1.0 + c * t) / (1.0 + c); },
            [c](double) { return c / (1.0 + c); }};
  }
  if (p.Lambda == 0.0) {
    return {[lam](double t) { return std::cosh(lam * t) / std::cosh(lam); },
            [lam](double t) { return lam * std::sinh(lam * t) / std::cosh(lam); }};
  }
  const double mu = m * std::sqrt(p.K) / p.Lambda;
  const double D = std::sinh(lam) + mu * std::cosh(lam);
  return {[lam, mu, D](double t) {
            return (std::sinh(lam * t) + mu * std::cosh(lam * t)) / D;
          },
          [lam, mu, D](double t) {
            return lam * (std::cosh(lam * t) + mu * std::sinh(lam * t)) / D;
          }};
}

}  // namespace pictk
