#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pictk/curvature.hpp"
#include "pictk/exterior.hpp"
#include "pictk/report.hpp"

namespace pictk {

struct FocalParams {
  int n = 4;
  double sigma = 1.0;
  double lambda = 5.0;
  double lambda_bar = 100.0;
  // Derived.
  double beta = 0.0;
  double rho_sigma = 0.0;
  double rho_lambda = 0.0;
  double a = 0.0;
  double b = 0.0;

  // Computes the derived fields and checks every invariant; throws
  // std::domain_error naming the first violated one.
  static FocalParams make(int n, double sigma, double lambda, double lambda_bar);
  // Violated invariants, empty when all hold.
  static std::vector<std::string> violations(int n, double sigma, double lambda,
                                             double lambda_bar);

  double first_break() const;   // rho_sigma - rho_lambda + 1/lambda_bar
  double second_break() const;  // rho_sigma - rho_lambda + pi/(2 beta)
};

enum class Orientation { N, D };

struct PotentialValue {
  long double f = 0;
  long double df = 0;
  long double d2f = 0;
};

// Closed-form piecewise potential with ordered breakpoints. At a breakpoint,
// side < 0 selects the left piece and side > 0 the right piece.
class PiecewisePotential {
 public:
  using Piece = std::function<PotentialValue(long double)>;

  PiecewisePotential(std::vector<double> breaks, std::vector<Piece> pieces,
                     double sign = 1.0);

  PotentialValue eval(long double x, int side = 1) const;
  const std::vector<double>& breakpoints() const { return breaks_; }
  double sign() const { return sign_; }
  // max over breakpoints of |f(b-) - f(b+)| and |f'(b-) - f'(b+)|, each
  // relative to 1 + the larger one-sided magnitude.
  double continuity_defect() const;

 private:
  std::vector<double> breaks_;
  std::vector<Piece> pieces_;
  double sign_;
};

PiecewisePotential make_focal_potential(const FocalParams& p, Orientation o);

Report check_focal_regularity(const FocalParams& p, double r_f);
Report check_focal_boundary(const FocalParams& p);

struct FocalGrid {
  int points = 10000;
  double breakpoint_offset = 1e-9;
};

struct MarginSample {
  double rho;
  double lhs;
  double rhs;
  double margin;
};

// Region margins of the interior inequality over [0, r_f]; also checks the
// middle-piece identity. Samples are appended to curve when non-null.
Report verify_focal_inequality(const FocalParams& p, double r_f, Orientation o,
                               const FocalGrid& grid = {},
                               std::vector<MarginSample>* curve = nullptr);

// C^2 cutoff: chi(x) = -x on [0, 1/2], chi'' a trapezoid bump on
// [1/2, plateau_end], constant afterwards.
class ChiCutoff {
 public:
  explicit ChiCutoff(double plateau_end = 0.9);

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  double plateau_end() const { return plateau_end_; }
  double plateau_value() const { return plateau_; }
  double bump_height() const { return height_; }

 private:
  struct Knot {
    double x, f, d1, d2, d3;
  };
  const Knot& segment(double x) const;
  std::vector<Knot> knots_;
  double plateau_end_;
  double plateau_;
  double height_;
};

ChiCutoff make_chi(double plateau_end = 0.9);
Report check_chi(const ChiCutoff& chi, int samples = 10000);

struct BandwidthParams {
  int n = 4;
  double sigma = 1.0;
  double delta = 0.0;
  double Lambda = 0.0;
  double r_f = 1.0;
  double L = 1.0;
  double r() const;
};

// Threshold on Lambda r below which the flat limit is used.
inline constexpr double kFlatLambdaR = 1e-10;

// (n-1) delta Lambda / tanh(Lambda r), with the flat limit (n-1) delta / r.
double bandwidth_laplace_term(const BandwidthParams& p);
double bandwidth_margin(const BandwidthParams& p);
Report verify_bandwidth_margin(const BandwidthParams& p);

double bandwidth_bound(double sigma, double delta);
double L_chain_constant(int n);  // 32(n+1)/(pi(n-3))
Report check_L_chain(int n, double sigma, double delta);

Report hessian_form_bounds(const SymBilinear& H, const FormElement& omega,
                           double r_f, double lambda, double rho);

enum class ConvexityMode { TwoConvex, NMinusTwoConvex };

// A acts on the first n-1 coordinates; the unit normal is e_n.
Report boundary_form_bounds(const SymBilinear& A, const FormElement& omega,
                            ConvexityMode mode);

}  // namespace pictk
