#pragma once

#include <Eigen/Dense>
#include <functional>

namespace pictk {

struct ComparisonParams {
  int n = 2;
  double K = 0.0;       // curvature lower-bound scale
  double Lambda = 0.0;  // boundary bound
  double rho = 0.0;     // distance to the boundary
  double r_f = 1.0;     // focal radius
};

void validate(const ComparisonParams& p);

// Below this K the flat limit formulas are used.
inline constexpr double kFlatK = 1e-10;

double laplace_upper_negative_boundary(const ComparisonParams& p);
double hessian_upper_negative_boundary(const ComparisonParams& p);

struct PositiveBarrier {
  bool pole_beyond = false;  // denominator <= 0 at rho
  double value = 0.0;        // barrier value when finite
  bool has_pole = false;     // Lambda > sqrt(K)
  double pole = 0.0;         // artanh(sqrt(K)/Lambda)/sqrt(K)
};

PositiveBarrier laplace_upper_positive_boundary(const ComparisonParams& p);
// Pole of the positive-boundary barrier by closed form.
double positive_boundary_pole(double K, double Lambda);
// Same pole by bisection on the sign of the denominator.
double positive_boundary_pole_bisect(double K, double Lambda, double tol = 1e-13);

double hessian_lower_focal(const ComparisonParams& p);
double laplace_lower_focal(const ComparisonParams& p);
// Whether rho <= r_f/2, where the focal lower bounds are asserted.
bool focal_bound_valid(const ComparisonParams& p);

// Normal-geodesic model: radial sectional curvature matrix along the geodesic
// and the second fundamental form A0 of the starting hypersurface (outward
// normal convention).
struct RotSymModel {
  int n = 2;
  std::function<Eigen::MatrixXd(double)> radial_sectional;
  Eigen::MatrixXd A0;

  static RotSymModel constant_curvature(int n, double K, const Eigen::MatrixXd& A0);
  static RotSymModel constant_curvature(int n, double K, double a0);
};

struct RiccatiResult {
  bool crossed = false;
  double crossing = 0.0;  // first focal/conjugate crossing when crossed
  double trace = 0.0;     // trace S(rho) when not crossed
  Eigen::MatrixXd S;
};

// Shape operator S = Y' Y^{-1} of the Jacobi system Y'' = -R_rad Y, Y(0) = I,
// Y'(0) = -A0, integrated by RK4 with step 1e-4 max(1, rho) unless given.
RiccatiResult riccati_oracle(const RotSymModel& model, double rho,
                             double step = 0.0);

struct Profile {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

// int_0^1 ((n-1) f'^2 + (n-1) K rho^2 f^2) dt + f(0)^2 Lambda rho by composite
// Simpson with at least 1e4 panels.
double index_form(const Profile& prof, const ComparisonParams& p,
                  int panels = 10000);
// Minimizing profile of the index form.
Profile optimal_profile(const ComparisonParams& p);

}  // namespace pictk
