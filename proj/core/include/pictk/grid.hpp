#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pictk/curvature.hpp"
#include "pictk/exterior.hpp"

namespace pictk {

// Flat band T^{n-1} x [0, L]. Directions 0..n-2 are periodic with period ell,
// direction n-1 is radial with N_r points. Transverse resolution is per
// direction; a resolution of 1 marks a direction the fields do not depend on.
struct FlatBandGrid {
  int n = 4;
  double L = 1.0;
  int Nr = 32;
  std::vector<int> Nt;
  double ell = 1.0;

  static FlatBandGrid make(int n, double L, int Nr, int Nt, double ell);
  static FlatBandGrid make(int n, double L, int Nr, std::vector<int> Nt, double ell);
  void validate() const;

  double h() const { return L / (Nr - 1); }
  double spacing(int dir) const;
  int extent(int dir) const { return dir == n - 1 ? Nr : Nt[dir]; }
  std::size_t nodes() const;
  std::size_t stride(int dir) const;
  int coord(std::size_t node, int dir) const;
  double position(std::size_t node, int dir) const;
  Vector point(std::size_t node) const;
  // Quadrature weight: trapezoid radially, uniform transversally.
  double weight(std::size_t node) const;
  // Transverse cell area for boundary integrals.
  double boundary_weight() const;
};

// Real form coefficients at every node, node-major with 2^n slots per node.
// degree < 0 marks a mixed-degree field.
class FormField {
 public:
  FormField() = default;
  FormField(const FlatBandGrid& g, int degree);

  const FlatBandGrid& grid() const { return grid_; }
  int degree() const { return degree_; }
  void set_degree(int k) { degree_ = k; }
  std::size_t slots() const { return slots_; }
  std::size_t nodes() const { return grid_.nodes(); }

  double* at(std::size_t node) { return data_.data() + node * slots_; }
  const double* at(std::size_t node) const { return data_.data() + node * slots_; }
  FormElement node(std::size_t i) const;
  void set_node(std::size_t i, const FormElement& a);

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  FormField& operator+=(const FormField& o);
  FormField& operator-=(const FormField& o);
  FormField& operator*=(double s);

 private:
  FlatBandGrid grid_;
  int degree_ = 0;
  std::size_t slots_ = 0;
  std::vector<double> data_;
};

FormField operator+(FormField a, const FormField& b);
FormField operator-(FormField a, const FormField& b);
FormField operator*(double s, FormField a);

// Scalar samples on the grid.
struct ScalarField {
  FlatBandGrid grid;
  std::vector<double> values;
};

// a * cos(2 pi k.x / ell + phase) * poly(r) * theta^I
struct TrigTerm {
  std::uint32_t mask = 0;
  double amp = 1.0;
  std::vector<int> k;
  double phase = 0.0;
  std::vector<double> radial{1.0};
};

struct FieldSpec {
  int n = 4;
  double ell = 1.0;
  std::vector<TrigTerm> terms;

  int degree() const;
  FormElement eval(const Vector& x) const;
  static FieldSpec from_json(const nlohmann::json& j, int n, double ell);
  nlohmann::json to_json() const;
  // Smooth random field with the given number of terms; degree < 0 mixes degrees.
  // Frequencies only use transverse directions flagged active.
  static FieldSpec random(int n, double ell, int degree, int terms,
                          const std::vector<bool>& active, std::uint64_t seed);
};

// f = poly(r) + sum a * cos(2 pi k.x / ell + phase).
struct ScalarSpec {
  int n = 4;
  double ell = 1.0;
  std::vector<double> radial;
  std::vector<TrigTerm> terms;  // mask ignored

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  SymBilinear hessian(const Vector& x) const;
  double laplacian(const Vector& x) const;
  static ScalarSpec from_json(const nlohmann::json& j, int n, double ell);
  nlohmann::json to_json() const;
};

FormField sample(const FlatBandGrid& g, const FieldSpec& s);
ScalarField sample(const FlatBandGrid& g, const ScalarSpec& s);

// Second-order first derivative along one direction.
FormField partial(const FormField& F, int dir);
std::vector<double> partial(const ScalarField& f, int dir);

FormField d_grid(const FormField& F);
FormField dstar_grid(const FormField& F);
FormField laplacian_grid(const FormField& F);
// sum_i c(e_i) d_i F through the Clifford contractions.
FormField dirac_clifford(const FormField& F);
// d_grid + dstar_grid + ct(grad f); grad f from grid differences of f.
FormField D_f_grid(const FormField& F, const ScalarField& f);

// Pointwise multiplication by exp(s * f).
FormField scale_exp(const FormField& F, const ScalarField& f, double s);

double sup_norm(const FormField& F);
// sup over nodes with radial index in [r_lo, r_hi).
double sup_norm(const FormField& F, int r_lo, int r_hi);
double integrate_inner(const FormField& a, const FormField& b);

// sup |D_f F - e^{-f} d e^{f} F - e^{f} d* e^{-f} F|
double conjugation_residual(const FormField& F, const ScalarField& f);
// sup |dirac_clifford - (d + d*)|
double dirac_paths_residual(const FormField& F);

double green_residual_dirac(const FormField& alpha, const FormField& beta,
                            const ScalarField& f);
double green_residual_laplace(const FormField& alpha, const FormField& beta);
// Pointwise sup with analytic f data over radial indices 2..N_r-3 that lie
// within [margin L, (1 - margin) L].
double twisted_weitzenboeck_residual(const FormField& omega, const ScalarSpec& f,
                                     double margin = 0.25);

double chi_eigenform_boundary_identity(const FormElement& omega, const Vector& gradf,
                                       const Vector& nu, int sign);
double contraction_trace_identity(const SymBilinear& H, const FormElement& omega);

struct GridConfig {
  FlatBandGrid grid;
  std::vector<FieldSpec> fields;
  ScalarSpec f;
  static GridConfig from_json(const nlohmann::json& j);
  static GridConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

struct ConvergenceRow {
  std::string family;
  double h = 0;
  double residual = 0;
  double order = 0;  // log2 ratio to the previous level, NaN on the first
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> families() const;
  // Observed orders for a family, one per refinement.
  std::vector<double> orders(const std::string& family) const;
};

// Runs all residual families on grids with N_r = base_Nr * 2^j and
// transverse resolution base_Nt * 2^j on active directions.
ConvergenceStudy convergence_study(const GridConfig& base, int levels);

}  // namespace pictk
