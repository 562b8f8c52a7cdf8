#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "pictk/exterior.hpp"

namespace pictk {

// Symmetric bilinear form on R^n in the standard orthonormal frame.
using SymBilinear = Eigen::MatrixXd;

void require_symmetric(const SymBilinear& h, double tol = 0.0);

// Algebraic curvature tensor R_{ijkl} on R^n, stored densely (0-based).
// Convention: R_{ijij} is the sectional curvature of span(e_i, e_j).
class CurvTensor {
 public:
  CurvTensor() = default;
  explicit CurvTensor(int n);

  int dim() const { return n_; }
  double operator()(int i, int j, int k, int l) const {
    return d_[idx(i, j, k, l)];
  }
  // Writes v at (i,j,k,l) and at every image under the pair symmetries.
  void set(int i, int j, int k, int l, double v);
  // Raw write of a single slot; symmetry is not maintained.
  void set_raw(int i, int j, int k, int l, double v) { d_[idx(i, j, k, l)] = v; }

  const std::vector<double>& data() const { return d_; }

  // max |R_ijkl + R_jikl|, |R_ijkl + R_ijlk|, |R_ijkl - R_klij|.
  double symmetry_defect() const;
  // max |R_ijkl + R_jkil + R_kijl|.
  double bianchi_defect() const;
  // Throws std::domain_error if either defect exceeds tol.
  void validate(double tol = 1e-10) const;

  // Matrix of R on the ordered bivector basis {e_i ^ e_j : i < j}.
  Eigen::MatrixXd bivector_matrix() const;
  // R(a, b, c, d) by multilinearity.
  double eval(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
              const Eigen::VectorXd& c, const Eigen::VectorXd& d) const;

  CurvTensor& operator+=(const CurvTensor& o);
  CurvTensor& operator*=(double s);

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<double> d_;
};

CurvTensor operator+(CurvTensor a, const CurvTensor& b);
CurvTensor operator-(CurvTensor a, const CurvTensor& b);
CurvTensor operator*(double s, CurvTensor a);

// Index of e_i ^ e_j (i < j, 0-based) in the ordered bivector basis.
int pair_index(int n, int i, int j);
std::vector<std::pair<int, int>> pair_list(int n);

// (h o k)_{ijkl} = h_ik k_jl + h_jl k_ik - h_il k_jk - h_jk k_il.
CurvTensor kulkarni_nomizu(const SymBilinear& h, const SymBilinear& k);
// c * g o g with g the identity.
CurvTensor constant_curvature_tensor(int n, double sectional);
// Curvature of S^p(1) x R^q; the sphere occupies the first p indices.
CurvTensor sphere_product_tensor(int p, int q);

// Orthonormal four-frame stored as the columns of an n x 4 matrix.
struct Frame4 {
  Eigen::MatrixXd e;
  int dim() const { return static_cast<int>(e.rows()); }
  double gram_defect() const;
  static Frame4 standard(int n);
};

// R_1313 + R_1414 + R_2323 + R_2424 - 2 R_1234 on the frame.
double iso_curvature(const CurvTensor& R, const Frame4& F);

struct SearchConfig {
  std::uint64_t seed = 0x5eedULL;
  int restarts = 512;
  int max_iter = 4000;
  double grad_tol = 1e-10;
  double tolerance = 1e-8;
  // 0 selects the hardware concurrency.
  int threads = 0;
};

struct MinIsoResult {
  double value = 0.0;
  Frame4 argmin;
  int restarts = 0;
  long evaluations = 0;
  int best_restart = -1;
};

MinIsoResult min_isotropic(const CurvTensor& R, const SearchConfig& cfg = {});

struct PicVerdict {
  bool pass = false;
  bool certified = false;
  double sigma = 0.0;
  double min_found = 0.0;
  Frame4 witness;
  int restarts = 0;
  long evaluations = 0;
};

PicVerdict is_sigma_pic(const CurvTensor& R, double sigma,
                        const SearchConfig& cfg = {});

// Hermitian operator on the ordered basis {theta^i ^ theta^j : i < j}.
struct WeitzOperator {
  int n = 0;
  Eigen::MatrixXd m;
  double hermitian_defect() const;
  double lambda_min() const;
};

// Operator formula in terms of the components of R.
WeitzOperator weitzenboeck_on_two_forms(const CurvTensor& R);
// Clifford trace 1/2 sum c(e_i) c(e_j) R(e_i, e_j) acting on a form.
FormElement weitzenboeck_clifford_trace(const CurvTensor& R,
                                        const FormElement& omega);
// Same, assembled as a matrix on 2-forms.
WeitzOperator weitzenboeck_clifford_matrix(const CurvTensor& R);
// Derivation extension of R(e_i, e_j) to forms.
FormElement curvature_derivation(const CurvTensor& R, int i, int j,
                                 const FormElement& omega);

struct WeitzBoundReport {
  int n = 0;
  double sigma = 0.0;
  bool precondition_pic = false;
  double min_isotropic = 0.0;
  double lambda_min = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool asserted = false;
  bool pass = false;
};

WeitzBoundReport weitzenboeck_lower_bound_check(const CurvTensor& R,
                                                double sigma,
                                                const SearchConfig& cfg = {});

SymBilinear ricci(const CurvTensor& R);
double scalar_curvature(const CurvTensor& R);
double sectional(const CurvTensor& R, int i, int j);

// { "n": int, "components": [ {"i","j","k","l","v"} ] } with 1-based indices.
CurvTensor curvature_from_json(const nlohmann::json& j, double tol = 1e-10);
CurvTensor load_curvature(const std::string& path, double tol = 1e-10);
nlohmann::json curvature_to_json(const CurvTensor& R, double drop = 0.0);

}  // namespace pictk
