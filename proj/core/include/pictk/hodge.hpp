#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace pictk {

using Simplex = std::vector<int>;  // sorted vertex ids

// Finite simplicial complex with simplices oriented by increasing vertex order.
// The boundary subcomplex is given explicitly or taken as the closure of the
// codimension-one faces with exactly one coface.
class SimplicialComplex {
 public:
  // All simplices must be listed; missing faces are an error.
  static SimplicialComplex from_simplices(std::vector<Simplex> all,
                                          std::vector<Simplex> boundary = {},
                                          std::string name = {});
  // Facets are closed under taking faces.
  static SimplicialComplex from_facets(const std::vector<Simplex>& facets,
                                       std::vector<Simplex> boundary = {},
                                       std::string name = {});
  static SimplicialComplex from_json(const nlohmann::json& j);
  static SimplicialComplex load(const std::string& path);
  nlohmann::json to_json() const;

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(simplices_.size()) - 1; }
  int vertices() const { return count(0); }
  int count(int k) const;
  const std::vector<Simplex>& simplices(int k) const;
  int index(const Simplex& s) const;  // -1 if absent
  bool on_boundary(int k, int i) const { return boundary_[k][i]; }
  bool has_boundary() const;
  std::vector<int> interior(int k) const;
  int euler_characteristic() const;

  // Integer coboundary (count(k+1) x count(k)); zero-row matrix for k = dim.
  Eigen::MatrixXi coboundary(int k) const;

 private:
  void build(std::vector<Simplex> all, std::vector<Simplex> boundary, bool require_closed);

  std::string name_;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::map<Simplex, int>> index_;
  std::vector<std::vector<bool>> boundary_;
};

// max |entry| of d_{k+1} d_k over all k.
int coboundary_square_defect(const SimplicialComplex& K);

// Rank over the rationals by exact elimination.
int exact_rank(const Eigen::MatrixXi& A);
int exact_rank(const Eigen::MatrixXd& A);

int betti(const SimplicialComplex& K, int k);
int betti_relative(const SimplicialComplex& K, int k);

enum class BoundaryCondition { Absolute, Relative };
enum class Mass { Identity, Weighted };

// Cochains twisted by a vertex function f; simplex weight exp(mean f).
struct TwistedComplex {
  SimplicialComplex K;
  std::vector<double> f;
  BoundaryCondition bc = BoundaryCondition::Absolute;

  static TwistedComplex make(SimplicialComplex K, std::vector<double> f,
                             BoundaryCondition bc);
  // Weights of the active k-cochain basis.
  std::vector<double> weights(int k) const;
  // Indices of the simplices spanning the cochain space in degree k.
  std::vector<int> basis(int k) const;
  int cochain_dim(int k) const;
};

// W_{k+1}^{-1} D_k W_k on the active cochain spaces.
Eigen::MatrixXd twisted_coboundary(const TwistedComplex& T, int k);
// d_f^* d_f + d_f d_f^* with adjoints taken in the chosen mass.
Eigen::MatrixXd twisted_laplacian(const TwistedComplex& T, int k, Mass mass = Mass::Identity);
Eigen::VectorXd mass_diagonal(const TwistedComplex& T, int k, Mass mass);
// Exact check that d_f d_f vanishes, with weights read as exact rationals.
bool twisted_square_exact_zero(const TwistedComplex& T, int k);

struct HarmonicDimension {
  int dimension = 0;
  int exact_dimension = 0;  // from exact ranks of the untwisted complex
  bool exact_fallback = false;
  double gap_ratio = 0.0;  // smallest kept over largest discarded singular value
};

HarmonicDimension harmonic_dimension(const TwistedComplex& T, int k,
                                     Mass mass = Mass::Identity);

}  // namespace pictk
