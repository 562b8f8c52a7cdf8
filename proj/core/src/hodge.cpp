#include "pictk/hodge.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "pictk/error.hpp"

namespace pictk {

namespace {

using QMatrix = std::vector<std::vector<mpq_class>>;

int rank_in_place(QMatrix& a, std::size_t cols) {
  const std::size_t rows = a.size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const mpq_class m = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= m * a[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

template <class M>
QMatrix to_rational(const M& A) {
  QMatrix q(static_cast<std::size_t>(A.rows()),
            std::vector<mpq_class>(static_cast<std::size_t>(A.cols())));
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      q[i][j] = mpq_class(static_cast<double>(A(i, j)));
    }
  }
  return q;
}

void check_k(const SimplicialComplex& K, int k) {
  if (k < 0 || k > K.dim()) throw std::invalid_argument("degree out of range");
}

Eigen::MatrixXi restrict(const Eigen::MatrixXi& D, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
  Eigen::MatrixXi R(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) R(i, j) = D(rows[i], cols[j]);
  }
  return R;
}

std::vector<int> all_indices(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

void add_closure(const Simplex& s, std::set<Simplex>& out) {
  if (s.empty() || !out.insert(s).second) return;
  if (s.size() == 1) return;
  for (std::size_t i = 0; i < s.size(); ++i) {
    Simplex f = s;
    f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
    add_closure(f, out);
  }
}

Simplex normalized(Simplex s) {
  std::sort(s.begin(), s.end());
  if (s.empty()) throw InputError("empty simplex");
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw InputError("simplex with repeated vertex");
  }
  if (s.front() < 0) throw InputError("negative vertex id");
  return s;
}

}  // namespace

void SimplicialComplex::build(std::vector<Simplex> all, std::vector<Simplex> boundary,
                              bool require_closed) {
  std::set<Simplex> set;
  for (auto& s : all) set.insert(normalized(std::move(s)));
  if (set.empty()) throw InputError("complex has no simplices");
  if (require_closed) {
    for (const auto& s : set) {
      if (s.size() < 2) continue;
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        if (!set.count(f)) throw InputError("complex is missing a face of a simplex");
      }
    }
  } else {
    std::set<Simplex> closed;
    for (const auto& s : set) add_closure(s, closed);
    set = std::move(closed);
  }
  std::size_t top = 0;
  for (const auto& s : set) top = std::max(top, s.size());
  simplices_.assign(top, {});
  for (const auto& s : set) simplices_[s.size() - 1].push_back(s);
  // Vertex ids must be 0..V-1.
  for (std::size_t i = 0; i < simplices_[0].size(); ++i) {
    if (simplices_[0][i][0] != static_cast<int>(i)) {
      throw InputError("vertex ids must be contiguous from 0");
    }
  }
  index_.assign(top, {});
  for (std::size_t k = 0; k < top; ++k) {
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) {
      index_[k][simplices_[k][i]] = static_cast<int>(i);
    }
  }

  std::set<Simplex> bset;
  if (!boundary.empty()) {
    for (auto& s : boundary) {
      Simplex t = normalized(std::move(s));
      if (!set.count(t)) throw InputError("boundary simplex not in complex");
      add_closure(t, bset);
    }
  } else if (top >= 2) {
    std::map<Simplex, int> cofaces;
    for (const auto& s : simplices_[top - 1]) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        ++cofaces[f];
      }
    }
    for (const auto& [f, c] : cofaces) {
      if (c == 1) add_closure(f, bset);
    }
  }
  boundary_.assign(top, {});
  for (std::size_t k = 0; k < top; ++k) {
    boundary_[k].resize(simplices_[k].size());
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) {
      boundary_[k][i] = bset.count(simplices_[k][i]) > 0;
    }
  }
}

SimplicialComplex SimplicialComplex::from_simplices(std::vector<Simplex> all,
                                                    std::vector<Simplex> boundary,
                                                    std::string name) {
  SimplicialComplex K;
  K.name_ = std::move(name);
  K.build(std::move(all), std::move(boundary), true);
  return K;
}

SimplicialComplex SimplicialComplex::from_facets(const std::vector<Simplex>& facets,
                                                 std::vector<Simplex> boundary,
                                                 std::string name) {
  SimplicialComplex K;
  K.name_ = std::move(name);
  K.build(facets, std::move(boundary), false);
  return K;
}

SimplicialComplex SimplicialComplex::from_json(const nlohmann::json& j) {
  try {
    const std::string name = j.value("name", std::string{});
    std::vector<Simplex> boundary;
    if (j.contains("boundary")) boundary = j.at("boundary").get<std::vector<Simplex>>();
    if (j.contains("simplices")) {
      return from_simplices(j.at("simplices").get<std::vector<Simplex>>(),
                            std::move(boundary), name);
    }
    return from_facets(j.at("facets").get<std::vector<Simplex>>(), std::move(boundary), name);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed complex: " + std::string(e.what()));
  }
}

SimplicialComplex SimplicialComplex::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open complex file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed complex file: " + std::string(e.what()));
  }
  return from_json(j);
}

nlohmann::json SimplicialComplex::to_json() const {
  std::vector<Simplex> all, bnd;
  for (int k = 0; k <= dim(); ++k) {
    for (int i = 0; i < count(k); ++i) {
      all.push_back(simplices_[k][i]);
      if (boundary_[k][i]) bnd.push_back(simplices_[k][i]);
    }
  }
  return {{"name", name_}, {"simplices", all}, {"boundary", bnd}};
}

int SimplicialComplex::count(int k) const {
  if (k < 0 || k > dim()) return 0;
  return static_cast<int>(simplices_[k].size());
}

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
  if (k < 0 || k > dim()) throw std::invalid_argument("degree out of range");
  return simplices_[k];
}

int SimplicialComplex::index(const Simplex& s) const {
  const int k = static_cast<int>(s.size()) - 1;
  if (k < 0 || k > dim()) return -1;
  const auto it = index_[k].find(s);
  return it == index_[k].end() ? -1 : it->second;
}

bool SimplicialComplex::has_boundary() const {
  return std::any_of(boundary_[0].begin(), boundary_[0].end(), [](bool b) { return b; });
}

std::vector<int> SimplicialComplex::interior(int k) const {
  std::vector<int> out;
  for (int i = 0; i < count(k); ++i) {
    if (!boundary_[k][i]) out.push_back(i);
  }
  return out;
}

int SimplicialComplex::euler_characteristic() const {
  int chi = 0;
  for (int k = 0; k <= dim(); ++k) chi += (k % 2 ? -1 : 1) * count(k);
  return chi;
}

Eigen::MatrixXi SimplicialComplex::coboundary(int k) const {
  if (k < 0 || k > dim()) throw std::invalid_argument("degree out of range");
  Eigen::MatrixXi D = Eigen::MatrixXi::Zero(count(k + 1), count(k));
  for (int r = 0; r < count(k + 1); ++r) {
    const Simplex& s = simplices_[k + 1][r];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex f = s;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
      D(r, index(f)) = (i % 2) ? -1 : 1;
    }
  }
  return D;
}

int coboundary_square_defect(const SimplicialComplex& K) {
  int worst = 0;
  for (int k = 0; k + 1 < K.dim(); ++k) {
    const Eigen::MatrixXi P = K.coboundary(k + 1) * K.coboundary(k);
    if (P.size() > 0) worst = std::max(worst, P.cwiseAbs().maxCoeff());
  }
  return worst;
}

int exact_rank(const Eigen::MatrixXi& A) {
  if (A.size() == 0) return 0;
  QMatrix q = to_rational(A);
  return rank_in_place(q, static_cast<std::size_t>(A.cols()));
}

int exact_rank(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return 0;
  for (Eigen::Index i = 0; i < A.size(); ++i) {
    if (!std::isfinite(A.data()[i])) throw std::domain_error("non-finite matrix entry");
  }
  QMatrix q = to_rational(A);
  return rank_in_place(q, static_cast<std::size_t>(A.cols()));
}

int betti(const SimplicialComplex& K, int k) {
  check_k(K, k);
  const int up = exact_rank(K.coboundary(k));
  const int down = k > 0 ? exact_rank(K.coboundary(k - 1)) : 0;
  return K.count(k) - up - down;
}

int betti_relative(const SimplicialComplex& K, int k) {
  check_k(K, k);
  const std::vector<int> ck = K.interior(k);
  const int up = k < K.dim() ? exact_rank(restrict(K.coboundary(k), K.interior(k + 1), ck)) : 0;
  const int down = k > 0 ? exact_rank(restrict(K.coboundary(k - 1), ck, K.interior(k - 1))) : 0;
  return static_cast<int>(ck.size()) - up - down;
}

TwistedComplex TwistedComplex::make(SimplicialComplex K, std::vector<double> f,
                                    BoundaryCondition bc) {
  if (static_cast<int>(f.size()) != K.vertices()) {
    throw std::invalid_argument("vertex function has the wrong length");
  }
  for (double v : f) {
    if (!std::isfinite(v)) throw std::invalid_argument("vertex function must be finite");
  }
  TwistedComplex T{std::move(K), std::move(f), bc};
  for (int k = 0; k <= T.K.dim(); ++k) {
    for (double w : T.weights(k)) {
      if (!(w > 0) || !std::isfinite(w)) throw std::invalid_argument("nonpositive weight");
    }
  }
  return T;
}

std::vector<int> TwistedComplex::basis(int k) const {
  if (k < 0 || k > K.dim()) return {};
  return bc == BoundaryCondition::Absolute ? all_indices(K.count(k)) : K.interior(k);
}

int TwistedComplex::cochain_dim(int k) const { return static_cast<int>(basis(k).size()); }

std::vector<double> TwistedComplex::weights(int k) const {
  std::vector<double> w;
  for (int i : basis(k)) {
    const Simplex& s = K.simplices(k)[i];
    double m = 0.0;
    for (int v : s) m += f[v];
    w.push_back(std::exp(m / static_cast<double>(s.size())));
  }
  return w;
}

Eigen::MatrixXd twisted_coboundary(const TwistedComplex& T, int k) {
  check_k(T.K, k);
  const std::vector<int> cols = T.basis(k);
  const std::vector<int> rows = T.basis(k + 1);
  const std::vector<double> wk = T.weights(k);
  const std::vector<double> wk1 = T.weights(k + 1);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                            static_cast<Eigen::Index>(cols.size()));
  if (rows.empty() || cols.empty()) return d;
  const Eigen::MatrixXi D = restrict(T.K.coboundary(k), rows, cols);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (D(i, j) != 0) d(i, j) = D(i, j) * wk[j] / wk1[i];
    }
  }
  return d;
}

Eigen::VectorXd mass_diagonal(const TwistedComplex& T, int k, Mass mass) {
  const std::vector<double> w = T.weights(k);
  Eigen::VectorXd m(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) m[i] = mass == Mass::Identity ? 1.0 : w[i] * w[i];
  return m;
}

namespace {

// Adjoint of d: C^k -> C^{k+1} in the mass inner products.
Eigen::MatrixXd adjoint(const Eigen::MatrixXd& d, const Eigen::VectorXd& m_from,
                        const Eigen::VectorXd& m_to) {
  return m_from.cwiseInverse().asDiagonal() * d.transpose() * m_to.asDiagonal();
}

}  // namespace

Eigen::MatrixXd twisted_laplacian(const TwistedComplex& T, int k, Mass mass) {
  check_k(T.K, k);
  const int c = T.cochain_dim(k);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(c, c);
  const Eigen::VectorXd mk = mass_diagonal(T, k, mass);
  if (k < T.K.dim()) {
    const Eigen::MatrixXd d = twisted_coboundary(T, k);
    if (d.rows() > 0) L += adjoint(d, mk, mass_diagonal(T, k + 1, mass)) * d;
  }
  if (k > 0) {
    const Eigen::MatrixXd d = twisted_coboundary(T, k - 1);
    if (d.cols() > 0) L += d * adjoint(d, mass_diagonal(T, k - 1, mass), mk);
  }
  return L;
}

bool twisted_square_exact_zero(const TwistedComplex& T, int k) {
  check_k(T.K, k);
  if (k + 2 > T.K.dim()) return true;
  const Eigen::MatrixXd a = twisted_coboundary(T, k);
  const Eigen::MatrixXd b = twisted_coboundary(T, k + 1);
  if (a.size() == 0 || b.size() == 0) return true;
  // Rebuild both factors from exact weights so cancellation is exact.
  const auto q = [&](int deg) {
    std::vector<mpq_class> w;
    for (double x : T.weights(deg)) w.emplace_back(x);
    return w;
  };
  const auto w0 = q(k), w1 = q(k + 1), w2 = q(k + 2);
  const Eigen::MatrixXi D0 = restrict(T.K.coboundary(k), T.basis(k + 1), T.basis(k));
  const Eigen::MatrixXi D1 = restrict(T.K.coboundary(k + 1), T.basis(k + 2), T.basis(k + 1));
  for (Eigen::Index i = 0; i < D1.rows(); ++i) {
    for (Eigen::Index j = 0; j < D0.cols(); ++j) {
      mpq_class s = 0;
      for (Eigen::Index m = 0; m < D1.cols(); ++m) {
        if (D1(i, m) == 0 || D0(m, j) == 0) continue;
        s += (D1(i, m) * w1[m] / w2[i]) * (D0(m, j) * w0[j] / w1[m]);
      }
      if (s != 0) return false;
    }
  }
  return true;
}

HarmonicDimension harmonic_dimension(const TwistedComplex& T, int k, Mass mass) {
  check_k(T.K, k);
  HarmonicDimension out;
  const int c = T.cochain_dim(k);
  {
    const int up = k < T.K.dim()
                       ? exact_rank(restrict(T.K.coboundary(k), T.basis(k + 1), T.basis(k)))
                       : 0;
    const int down = k > 0 ? exact_rank(restrict(T.K.coboundary(k - 1), T.basis(k),
                                                 T.basis(k - 1)))
                           : 0;
    out.exact_dimension = c - up - down;
  }
  if (c == 0) {
    out.gap_ratio = std::numeric_limits<double>::infinity();
    return out;
  }
  // Harmonic cochains: kernel of d_f stacked on the adjoint of the previous d_f.
  const Eigen::VectorXd mk = mass_diagonal(T, k, mass);
  Eigen::MatrixXd up = k < T.K.dim() ? twisted_coboundary(T, k) : Eigen::MatrixXd(0, c);
  Eigen::MatrixXd down(0, c);
  if (k > 0) {
    const Eigen::MatrixXd d = twisted_coboundary(T, k - 1);
    down = adjoint(d, mass_diagonal(T, k - 1, mass), mk);
  }
  Eigen::MatrixXd A(up.rows() + down.rows(), c);
  A << up, down;
  if (A.rows() == 0) {
    out.dimension = c;
    out.gap_ratio = std::numeric_limits<double>::infinity();
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const Eigen::VectorXd s = svd.singularValues();
  const double tol = static_cast<double>(std::max(A.rows(), A.cols())) *
                     std::numeric_limits<double>::epsilon() * (s.size() ? s[0] : 0.0);
  int rank = 0;
  while (rank < s.size() && s[rank] > tol) ++rank;
  // Columns beyond the singular values count are kernel directions too.
  if (rank == 0 || rank == s.size()) {
    out.gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    out.gap_ratio = s[rank] > 0 ? s[rank - 1] / s[rank] : std::numeric_limits<double>::infinity();
  }
  out.dimension = c - rank;
  if (out.gap_ratio < 1e3) {
    out.exact_fallback = true;
    out.dimension = out.exact_dimension;
  }
  return out;
}

}  // namespace pictk
