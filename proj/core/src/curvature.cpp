#include "pictk/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pictk/error.hpp"

namespace pictk {

void require_symmetric(const SymBilinear& h, double tol) {
  if (h.rows() != h.cols()) throw DimensionError("bilinear form is not square");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw std::domain_error("bilinear form is not symmetric");
  }
}

CurvTensor::CurvTensor(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) throw DimensionError("invalid tensor dimension");
  d_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
}

void CurvTensor::set(int i, int j, int k, int l, double v) {
  d_[idx(i, j, k, l)] = v;
  d_[idx(j, i, k, l)] = -v;
  d_[idx(i, j, l, k)] = -v;
  d_[idx(j, i, l, k)] = v;
  d_[idx(k, l, i, j)] = v;
  d_[idx(l, k, i, j)] = -v;
  d_[idx(k, l, j, i)] = -v;
  d_[idx(l, k, j, i)] = v;
}

double CurvTensor::symmetry_defect() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          const double r = (*this)(i, j, k, l);
          m = std::max(m, std::abs(r + (*this)(j, i, k, l)));
          m = std::max(m, std::abs(r + (*this)(i, j, l, k)));
          m = std::max(m, std::abs(r - (*this)(k, l, i, j)));
        }
  return m;
}

double CurvTensor::bianchi_defect() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          m = std::max(m, std::abs((*this)(i, j, k, l) + (*this)(j, k, i, l) +
                                   (*this)(k, i, j, l)));
        }
  return m;
}

void CurvTensor::validate(double tol) const {
  if (symmetry_defect() > tol) {
    throw std::domain_error("curvature tensor violates pair symmetries");
  }
  if (bianchi_defect() > tol) {
    throw std::domain_error("curvature tensor violates the first Bianchi identity");
  }
}

int pair_index(int n, int i, int j) {
  // Row-major enumeration of i < j.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<std::pair<int, int>> pair_list(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

Eigen::MatrixXd CurvTensor::bivector_matrix() const {
  const auto pairs = pair_list(n_);
  const int N = static_cast<int>(pairs.size());
  Eigen::MatrixXd M(N, N);
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      M(p, q) = (*this)(pairs[p].first, pairs[p].second, pairs[q].first,
                        pairs[q].second);
  return M;
}

namespace {

Eigen::VectorXd bivec(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.size());
  Eigen::VectorXd w(n * (n - 1) / 2);
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(p++) = a(i) * b(j) - a(j) * b(i);
  return w;
}

double iso_from_matrix(const Eigen::MatrixXd& M, const Eigen::MatrixXd& F) {
  const Eigen::VectorXd w13 = bivec(F.col(0), F.col(2));
  const Eigen::VectorXd w14 = bivec(F.col(0), F.col(3));
  const Eigen::VectorXd w23 = bivec(F.col(1), F.col(2));
  const Eigen::VectorXd w24 = bivec(F.col(1), F.col(3));
  const Eigen::VectorXd w12 = bivec(F.col(0), F.col(1));
  const Eigen::VectorXd w34 = bivec(F.col(2), F.col(3));
  return w13.dot(M * w13) + w14.dot(M * w14) + w23.dot(M * w23) +
         w24.dot(M * w24) - 2.0 * w12.dot(M * w34);
}

}  // namespace

double CurvTensor::eval(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                        const Eigen::VectorXd& c,
                        const Eigen::VectorXd& d) const {
  return bivec(a, b).dot(bivector_matrix() * bivec(c, d));
}

CurvTensor& CurvTensor::operator+=(const CurvTensor& o) {
  if (o.n_ != n_) throw DimensionError("tensor dimension mismatch");
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
  return *this;
}

CurvTensor& CurvTensor::operator*=(double s) {
  for (auto& x : d_) x *= s;
  return *this;
}

CurvTensor operator+(CurvTensor a, const CurvTensor& b) { return a += b; }
CurvTensor operator-(CurvTensor a, const CurvTensor& b) {
  return a += (-1.0) * b;
}
CurvTensor operator*(double s, CurvTensor a) { return a *= s; }

CurvTensor kulkarni_nomizu(const SymBilinear& h, const SymBilinear& k) {
  if (h.rows() != k.rows()) throw DimensionError("KN factor dimension mismatch");
  require_symmetric(h, 1e-12);
  require_symmetric(k, 1e-12);
  const int n = static_cast<int>(h.rows());
  CurvTensor R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          R.set_raw(i, j, a, b,
                    h(i, a) * k(j, b) + h(j, b) * k(i, a) - h(i, b) * k(j, a) -
                        h(j, a) * k(i, b));
        }
  return R;
}

CurvTensor constant_curvature_tensor(int n, double sectional) {
  const SymBilinear g = SymBilinear::Identity(n, n);
  return (0.5 * sectional) * kulkarni_nomizu(g, g);
}

CurvTensor sphere_product_tensor(int p, int q) {
  const int n = p + q;
  SymBilinear P = SymBilinear::Zero(n, n);
  for (int i = 0; i < p; ++i) P(i, i) = 1.0;
  return 0.5 * kulkarni_nomizu(P, P);
}

double Frame4::gram_defect() const {
  return (e.transpose() * e - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
}

Frame4 Frame4::standard(int n) {
  if (n < 4) throw DimensionError("four-frames need n >= 4");
  return Frame4{Eigen::MatrixXd::Identity(n, 4)};
}

double iso_curvature(const CurvTensor& R, const Frame4& F) {
  if (F.dim() != R.dim() || F.e.cols() != 4) {
    throw DimensionError("frame does not match tensor dimension");
  }
  if (F.gram_defect() > 1e-8) throw std::domain_error("frame is not orthonormal");
  return iso_from_matrix(R.bivector_matrix(), F.e);
}

double WeitzOperator::hermitian_defect() const {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double WeitzOperator::lambda_min() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

WeitzOperator weitzenboeck_on_two_forms(const CurvTensor& R) {
  R.validate(1e-10);
  const int n = R.dim();
  const int N = n * (n - 1) / 2;
  WeitzOperator W{n, Eigen::MatrixXd::Zero(N, N)};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int col = pair_index(n, i, j);
      auto add = [&](int k, int l, double c) {
        if (k == l || c == 0.0) return;
        if (k < l) {
          W.m(pair_index(n, k, l), col) += c;
        } else {
          W.m(pair_index(n, l, k), col) -= c;
        }
      };
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          add(k, j, R(k, l, i, l));
          add(k, i, -R(k, l, j, l));
          add(k, l, -2.0 * R(i, k, j, l));
        }
    }
  return W;
}

FormElement curvature_derivation(const CurvTensor& R, int i, int j,
                                 const FormElement& omega) {
  // R(e_i, e_j) theta^l = sum_k R_ijkl theta^k, extended as a derivation.
  const int n = R.dim();
  FormElement out(n);
  for (int l = 0; l < n; ++l) {
    const FormElement il = interior_basis(l, omega);
    if (il.max_abs() == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      const double r = R(i, j, k, l);
      if (r != 0.0) out += r * wedge_basis(k, il);
    }
  }
  return out;
}

FormElement weitzenboeck_clifford_trace(const CurvTensor& R,
                                        const FormElement& omega) {
  const int n = R.dim();
  if (omega.dim() != n) throw DimensionError("form does not match tensor");
  FormElement out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out += 0.5 * clifford_c_basis(
                       i, clifford_c_basis(j, curvature_derivation(R, i, j, omega)));
    }
  return out;
}

WeitzOperator weitzenboeck_clifford_matrix(const CurvTensor& R) {
  const int n = R.dim();
  const auto pairs = pair_list(n);
  const int N = static_cast<int>(pairs.size());
  WeitzOperator W{n, Eigen::MatrixXd::Zero(N, N)};
  for (int c = 0; c < N; ++c) {
    const FormElement img = weitzenboeck_clifford_trace(
        R, FormElement::basis(
               MultiIndex(n, {pairs[c].first + 1, pairs[c].second + 1})));
    for (int r = 0; r < N; ++r) {
      const std::uint32_t mask =
          (1u << pairs[r].first) | (1u << pairs[r].second);
      W.m(r, c) = img[mask].real();
    }
  }
  return W;
}

WeitzBoundReport weitzenboeck_lower_bound_check(const CurvTensor& R,
                                                double sigma,
                                                const SearchConfig& cfg) {
  const int n = R.dim();
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("the 2-form bound needs even n >= 4");
  }
  WeitzBoundReport rep;
  rep.n = n;
  rep.sigma = sigma;
  const PicVerdict v = is_sigma_pic(R, sigma, cfg);
  rep.precondition_pic = v.pass;
  rep.min_isotropic = v.min_found;
  rep.lambda_min = weitzenboeck_on_two_forms(R).lambda_min();
  rep.bound = 0.5 * (n - 2) * sigma;
  rep.margin = rep.lambda_min - rep.bound;
  rep.asserted = rep.precondition_pic;
  rep.pass = !rep.asserted || rep.margin >= -1e-9;
  return rep;
}

SymBilinear ricci(const CurvTensor& R) {
  const int n = R.dim();
  SymBilinear ric = SymBilinear::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) ric(j, k) += R(i, j, i, k);
  return ric;
}

double scalar_curvature(const CurvTensor& R) { return ricci(R).trace(); }

double sectional(const CurvTensor& R, int i, int j) {
  const int n = R.dim();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
    throw std::out_of_range("sectional curvature needs distinct valid indices");
  }
  return R(i, j, i, j);
}

}  // namespace pictk
