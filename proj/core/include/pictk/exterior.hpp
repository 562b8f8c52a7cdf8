#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace pictk {

using cplx = std::complex<double>;

// Real vector in the standard orthonormal frame e_1..e_n.
using Vector = std::vector<double>;

inline constexpr int kMaxDim = 12;

// Strictly increasing multi-index {i_1 < ... < i_k} with 1-based entries,
// stored as a bitmask (bit i-1 set iff i is present).
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(int n, std::initializer_list<int> indices);
  MultiIndex(int n, const std::vector<int>& indices);
  static MultiIndex from_mask(int n, std::uint32_t mask);

  int dim() const { return n_; }
  std::uint32_t mask() const { return mask_; }
  int degree() const;
  std::vector<int> indices() const;
  bool contains(int i) const { return (mask_ >> (i - 1)) & 1u; }
  std::string str() const;

  bool operator==(const MultiIndex&) const = default;

 private:
  int n_ = 0;
  std::uint32_t mask_ = 0;
};

// Element of the complexified exterior algebra of R^n. Coefficients are held
// densely, one slot per basis multi-index (2^n slots).
class FormElement {
 public:
  FormElement() = default;
  explicit FormElement(int n);

  static FormElement zero(int n) { return FormElement(n); }
  static FormElement one(int n);
  static FormElement basis(int n, std::initializer_list<int> indices,
                           cplx coeff = 1.0);
  static FormElement basis(const MultiIndex& I, cplx coeff = 1.0);
  // v^flat as a 1-form.
  static FormElement one_form(const Vector& v);

  int dim() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }

  cplx& operator[](std::uint32_t mask) { return coeffs_[mask]; }
  const cplx& operator[](std::uint32_t mask) const { return coeffs_[mask]; }
  cplx coeff(const MultiIndex& I) const;
  void set(const MultiIndex& I, cplx value);

  const std::vector<cplx>& data() const { return coeffs_; }
  std::vector<cplx>& data() { return coeffs_; }

  // Component of degree k; the whole element when k < 0.
  FormElement degree_part(int k) const;
  // True when every nonzero coefficient sits in degree k.
  bool is_homogeneous(int k, double tol = 0.0) const;

  double norm2() const;
  double norm() const;
  double max_abs() const;

  FormElement& operator+=(const FormElement& o);
  FormElement& operator-=(const FormElement& o);
  FormElement& operator*=(cplx s);

 private:
  int n_ = 0;
  std::vector<cplx> coeffs_;
};

FormElement operator+(FormElement a, const FormElement& b);
FormElement operator-(FormElement a, const FormElement& b);
FormElement operator-(FormElement a);
FormElement operator*(cplx s, FormElement a);
FormElement operator*(FormElement a, cplx s);

// Hermitian inner product, linear in the first argument; the multi-index basis
// is orthonormal.
cplx inner(const FormElement& a, const FormElement& b);
double max_abs_diff(const FormElement& a, const FormElement& b);

// Sign (+1/-1) of theta^I ^ theta^J in terms of theta^{I u J}, 0 if I, J meet.
int wedge_sign(std::uint32_t I, std::uint32_t J);

FormElement wedge(const FormElement& a, const FormElement& b);
// theta^i ^ a for a single basis covector (0-based i).
FormElement wedge_basis(int i, const FormElement& a);
// i_{e_i} a for a single basis vector (0-based i).
FormElement interior_basis(int i, const FormElement& a);
FormElement interior(const Vector& v, const FormElement& a);

// c(v) a = v^flat ^ a - i_v a.
FormElement clifford_c(const Vector& v, const FormElement& a);
// ct(v) a = v^flat ^ a + i_v a.
FormElement clifford_ct(const Vector& v, const FormElement& a);
FormElement clifford_c_basis(int i, const FormElement& a);
FormElement clifford_ct_basis(int i, const FormElement& a);

// chi a = ct(nu) c(nu) a for a unit normal nu.
FormElement chi_involution(const Vector& nu, const FormElement& a);

struct BoundarySplit {
  FormElement tangential;
  FormElement normal;
};
// a = t + n with chi t = t and chi n = -n.
BoundarySplit boundary_split(const Vector& nu, const FormElement& a);

Vector basis_vector(int n, int i);
double dot(const Vector& a, const Vector& b);
double vnorm(const Vector& v);

}  // namespace pictk
