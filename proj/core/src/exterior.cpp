#include "pictk/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "pictk/error.hpp"

namespace pictk {

namespace {

void check_dim(int n) {
  if (n < 0 || n > kMaxDim) {
    throw DimensionError("ambient dimension must lie in 0.." +
                         std::to_string(kMaxDim));
  }
}

void check_same(int a, int b) {
  if (a != b) {
    throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

void check_unit(const Vector& nu) {
  if (std::abs(vnorm(nu) - 1.0) > 1e-12) {
    throw std::domain_error("normal vector must have unit length");
  }
}

std::uint32_t mask_of(int n, const std::vector<int>& idx) {
  std::uint32_t m = 0;
  int prev = 0;
  for (int i : idx) {
    if (i <= prev || i > n) {
      throw std::invalid_argument(
          "multi-index must be strictly increasing within 1..n");
    }
    m |= 1u << (i - 1);
    prev = i;
  }
  return m;
}

}  // namespace

MultiIndex::MultiIndex(int n, std::initializer_list<int> indices)
    : MultiIndex(n, std::vector<int>(indices)) {}

MultiIndex::MultiIndex(int n, const std::vector<int>& indices) : n_(n) {
  check_dim(n);
  mask_ = mask_of(n, indices);
}

MultiIndex MultiIndex::from_mask(int n, std::uint32_t mask) {
  check_dim(n);
  if (n < 32 && (mask >> n) != 0) {
    throw std::invalid_argument("mask has bits beyond the ambient dimension");
  }
  MultiIndex I;
  I.n_ = n;
  I.mask_ = mask;
  return I;
}

int MultiIndex::degree() const { return std::popcount(mask_); }

std::vector<int> MultiIndex::indices() const {
  std::vector<int> out;
  for (int i = 0; i < n_; ++i) {
    if ((mask_ >> i) & 1u) out.push_back(i + 1);
  }
  return out;
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int i : indices()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

FormElement::FormElement(int n) : n_(n) {
  check_dim(n);
  coeffs_.assign(std::size_t{1} << n, cplx{0.0, 0.0});
}

FormElement FormElement::one(int n) {
  FormElement f(n);
  f.coeffs_[0] = 1.0;
  return f;
}

FormElement FormElement::basis(int n, std::initializer_list<int> indices,
                               cplx coeff) {
  return basis(MultiIndex(n, indices), coeff);
}

FormElement FormElement::basis(const MultiIndex& I, cplx coeff) {
  FormElement f(I.dim());
  f.coeffs_[I.mask()] = coeff;
  return f;
}

FormElement FormElement::one_form(const Vector& v) {
  const int n = static_cast<int>(v.size());
  FormElement f(n);
  for (int i = 0; i < n; ++i) f.coeffs_[std::size_t{1} << i] = v[i];
  return f;
}

cplx FormElement::coeff(const MultiIndex& I) const {
  check_same(n_, I.dim());
  return coeffs_[I.mask()];
}

void FormElement::set(const MultiIndex& I, cplx value) {
  check_same(n_, I.dim());
  coeffs_[I.mask()] = value;
}

FormElement FormElement::degree_part(int k) const {
  if (k < 0) return *this;
  FormElement out(n_);
  for (std::uint32_t m = 0; m < coeffs_.size(); ++m) {
    if (std::popcount(m) == k) out.coeffs_[m] = coeffs_[m];
  }
  return out;
}

bool FormElement::is_homogeneous(int k, double tol) const {
  for (std::uint32_t m = 0; m < coeffs_.size(); ++m) {
    if (std::popcount(m) != k && std::abs(coeffs_[m]) > tol) return false;
  }
  return true;
}

double FormElement::norm2() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return s;
}

double FormElement::norm() const { return std::sqrt(norm2()); }

double FormElement::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

FormElement& FormElement::operator+=(const FormElement& o) {
  check_same(n_, o.n_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

FormElement& FormElement::operator-=(const FormElement& o) {
  check_same(n_, o.n_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

FormElement& FormElement::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

FormElement operator+(FormElement a, const FormElement& b) { return a += b; }
FormElement operator-(FormElement a, const FormElement& b) { return a -= b; }
FormElement operator-(FormElement a) { return a *= -1.0; }
FormElement operator*(cplx s, FormElement a) { return a *= s; }
FormElement operator*(FormElement a, cplx s) { return a *= s; }

cplx inner(const FormElement& a, const FormElement& b) {
  check_same(a.dim(), b.dim());
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

double max_abs_diff(const FormElement& a, const FormElement& b) {
  check_same(a.dim(), b.dim());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

int wedge_sign(std::uint32_t I, std::uint32_t J) {
  if (I & J) return 0;
  // Moving each element j of J left past the elements of I greater than j.
  int swaps = 0;
  std::uint32_t rest = J;
  while (rest) {
    const int j = std::countr_zero(rest);
    rest &= rest - 1;
    const std::uint32_t above = j >= 31 ? 0u : (I >> (j + 1));
    swaps += std::popcount(above);
  }
  return (swaps & 1) ? -1 : 1;
}

FormElement wedge(const FormElement& a, const FormElement& b) {
  check_same(a.dim(), b.dim());
  FormElement out(a.dim());
  const std::uint32_t N = static_cast<std::uint32_t>(a.size());
  for (std::uint32_t I = 0; I < N; ++I) {
    if (a[I] == cplx{}) continue;
    for (std::uint32_t J = 0; J < N; ++J) {
      if ((I & J) || b[J] == cplx{}) continue;
      out[I | J] += static_cast<double>(wedge_sign(I, J)) * a[I] * b[J];
    }
  }
  return out;
}

FormElement wedge_basis(int i, const FormElement& a) {
  FormElement out(a.dim());
  const std::uint32_t bit = 1u << i;
  const std::uint32_t below = bit - 1u;
  for (std::uint32_t I = 0; I < a.size(); ++I) {
    if ((I & bit) || a[I] == cplx{}) continue;
    const int s = (std::popcount(I & below) & 1) ? -1 : 1;
    out[I | bit] += static_cast<double>(s) * a[I];
  }
  return out;
}

FormElement interior_basis(int i, const FormElement& a) {
  FormElement out(a.dim());
  const std::uint32_t bit = 1u << i;
  const std::uint32_t below = bit - 1u;
  for (std::uint32_t I = 0; I < a.size(); ++I) {
    if (!(I & bit) || a[I] == cplx{}) continue;
    const int s = (std::popcount(I & below) & 1) ? -1 : 1;
    out[I ^ bit] += static_cast<double>(s) * a[I];
  }
  return out;
}

FormElement interior(const Vector& v, const FormElement& a) {
  check_same(static_cast<int>(v.size()), a.dim());
  FormElement out(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    if (v[i] != 0.0) out += v[i] * interior_basis(i, a);
  }
  return out;
}

FormElement clifford_c(const Vector& v, const FormElement& a) {
  check_same(static_cast<int>(v.size()), a.dim());
  return wedge(FormElement::one_form(v), a) - interior(v, a);
}

FormElement clifford_ct(const Vector& v, const FormElement& a) {
  check_same(static_cast<int>(v.size()), a.dim());
  return wedge(FormElement::one_form(v), a) + interior(v, a);
}

FormElement clifford_c_basis(int i, const FormElement& a) {
  return wedge_basis(i, a) - interior_basis(i, a);
}

FormElement clifford_ct_basis(int i, const FormElement& a) {
  return wedge_basis(i, a) + interior_basis(i, a);
}

FormElement chi_involution(const Vector& nu, const FormElement& a) {
  check_same(static_cast<int>(nu.size()), a.dim());
  check_unit(nu);
  return clifford_ct(nu, clifford_c(nu, a));
}

BoundarySplit boundary_split(const Vector& nu, const FormElement& a) {
  check_same(static_cast<int>(nu.size()), a.dim());
  check_unit(nu);
  FormElement normal = wedge(FormElement::one_form(nu), interior(nu, a));
  FormElement tangential = a - normal;
  return {std::move(tangential), std::move(normal)};
}

Vector basis_vector(int n, int i) {
  Vector v(n, 0.0);
  v.at(i) = 1.0;
  return v;
}

double dot(const Vector& a, const Vector& b) {
  check_same(static_cast<int>(a.size()), static_cast<int>(b.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double vnorm(const Vector& v) { return std::sqrt(dot(v, v)); }

}  // namespace pictk
