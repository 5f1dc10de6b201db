// Exact dense linear algebra over the fields of the tower, generic over a
// small field-adapter concept:
//
//   struct Fld {
//     using elem = ...;
//     elem zero() const; elem one() const;
//     elem add(a, b) const; elem sub(a, b) const;
//     elem mul(a, b) const; elem inv(a) const; elem neg(a) const;
//     bool is_zero(a) const;
//   };
//
// Two adapters are provided: the base field K and the extension E (whose
// subfields F_i are closed under all operations, so F_i / F_iF_j matrices can
// use the E adapter directly).
#pragma once

#include <vector>

#include "spforge/errors.hpp"
#include "spforge/fields.hpp"

namespace spf {

struct KF {
  const FieldTower* t;
  using elem = KElem;
  elem zero() const { return t->k_zero(); }
  elem one() const { return t->k_one(); }
  elem add(const elem& a, const elem& b) const { return t->k_add(a, b); }
  elem sub(const elem& a, const elem& b) const { return t->k_sub(a, b); }
  elem mul(const elem& a, const elem& b) const { return t->k_mul(a, b); }
  elem inv(const elem& a) const { return t->k_inv(a); }
  elem neg(const elem& a) const { return t->k_neg(a); }
  bool is_zero(const elem& a) const { return t->k_is_zero(a); }
};

struct EF {
  const FieldTower* t;
  using elem = ExtElem;
  elem zero() const { return t->e_zero(); }
  elem one() const { return t->e_one(); }
  elem add(const elem& a, const elem& b) const { return t->e_add(a, b); }
  elem sub(const elem& a, const elem& b) const { return t->e_sub(a, b); }
  elem mul(const elem& a, const elem& b) const { return t->e_mul(a, b); }
  elem inv(const elem& a) const { return t->e_inv(a); }
  elem neg(const elem& a) const { return t->e_neg(a); }
  bool is_zero(const elem& a) const { return t->e_is_zero(a); }
};

template <class Fld>
using Mat = std::vector<std::vector<typename Fld::elem>>;

template <class Fld>
Mat<Fld> mat_zero(const Fld& f, int rows, int cols) {
  return Mat<Fld>(rows, std::vector<typename Fld::elem>(cols, f.zero()));
}

template <class Fld>
Mat<Fld> mat_identity(const Fld& f, int n) {
  Mat<Fld> m = mat_zero(f, n, n);
  for (int i = 0; i < n; ++i) m[i][i] = f.one();
  return m;
}

template <class Fld>
Mat<Fld> mat_mul(const Fld& f, const Mat<Fld>& a, const Mat<Fld>& b) {
  int r = int(a.size()), inner = int(b.size()), c = inner ? int(b[0].size()) : 0;
  Mat<Fld> out = mat_zero(f, r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < inner; ++k) {
      if (f.is_zero(a[i][k])) continue;
      for (int j = 0; j < c; ++j) out[i][j] = f.add(out[i][j], f.mul(a[i][k], b[k][j]));
    }
  return out;
}

template <class Fld>
Mat<Fld> mat_add(const Fld& f, const Mat<Fld>& a, const Mat<Fld>& b) {
  Mat<Fld> out = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) out[i][j] = f.add(a[i][j], b[i][j]);
  return out;
}

template <class Fld>
Mat<Fld> mat_neg(const Fld& f, const Mat<Fld>& a) {
  Mat<Fld> out = a;
  for (auto& row : out)
    for (auto& x : row) x = f.neg(x);
  return out;
}

// In-place reduced row echelon form; returns pivot column indices.
template <class Fld>
std::vector<int> rref(const Fld& f, Mat<Fld>& m) {
  std::vector<int> pivots;
  int rows = int(m.size());
  int cols = rows ? int(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (!f.is_zero(m[i][c])) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[r], m[sel]);
    auto inv = f.inv(m[r][c]);
    for (int j = c; j < cols; ++j) m[r][j] = f.mul(m[r][j], inv);
    for (int i = 0; i < rows; ++i) {
      if (i == r || f.is_zero(m[i][c])) continue;
      auto factor = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] = f.sub(m[i][j], f.mul(factor, m[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class Fld>
int mat_rank(const Fld& f, Mat<Fld> m) {
  return int(rref(f, m).size());
}

// Inverse of a square matrix; throws NotInvertible when singular.
template <class Fld>
Mat<Fld> mat_inverse(const Fld& f, const Mat<Fld>& a) {
  int n = int(a.size());
  Mat<Fld> work = a;
  Mat<Fld> id = mat_identity(f, n);
  for (int i = 0; i < n; ++i)
    work[i].insert(work[i].end(), id[i].begin(), id[i].end());
  std::vector<int> piv = rref(f, work);
  require(int(piv.size()) == n && (n == 0 || piv[n - 1] == n - 1), errc::not_invertible,
          "matrix is singular");
  Mat<Fld> out = mat_zero(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = work[i][n + j];
  return out;
}

template <class Fld>
typename Fld::elem mat_det(const Fld& f, Mat<Fld> m) {
  int n = int(m.size());
  auto det = f.one();
  for (int c = 0; c < n; ++c) {
    int sel = -1;
    for (int i = c; i < n; ++i)
      if (!f.is_zero(m[i][c])) {
        sel = i;
        break;
      }
    if (sel < 0) return f.zero();
    if (sel != c) {
      std::swap(m[c], m[sel]);
      det = f.neg(det);
    }
    det = f.mul(det, m[c][c]);
    auto inv = f.inv(m[c][c]);
    for (int i = c + 1; i < n; ++i) {
      if (f.is_zero(m[i][c])) continue;
      auto factor = f.mul(m[i][c], inv);
      for (int j = c; j < n; ++j) m[i][j] = f.sub(m[i][j], f.mul(factor, m[c][j]));
    }
  }
  return det;
}

// Basis of the kernel of m (as column vectors gathered into a matrix whose
// columns are the basis vectors; returned as vector of vectors, one per
// basis vector).
template <class Fld>
std::vector<std::vector<typename Fld::elem>> kernel_basis(const Fld& f, Mat<Fld> m) {
  int rows = int(m.size());
  int cols = rows ? int(m[0].size()) : 0;
  std::vector<int> piv = rref(f, m);
  std::vector<bool> is_piv(cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<typename Fld::elem>> out;
  for (int c = 0; c < cols; ++c) {
    if (is_piv[c]) continue;
    std::vector<typename Fld::elem> v(cols, f.zero());
    v[c] = f.one();
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = f.neg(m[r][c]);
    out.push_back(std::move(v));
  }
  return out;
}

// Column space basis: indices of a maximal independent subset of columns.
template <class Fld>
std::vector<int> column_space_pivots(const Fld& f, Mat<Fld> m) {
  return rref(f, m);
}

template <class Fld>
std::vector<typename Fld::elem> mat_apply(const Fld& f, const Mat<Fld>& m,
                                          const std::vector<typename Fld::elem>& v) {
  std::vector<typename Fld::elem> out(m.size(), f.zero());
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] = f.add(out[i], f.mul(m[i][j], v[j]));
  return out;
}

}  // namespace spf
