#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "tlsqle/errors.hpp"
#include "tlsqle/model.hpp"

namespace tlsqle {

// Dense matrix laboratory for the spin <-> boson mappings: exact spin ladder
// algebras, truncated boson spaces, mapping-error scaling, and commutator
// residuals. Basis ordering is descending m (index 0 <-> m = +j), so j = 1/2
// gives the Pauli convention Jz = diag(1/2, -1/2).

using CMatrix = Eigen::MatrixXcd;

struct SpinRep {
  double j = 0.0;
  CMatrix jz, jplus, jminus;
};

struct TruncatedBoson {
  int n_max = 0;  // dimension is n_max + 1; the top annihilates under d^dag
  CMatrix d, d_dagger, number;
};

struct CommutatorResiduals {
  double jz_jplus;    // ||[Jz,J+] - J+|| / ||J+||
  double jz_jminus;   // ||[Jz,J-] + J-|| / ||J+||
  double jplus_jminus;  // ||[J+,J-] - 2 Jz|| / ||J+||
};

namespace detail {

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline void require_valid_j(double j) {
  const double twoj = 2.0 * j;
  if (!(j > 0.0) || std::abs(twoj - std::round(twoj)) > 1e-12)
    throw InvalidJ("j must be a positive half-integer");
  if (std::llround(twoj) + 1 > 4097) throw TooLarge("2j+1 exceeds the dense-matrix budget of 4097");
}

}  // namespace detail

// Standard (2j+1)-dimensional ladder representation:
//   J+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>.
inline SpinRep spin_matrices(double j) {
  detail::require_valid_j(j);
  const int dim = static_cast<int>(std::llround(2.0 * j)) + 1;
  SpinRep rep;
  rep.j = j;
  rep.jz = CMatrix::Zero(dim, dim);
  rep.jplus = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = j - i;  // descending order
    rep.jz(i, i) = m;
    if (i > 0) rep.jplus(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  rep.jminus = rep.jplus.adjoint();
  return rep;
}

// Truncated harmonic ladder on n = 0..n_max; the raising operator annihilates
// the top state, confining the commutation defect to the top row/column.
inline TruncatedBoson truncated_boson(int n_max) {
  if (n_max < 0) throw UsageError("n_max must be non-negative");
  const int dim = n_max + 1;
  TruncatedBoson b;
  b.n_max = n_max;
  b.d = CMatrix::Zero(dim, dim);
  b.number = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    b.number(n, n) = n;
    if (n > 0) b.d(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  b.d_dagger = b.d.adjoint();
  return b;
}

// Spin operators reconstructed from bosons on a boson space truncated at
// n = cut. With exact_sqrt the square-root factors sqrt(2j - n) are kept and
// the algebra closes exactly; without, they are replaced by sqrt(2j) (the
// large-j approximation). Minus expands around m = -j, Plus around m = +j.
inline SpinRep hp_spin_rep(double j, HpBranch branch, int cut, bool exact_sqrt = true) {
  detail::require_valid_j(j);
  const double twoj = 2.0 * j;
  if (cut < 0 || static_cast<double>(cut) > twoj)
    throw SubspaceTooLarge("boson cutoff exceeds the spin ladder");
  const auto b = truncated_boson(cut);
  const int dim = cut + 1;
  CMatrix root = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n)
    root(n, n) = exact_sqrt ? std::sqrt(twoj - n) : std::sqrt(twoj);
  SpinRep rep;
  rep.j = j;
  if (branch == HpBranch::Minus) {
    rep.jz = b.number - j * CMatrix::Identity(dim, dim);
    rep.jplus = b.d_dagger * root;
    rep.jminus = root * b.d;
  } else {
    rep.jz = j * CMatrix::Identity(dim, dim) - b.number;
    rep.jminus = b.d_dagger * root;
    rep.jplus = root * b.d;
  }
  return rep;
}

// Residuals of the SU(2) algebra, max-norm, normalized by ||J+||. The
// optional column restriction confines the check to the low-excitation
// subspace (boson index <= max_col in the representation's own basis).
inline CommutatorResiduals commutator_residuals(const SpinRep& rep, int max_col = -1) {
  const auto restrict_cols = [&](const CMatrix& m) -> CMatrix {
    if (max_col < 0 || max_col + 1 >= m.cols()) return m;
    return m.leftCols(max_col + 1);
  };
  const CMatrix r1 = rep.jz * rep.jplus - rep.jplus * rep.jz - rep.jplus;
  const CMatrix r2 = rep.jz * rep.jminus - rep.jminus * rep.jz + rep.jminus;
  const CMatrix r3 = rep.jplus * rep.jminus - rep.jminus * rep.jplus - 2.0 * rep.jz;
  const double scale = detail::max_abs(rep.jplus);
  CommutatorResiduals res;
  res.jz_jplus = detail::max_abs(restrict_cols(r1)) / scale;
  res.jz_jminus = detail::max_abs(restrict_cols(r2)) / scale;
  res.jplus_jminus = detail::max_abs(restrict_cols(r3)) / scale;
  return res;
}

// Error of the large-j approximation J+- / sqrt(2j) ~ d^(dag): the truncated
// boson ladder is embedded into the spin ladder (Minus: |n> <-> |j, -j+n>,
// Plus: |n> <-> |j, j-n>) and the max-norm of the difference of the operator
// pair is taken over columns n <= n_max. The maximum is
//   max_{n <= n_max} sqrt(n+1) |1 - sqrt(1 - n/(2j))|,
// hence ~ n_max^{3/2} / (4j) deep inside the ladder; exactly 0 at n_max = 0.
inline double hp_map_error(double j, HpBranch branch, int n_max) {
  detail::require_valid_j(j);
  const long twoj = std::llround(2.0 * j);
  if (n_max < 0 || n_max > twoj) throw SubspaceTooLarge("n_max exceeds 2j");

  const int dim = static_cast<int>(twoj) + 1;
  const double scale = std::sqrt(2.0 * j);
  const bool minus = (branch == HpBranch::Minus);
  // spin index of the embedded boson state |n>
  const auto spin_index = [&](long n) {
    return minus ? static_cast<int>(twoj - n) : static_cast<int>(n);
  };

  // one dense difference matrix at a time (dim can reach 4097)
  const auto ladder_coef = [&](int i) {
    const double m = j - i;  // J+|j,m> coefficient into row i-1
    return std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  };

  CMatrix diff = CMatrix::Zero(dim, dim);  // J+/sqrt(2j) - embedded d^(dag)
  for (int i = 1; i < dim; ++i) diff(i - 1, i) = ladder_coef(i) / scale;
  for (long n = 0; n < twoj; ++n) {
    if (minus)
      diff(spin_index(n + 1), spin_index(n)) -= std::sqrt(static_cast<double>(n + 1));
    else
      diff(static_cast<int>(n), static_cast<int>(n + 1)) -= std::sqrt(static_cast<double>(n + 1));
  }
  double err = 0.0;
  for (long n = 0; n <= n_max; ++n)
    err = std::max(err, diff.col(spin_index(n)).cwiseAbs().maxCoeff());

  diff.setZero();  // J-/sqrt(2j) - embedded d^(dag): J-(i, i-1) = J+(i-1, i)
  for (int i = 1; i < dim; ++i) diff(i, i - 1) = ladder_coef(i) / scale;
  for (long n = 0; n < twoj; ++n) {
    if (minus)
      diff(spin_index(n), spin_index(n + 1)) -= std::sqrt(static_cast<double>(n + 1));
    else
      diff(static_cast<int>(n + 1), static_cast<int>(n)) -= std::sqrt(static_cast<double>(n + 1));
  }
  for (long n = 0; n <= n_max; ++n)
    err = std::max(err, diff.col(spin_index(n)).cwiseAbs().maxCoeff());
  return err;
}

}  // namespace tlsqle
