#pragma once

// Permutation-matrix combinatorics for the Birkhoff polytope Pi_N and the
// uniform-marginal transport polytope Gamma_N = Pi_N / N.
//
// Faces of Pi_N are identified by 0/1 support matrices: a 0/1 matrix A is the
// support of a face iff per(A) >= 1 and every 1-entry of A is covered by some
// permutation below A. The face's vertices are then exactly the per(A)
// permutations below A. Matrices are flattened row-major (index i*N + j).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "quadreg/exactlin.hpp"
#include "quadreg/polytope.hpp"

namespace quadreg {

inline constexpr std::size_t kMaxSupportN = 8;

// Row i maps to column perm[i].
class PermMatrix {
 public:
  PermMatrix() = default;
  // Throws std::invalid_argument unless `perm` is a bijection of {0..N-1}.
  explicit PermMatrix(std::vector<std::uint8_t> perm);
  static PermMatrix identity(std::size_t n);

  std::size_t n() const { return perm_.size(); }
  std::size_t operator[](std::size_t row) const { return perm_[row]; }
  const std::vector<std::uint8_t>& perm() const { return perm_; }

  // Flattened N x N matrix with `value` at each (i, perm[i]).
  RatVec flatten(const Rational& value = 1) const;

  friend auto operator<=>(const PermMatrix&, const PermMatrix&) = default;

 private:
  std::vector<std::uint8_t> perm_;
};

// Lexicographic rank of a permutation, i.e. its vertex index in
// birkhoff_polytope(N) / transport_polytope(N).
std::size_t perm_rank(const PermMatrix& p);

// All N! permutations in lexicographic order.
std::vector<PermMatrix> all_permutations(std::size_t n);

// N x N 0/1 matrix packed into a 64-bit mask (bit i*N + j), N <= 8.
class SupportMatrix {
 public:
  SupportMatrix() = default;
  SupportMatrix(std::size_t n, std::uint64_t bits);
  static SupportMatrix of(const PermMatrix& p);
  static SupportMatrix all_ones(std::size_t n);
  // Parses rows of '0'/'1' characters. Throws ParseError.
  static SupportMatrix from_rows(const std::vector<std::string>& rows);

  std::size_t n() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  bool test(std::size_t i, std::size_t j) const { return (bits_ >> (i * n_ + j)) & 1u; }
  void set(std::size_t i, std::size_t j, bool value = true);
  std::size_t count() const;
  bool covers(const PermMatrix& p) const;  // p <= this entrywise
  std::vector<std::string> rows() const;

  SupportMatrix operator|(const SupportMatrix& o) const { return {n_, bits_ | o.bits_}; }
  friend auto operator<=>(const SupportMatrix&, const SupportMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::uint64_t bits_ = 0;
};

struct BirkhoffFace {
  std::size_t n = 0;
  std::vector<PermMatrix> perms;  // lexicographically sorted
  SupportMatrix support;          // entrywise max of perms
};

// Number of permutations below A, by row expansion over a column bitmask.
std::uint64_t permanent(const SupportMatrix& a);

// Permutations below A in lexicographic order.
std::vector<PermMatrix> permutations_below(const SupportMatrix& a);

bool is_face_support(const SupportMatrix& a);

// Face with the given support. Throws std::invalid_argument if `a` is not a
// face support.
BirkhoffFace face_from_support(const SupportMatrix& a);

// All nonempty faces of Pi_N for N <= 4, sorted by (vertex count, support
// bits). The 2^(N^2) candidate range is split across OpenMP threads.
// Throws SizeLimit for N >= 5.
std::vector<BirkhoffFace> enumerate_faces(std::size_t n);

// Serial reference scan for enumerate_faces.
std::vector<BirkhoffFace> enumerate_faces_serial(std::size_t n);

// conv(P^1..P^N) where P^1 = I and P^k swaps the first and k-th element.
BirkhoffFace special_face(std::size_t n);

// Face whose support is spt(pi); pi must be doubly stochastic (row and column
// sums exactly 1, entries >= 0). Throws NotDoublyStochastic.
BirkhoffFace minimal_face_of(const RatMat& pi);

// Same for a coupling in Gamma_N (row and column sums exactly 1/N).
BirkhoffFace minimal_face_of_coupling(const RatMat& gamma);

// Pi_N and Gamma_N as V-polytopes in R^(N^2), vertices in perm_rank order.
// Throws SizeLimit for N > 6.
VPolytope birkhoff_polytope(std::size_t n);
VPolytope transport_polytope(std::size_t n);

// The face as a FaceRef into `polytope` (birkhoff_polytope or
// transport_polytope of the same N).
FaceRef to_face_ref(const BirkhoffFace& face, const VPolytope& polytope);

// Lexicographically minimal support bitmask over all (row, column)
// permutation pairs. N <= 5.
SupportMatrix canonical_form(const SupportMatrix& support);
SupportMatrix canonical_form(const BirkhoffFace& face);

}  // namespace quadreg
