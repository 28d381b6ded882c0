#pragma once

// Maximal trace, the Markus-Minc inequality |A|^2 <= maxtr A for doubly
// stochastic A, and Erdos matrices (equality case). Every Erdos matrix is
// the affine-hull projection of the origin for some centred Birkhoff face,
// so a sweep over faces finds all of them.

#include <optional>
#include <vector>

#include "quadreg/birkhoff.hpp"
#include "quadreg/exactlin.hpp"

namespace quadreg {

struct ErdosRecord {
  RatMat matrix;
  SupportMatrix face_support;
  Rational maxtr_value;
  Rational norm_sq;
};

// max over permutations s of sum_i a(i, s(i)); brute force. N <= 8.
Rational maxtr(const RatMat& a);

bool is_doubly_stochastic(const RatMat& a);

// maxtr(A) - |A|^2. Throws NotDoublyStochastic.
Rational markus_minc_gap(const RatMat& a);

bool is_erdos(const RatMat& a);

// Record for A = proj_{aff F}(0) if A is an Erdos matrix.
std::optional<ErdosRecord> erdos_from_face(const BirkhoffFace& face);

// All Erdos matrices for N <= 4, deduplicated and sorted lexicographically
// by entries. Faces are swept in parallel.
std::vector<ErdosRecord> enumerate_erdos(std::size_t n);
std::vector<ErdosRecord> enumerate_erdos_serial(std::size_t n);

}  // namespace quadreg
