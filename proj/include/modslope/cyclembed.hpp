#pragma once

// Integral cyclic embedding of Z[w_c] into Z^c.
//
// Column j of E is the coefficient vector of X^j * R(X) * m(X) mod X^c - 1, where
// R = sum_k Tr(w^k) X^k vanishes at every non-primitive c-th root of unity and
// equals c at the primitive ones, and m has |m(z)|^2 = c at every primitive root z.
// Then |E x|^2 = c^2 Tr(x conj(x)) and multiplication by w is the cyclic shift.
// Conductors c = 2 mod 4 have no such m; use c/2 (the same field).

#include <string>
#include <vector>

#include "modslope/cyclofield.hpp"

namespace modslope::embed {

struct CyclicEmbedding {
  cyclo::CyclotomicField field;
  IntMatrix matrix;        // c x d
  Int scale;               // c; embedded norms are c times trace norms
  IntVector multiplier;    // m(X), length c
};

CyclicEmbedding build_embedding(const cyclo::CyclotomicField& K);

/// E * coords(x), a vector of length c.
IntVector embed(const CyclicEmbedding& E, const cyclo::RingElement& x);

/// Power-basis coordinates of the element whose embedding is v; throws
/// DomainError if v is not in the image of O_K.
cyclo::RingElement unembed(const CyclicEmbedding& E, const IntVector& v);

/// Embedded Z-basis of the module generated by the columns of `entries`
/// (entries[i][k] is row i, column k). Result is (r c) x (r d); block k holds the
/// images of entries[.][k] * w^j for j = 0..d-1.
IntMatrix embed_module_basis(const CyclicEmbedding& E, const std::vector<std::vector<cyclo::RingElement>>& entries);

/// Recovers the K-coordinates of an embedded module vector (length r c).
std::vector<cyclo::RingElement> unembed_module_vector(const CyclicEmbedding& E, const IntVector& v);

/// Multiplication by w in the ambient space: cyclic shift inside every length-c chunk.
IntVector omega_shift(const IntVector& v, long c, long times = 1);

/// Integer CSV, one matrix row per line.
std::string to_csv(const IntMatrix& m);

}  // namespace modslope::embed
