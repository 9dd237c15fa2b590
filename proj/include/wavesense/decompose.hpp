#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavesense/types.hpp"

namespace wavesense {

/// Output of the greedy binary peel: the input vector is recovered as
///   v ~= (sum_i s[i] * B.row(i)) * D / U + S
/// applied elementwise. Row supports are strictly nested, so rows(B) <= N.
struct DecompositionResult {
  BitMatrix B;                   // rows x N indicator rows
  std::vector<std::int64_t> s;   // per-row multiplicities, each >= 1
  double S = 0.0;                // minimum shift
  double D = 0.0;                // range
  double U = 1.0;                // scale divisor, 10^decimal_digits
  int decimal_digits = 1;        // digits preserved by the integer scaling
  double epsilon = 0.0;          // termination threshold on residual density

  Eigen::Index rows() const { return B.rows(); }

  std::string to_json() const;
};

/// Peel a real vector into weighted binary indicator rows.
///
/// The vector is shifted by its minimum, scaled to integers in
/// [0, 10^decimal_digits], then repeatedly reduced: each step emits the
/// support of the remaining integer vector with multiplicity equal to its
/// smallest positive entry (the run length of that support) and subtracts
/// it out. The peel stops once the fraction of nonzero entries drops below
/// epsilon, or the residual reaches zero.
DecompositionResult decompose(const Vec& v, int decimal_digits, double epsilon);

/// Evaluate the weighted sum above; exact inverse of a full peel up to the
/// integer rounding, bounded by 0.5 * D * 10^-decimal_digits per element.
Vec recompose(const DecompositionResult& r);

}  // namespace wavesense
