#pragma once

#include <string>

#include "wavesense/sampling.hpp"
#include "wavesense/types.hpp"

namespace wavesense {

enum class SolverKind { kGreedyPursuit, kIterativeShrinkage };
enum class BasisKind { kIdentity, kDct2d };

const char* to_string(SolverKind s);
const char* to_string(BasisKind b);
SolverKind solver_kind_from_string(const std::string& s);
BasisKind basis_kind_from_string(const std::string& s);

struct ReconstructionOptions {
  SolverKind solver = SolverKind::kGreedyPursuit;
  int max_iterations = 300;
  double residual_tolerance = 1e-6;  // relative to ||o||
  bool nonnegative = true;
  BasisKind basis = BasisKind::kIdentity;

  void validate() const;
};

struct ReconstructionResult {
  Vec x;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Initial estimate A^T * o.
Vec initial_estimate(const SamplingMatrix& A, const Vec& o);

template <typename Derived>
double l1_norm(const Eigen::MatrixBase<Derived>& x) {
  return x.cwiseAbs().sum();
}

/// Sparse recovery of x from o = A*x.
///
/// greedy-pursuit: pick the column most correlated with the residual, refit
/// by least squares on the active set (nonnegative least squares when the
/// nonnegative flag is set), stop at the residual tolerance or iteration cap.
/// iterative-shrinkage: FISTA steps with step size 1/||A||_2^2 and an
/// annealed soft threshold, followed by a least-squares debias on the
/// detected support.
///
/// With basis = dct2d the solve runs on coefficients alpha with
/// x = Psi * alpha; the nonnegative flag then applies to the returned x.
/// Non-convergence returns the best iterate with converged = false.
ReconstructionResult reconstruct(const SamplingMatrix& A, const Vec& o,
                                 const ReconstructionOptions& opts);

/// Nonnegative least squares min ||o - M z||, z >= 0, given the normal
/// equations G = M^T M and b = M^T o. Lawson-Hanson active set; a feasible
/// z0 warm-starts the passive set.
Vec nnls_from_gram(const Mat& G, const Vec& b, const Vec* z0 = nullptr);

/// Orthonormal 2-D DCT-II synthesis matrix for m-by-m images flattened
/// row-major: x = Psi * alpha.
Mat dct2d_synthesis_matrix(int m);

}  // namespace wavesense
