#include "wavesense/solvers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace wavesense {

const char* to_string(SolverKind s) {
  return s == SolverKind::kGreedyPursuit ? "greedy-pursuit" : "iterative-shrinkage";
}
const char* to_string(BasisKind b) {
  return b == BasisKind::kIdentity ? "identity" : "dct2d";
}
SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "greedy-pursuit") return SolverKind::kGreedyPursuit;
  if (s == "iterative-shrinkage") return SolverKind::kIterativeShrinkage;
  throw std::invalid_argument("unknown solver: " + s);
}
BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "identity") return BasisKind::kIdentity;
  if (s == "dct2d") return BasisKind::kDct2d;
  throw std::invalid_argument("unknown basis: " + s);
}

void ReconstructionOptions::validate() const {
  if (max_iterations < 1)
    throw std::invalid_argument("ReconstructionOptions: max_iterations must be >= 1");
  if (residual_tolerance < 0.0)
    throw std::invalid_argument("ReconstructionOptions: residual_tolerance must be >= 0");
}

Vec initial_estimate(const SamplingMatrix& A, const Vec& o) {
  if (o.size() != A.rows())
    throw std::invalid_argument("initial_estimate: observation length must equal K");
  return A.entries.transpose() * o;
}

Mat dct2d_synthesis_matrix(int m) {
  Mat C(m, m);
  for (int p = 0; p < m; ++p) {
    const double a = p == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
    for (int r = 0; r < m; ++r)
      C(p, r) = a * std::cos(std::numbers::pi * (2 * r + 1) * p / (2.0 * m));
  }
  const int N = m * m;
  Mat psi(N, N);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q)
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          psi(r * m + c, p * m + q) = C(p, r) * C(q, c);
  return psi;
}

Vec nnls_from_gram(const Mat& G, const Vec& b, const Vec* z0) {
  const Eigen::Index n = G.rows();
  Vec z = Vec::Zero(n);
  std::vector<bool> passive(static_cast<size_t>(n), false);
  if (z0 && z0->size() == n && z0->minCoeff() >= 0.0) {
    z = *z0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (z(j) > 0.0) passive[static_cast<size_t>(j)] = true;
  }
  Vec w = b - G * z;  // negative gradient

  const double tol = 1e-12 * (b.cwiseAbs().maxCoeff() + 1.0);
  const int max_outer = static_cast<int>(3 * n) + 30;

  auto solve_passive = [&](Vec& zp, std::vector<Eigen::Index>& idx) {
    idx.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<size_t>(j)]) idx.push_back(j);
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    Mat Gs(k, k);
    Vec bs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      bs(a) = b(idx[static_cast<size_t>(a)]);
      for (Eigen::Index c = 0; c < k; ++c)
        Gs(a, c) = G(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(c)]);
    }
    zp = Gs.ldlt().solve(bs);
  };

  auto refit_passive = [&]() {
    std::vector<Eigen::Index> idx;
    Vec zp;
    solve_passive(zp, idx);
    int guard = static_cast<int>(2 * n) + 20;
    while (zp.size() > 0 && zp.minCoeff() <= 0.0 && guard-- > 0) {
      // Step back to the feasible boundary and drop the blocking coordinates.
      double alpha = 1.0;
      for (size_t a = 0; a < idx.size(); ++a) {
        if (zp(static_cast<Eigen::Index>(a)) <= 0.0) {
          const double zj = z(idx[a]);
          const double denom = zj - zp(static_cast<Eigen::Index>(a));
          if (denom > 0.0) alpha = std::min(alpha, zj / denom);
        }
      }
      for (size_t a = 0; a < idx.size(); ++a) {
        z(idx[a]) += alpha * (zp(static_cast<Eigen::Index>(a)) - z(idx[a]));
        if (z(idx[a]) <= tol) {
          z(idx[a]) = 0.0;
          passive[static_cast<size_t>(idx[a])] = false;
        }
      }
      solve_passive(zp, idx);
    }
    z.setZero();
    for (size_t a = 0; a < idx.size(); ++a)
      z(idx[a]) = std::max(0.0, zp(static_cast<Eigen::Index>(a)));
    w = b - G * z;
  };

  // A warm start leaves the passive coordinates unsolved for the new
  // normal equations; bring them to optimality first.
  if (z.cwiseAbs().maxCoeff() > 0.0) refit_passive();

  for (int outer = 0; outer < max_outer; ++outer) {
    // Most violated optimality condition among the zero coordinates.
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<size_t>(best)] = true;
    refit_passive();
  }
  return z;
}

namespace {

ReconstructionResult greedy_pursuit(const Mat& M, const Vec& o,
                                    const ReconstructionOptions& opts,
                                    bool constrain_nonneg) {
  const Eigen::Index K = M.rows();
  const Eigen::Index N = M.cols();
  ReconstructionResult res;
  res.x = Vec::Zero(N);

  const double o_norm = o.norm();
  if (o_norm == 0.0) {
    res.converged = true;
    return res;
  }

  Vec col_norms(N);
  for (Eigen::Index j = 0; j < N; ++j)
    col_norms(j) = std::max(M.col(j).norm(), 1e-300);
  const Mat G = M.transpose() * M;
  const Vec b = M.transpose() * o;

  std::vector<Eigen::Index> active;
  std::vector<bool> in_active(static_cast<size_t>(N), false);
  Vec z;  // coefficients on the active set
  double resid = o_norm;
  const double target = opts.residual_tolerance * o_norm;

  const int iter_cap = std::min<Eigen::Index>(opts.max_iterations, std::min(K, N));
  int it = 0;
  for (; it < iter_cap; ++it) {
    // Correlations against the current residual through the Gram matrix.
    Vec corr = b;
    for (size_t a = 0; a < active.size(); ++a)
      corr -= z(static_cast<Eigen::Index>(a)) * G.col(active[a]);

    // Under the nonnegativity constraint only positively correlated columns
    // can reduce the residual, so the selection is one-sided there.
    Eigen::Index pick = -1;
    double best = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) {
      if (in_active[static_cast<size_t>(j)]) continue;
      const double c = constrain_nonneg ? corr(j) / col_norms(j)
                                        : std::abs(corr(j)) / col_norms(j);
      if (c > best) {
        best = c;
        pick = j;
      }
    }
    if (pick < 0 || best <= 1e-14 * o_norm) break;

    active.push_back(pick);
    in_active[static_cast<size_t>(pick)] = true;

    const Eigen::Index k = static_cast<Eigen::Index>(active.size());
    Mat Gs(k, k);
    Vec bs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      bs(a) = b(active[static_cast<size_t>(a)]);
      for (Eigen::Index c = 0; c < k; ++c)
        Gs(a, c) = G(active[static_cast<size_t>(a)], active[static_cast<size_t>(c)]);
    }
    Vec warm = Vec::Zero(k);
    if (z.size() == k - 1) warm.head(k - 1) = z.cwiseMax(0.0);
    z = Gs.ldlt().solve(bs);
    if (constrain_nonneg && z.minCoeff() < 0.0) z = nnls_from_gram(Gs, bs, &warm);

    const double r2 = o.squaredNorm() - 2.0 * z.dot(bs) + z.dot(Gs * z);
    resid = std::sqrt(std::max(0.0, r2));
    if (resid <= target) {
      ++it;
      break;
    }
  }

  for (size_t a = 0; a < active.size(); ++a)
    res.x(active[a]) = z(static_cast<Eigen::Index>(a));
  res.iterations = it;
  res.residual_norm = resid;
  res.converged = resid <= target;
  return res;
}

double spectral_norm_sq(const Mat& M) {
  // Deterministic power iteration on M^T M.
  const Mat G = M.transpose() * M;
  Vec v = Vec::Ones(G.rows());
  v /= v.norm();
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec w = G * v;
    const double nl = w.norm();
    if (nl == 0.0) return 0.0;
    w /= nl;
    if (std::abs(nl - lambda) <= 1e-13 * nl && it > 4) {
      lambda = nl;
      break;
    }
    lambda = nl;
    v = w;
  }
  return lambda;
}

ReconstructionResult iterative_shrinkage(const Mat& M, const Vec& o,
                                         const ReconstructionOptions& opts,
                                         bool constrain_nonneg) {
  const Eigen::Index K = M.rows();
  const Eigen::Index N = M.cols();
  ReconstructionResult res;
  res.x = Vec::Zero(N);

  const double o_norm = o.norm();
  if (o_norm == 0.0) {
    res.converged = true;
    return res;
  }

  const double L = std::max(spectral_norm_sq(M), 1e-300);
  const double target = opts.residual_tolerance * o_norm;

  Vec x = Vec::Zero(N), x_prev = x, y = x;
  double lambda = 0.9 * (M.transpose() * o).cwiseAbs().maxCoeff();
  const double lambda_floor = 1e-15 * lambda;
  double t_acc = 1.0;
  double best_resid = o_norm;
  Vec best_x = x;

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const Vec g = y + (M.transpose() * (o - M * y)) / L;
    const double th = lambda / L;
    for (Eigen::Index j = 0; j < N; ++j) {
      const double v = g(j);
      x(j) = v > th ? v - th : (v < -th ? v + th : 0.0);
      if (constrain_nonneg && x(j) < 0.0) x(j) = 0.0;
    }
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t_acc * t_acc)) / 2.0;
    y = x + ((t_acc - 1.0) / t_next) * (x - x_prev);
    t_acc = t_next;
    x_prev = x;

    const double resid = (o - M * x).norm();
    if (resid < best_resid) {
      best_resid = resid;
      best_x = x;
    }
    if (resid <= target) {
      ++it;
      break;
    }
    if ((it + 1) % 10 == 0) lambda = std::max(lambda * 0.7, lambda_floor);
  }

  // Debias: least squares on the detected support.
  const double mag = best_x.cwiseAbs().maxCoeff();
  if (mag > 0.0) {
    std::vector<Eigen::Index> supp;
    for (Eigen::Index j = 0; j < N; ++j)
      if (std::abs(best_x(j)) > 1e-8 * mag) supp.push_back(j);
    if (!supp.empty() && static_cast<Eigen::Index>(supp.size()) <= K) {
      const Eigen::Index k = static_cast<Eigen::Index>(supp.size());
      Mat Ms(K, k);
      for (Eigen::Index a = 0; a < k; ++a) Ms.col(a) = M.col(supp[static_cast<size_t>(a)]);
      const Mat Gs = Ms.transpose() * Ms;
      const Vec bs = Ms.transpose() * o;
      Vec zs = Gs.ldlt().solve(bs);
      if (constrain_nonneg && zs.size() > 0 && zs.minCoeff() < 0.0)
        zs = nnls_from_gram(Gs, bs);
      Vec cand = Vec::Zero(N);
      for (Eigen::Index a = 0; a < k; ++a) cand(supp[static_cast<size_t>(a)]) = zs(a);
      const double cand_resid = (o - M * cand).norm();
      if (cand_resid <= best_resid) {
        best_resid = cand_resid;
        best_x = cand;
      }
    }
  }

  res.x = best_x;
  res.iterations = it;
  res.residual_norm = best_resid;
  res.converged = best_resid <= target;
  return res;
}

}  // namespace

ReconstructionResult reconstruct(const SamplingMatrix& A, const Vec& o,
                                 const ReconstructionOptions& opts) {
  opts.validate();
  if (o.size() != A.rows())
    throw std::invalid_argument("reconstruct: observation length must equal K");

  const bool use_basis = opts.basis == BasisKind::kDct2d;
  Mat psi;
  Mat effective;
  const Mat* M = &A.entries;
  if (use_basis) {
    const int N = static_cast<int>(A.cols());
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(N))));
    if (m * m != N)
      throw std::invalid_argument("reconstruct: dct2d basis needs N to be a perfect square");
    psi = dct2d_synthesis_matrix(m);
    effective = A.entries * psi;
    M = &effective;
  }

  // In the dct2d basis the nonnegativity constraint applies to the returned
  // x, not to the coefficients.
  const bool constrain = opts.nonnegative && !use_basis;
  ReconstructionResult res = opts.solver == SolverKind::kGreedyPursuit
                                 ? greedy_pursuit(*M, o, opts, constrain)
                                 : iterative_shrinkage(*M, o, opts, constrain);
  if (use_basis) {
    res.x = psi * res.x;
    if (opts.nonnegative) res.x = res.x.cwiseMax(0.0);
  }
  return res;
}

}  // namespace wavesense
