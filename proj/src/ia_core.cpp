// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include "iaoh/ia_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "iaoh/errors.hpp"
#include "iaoh/rng.hpp"

namespace iaoh {

namespace {

using Complex = std::complex<double>;

// Orthonormal basis of the column span (thin Q of a Householder QR).
CMatrix orthonormalize(const CMatrix& a) {
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(a.rows(), a.cols());
}

// Orthonormal basis of the orthogonal complement of span(a), a with orthonormal columns.
CMatrix complement(const CMatrix& a) {
  Eigen::HouseholderQR<CMatrix> qr(a);
  const CMatrix q = qr.householderQ();
  return q.rightCols(a.rows() - a.cols());
}

// Eigenvectors of the `count` smallest eigenvalues of a Hermitian matrix, ascending.
CMatrix smallest_eigenvectors(const CMatrix& q, Eigen::Index count) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(q);
  CMatrix v = es.eigenvectors().leftCols(count);
  normalize_phase(v);
  return v;
}

// Leakage of the d-dimensional receive subspaces W_i (IA formulation).
double subspace_leakage(const ChannelMatrices& h, const std::vector<CMatrix>& f, const std::vector<CMatrix>& w) {
  const int k_users = h.users();
  double total = 0.0;
  for (int i = 0; i < k_users; ++i) {
    for (int k = 0; k < k_users; ++k) {
      if (i != k) {
        total += (w[i].adjoint() * h(i, k) * f[k]).squaredNorm();
      }
    }
  }
  return total;
}

void update_receive_subspaces(const ChannelMatrices& h, const std::vector<CMatrix>& f, std::vector<CMatrix>& w,
                              Eigen::Index d) {
  const int k_users = h.users();
  for (int i = 0; i < k_users; ++i) {
    CMatrix q = CMatrix::Zero(h.rows(), h.rows());
    for (int k = 0; k < k_users; ++k) {
      if (k != i) {
        const CMatrix x = h(i, k) * f[k];
        q.noalias() += x * x.adjoint();
      }
    }
    w[i] = smallest_eigenvectors(q, d);
  }
}

void update_precoders(const ChannelMatrices& h, std::vector<CMatrix>& f, const std::vector<CMatrix>& w,
                      Eigen::Index d) {
  const int k_users = h.users();
  for (int k = 0; k < k_users; ++k) {
    CMatrix q = CMatrix::Zero(h.cols(), h.cols());
    for (int i = 0; i < k_users; ++i) {
      if (i != k) {
        const CMatrix x = h(i, k).adjoint() * w[i];
        q.noalias() += x * x.adjoint();
      }
    }
    f[k] = smallest_eigenvectors(q, d);
  }
}

// One minimum-norm Gauss-Newton step on r_ik = W_i* H_ik F_k = 0 (i != k).
// Precoders move as F_k + F_k_perp X_k and receive subspaces as W_i + W_i_perp Z_i*,
// which keeps the linearization complex-linear in (X, Z).
void gauss_newton_step(const ChannelMatrices& h, std::vector<CMatrix>& f, std::vector<CMatrix>& w, Eigen::Index d) {
  const int k_users = h.users();
  const Eigen::Index nt = h.cols();
  const Eigen::Index nr = h.rows();
  const Eigen::Index nx = d * (nt - d);
  const Eigen::Index nz = d * (nr - d);
  const Eigen::Index cols = k_users * (nx + nz);
  const Eigen::Index rows = static_cast<Eigen::Index>(k_users) * (k_users - 1) * d * d;
  if (cols == 0) {
    return;
  }

  std::vector<CMatrix> f_perp(k_users);
  std::vector<CMatrix> w_perp(k_users);
  for (int k = 0; k < k_users; ++k) {
    f_perp[k] = complement(f[k]);
    w_perp[k] = complement(w[k]);
  }

  CMatrix jac = CMatrix::Zero(rows, cols);
  Eigen::VectorXcd res(rows);
  Eigen::Index row = 0;
  for (int i = 0; i < k_users; ++i) {
    for (int k = 0; k < k_users; ++k) {
      if (i == k) {
        continue;
      }
      const CMatrix hf = h(i, k) * f[k];
      const CMatrix r = w[i].adjoint() * hf;
      const CMatrix b = w_perp[i].adjoint() * hf;
      const CMatrix c = w[i].adjoint() * h(i, k) * f_perp[k];
      for (Eigen::Index col = 0; col < d; ++col) {
        for (Eigen::Index a = 0; a < d; ++a) {
          const Eigen::Index rr = row + a + col * d;
          res(rr) = r(a, col);
          for (Eigen::Index j = 0; j < nr - d; ++j) {
            jac(rr, k_users * nx + i * nz + a + j * d) += b(j, col);
          }
          for (Eigen::Index j = 0; j < nt - d; ++j) {
            jac(rr, k * nx + j + col * (nt - d)) += c(a, j);
          }
        }
      }
      row += d * d;
    }
  }

  const Eigen::VectorXcd step = jac.completeOrthogonalDecomposition().solve(-res);
  for (int k = 0; k < k_users; ++k) {
    const Eigen::Map<const CMatrix> x(step.data() + k * nx, nt - d, d);
    f[k] = orthonormalize(f[k] + f_perp[k] * x);
    normalize_phase(f[k]);
  }
  for (int i = 0; i < k_users; ++i) {
    const Eigen::Map<const CMatrix> z(step.data() + k_users * nx + i * nz, d, nr - d);
    w[i] = orthonormalize(w[i] + w_perp[i] * z.adjoint());
    normalize_phase(w[i]);
  }
}

// Interfering directions seen by stream m of receiver i.
CMatrix interference_directions(const std::vector<CMatrix>& f, const ChannelMatrices& h, int i, Eigen::Index m) {
  const int k_users = h.users();
  const Eigen::Index d = f[0].cols();
  CMatrix dirs(h.rows(), (k_users - 1) * d + (d - 1));
  Eigen::Index c = 0;
  for (int k = 0; k < k_users; ++k) {
    if (k == i) {
      continue;
    }
    dirs.middleCols(c, d) = h(i, k) * f[k];
    c += d;
  }
  for (Eigen::Index l = 0; l < d; ++l) {
    if (l != m) {
      dirs.col(c++) = h(i, i) * f[i].col(l);
    }
  }
  return dirs;
}

std::vector<CMatrix> combiners_impl(const std::vector<CMatrix>& f, const ChannelMatrices& h, double rank_tol,
                                    bool check_rank) {
  const int k_users = h.users();
  const Eigen::Index d = f[0].cols();
  const Eigen::Index nr = h.rows();
  std::vector<CMatrix> w(k_users, CMatrix(nr, d));
  for (int i = 0; i < k_users; ++i) {
    for (Eigen::Index m = 0; m < d; ++m) {
      const CMatrix dirs = interference_directions(f, h, i, m);
      Eigen::JacobiSVD<CMatrix> svd(dirs, Eigen::ComputeFullU);
      const auto& sv = svd.singularValues();
      if (check_rank && dirs.cols() >= nr) {
        const double smax = sv.size() > 0 ? sv(0) : 0.0;
        const double smin = sv(nr - 1);
        if (smin > rank_tol * std::max(smax, 1e-300)) {
          throw RankDeficiency("interference spans the receive space of user " + std::to_string(i) +
                               ", stream " + std::to_string(m));
        }
      }
      CMatrix col = svd.matrixU().col(nr - 1);
      normalize_phase(col);
      w[i].col(m) = col;
    }
  }
  return w;
}

void check_shapes(const ChannelMatrices& h, const NetworkConfig& cfg) {
  if (h.users() != cfg.users || h.rows() != cfg.rx_antennas || h.cols() != cfg.tx_antennas) {
    throw InvalidConfig("forward channel shapes do not match the network configuration");
  }
}

}  // namespace

void normalize_phase(CMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double scale = m.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double mag = std::abs(m(r, c));
      if (mag > 1e-8 * scale) {
        m.col(c) *= std::conj(m(r, c)) / mag;
        m(r, c) = Complex(mag, 0.0);
        break;
      }
    }
  }
}

AlignmentResidual alignment_residual(const std::vector<CMatrix>& precoders, const std::vector<CMatrix>& combiners,
                                     const ChannelMatrices& forward) {
  AlignmentResidual out;
  const int k_users = forward.users();
  for (int i = 0; i < k_users; ++i) {
    for (int k = 0; k < k_users; ++k) {
      const CMatrix cross = combiners[i].adjoint() * forward(i, k) * precoders[k];
      for (Eigen::Index m = 0; m < cross.rows(); ++m) {
        for (Eigen::Index l = 0; l < cross.cols(); ++l) {
          if (k == i && l == m) {
            continue;
          }
          const double a = std::abs(cross(m, l));
          out.leakage += a * a;
          out.max_residual = std::max(out.max_residual, a);
        }
      }
    }
  }
  return out;
}

double precoder_unitarity_error(const std::vector<CMatrix>& precoders) {
  double err = 0.0;
  for (const auto& f : precoders) {
    const CMatrix g = f.adjoint() * f - CMatrix::Identity(f.cols(), f.cols());
    err = std::max(err, g.cwiseAbs().maxCoeff());
  }
  return err;
}

std::vector<CMatrix> zf_combiners(const std::vector<CMatrix>& precoders, const ChannelMatrices& forward,
                                  const NetworkConfig& cfg, double rank_tol) {
  check_shapes(forward, cfg);
  if (precoders.size() != static_cast<std::size_t>(cfg.users)) {
    throw InvalidConfig("one precoder per user required");
  }
  return combiners_impl(precoders, forward, rank_tol, true);
}

std::vector<std::vector<std::complex<double>>> effective_gains(const IaSolution& sol,
                                                               const ChannelMatrices& forward) {
  const int k_users = forward.users();
  std::vector<std::vector<std::complex<double>>> g(k_users);
  for (int i = 0; i < k_users; ++i) {
    const Eigen::Index d = sol.precoders[i].cols();
    g[i].resize(d);
    for (Eigen::Index m = 0; m < d; ++m) {
      g[i][m] = sol.combiners[i].col(m).dot(forward(i, i) * sol.precoders[i].col(m));
    }
  }
  return g;
}

IaSolution solve_ia(const ChannelMatrices& forward, const NetworkConfig& cfg, const SolverOptions& opts) {
  cfg.validate();
  check_shapes(forward, cfg);
  if (!cfg.ia_feasible()) {
    throw InfeasibleConfig("d*(K+1) > Nt + Nr: no alignment solution for K=" + std::to_string(cfg.users) +
                           ", Nt=" + std::to_string(cfg.tx_antennas) + ", Nr=" + std::to_string(cfg.rx_antennas) +
                           ", d=" + std::to_string(cfg.streams));
  }

  const int k_users = cfg.users;
  const Eigen::Index d = cfg.streams;
  Rng rng(derive_seed(opts.seed, {to_index(Stream::ia_init)}));

  std::vector<CMatrix> f(k_users);
  std::vector<CMatrix> w(k_users);
  for (auto& fk : f) {
    fk = orthonormalize(rng.complex_gaussian(cfg.tx_antennas, d));
    normalize_phase(fk);
  }

  IaSolution sol;
  // Polish well below tol so the per-stream zero-forcing residuals clear it too.
  const double target = std::max(opts.tol * opts.tol * 1e-6, 1e-30);
  double switch_level = opts.newton_switch;
  double leak = std::numeric_limits<double>::infinity();

  while (sol.iterations < opts.max_iter) {
    update_receive_subspaces(forward, f, w, d);
    update_precoders(forward, f, w, d);
    leak = subspace_leakage(forward, f, w);
    ++sol.iterations;
    if (opts.record_history) {
      sol.leakage_history.push_back(leak);
    }
    if (leak <= target) {
      break;
    }
    if (opts.newton_polish && leak < switch_level) {
      for (int step = 0; step < 8 && leak > target; ++step) {
        std::vector<CMatrix> f_try = f;
        std::vector<CMatrix> w_try = w;
        gauss_newton_step(forward, f_try, w_try, d);
        ++sol.newton_steps;
        const double next = subspace_leakage(forward, f_try, w_try);
        if (!(next < leak)) {
          break;
        }
        f = std::move(f_try);
        w = std::move(w_try);
        leak = next;
      }
      if (leak <= target) {
        break;
      }
      // Not yet in the quadratic basin: tighten the switch point and keep alternating.
      switch_level *= 1e-2;
    }
  }

  sol.precoders = std::move(f);
  sol.combiners = combiners_impl(sol.precoders, forward, 0.0, false);
  const AlignmentResidual r = alignment_residual(sol.precoders, sol.combiners, forward);
  sol.leakage = r.leakage;
  sol.max_residual = r.max_residual;
  sol.converged = r.leakage < opts.tol && r.max_residual < opts.tol;
  sol.gains = effective_gains(sol, forward);
  return sol;
}

}  // namespace iaoh
