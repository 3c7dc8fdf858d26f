// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "iaoh/channel_model.hpp"

namespace iaoh {

struct SolverOptions {
  /// Convergence threshold on both the total leakage power and the largest
  /// per-pair alignment residual |w* H f|.
  double tol = 1e-9;
  /// Cap on alternating-minimization sweeps.
  int max_iter = 5000;
  /// Switch to Gauss-Newton refinement once leakage drops below this level.
  double newton_switch = 1e-1;
  bool newton_polish = true;
  /// Seed for the random unitary initialization.
  std::uint64_t seed = 0;
  /// Keep the leakage value after every alternating sweep.
  bool record_history = false;
};

/// Precoders, zero-forcing combiners and the resulting effective direct gains.
struct IaSolution {
  std::vector<CMatrix> precoders;  ///< F_i, Nt x d with orthonormal columns
  std::vector<CMatrix> combiners;  ///< W_i, Nr x d with unit-norm columns
  /// gains[i][m] = (w_i^m)* H_ii f_i^m
  std::vector<std::vector<std::complex<double>>> gains;
  /// Sum over (i,m) and (k,l) != (i,m) of |(w_i^m)* H_ik f_k^l|^2.
  double leakage = 0.0;
  /// max over the same terms of |(w_i^m)* H_ik f_k^l|.
  double max_residual = 0.0;
  bool converged = false;
  int iterations = 0;
  int newton_steps = 0;
  /// Subspace leakage after every alternating sweep when record_history is set.
  std::vector<double> leakage_history;
};

/// Alternating leakage minimization over interference-covariance eigenvectors,
/// refined with Gauss-Newton steps on the alignment equations. Only the cross
/// channels H_ik (i != k) enter the precoder computation; the direct channels are
/// used afterwards for the inter-stream zero-forcing and the reported gains.
///
/// Throws InfeasibleConfig for improper configurations. Non-convergence within
/// max_iter is reported through IaSolution::converged.
IaSolution solve_ia(const ChannelMatrices& forward, const NetworkConfig& cfg, const SolverOptions& opts = {});

/// Per-stream zero-forcing combiners for fixed precoders: w_i^m has unit norm
/// and is orthogonal to every H_ik f_k^l with (k,l) != (i,m).
///
/// Throws RankDeficiency when the interfering directions leave no null space,
/// i.e. when the smallest singular value exceeds rank_tol times the largest.
std::vector<CMatrix> zf_combiners(const std::vector<CMatrix>& precoders, const ChannelMatrices& forward,
                                  const NetworkConfig& cfg, double rank_tol = 1e-6);

/// (w_i^m)* H_ii f_i^m for every user i and stream m.
std::vector<std::vector<std::complex<double>>> effective_gains(const IaSolution& sol,
                                                               const ChannelMatrices& forward);

/// Alignment residual statistics of (precoders, combiners) on `forward`.
struct AlignmentResidual {
  double leakage = 0.0;
  double max_residual = 0.0;
};
AlignmentResidual alignment_residual(const std::vector<CMatrix>& precoders, const std::vector<CMatrix>& combiners,
                                     const ChannelMatrices& forward);

/// Largest ||F_i* F_i - I||_max over users.
double precoder_unitarity_error(const std::vector<CMatrix>& precoders);

/// Rotates each column so that its first non-negligible entry is real and positive.
void normalize_phase(CMatrix& m);

}  // namespace iaoh
