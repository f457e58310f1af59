#pragma once

#include "ncftap/herm_coords.hpp"

namespace ncftap {

struct SpectralMaxOptions {
  // Phase A: projected supergradient ascent with diminishing steps c/sqrt(iter).
  int subgradient_max_iters = 20000;
  int subgradient_stall_window = 500;
  double subgradient_stall_eps = 1e-10;
  double subgradient_step_scale = 1.0;
  // Phase B: log-det barrier with damped Newton centering.  The outer loop
  // stops once (sum of block dims)/t <= barrier_gap * max(1, |value|).
  bool barrier_refine = true;
  double barrier_gap = 1e-9;
  double barrier_t0 = 1.0;
  double barrier_growth = 20.0;
  int newton_max_iters = 80;
};

struct SpectralMaxStats {
  int subgradient_iters = 0;
  int newton_iters = 0;
  double barrier_gap_reached = 0.0;
};

struct SpectralMaxResult {
  Eigen::VectorXd theta;   // coordinates in the direction basis
  Eigen::VectorXd coords;  // base + directions * theta
  double value = 0.0;      // lambda_min at the returned point
  SpectralMaxStats stats;
};

/// Maximizes the concave function theta -> lambda_min(base + D theta) where
/// base and the (orthonormal) columns of D are HermCoords coordinates of
/// self-adjoint elements.  With zero columns the base point is returned
/// unchanged, which keeps pinned instances exact.
SpectralMaxResult maximize_min_eigenvalue(const HermCoords& chart,
                                          const Eigen::VectorXd& base,
                                          const Eigen::MatrixXd& directions,
                                          const SpectralMaxOptions& options = {});

}  // namespace ncftap
