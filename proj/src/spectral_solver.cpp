#include "ncftap/spectral_solver.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ncftap {

namespace {

struct EigData {
  double lambda_min;
  int block;
  Eigen::VectorXcd vec;  // unit eigenvector of the minimizing block
};

EigData min_eig_data(const AlgebraElement& x) {
  EigData out{std::numeric_limits<double>::infinity(), 0, {}};
  for (int k = 0; k < x.block_count(); ++k) {
    Matrix h = 0.5 * (x.block(k) + x.block(k).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    double lo = es.eigenvalues()(0);
    if (lo < out.lambda_min) {
      out.lambda_min = lo;
      out.block = k;
      out.vec = es.eigenvectors().col(0);
    }
  }
  return out;
}

// GNS gradient of lambda_min at x: the element supported on the minimizing
// block with matrix v v^* / w_b, so that <g, h> = v^* h_b v.
Eigen::VectorXd supergradient_coords(const HermCoords& chart, const EigData& ed) {
  AlgebraElement g = AlgebraElement::zero(chart.algebra());
  std::vector<Matrix> blocks = g.blocks();
  double w = chart.algebra()->trace_weights()[ed.block];
  blocks[ed.block] = (ed.vec * ed.vec.adjoint()) / w;
  return chart.to_coords(AlgebraElement(chart.algebra(), std::move(blocks)));
}

struct BarrierEval {
  bool feasible = false;
  double phi = 0.0;
  std::vector<Eigen::LLT<Matrix>> llts;
};

// phi_t(theta, lambda) = -t lambda - sum_k logdet(rho_k - lambda I).
BarrierEval eval_barrier(const HermCoords& chart, const Eigen::VectorXd& coords,
                         double lambda, double t) {
  BarrierEval ev;
  AlgebraElement rho = chart.from_coords(coords);
  double logdet = 0.0;
  ev.llts.reserve(rho.block_count());
  for (int k = 0; k < rho.block_count(); ++k) {
    Matrix m = rho.block(k) - lambda * Matrix::Identity(rho.block(k).rows(), rho.block(k).cols());
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return ev;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
      double d = L(i, i).real();
      if (!(d > 0.0)) return ev;
      logdet += 2.0 * std::log(d);
    }
    ev.llts.push_back(std::move(llt));
  }
  ev.feasible = true;
  ev.phi = -t * lambda - logdet;
  return ev;
}

}  // namespace

SpectralMaxResult maximize_min_eigenvalue(const HermCoords& chart,
                                          const Eigen::VectorXd& base,
                                          const Eigen::MatrixXd& directions,
                                          const SpectralMaxOptions& options) {
  SpectralMaxResult result;
  const int p = static_cast<int>(directions.cols());
  result.theta = Eigen::VectorXd::Zero(p);
  result.coords = base;
  result.value = min_eig_data(chart.from_coords(base)).lambda_min;
  if (p == 0) return result;  // pinned affine set: nothing to optimize

  // ---- Phase A: supergradient ascent, steps c/sqrt(iter), stall window exit.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd best_theta = theta;
  double best_val = result.value;
  const double c = options.subgradient_step_scale * (1.0 + std::abs(best_val));
  double window_best = best_val;
  int window_start = 0;
  for (int it = 1; it <= options.subgradient_max_iters; ++it) {
    Eigen::VectorXd coords = base + directions * theta;
    AlgebraElement x = chart.from_coords(coords);
    EigData ed = min_eig_data(x);
    if (ed.lambda_min > best_val) {
      best_val = ed.lambda_min;
      best_theta = theta;
    }
    Eigen::VectorXd g = directions.transpose() * supergradient_coords(chart, ed);
    double gn = g.norm();
    result.stats.subgradient_iters = it;
    if (gn < 1e-15) break;
    theta += (c / std::sqrt(static_cast<double>(it))) * (g / gn);
    if (it - window_start >= options.subgradient_stall_window) {
      if (best_val - window_best < options.subgradient_stall_eps) break;
      window_best = best_val;
      window_start = it;
    }
  }
  theta = best_theta;

  if (!options.barrier_refine) {
    result.theta = theta;
    result.coords = base + directions * theta;
    result.value = best_val;
    return result;
  }

  // ---- Phase B: barrier refinement from the phase-A point.
  const int nu = chart.algebra()->total_dim();  // barrier parameter
  double lambda = best_val - 0.5 * (1.0 + std::abs(best_val));
  double t = options.barrier_t0;
  const int n_vars = p + 1;

  // Direction elements as matrices, reused across Newton steps.
  std::vector<AlgebraElement> dir_elems;
  dir_elems.reserve(p);
  for (int j = 0; j < p; ++j) dir_elems.push_back(chart.from_coords(directions.col(j)));

  int total_newton = 0;
  while (true) {
    // Newton centering for the current t.
    for (int step = 0; step < options.newton_max_iters; ++step) {
      Eigen::VectorXd coords = base + directions * theta;
      BarrierEval ev = eval_barrier(chart, coords, lambda, t);
      if (!ev.feasible) {
        // Drift below the current min eigenvalue and retry.
        lambda -= 0.5 * (1.0 + std::abs(lambda));
        ev = eval_barrier(chart, coords, lambda, t);
        if (!ev.feasible) break;
      }

      // Whitened directions W_j = L^{-1} E_j L^{-*} (hermitian), W_I for I.
      const int blocks = chart.algebra()->block_count();
      std::vector<std::vector<Matrix>> W(n_vars);
      for (int j = 0; j < p; ++j) {
        W[j].reserve(blocks);
        for (int k = 0; k < blocks; ++k) {
          const auto& L = ev.llts[k].matrixL();
          Matrix tmp = L.solve(dir_elems[j].block(k));
          W[j].push_back(L.solve(tmp.adjoint()).adjoint());
        }
      }
      W[p].reserve(blocks);
      for (int k = 0; k < blocks; ++k) {
        const int n = chart.algebra()->block_dims()[k];
        const auto& L = ev.llts[k].matrixL();
        Matrix tmp = L.solve(Matrix::Identity(n, n));
        W[p].push_back(L.solve(tmp.adjoint()).adjoint());
      }

      Eigen::VectorXd grad(n_vars);
      for (int j = 0; j < p; ++j) {
        double tr = 0.0;
        for (int k = 0; k < blocks; ++k) tr += W[j][k].trace().real();
        grad(j) = -tr;
      }
      {
        double tr = 0.0;
        for (int k = 0; k < blocks; ++k) tr += W[p][k].trace().real();
        grad(p) = -t + tr;
      }

      Eigen::MatrixXd hess(n_vars, n_vars);
      for (int a = 0; a < n_vars; ++a)
        for (int b = a; b < n_vars; ++b) {
          double h = 0.0;
          for (int k = 0; k < blocks; ++k)
            h += W[a][k].conjugate().cwiseProduct(W[b][k]).sum().real();
          // the lambda direction enters M as -I, one sign flip per lambda index
          double sign = ((a == p) ? -1.0 : 1.0) * ((b == p) ? -1.0 : 1.0);
          hess(a, b) = hess(b, a) = sign * h;
        }
      hess.diagonal().array() += 1e-13;

      Eigen::VectorXd d = hess.ldlt().solve(-grad);
      double dec2 = -grad.dot(d);
      ++total_newton;
      if (!(dec2 > 0.0)) break;
      if (dec2 * 0.5 < 1e-11 && step > 0) break;

      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        Eigen::VectorXd theta_try = theta + alpha * d.head(p);
        double lambda_try = lambda + alpha * d(p);
        BarrierEval trial =
            eval_barrier(chart, base + directions * theta_try, lambda_try, t);
        if (trial.feasible && trial.phi <= ev.phi - 0.25 * alpha * dec2) {
          theta = theta_try;
          lambda = lambda_try;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      if (dec2 * 0.5 < 1e-11) break;
    }
    double scale = std::max(1.0, std::abs(lambda));
    result.stats.barrier_gap_reached = nu / t;
    if (nu / t <= options.barrier_gap * scale) break;
    t *= options.barrier_growth;
    if (total_newton > 40 * options.newton_max_iters) break;  // safety valve
  }
  result.stats.newton_iters = total_newton;

  Eigen::VectorXd coords = base + directions * theta;
  double final_val = min_eig_data(chart.from_coords(coords)).lambda_min;
  if (final_val >= best_val) {
    result.theta = theta;
    result.coords = coords;
    result.value = final_val;
  } else {  // keep the monotone safeguard
    result.theta = best_theta;
    result.coords = base + directions * best_theta;
    result.value = best_val;
  }
  return result;
}

}  // namespace ncftap
