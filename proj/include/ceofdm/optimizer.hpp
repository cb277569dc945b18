#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ceofdm/correlation.hpp"
#include "ceofdm/gradient.hpp"

namespace ceofdm {

struct OptimizerConfig {
  int p = 20;
  double beta = 0.5;
  double mu0 = 1.0;
  double rho_down = 0.5;
  double rho_up = 2.0;
  double c = 1e-4;
  int max_iterations = 100;
  double g_min = 1e-6;
  int max_backtracks = 60;
  double mu_max = 1e3;

  void validate() const {
    detail::check_norm_order(p);
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error("OptimizerConfig: beta must be in [0, 1]");
    if (!(mu0 > 0.0)) throw std::domain_error("OptimizerConfig: mu0 must be > 0");
    if (!(rho_down > 0.0 && rho_down < 1.0)) throw std::domain_error("OptimizerConfig: rho_down must be in (0, 1)");
    if (!(rho_up >= 1.0)) throw std::domain_error("OptimizerConfig: rho_up must be >= 1");
    if (!(c > 0.0 && c < 1.0)) throw std::domain_error("OptimizerConfig: c must be in (0, 1)");
    if (max_iterations < 0) throw std::domain_error("OptimizerConfig: max_iterations must be >= 0");
    if (std::isnan(g_min) || g_min < 0.0) throw std::domain_error("OptimizerConfig: g_min must be >= 0");
    if (max_backtracks < 0) throw std::domain_error("OptimizerConfig: max_backtracks must be >= 0");
    if (!(mu_max >= mu0)) throw std::domain_error("OptimizerConfig: mu_max must be >= mu0");
  }
};

enum class StopReason { kIterationCap, kGradientThreshold, kLineSearchStall };

inline std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kIterationCap: return "iteration_cap";
    case StopReason::kGradientThreshold: return "gradient_threshold";
    case StopReason::kLineSearchStall: return "line_search_stall";
  }
  return "unknown";
}

struct IterationRecord {
  int iteration = 0;
  double cost = 0.0;       // J_p after the accepted step
  double cost_db = 0.0;
  double grad_norm = 0.0;  // ‖∇J_p‖ at the point the step started from
  double mu = 0.0;         // accepted step
  int backtracks = 0;
  bool reset = false;      // heavy-ball direction replaced by -∇J_p
  double slope = 0.0;      // qᵀ∇J_p of the direction actually used
};

struct OptimizationTrace {
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double final_grad_norm = 0.0;
  std::vector<IterationRecord> iterations;
  StopReason stop = StopReason::kIterationCap;
};

template <typename Scalar>
struct HeavyBallStep {
  VectorX<Scalar> direction;
  bool reset = false;
};

/// q = -∇J + β q_prev, replaced by -∇J whenever qᵀ∇J >= 0.
template <typename GradDerived, typename PrevDerived>
HeavyBallStep<typename GradDerived::Scalar> heavy_ball_direction(const Eigen::MatrixBase<GradDerived>& grad,
                                                                 const Eigen::MatrixBase<PrevDerived>& q_prev,
                                                                 double beta) {
  using Scalar = typename GradDerived::Scalar;
  if (grad.size() != q_prev.size()) throw std::invalid_argument("heavy_ball_direction: size mismatch");
  HeavyBallStep<Scalar> step{-grad + static_cast<Scalar>(beta) * q_prev, false};
  if (step.direction.dot(grad) >= Scalar(0)) {
    step.direction = -grad;
    step.reset = true;
  }
  return step;
}

template <typename Scalar>
struct LineSearchResult {
  bool accepted = false;
  double mu = 0.0;       // accepted step
  double next_mu = 0.0;  // seed for the next line search, rho_up * mu
  VectorX<Scalar> phi;   // phi + mu q when accepted, else the input point
  double cost = 0.0;
  int backtracks = 0;
};

/// Backtracks mu by rho_down until J(φ + μq) <= J(φ) + cμ ∇Jᵀq. A trial is
/// also required to strictly lower J so accepted steps always descend.
template <typename Scalar, typename CostFn>
LineSearchResult<Scalar> armijo_backtrack(const VectorX<Scalar>& phi, const VectorX<Scalar>& q,
                                          const VectorX<Scalar>& grad, double cost_current, double mu_in,
                                          const OptimizerConfig& opt, CostFn&& cost_fn) {
  const double slope = static_cast<double>(grad.dot(q));
  LineSearchResult<Scalar> out;
  out.phi = phi;
  out.cost = cost_current;
  double mu = mu_in;
  for (int tries = 0; tries <= opt.max_backtracks; ++tries) {
    VectorX<Scalar> trial = phi + static_cast<Scalar>(mu) * q;
    const double cost = cost_fn(trial);
    if (!(cost > cost_current + opt.c * mu * slope) && cost < cost_current) {
      out.accepted = true;
      out.mu = mu;
      out.next_mu = mu * opt.rho_up;
      out.phi = std::move(trial);
      out.cost = cost;
      out.backtracks = tries;
      return out;
    }
    mu *= opt.rho_down;
  }
  out.backtracks = opt.max_backtracks;
  out.mu = 0.0;
  out.next_mu = mu_in;
  return out;
}

template <typename Scalar>
struct OptimizationResult {
  VectorX<Scalar> phi;
  OptimizationTrace trace;
};

/// GD-GISL: heavy-ball descent on J_p with an Armijo line search. The
/// weights stay fixed for the whole run.
template <typename Derived>
OptimizationResult<typename Derived::Scalar> run_gd_gisl(const Eigen::MatrixBase<Derived>& phi0,
                                                         const WaveformConfig& cfg,
                                                         const GislWeights<typename Derived::Scalar>& w,
                                                         const OptimizerConfig& opt) {
  using Scalar = typename Derived::Scalar;
  opt.validate();
  GradientWorkspace<Scalar> ws(cfg);

  OptimizationResult<Scalar> result{phi0, {}};
  auto& trace = result.trace;
  VectorX<Scalar>& phi = result.phi;
  VectorX<Scalar> grad;
  VectorX<Scalar> q_prev = VectorX<Scalar>::Zero(phi.size());
  double cost = ws.gradient(phi, w, opt.p, grad);
  double mu = opt.mu0;
  trace.initial_cost = cost;

  auto cost_fn = [&](const VectorX<Scalar>& x) { return ws.cost(x, w, opt.p); };

  for (int i = 0;; ++i) {
    const double grad_norm = static_cast<double>(grad.norm());
    trace.final_grad_norm = grad_norm;
    if (grad_norm <= opt.g_min) {
      trace.stop = StopReason::kGradientThreshold;
      break;
    }
    if (i >= opt.max_iterations) {
      trace.stop = StopReason::kIterationCap;
      break;
    }
    HeavyBallStep<Scalar> step = heavy_ball_direction(grad, q_prev, opt.beta);
    LineSearchResult<Scalar> ls = armijo_backtrack(phi, step.direction, grad, cost, mu, opt, cost_fn);
    if (!ls.accepted) {
      trace.stop = StopReason::kLineSearchStall;
      break;
    }
    IterationRecord rec;
    rec.iteration = i + 1;
    rec.cost = ls.cost;
    rec.cost_db = to_db(ls.cost);
    rec.grad_norm = grad_norm;
    rec.mu = ls.mu;
    rec.backtracks = ls.backtracks;
    rec.reset = step.reset;
    rec.slope = static_cast<double>(step.direction.dot(grad));
    trace.iterations.push_back(rec);

    phi = std::move(ls.phi);
    mu = std::min(ls.next_mu, opt.mu_max);
    q_prev = std::move(step.direction);
    cost = ws.gradient(phi, w, opt.p, grad);
  }
  trace.final_cost = cost;
  return result;
}

}  // namespace ceofdm
