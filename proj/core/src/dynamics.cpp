#include "npicover/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace npicover {

namespace {

// Values of R0 this close above 1 are treated as critical by the phi solver.
constexpr double kCriticalBand = 1e-9;

double weighted_row(const SisSystem& sys, NodeId i, std::span<const double> x) {
  const auto cols = sys.rates.columns(i);
  const auto vals = sys.rates.row(i);
  double s = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * x[cols[k]];
  return s;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace

SisSystem make_system(const Instance& instance, const Strategy& s) {
  return SisSystem{instance.network.gamma(),
                   lambda_matrix(instance.network, instance.npi,
                                 instance.clusters, s)};
}

double r0(const SisSystem& sys, const PowerIterationOptions& options) {
  const NodeId n = sys.n();
  if (n == 0) return 0.0;
  // Iterate on M + I where M = D^-1 lambda. Adding I makes the irreducible
  // nonnegative M primitive without moving the Perron vector, so the
  // iteration converges even on bipartite graphs; the result is shifted back.
  std::vector<double> y(n, 1.0);
  std::vector<double> z(n);
  for (long it = 0; it < options.max_iter; ++it) {
    double lo = INFINITY;
    double hi = 0.0;
    double top = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      z[i] = weighted_row(sys, i, y) / sys.gamma[i] + y[i];
      const double ratio = z[i] / y[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      top = std::max(top, z[i]);
    }
    if (hi - lo <= options.tol * hi) return 0.5 * (lo + hi) - 1.0;
    for (NodeId i = 0; i < n; ++i) y[i] = z[i] / top;
  }
  throw NoConvergenceError("power iteration did not converge in " +
                               std::to_string(options.max_iter) +
                               " iterations",
                           options.max_iter, y);
}

double r0(const Instance& instance, const Strategy& s,
          const PowerIterationOptions& options) {
  return r0(make_system(instance, s), options);
}

void drift(const SisSystem& sys, std::span<const double> x,
           std::span<double> out) {
  for (NodeId i = 0; i < sys.n(); ++i) {
    out[i] = -sys.gamma[i] * x[i] + (1.0 - x[i]) * weighted_row(sys, i, x);
  }
}

std::vector<double> drift(const SisSystem& sys, std::span<const double> x) {
  std::vector<double> out(sys.n());
  drift(sys, x, out);
  return out;
}

Trajectory integrate(const SisSystem& sys, std::span<const double> x0,
                     const IntegrateOptions& options) {
  const NodeId n = sys.n();
  if (x0.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::kInvalidInitialState,
                "initial state has " + std::to_string(x0.size()) +
                    " entries, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (!(x0[i] >= 0.0 && x0[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidInitialState,
                  "x0[" + std::to_string(i) + "] is outside [0,1]");
    }
  }
  if (!(options.dt > 0.0) || !(options.t_end >= 0.0) ||
      options.sample_stride < 1) {
    throw Error(ErrorCode::kInvalidParams,
                "integrate needs dt > 0, t_end >= 0 and sample_stride >= 1");
  }

  const long steps = std::lround(options.t_end / options.dt);
  const double dt = options.dt;
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  for (long step = 1; step <= steps; ++step) {
    drift(sys, x, k1);
    for (NodeId i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    drift(sys, tmp, k2);
    for (NodeId i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    drift(sys, tmp, k3);
    for (NodeId i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    drift(sys, tmp, k4);
    bool clamped = false;
    for (NodeId i = 0; i < n; ++i) {
      double v = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteState,
                    "state diverged at step " + std::to_string(step) +
                        "; reduce dt");
      }
      if (v < 0.0 || v > 1.0) {
        v = std::clamp(v, 0.0, 1.0);
        clamped = true;
      }
      x[i] = v;
    }
    if (clamped) ++traj.clamp_count;
    if (step % options.sample_stride == 0 || step == steps) {
      traj.times.push_back(static_cast<double>(step) * dt);
      traj.states.push_back(x);
    }
  }
  return traj;
}

SteadyState endemic_fixed_point(const SisSystem& sys,
                                const SolverOptions& options) {
  const NodeId n = sys.n();
  SteadyState out;
  out.r0 = r0(sys);
  out.near_critical =
      out.r0 > 1.0 && out.r0 <= 1.0 + kNearCriticalMargin;
  if (out.r0 <= 1.0) {
    out.kind = SteadyKind::kDiseaseFree;
    out.x_star.assign(n, 0.0);
    return out;
  }
  std::vector<double> x(n, 1.0);
  for (long it = 1; it <= options.max_iter; ++it) {
    double change = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      const double s = weighted_row(sys, i, x);
      const double next = s / (sys.gamma[i] + s);
      change = std::max(change, std::abs(next - x[i]));
      x[i] = next;
    }
    if (change < options.tol) {
      out.kind = SteadyKind::kEndemic;
      out.iterations = it;
      out.residual = max_abs(drift(sys, x));
      out.x_star = std::move(x);
      return out;
    }
  }
  throw NoConvergenceError("fixed-point iteration did not converge in " +
                               std::to_string(options.max_iter) + " sweeps",
                           options.max_iter, x);
}

SteadyState endemic_phi_iteration(const SisSystem& sys,
                                  const SolverOptions& options) {
  const double rho = r0(sys);
  if (rho < 1.0) {
    throw Error(ErrorCode::kThresholdNotMet,
                "phi iteration needs R0 >= 1 (R0 = " + std::to_string(rho) +
                    ")");
  }
  if (rho <= 1.0 + kCriticalBand) {
    SteadyState out = endemic_fixed_point(sys, options);
    out.near_critical = true;
    return out;
  }

  const NodeId n = sys.n();
  std::vector<double> d(n);
  std::vector<double> phi(n);
  std::vector<double> x(n);
  for (NodeId i = 0; i < n; ++i) {
    d[i] = sys.rates.row_sum(i);
    phi[i] = 1.0 + d[i] / sys.gamma[i];
    x[i] = 1.0 - 1.0 / phi[i];
  }
  std::vector<double> next_phi(n);
  for (long level = 2; level <= options.max_iter; ++level) {
    double change = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      const auto cols = sys.rates.columns(i);
      const auto vals = sys.rates.row(i);
      double tail = 0.0;
      for (std::size_t k = 0; k < cols.size(); ++k) tail += vals[k] / phi[cols[k]];
      next_phi[i] = 1.0 + (d[i] - tail) / sys.gamma[i];
      const double xi = 1.0 - 1.0 / next_phi[i];
      change = std::max(change, std::abs(xi - x[i]));
      x[i] = xi;
    }
    phi.swap(next_phi);
    if (change < options.tol) {
      SteadyState out;
      out.kind = SteadyKind::kEndemic;
      out.iterations = level;
      out.r0 = rho;
      out.near_critical = rho <= 1.0 + kNearCriticalMargin;
      out.residual = max_abs(drift(sys, x));
      out.x_star = std::move(x);
      return out;
    }
  }
  throw NoConvergenceError("phi iteration did not converge in " +
                               std::to_string(options.max_iter) + " levels",
                           options.max_iter, x);
}

std::vector<std::vector<double>> phi_sequence(const SisSystem& sys,
                                              int levels) {
  const NodeId n = sys.n();
  std::vector<std::vector<double>> seq;
  if (levels < 1) return seq;
  std::vector<double> d(n);
  std::vector<double> phi(n);
  for (NodeId i = 0; i < n; ++i) {
    d[i] = sys.rates.row_sum(i);
    phi[i] = 1.0 + d[i] / sys.gamma[i];
  }
  seq.push_back(phi);
  for (int level = 2; level <= levels; ++level) {
    const auto& prev = seq.back();
    for (NodeId i = 0; i < n; ++i) {
      const auto cols = sys.rates.columns(i);
      const auto vals = sys.rates.row(i);
      double tail = 0.0;
      for (std::size_t k = 0; k < cols.size(); ++k) tail += vals[k] / prev[cols[k]];
      phi[i] = 1.0 + (d[i] - tail) / sys.gamma[i];
    }
    seq.push_back(phi);
  }
  return seq;
}

}  // namespace npicover
