#pragma once

#include <span>
#include <vector>

#include "npicover/npi.hpp"

namespace npicover {

// Mean-field SIS system x_i' = -gamma_i x_i + (1 - x_i) sum_j lambda_ij x_j.
struct SisSystem {
  std::vector<double> gamma;
  RateMatrix rates;

  NodeId n() const noexcept { return static_cast<NodeId>(gamma.size()); }
};

SisSystem make_system(const Instance& instance, const Strategy& s);

// R0 values in (1, 1 + kNearCriticalMargin] are flagged near-critical.
inline constexpr double kNearCriticalMargin = 0.05;

struct PowerIterationOptions {
  double tol = 1e-10;  // relative width of the Collatz-Wielandt bracket
  long max_iter = 1'000'000;
};

// Spectral radius of D^-1 lambda.
double r0(const SisSystem& sys, const PowerIterationOptions& options = {});
double r0(const Instance& instance, const Strategy& s,
          const PowerIterationOptions& options = {});

// Right-hand side of the ODE at x (also the steady-state residual J_i).
void drift(const SisSystem& sys, std::span<const double> x,
           std::span<double> out);
std::vector<double> drift(const SisSystem& sys, std::span<const double> x);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  // Number of RK4 steps whose raw result left [0,1]^n and was clamped.
  long clamp_count = 0;
};

struct IntegrateOptions {
  double dt = 0.01;
  double t_end = 200.0;
  long sample_stride = 100;  // record every this many steps (and the last)
};

// Fixed-step classical RK4; each step's result is clamped to [0,1]^n.
Trajectory integrate(const SisSystem& sys, std::span<const double> x0,
                     const IntegrateOptions& options = {});

enum class SteadyKind { kDiseaseFree, kEndemic };

struct SteadyState {
  std::vector<double> x_star;
  SteadyKind kind = SteadyKind::kDiseaseFree;
  long iterations = 0;
  double residual = 0.0;  // max_i |J_i(x_star)|
  double r0 = 0.0;
  bool near_critical = false;
};

struct SolverOptions {
  double tol = 1e-10;
  long max_iter = 100'000;
};

// Monotone sweeps x_i <- s_i / (gamma_i + s_i), s_i = sum_j lambda_ij x_j,
// from x = 1, updating in place. Converges from above to the largest fixed
// point. Returns the disease-free state when R0 <= 1.
SteadyState endemic_fixed_point(const SisSystem& sys,
                                const SolverOptions& options = {});

// Truncated continued fraction: phi^1_i = 1 + mu_i d_i and
// phi^l_i = 1 + mu_i d_i - mu_i sum_j lambda_ij / phi^{l-1}_j, with
// x_i = 1 - 1/phi_i. `options.max_iter` caps the number of levels.
// Requires R0 >= 1 (ThresholdNotMet otherwise).
SteadyState endemic_phi_iteration(const SisSystem& sys,
                                  const SolverOptions& options = {});

// phi^1 .. phi^levels, one vector per level.
std::vector<std::vector<double>> phi_sequence(const SisSystem& sys,
                                              int levels);

}  // namespace npicover
