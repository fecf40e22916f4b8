#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roomforge/jsonio.hpp"

namespace roomforge {

using Vecd = Eigen::VectorXd;
using Matd = Eigen::MatrixXd;

class DimMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear render x0 = g(theta, camera): the Jacobian d g / d theta is a
// constant matrix per camera, so distillation gradients are exact.
class RenderMap {
 public:
  static RenderMap identity(int dim);
  static RenderMap matrix(Matd m);                     // camera-independent
  static RenderMap camera_slices(std::vector<Matd> per_camera);

  Vecd render(const Vecd& theta, int camera = 0) const;
  const Matd& jacobian(int camera = 0) const;
  int theta_dim() const;
  int image_dim(int camera = 0) const;

 private:
  std::vector<Matd> jacobians_;
  bool shared_ = true;
};

struct RenderParam {
  Vecd theta;
  RenderMap render;
};

// Per-draw sample context the analytic oracles may read. A trained network
// would have to infer these from x_t; the toys are allowed to peek, which
// is what makes exact zero-residual checks possible.
struct DrawContext {
  Vecd eps;
  Vecd x0;
};

// Analytic stand-ins for the guidance network. `teacher` speaks the flow
// convention (predicts eps - x0), `noise_teacher` the noise convention
// (predicts eps); `exact` is the closed-form field whose flow carries every
// point to `target`; `linear` is A x + b; `table` switches linear pieces by
// time. Any oracle can carry a constant bias for closed-form offset tests.
class VelocityOracle {
 public:
  static VelocityOracle teacher();
  static VelocityOracle noise_teacher();
  static VelocityOracle exact(Vecd target);
  static VelocityOracle linear(Matd a, Vecd b);
  static VelocityOracle zero(int dim);
  static VelocityOracle table(std::vector<double> breakpoints,
                              std::vector<Matd> a, std::vector<Vecd> b);

  VelocityOracle biased(Vecd bias) const;  // adds `bias` to every output

  Vecd evaluate(const Vecd& x, double t, const DrawContext& ctx) const;

 private:
  enum class Kind { Teacher, NoiseTeacher, Exact, Linear, Table };
  Kind kind_ = Kind::Teacher;
  Vecd target_;
  std::vector<double> breakpoints_;
  std::vector<Matd> a_;
  std::vector<Vecd> b_;
  Vecd bias_;
};

// w(t): constant, or a step function over sorted knots (value of the last
// knot at or below t; first value below the first knot).
class WeightFn {
 public:
  static WeightFn constant(double value = 1.0);
  static WeightFn table(std::vector<std::pair<double, double>> knots);

  double operator()(double t) const;

 private:
  double constant_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

// Uniform time distribution on [lo, hi] in flow units; lo == hi pins t.
struct TimeDist {
  double lo = 0.0;
  double hi = 1.0;
};

// m discrete-timestep intervals in [0, 1000), ascending, lo < hi each.
// Discrete timesteps map to flow time t / 1000.
struct IntervalSchedule {
  std::vector<std::pair<double, double>> intervals;
  WeightFn weight = WeightFn::constant();

  int m() const { return static_cast<int>(intervals.size()); }
  void validate() const;  // throws std::invalid_argument on a bad schedule
};

// The published coarse-to-fine default: three intervals climbing from
// geometry-heavy small timesteps to semantics-heavy large ones.
IntervalSchedule coarse_to_fine_schedule();

// sqrt(abar) x + sqrt(1 - abar) eps.
Vecd ddpm_forward(const Vecd& x, double alpha_bar, const Vecd& eps);
// Same, with abar looked up from a discrete schedule.
Vecd ddpm_forward(const Vecd& x, int t, const Vecd& eps,
                  const std::vector<double>& alpha_bar_schedule);

// (1 - t) x0 + t eps; exact at both endpoints.
Vecd flow_interpolate(const Vecd& x0, const Vecd& eps, double t);

// Frozen draw trace: each term contributes w/2 * |J theta - target|^2 to
// the induced scalar objective, whose gradient at the captured theta is
// exactly the estimator output. Used by the finite-difference checks.
struct FrozenDraws {
  struct Term {
    double weight = 1.0;
    Vecd target;
  };
  std::vector<Term> terms;
  int samples = 0;
};

double frozen_objective(const FrozenDraws& draws, const RenderMap& render,
                        int camera, const Vecd& theta);

// Central finite differences of an arbitrary scalar function of theta.
Vecd fd_gradient(const std::function<double(const Vecd&)>& objective,
                 const Vecd& theta, double h = 1e-4);

// Monte-Carlo E[w(t) |v(x_t; t) - (eps - x0)|^2] with seeded (eps, t) draws.
double cfm_loss(const VelocityOracle& oracle, const Vecd& x0, int samples,
                std::uint64_t seed, const WeightFn& weight = WeightFn::constant(),
                const TimeDist& t_dist = {});

// E[w(t) (eps_hat(x_t; t) - eps)^T J]: the noise-convention distillation
// gradient over theta.
Vecd sds_grad(const VelocityOracle& noise_oracle, const RenderParam& rp,
              int camera, const TimeDist& t_dist, int samples,
              std::uint64_t seed, const WeightFn& weight = WeightFn::constant(),
              FrozenDraws* capture = nullptr);

// E[w(t) (v(x_t; t) - (eps - x0))^T J]: the flow-convention distillation
// gradient over theta.
Vecd fds_grad(const VelocityOracle& oracle, const RenderParam& rp, int camera,
              const TimeDist& t_dist, int samples, std::uint64_t seed,
              const WeightFn& weight = WeightFn::constant(),
              FrozenDraws* capture = nullptr);

// Interval version: one eps per draw shared by all m terms, x re-noised at
// each interval's sampled time, residuals summed. With m = 1 over the full
// range this reproduces fds_grad bit for bit under the same seed.
Vecd itfs_grad(const VelocityOracle& oracle, const RenderParam& rp, int camera,
               const IntervalSchedule& schedule, int samples,
               std::uint64_t seed, FrozenDraws* capture = nullptr);

struct DescendResult {
  RenderParam rp;
  std::vector<double> trace;  // tracked metric per step, starting at step 0
  bool diverged = false;      // the metric grew over the run
};

// Plain gradient descent theta -= lr * grad_fn(rp). The trace records
// |theta - *reference| when a reference is given, else the gradient norm.
DescendResult descend(const RenderParam& rp,
                      const std::function<Vecd(const RenderParam&)>& grad_fn,
                      int steps, double lr, const Vecd* reference = nullptr);

}  // namespace roomforge
