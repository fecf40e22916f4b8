#include "roomforge/distill.hpp"

#include <algorithm>
#include <cmath>

#include "roomforge/rng.hpp"

namespace roomforge {

namespace {

// Below this flow time the exact field's 1/t blows up; clamping keeps the
// toy finite without changing any test regime.
constexpr double kTimeFloor = 1e-6;

void require_same_dim(const Vecd& a, const Vecd& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimMismatch(std::string(what) + ": dimension mismatch (" +
                      std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
}

Vecd draw_normal(Rng& rng, Eigen::Index dim) {
  Vecd out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out[i] = rng.normal();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// RenderMap

RenderMap RenderMap::identity(int dim) {
  RenderMap out;
  out.jacobians_.push_back(Matd::Identity(dim, dim));
  out.shared_ = true;
  return out;
}

RenderMap RenderMap::matrix(Matd m) {
  RenderMap out;
  out.jacobians_.push_back(std::move(m));
  out.shared_ = true;
  return out;
}

RenderMap RenderMap::camera_slices(std::vector<Matd> per_camera) {
  if (per_camera.empty()) {
    throw DimMismatch("camera_slices needs at least one camera matrix");
  }
  const Eigen::Index cols = per_camera.front().cols();
  for (const Matd& m : per_camera) {
    if (m.cols() != cols) {
      throw DimMismatch("camera matrices disagree on theta dimension");
    }
  }
  RenderMap out;
  out.jacobians_ = std::move(per_camera);
  out.shared_ = false;
  return out;
}

const Matd& RenderMap::jacobian(int camera) const {
  if (shared_) return jacobians_.front();
  return jacobians_.at(static_cast<std::size_t>(camera));
}

Vecd RenderMap::render(const Vecd& theta, int camera) const {
  const Matd& j = jacobian(camera);
  if (theta.size() != j.cols()) {
    throw DimMismatch("theta does not match the render map");
  }
  return j * theta;
}

int RenderMap::theta_dim() const {
  return static_cast<int>(jacobians_.front().cols());
}

int RenderMap::image_dim(int camera) const {
  return static_cast<int>(jacobian(camera).rows());
}

// ---------------------------------------------------------------------------
// VelocityOracle

VelocityOracle VelocityOracle::teacher() { return VelocityOracle{}; }

VelocityOracle VelocityOracle::noise_teacher() {
  VelocityOracle out;
  out.kind_ = Kind::NoiseTeacher;
  return out;
}

VelocityOracle VelocityOracle::exact(Vecd target) {
  VelocityOracle out;
  out.kind_ = Kind::Exact;
  out.target_ = std::move(target);
  return out;
}

VelocityOracle VelocityOracle::linear(Matd a, Vecd b) {
  if (a.rows() != b.size()) {
    throw DimMismatch("linear oracle: A rows must match b");
  }
  VelocityOracle out;
  out.kind_ = Kind::Linear;
  out.a_.push_back(std::move(a));
  out.b_.push_back(std::move(b));
  return out;
}

VelocityOracle VelocityOracle::zero(int dim) {
  return linear(Matd::Zero(dim, dim), Vecd::Zero(dim));
}

VelocityOracle VelocityOracle::table(std::vector<double> breakpoints,
                                     std::vector<Matd> a,
                                     std::vector<Vecd> b) {
  if (breakpoints.size() + 1 != a.size() || a.size() != b.size()) {
    throw DimMismatch("table oracle: need one more segment than breakpoints");
  }
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw DimMismatch("table oracle: breakpoints must be ascending");
  }
  VelocityOracle out;
  out.kind_ = Kind::Table;
  out.breakpoints_ = std::move(breakpoints);
  out.a_ = std::move(a);
  out.b_ = std::move(b);
  return out;
}

VelocityOracle VelocityOracle::biased(Vecd bias) const {
  VelocityOracle out = *this;
  out.bias_ = std::move(bias);
  return out;
}

Vecd VelocityOracle::evaluate(const Vecd& x, double t,
                              const DrawContext& ctx) const {
  Vecd v;
  switch (kind_) {
    case Kind::Teacher:
      require_same_dim(ctx.eps, ctx.x0, "teacher oracle");
      v = ctx.eps - ctx.x0;
      break;
    case Kind::NoiseTeacher:
      v = ctx.eps;
      break;
    case Kind::Exact: {
      require_same_dim(x, target_, "exact oracle");
      v = (x - target_) / std::max(t, kTimeFloor);
      break;
    }
    case Kind::Linear:
      if (a_.front().cols() != x.size()) {
        throw DimMismatch("linear oracle does not match x");
      }
      v = a_.front() * x + b_.front();
      break;
    case Kind::Table: {
      std::size_t seg = 0;
      while (seg < breakpoints_.size() && t >= breakpoints_[seg]) ++seg;
      if (a_[seg].cols() != x.size()) {
        throw DimMismatch("table oracle does not match x");
      }
      v = a_[seg] * x + b_[seg];
      break;
    }
  }
  if (bias_.size() > 0) {
    require_same_dim(v, bias_, "oracle bias");
    v += bias_;
  }
  return v;
}

// ---------------------------------------------------------------------------
// WeightFn / schedules

WeightFn WeightFn::constant(double value) {
  WeightFn out;
  out.constant_ = value;
  return out;
}

WeightFn WeightFn::table(std::vector<std::pair<double, double>> knots) {
  WeightFn out;
  out.knots_ = std::move(knots);
  std::sort(out.knots_.begin(), out.knots_.end());
  return out;
}

double WeightFn::operator()(double t) const {
  if (knots_.empty()) return constant_;
  double value = knots_.front().second;
  for (const auto& [knot, w] : knots_) {
    if (t < knot) break;
    value = w;
  }
  return value;
}

void IntervalSchedule::validate() const {
  if (intervals.empty()) {
    throw std::invalid_argument("schedule needs at least one interval");
  }
  double prev_lo = -1.0;
  for (const auto& [lo, hi] : intervals) {
    if (!(lo < hi)) {
      throw std::invalid_argument("interval bounds must satisfy lo < hi");
    }
    if (lo < 0.0 || hi > 1000.0) {
      throw std::invalid_argument("intervals live in discrete range [0, 1000)");
    }
    if (lo <= prev_lo) {
      throw std::invalid_argument("intervals must ascend by lo");
    }
    prev_lo = lo;
  }
}

IntervalSchedule coarse_to_fine_schedule() {
  IntervalSchedule schedule;
  schedule.intervals = {{200.0, 400.0}, {400.0, 600.0}, {600.0, 800.0}};
  return schedule;
}

// ---------------------------------------------------------------------------
// Forward processes

Vecd ddpm_forward(const Vecd& x, double alpha_bar, const Vecd& eps) {
  require_same_dim(x, eps, "ddpm_forward");
  return std::sqrt(alpha_bar) * x + std::sqrt(1.0 - alpha_bar) * eps;
}

Vecd ddpm_forward(const Vecd& x, int t, const Vecd& eps,
                  const std::vector<double>& alpha_bar_schedule) {
  return ddpm_forward(x, alpha_bar_schedule.at(static_cast<std::size_t>(t)),
                      eps);
}

Vecd flow_interpolate(const Vecd& x0, const Vecd& eps, double t) {
  require_same_dim(x0, eps, "flow_interpolate");
  return (1.0 - t) * x0 + t * eps;
}

// ---------------------------------------------------------------------------
// Estimators

double cfm_loss(const VelocityOracle& oracle, const Vecd& x0, int samples,
                std::uint64_t seed, const WeightFn& weight,
                const TimeDist& t_dist) {
  Rng rng(derive_seed(seed, 41));
  double total = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vecd eps = draw_normal(rng, x0.size());
    const double t = rng.uniform(t_dist.lo, t_dist.hi);
    const Vecd xt = flow_interpolate(x0, eps, t);
    const Vecd residual = oracle.evaluate(xt, t, {eps, x0}) - (eps - x0);
    total += weight(t) * residual.squaredNorm();
  }
  return total / samples;
}

Vecd sds_grad(const VelocityOracle& noise_oracle, const RenderParam& rp,
              int camera, const TimeDist& t_dist, int samples,
              std::uint64_t seed, const WeightFn& weight,
              FrozenDraws* capture) {
  Rng rng(derive_seed(seed, 42));
  const Vecd x0 = rp.render.render(rp.theta, camera);
  const Matd& j = rp.render.jacobian(camera);
  Vecd grad = Vecd::Zero(rp.theta.size());
  if (capture) *capture = {{}, samples};
  for (int s = 0; s < samples; ++s) {
    const Vecd eps = draw_normal(rng, x0.size());
    const double t = rng.uniform(t_dist.lo, t_dist.hi);
    const Vecd xt = flow_interpolate(x0, eps, t);
    const Vecd residual = noise_oracle.evaluate(xt, t, {eps, x0}) - eps;
    const double w = weight(t);
    grad += w * (j.transpose() * residual);
    if (capture) capture->terms.push_back({w, x0 - residual});
  }
  return grad / samples;
}

Vecd fds_grad(const VelocityOracle& oracle, const RenderParam& rp, int camera,
              const TimeDist& t_dist, int samples, std::uint64_t seed,
              const WeightFn& weight, FrozenDraws* capture) {
  Rng rng(derive_seed(seed, 43));
  const Vecd x0 = rp.render.render(rp.theta, camera);
  const Matd& j = rp.render.jacobian(camera);
  Vecd grad = Vecd::Zero(rp.theta.size());
  if (capture) *capture = {{}, samples};
  for (int s = 0; s < samples; ++s) {
    const Vecd eps = draw_normal(rng, x0.size());
    const double t = rng.uniform(t_dist.lo, t_dist.hi);
    const Vecd xt = flow_interpolate(x0, eps, t);
    const Vecd residual = oracle.evaluate(xt, t, {eps, x0}) - (eps - x0);
    const double w = weight(t);
    grad += w * (j.transpose() * residual);
    if (capture) capture->terms.push_back({w, x0 - residual});
  }
  return grad / samples;
}

Vecd itfs_grad(const VelocityOracle& oracle, const RenderParam& rp, int camera,
               const IntervalSchedule& schedule, int samples,
               std::uint64_t seed, FrozenDraws* capture) {
  schedule.validate();
  // Shares the fds stream so the m = 1 full-range schedule reduces to
  // fds_grad exactly, draw for draw.
  Rng rng(derive_seed(seed, 43));
  const Vecd x0 = rp.render.render(rp.theta, camera);
  const Matd& j = rp.render.jacobian(camera);
  Vecd grad = Vecd::Zero(rp.theta.size());
  if (capture) *capture = {{}, samples};
  for (int s = 0; s < samples; ++s) {
    const Vecd eps = draw_normal(rng, x0.size());
    for (const auto& [lo, hi] : schedule.intervals) {
      const double t = rng.uniform(lo / 1000.0, hi / 1000.0);
      const Vecd xt = flow_interpolate(x0, eps, t);
      const Vecd residual = oracle.evaluate(xt, t, {eps, x0}) - (eps - x0);
      const double w = schedule.weight(t);
      grad += w * (j.transpose() * residual);
      if (capture) capture->terms.push_back({w, x0 - residual});
    }
  }
  return grad / samples;
}

// ---------------------------------------------------------------------------
// Frozen-draw objective and finite differences

double frozen_objective(const FrozenDraws& draws, const RenderMap& render,
                        int camera, const Vecd& theta) {
  const Vecd x0 = render.render(theta, camera);
  double total = 0.0;
  for (const FrozenDraws::Term& term : draws.terms) {
    total += term.weight * 0.5 * (x0 - term.target).squaredNorm();
  }
  return total / std::max(1, draws.samples);
}

Vecd fd_gradient(const std::function<double(const Vecd&)>& objective,
                 const Vecd& theta, double h) {
  Vecd grad(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Vecd lo = theta, hi = theta;
    lo[i] -= h;
    hi[i] += h;
    grad[i] = (objective(hi) - objective(lo)) / (2.0 * h);
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Descent

DescendResult descend(const RenderParam& rp,
                      const std::function<Vecd(const RenderParam&)>& grad_fn,
                      int steps, double lr, const Vecd* reference) {
  DescendResult result{rp, {}, false};
  const auto metric = [&]() {
    if (reference) return (result.rp.theta - *reference).norm();
    return grad_fn(result.rp).norm();
  };
  result.trace.push_back(metric());
  for (int k = 0; k < steps; ++k) {
    result.rp.theta -= lr * grad_fn(result.rp);
    result.trace.push_back(metric());
  }
  result.diverged = result.trace.back() > result.trace.front() * (1.0 + 1e-9) &&
                    result.trace.front() > 0.0;
  return result;
}

}  // namespace roomforge
