#include "spre/flocking.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spre/error.hpp"
#include "spre/rng.hpp"

namespace spre {

void FlockParams::validate() const {
  if (n_agents < 1) fail(ErrorCode::kInvalidArgument, "flock needs at least one agent");
  if (!(domain > 0.0)) fail(ErrorCode::kInvalidArgument, "flock domain size must be positive");
  if (!(x1 > 0.0)) fail(ErrorCode::kInvalidArgument, "time step x1 must be positive");
  if (!(x2 >= 0.0)) fail(ErrorCode::kInvalidArgument, "repulsion softening x2 must be >= 0");
  if (!(x3 >= 0.0)) fail(ErrorCode::kInvalidArgument, "cutoff width x3 must be >= 0");
  if (!(t_final > 0.0)) fail(ErrorCode::kInvalidArgument, "t_final must be positive");
  if (tracked_agent < 0 || tracked_agent >= n_agents) {
    fail(ErrorCode::kInvalidArgument, "tracked agent index out of range");
  }
}

namespace {

double wrap(double u, double L) {
  u = std::fmod(u, L);
  if (u < 0.0) u += L;
  if (u >= L) u -= L;
  return u;
}

double min_image(double d, double L) {
  if (d > 0.5 * L) return d - L;
  if (d < -0.5 * L) return d + L;
  return d;
}

}  // namespace

Vec2 periodic_displacement(const FlockParams& p, const Vec2& ui, const Vec2& uj) {
  return {min_image(uj[0] - ui[0], p.domain), min_image(uj[1] - ui[1], p.domain)};
}

Vec2 pair_force(const FlockParams& p, const Vec2& ui, const Vec2& uj) {
  const Vec2 d = periodic_displacement(p, ui, uj);
  const double r = std::hypot(d[0], d[1]);
  if (r == 0.0) fail(ErrorCode::kCoincidentAgents, "pair force undefined for coincident agents");
  const double Rr = p.repulsion_radius;
  const double attraction = std::max(0.0, r - Rr);
  double magnitude = 0.0;
  if (p.repulsion == RepulsionMode::kPrinted) {
    magnitude = std::max(0.0, -(Rr - r) / (r + p.x2)) + attraction;
  } else {
    magnitude = attraction - std::max(0.0, (Rr - r) / (r + p.x2));
  }
  return {magnitude * d[0] / r, magnitude * d[1] / r};
}

double cutoff(const FlockParams& p, double r) {
  if (p.x3 == 0.0) return r < p.interaction_radius ? 1.0 : 0.0;
  return 0.5 * (1.0 - std::tanh((r - p.interaction_radius) / p.x3));
}

FlockState initial_state(const FlockParams& p) {
  p.validate();
  UniformStream stream(p.seed);
  FlockState s;
  s.positions.resize(static_cast<std::size_t>(p.n_agents));
  s.velocities.assign(static_cast<std::size_t>(p.n_agents), Vec2{0.0, 0.0});
  for (auto& u : s.positions) {
    u[0] = stream.next() * p.domain;
    u[1] = stream.next() * p.domain;
  }
  return s;
}

FlockState step(const FlockParams& p, const FlockState& state) {
  const std::size_t n = state.positions.size();
  FlockState next = state;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 F{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Vec2 d = periodic_displacement(p, state.positions[i], state.positions[j]);
      const double w = cutoff(p, std::hypot(d[0], d[1]));
      if (w == 0.0) continue;
      const Vec2 f = pair_force(p, state.positions[i], state.positions[j]);
      F[0] += w * f[0];
      F[1] += w * f[1];
    }
    next.velocities[i][0] = state.velocities[i][0] + p.x1 * F[0];
    next.velocities[i][1] = state.velocities[i][1] + p.x1 * F[1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    next.positions[i][0] = wrap(state.positions[i][0] + p.x1 * next.velocities[i][0], p.domain);
    next.positions[i][1] = wrap(state.positions[i][1] + p.x1 * next.velocities[i][1], p.domain);
  }
  next.t = state.t + p.x1;
  return next;
}

double simulate_qoi(const FlockParams& p, const TrajectoryObserver& observer) {
  FlockState s = initial_state(p);
  if (observer) observer(s);
  FlockState prev = s;
  long long k = 0;
  while (static_cast<double>(k) * p.x1 < p.t_final) {
    prev = s;
    s = step(p, s);
    ++k;
    s.t = static_cast<double>(k) * p.x1;
    if (observer) observer(s);
  }
  const auto a = static_cast<std::size_t>(p.tracked_agent);
  Vec2 u = s.positions[a];
  if (k > 0 && s.t != p.t_final) {
    // The last step moved the agent by x1 * v; take the matching fraction of it.
    const double t_prev = static_cast<double>(k - 1) * p.x1;
    const double frac = (p.t_final - t_prev) / p.x1;
    u[0] = wrap(prev.positions[a][0] + frac * p.x1 * s.velocities[a][0], p.domain);
    u[1] = wrap(prev.positions[a][1] + frac * p.x1 * s.velocities[a][1], p.domain);
  }
  return std::hypot(u[0], u[1]);
}

}  // namespace spre
