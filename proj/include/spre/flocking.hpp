#pragma once

// Deterministic 2-D agent-based flocking model on a periodic domain, with
// three discretisation parameters: time step x1, repulsion softening x2 and
// cutoff width x3.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace spre {

using Vec2 = std::array<double, 2>;

/// How the short-range repulsion term is evaluated.
enum class RepulsionMode {
  /// max(0, -(R_r - r)/(r + x2)) along +d_hat, exactly as printed. This is
  /// zero for r < R_r and an extra attraction for r > R_r.
  kPrinted,
  /// max(0, (R_r - r)/(r + x2)) along -d_hat: pushes agents apart inside R_r.
  kRepulsive,
};

struct FlockParams {
  int n_agents = 60;
  double domain = 10.0;
  double repulsion_radius = 0.5;
  double interaction_radius = 2.0;
  double x1 = 0.01;  // time step
  double x2 = 0.0;   // repulsion softening
  double x3 = 0.0;   // cutoff width
  std::uint64_t seed = 0;
  double t_final = 5.0;
  int tracked_agent = 0;
  RepulsionMode repulsion = RepulsionMode::kPrinted;

  void validate() const;
};

struct FlockState {
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
  double t = 0.0;
};

/// Minimum-image displacement u_j - u_i on the torus.
Vec2 periodic_displacement(const FlockParams& p, const Vec2& ui, const Vec2& uj);

/// Force of agent j on agent i (before the cutoff weight). Throws
/// kCoincidentAgents when the agents coincide.
Vec2 pair_force(const FlockParams& p, const Vec2& ui, const Vec2& uj);

/// Smooth interaction cutoff w(r).
double cutoff(const FlockParams& p, double r);

/// Uniform positions on the domain in agent order (x then y), zero velocity.
FlockState initial_state(const FlockParams& p);

/// One semi-implicit Euler step: velocities first, then positions with the
/// new velocities, then wrapping.
FlockState step(const FlockParams& p, const FlockState& state);

using TrajectoryObserver = std::function<void(const FlockState&)>;

/// Distance from the origin of the tracked agent at t_final, linearly
/// interpolated between the bracketing steps.
double simulate_qoi(const FlockParams& p, const TrajectoryObserver& observer = {});

}  // namespace spre
