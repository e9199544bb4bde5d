/*
  Copyright 2026 The Cortex Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/
#pragma once

// Cart with two independently hinged poles on a bounded track.
//
// Angles are measured from vertical and are positive when the pole leans
// towards +x; a positive force pushes the cart towards +x. Each pole is a
// uniform rod, l_i denotes its half-length. Integration uses classical RK4
// with the force held constant over a step, and the controller acts once
// per step.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cortex/genotype.hpp"
#include "cortex/network.hpp"
#include "cortex/task.hpp"

namespace cortex {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct DpbParams {
  double track_half_length = 2.4;  // m
  double force_max = 10.0;         // N
  double dt = 0.01;                // s
  double mu_cart = 0.0005;
  double mu_pole = 0.000002;
  double cart_mass = 1.0;                        // kg
  std::array<double, 2> pole_mass{0.1, 0.01};    // kg
  std::array<double, 2> pole_length{1.0, 0.1};   // m, full length
  double gravity = 9.8;                          // m/s^2
  double failure_angle = deg_to_rad(36.0);       // rad

  // Input scaling divisors.
  double velocity_scale = 2.0;          // m/s
  double angular_velocity_scale = 2.0;  // rad/s

  bool valid() const {
    const bool positive = track_half_length > 0 && force_max > 0 && dt > 0 && cart_mass > 0 && gravity > 0 &&
                          failure_angle > 0 && pole_mass[0] > 0 && pole_mass[1] > 0 && pole_length[0] > 0 &&
                          pole_length[1] > 0 && velocity_scale > 0 && angular_velocity_scale > 0;
    return positive && mu_cart >= 0 && mu_pole >= 0;
  }

  DpbParams frictionless() const {
    DpbParams p = *this;
    p.mu_cart = 0.0;
    p.mu_pole = 0.0;
    return p;
  }
};

// Also used for the time derivative, component by component.
struct CartPoleState {
  double x = 0.0;
  double x_dot = 0.0;
  std::array<double, 2> theta{0.0, 0.0};
  std::array<double, 2> theta_dot{0.0, 0.0};

  friend bool operator==(const CartPoleState&, const CartPoleState&) = default;
};

inline bool alive(const CartPoleState& s, const DpbParams& p) {
  return std::abs(s.x) <= p.track_half_length && std::abs(s.theta[0]) <= p.failure_angle &&
         std::abs(s.theta[1]) <= p.failure_angle;
}

/// Time derivative of the state under a constant force.
inline CartPoleState dpb_derivatives(const CartPoleState& s, double force, const DpbParams& p) {
  // With angles positive towards +x, gravity tips a leaning pole further over.
  const double g = -p.gravity;
  double effective_force = 0.0;
  double effective_mass = 0.0;
  std::array<double, 2> friction{};
  std::array<double, 2> half{};
  for (int i = 0; i < 2; ++i) {
    const double m = p.pole_mass[i];
    const double l = p.pole_length[i] / 2.0;
    const double sin_t = std::sin(s.theta[i]);
    const double cos_t = std::cos(s.theta[i]);
    half[i] = l;
    friction[i] = p.mu_pole * s.theta_dot[i] / (m * l);
    effective_force += m * l * s.theta_dot[i] * s.theta_dot[i] * sin_t + 0.75 * m * cos_t * (friction[i] + g * sin_t);
    effective_mass += m * (1.0 - 0.75 * cos_t * cos_t);
  }
  const double sgn = (s.x_dot > 0.0) - (s.x_dot < 0.0);
  CartPoleState d;
  d.x = s.x_dot;
  d.x_dot = (force - p.mu_cart * sgn + effective_force) / (p.cart_mass + effective_mass);
  for (int i = 0; i < 2; ++i) {
    d.theta[i] = s.theta_dot[i];
    d.theta_dot[i] =
        -0.75 / half[i] * (d.x_dot * std::cos(s.theta[i]) + g * std::sin(s.theta[i]) + friction[i]);
  }
  return d;
}

namespace detail {

inline CartPoleState axpy(const CartPoleState& s, double h, const CartPoleState& d) {
  CartPoleState r;
  r.x = s.x + h * d.x;
  r.x_dot = s.x_dot + h * d.x_dot;
  for (int i = 0; i < 2; ++i) {
    r.theta[i] = s.theta[i] + h * d.theta[i];
    r.theta_dot[i] = s.theta_dot[i] + h * d.theta_dot[i];
  }
  return r;
}

}  // namespace detail

inline CartPoleState rk4_step(const CartPoleState& s, double force, const DpbParams& p, double dt) {
  const CartPoleState k1 = dpb_derivatives(s, force, p);
  const CartPoleState k2 = dpb_derivatives(detail::axpy(s, dt / 2.0, k1), force, p);
  const CartPoleState k3 = dpb_derivatives(detail::axpy(s, dt / 2.0, k2), force, p);
  const CartPoleState k4 = dpb_derivatives(detail::axpy(s, dt, k3), force, p);
  CartPoleState r;
  const double w = dt / 6.0;
  r.x = s.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  r.x_dot = s.x_dot + w * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
  for (int i = 0; i < 2; ++i) {
    r.theta[i] = s.theta[i] + w * (k1.theta[i] + 2.0 * k2.theta[i] + 2.0 * k3.theta[i] + k4.theta[i]);
    r.theta_dot[i] =
        s.theta_dot[i] + w * (k1.theta_dot[i] + 2.0 * k2.theta_dot[i] + 2.0 * k3.theta_dot[i] + k4.theta_dot[i]);
  }
  return r;
}

inline CartPoleState rk4_step(const CartPoleState& s, double force, const DpbParams& p) {
  return rk4_step(s, force, p, p.dt);
}

/// Kinetic plus potential energy (potential measured from the hinge).
inline double mechanical_energy(const CartPoleState& s, const DpbParams& p) {
  double e = 0.5 * p.cart_mass * s.x_dot * s.x_dot;
  for (int i = 0; i < 2; ++i) {
    const double m = p.pole_mass[i];
    const double l = p.pole_length[i] / 2.0;
    const double w = s.theta_dot[i];
    const double vx = s.x_dot + l * w * std::cos(s.theta[i]);
    const double vy = -l * w * std::sin(s.theta[i]);
    e += 0.5 * m * (vx * vx + vy * vy) + 0.5 * (m * l * l / 3.0) * w * w;
    e += m * p.gravity * l * std::cos(s.theta[i]);
  }
  return e;
}

inline constexpr std::size_t kDpbInputs = 6;
inline constexpr NeuronCounts kDpbCounts{1, kDpbInputs, 1, 0};

inline std::array<double, kDpbInputs> scaled_inputs(const CartPoleState& s, const DpbParams& p) {
  return {s.x / p.track_half_length,       s.x_dot / p.velocity_scale,
          s.theta[0] / p.failure_angle,    s.theta_dot[0] / p.angular_velocity_scale,
          s.theta[1] / p.failure_angle,    s.theta_dot[1] / p.angular_velocity_scale};
}

struct EpisodeResult {
  std::size_t steps_survived = 0;
  double fitness = 0.0;
};

inline void require_dpb_arity(const NeuronCounts& c) {
  if (c.bias != 1 || c.input != kDpbInputs || c.output != 1) {
    throw std::invalid_argument("double pole balancing needs 1 bias, 6 inputs and 1 output");
  }
}

inline EpisodeResult dpb_episode(const CompiledNetwork& net, const CartPoleState& initial, std::size_t max_steps,
                                 const DpbParams& p) {
  require_dpb_arity(net.counts());
  ActivationState state = net.make_state();
  CartPoleState s = initial;
  std::size_t steps = 0;
  double out = 0.0;
  if (alive(s, p)) {
    while (steps < max_steps) {
      const auto in = scaled_inputs(s, p);
      net.step(state, in, std::span<double>(&out, 1));
      s = rk4_step(s, p.force_max * out, p);
      if (!alive(s, p)) break;
      ++steps;
    }
  }
  return {steps, max_steps == 0 ? 0.0 : static_cast<double>(steps) / static_cast<double>(max_steps)};
}

inline EpisodeResult dpb_episode(const Genotype& g, const CartPoleState& initial, std::size_t max_steps,
                                 const DpbParams& p) {
  require_dpb_arity(g.counts());
  return dpb_episode(CompiledNetwork(g), initial, max_steps, p);
}

inline CartPoleState initial_state(double x0, double theta0_deg) {
  CartPoleState s;
  s.x = x0;
  s.theta[0] = deg_to_rad(theta0_deg);
  return s;
}

/// Pushes with full force under the lean from rest. Recoverable iff the long
/// pole passes vertical before the cart leaves the track.
inline bool recoverable(double x0, double theta0_deg, const DpbParams& p) {
  CartPoleState s = initial_state(x0, theta0_deg);
  const double force = theta0_deg >= 0.0 ? p.force_max : -p.force_max;
  const double sign = theta0_deg >= 0.0 ? 1.0 : -1.0;
  // The cart accelerates monotonically, so it leaves the track in a few
  // hundred steps; the cap only guards degenerate parameters.
  for (std::size_t step = 0; step < 1000000; ++step) {
    s = rk4_step(s, force, p);
    const bool on_track = std::abs(s.x) <= p.track_half_length;
    if (on_track && sign * s.theta[0] <= 0.0) return true;
    if (!on_track) return false;
  }
  return false;
}

struct RecoverabilityRow {
  double x0_m = 0.0;
  double max_recoverable_deg = 0.0;  // 0 when no tested angle is recoverable
};

inline std::vector<RecoverabilityRow> recoverability_scan(const DpbParams& p) {
  std::vector<RecoverabilityRow> rows;
  for (int k = 0; k <= 20; ++k) {
    const double x0 = 0.12 * k;
    RecoverabilityRow row{x0, 0.0};
    for (int deg = 1; deg <= 36; ++deg) {
      if (recoverable(x0, deg, p)) row.max_recoverable_deg = deg;
    }
    rows.push_back(row);
  }
  return rows;
}

struct GridCondition {
  double x0_m = 0.0;
  double theta0_deg = 0.0;
};

// 9 cart positions x 11 long-pole angles.
inline std::vector<GridCondition> generalization_grid() {
  std::vector<GridCondition> grid;
  for (int i = 0; i <= 8; ++i) {
    for (int j = 0; j <= 10; ++j) grid.push_back({-1.2 + 0.3 * i, -15.0 + 3.0 * j});
  }
  return grid;
}

struct ConditionResult {
  GridCondition condition;
  std::size_t steps_survived = 0;
  bool passed = false;
};

struct GeneralizationReport {
  bool passed = false;
  std::vector<ConditionResult> results;
};

/// Runs every grid condition for `steps` steps. Stops early at the first
/// failure unless `exhaustive` is set.
inline GeneralizationReport generalization_test(const Genotype& g, const DpbParams& p, std::size_t steps,
                                                bool exhaustive = true) {
  require_dpb_arity(g.counts());
  const CompiledNetwork net(g);
  GeneralizationReport report;
  report.passed = true;
  for (const GridCondition& c : generalization_grid()) {
    const EpisodeResult r = dpb_episode(net, initial_state(c.x0_m, c.theta0_deg), steps, p);
    const bool ok = r.steps_survived >= steps;
    report.results.push_back({c, r.steps_survived, ok});
    if (!ok) {
      report.passed = false;
      if (!exhaustive) break;
    }
  }
  return report;
}

/// Fixed start: cart centred at rest, long pole at a given angle.
struct DpbFixedTask {
  DpbParams params;
  CartPoleState initial;
  std::size_t success_steps = 100000;

  NeuronCounts io_counts() const { return kDpbCounts; }

  Evaluation evaluate(const Genotype& g) const {
    const EpisodeResult r = dpb_episode(g, initial, success_steps, params);
    return {r.fitness, r.steps_survived >= success_steps};
  }
};

/// Trains on the generalization grid with a short horizon; a genotype that
/// survives every condition for that horizon is then checked on the full
/// horizon to decide whether it is a solution.
struct DpbGeneralizationTask {
  DpbParams params;
  std::size_t training_steps = 1000;
  std::size_t test_steps = 20000;

  NeuronCounts io_counts() const { return kDpbCounts; }

  Evaluation evaluate(const Genotype& g) const {
    require_dpb_arity(g.counts());
    const CompiledNetwork net(g);
    const auto grid = generalization_grid();
    double total = 0.0;
    for (const GridCondition& c : grid) {
      total += dpb_episode(net, initial_state(c.x0_m, c.theta0_deg), training_steps, params).fitness;
    }
    const double fitness = total / static_cast<double>(grid.size());
    bool solved = false;
    if (fitness >= 1.0) solved = generalization_test(g, params, test_steps, false).passed;
    return {fitness, solved};
  }
};

}  // namespace cortex
