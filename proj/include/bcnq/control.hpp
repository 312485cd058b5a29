#ifndef BCNQ_CONTROL_HPP
#define BCNQ_CONTROL_HPP

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "bcnq/algebra.hpp"
#include "bcnq/network.hpp"
#include "bcnq/partition.hpp"
#include "bcnq/quotient.hpp"

namespace bcnq {

// ---------------------------------------------------------------------------
// Set stabilization

/// Time-invariant state feedback x -> K x, K in L^{M x N}.
struct StateFeedback {
  LogicalMatrix k;
  /// Every closed-loop trajectory is inside the target from this step on.
  std::size_t settling_bound = 0;

  std::size_t input_for(std::size_t x) const { return k.index(x); }
};

/// States from which no input sequence reaches the largest control-invariant
/// subset of the target.
struct NotStabilizable {
  StateSet states;
};

using StabilizationOutcome = std::variant<StateFeedback, NotStabilizable>;

/// Partition {target, complement}. Throws std::invalid_argument for an empty
/// target or out-of-range members.
Partition target_partition(std::size_t n, const StateSet& target);

/// Largest subset I of `target` such that every state of I has an input
/// keeping it in I.
StateSet control_invariant_subset(const Bcn& bcn, const StateSet& target);

/// Layered synthesis: each state gets the distance (in steps) to the
/// control-invariant core of the target and picks the input leading to the
/// smallest distance, smallest input index on ties. Core states pick the
/// smallest input that stays in the core.
StabilizationOutcome stabilize(const Bcn& bcn, const StateSet& target);

/// x -> K C x on the original states.
StateFeedback lift_feedback(const StateFeedback& fb, const ClassMatrix& c);

std::vector<std::size_t> closed_loop(const Bcn& bcn, const StateFeedback& fb, std::size_t x0,
                                     std::size_t steps);

/// First t such that the closed loop from x0 stays in `target` on
/// [t, horizon]; std::nullopt if x(horizon) is outside.
std::optional<std::size_t> entry_time(const Bcn& bcn, const StateFeedback& fb,
                                      const StateSet& target, std::size_t x0,
                                      std::size_t horizon);

struct QuotientStabilization {
  QuotientSystem quotient;
  StateSet quotient_target;
  StabilizationOutcome quotient_outcome;
  /// Lifted feedback, or the preimage of the quotient's unstabilizable set.
  StabilizationOutcome lifted;
};

/// target partition -> refine -> quotient -> stabilize -> lift.
QuotientStabilization stabilize_via_quotient(const Bcn& bcn, const StateSet& target,
                                             ClassOrder order = ClassOrder::first_occurrence);

// ---------------------------------------------------------------------------
// Finite-horizon optimal control

/// J = sum_{t<T} l(u(t), x(t)) + g(x(T)).
struct CostSpec {
  /// M x N, l(u, x) at (u-1, x-1).
  RationalMatrix l;
  /// N entries.
  std::vector<Rational> g;
  /// Optional linear form: theta has M*N entries (theta_1 ... theta_M),
  /// mu has N entries.
  std::optional<std::vector<Rational>> theta;
  std::optional<std::vector<Rational>> mu;

  std::size_t n_states() const noexcept { return g.size(); }
  std::size_t n_inputs() const noexcept { return l.rows(); }

  const Rational& stage(std::size_t u, std::size_t x) const { return l(u - 1, x - 1); }
  const Rational& terminal(std::size_t x) const { return g[x - 1]; }

  /// Throws DimensionError on inconsistent shapes and IllDefinedCost when
  /// the linear form disagrees with the tables.
  void validate() const;
};

/// Groups states with identical (g(x), l(1,x), ..., l(M,x)).
Partition cost_partition(const CostSpec& cost);

/// Class-wise cost tables. The linear form (theta_i C^+, mu C^+) is always
/// computed and must reproduce the tables. Throws IllDefinedCost if some
/// class mixes different costs.
CostSpec project_cost(const CostSpec& cost, const ClassMatrix& c);

struct OptimalSolution {
  std::vector<std::size_t> inputs;
  Rational cost;
  /// (T+1) x N: values[t][x-1] = optimal cost-to-go from x at time t.
  std::vector<std::vector<Rational>> values;
  /// T x N: policy[t][x-1] = minimizing input, smallest index on ties.
  std::vector<std::vector<std::size_t>> policy;
};

OptimalSolution optimal_control(const Bcn& bcn, const CostSpec& cost, std::size_t x0,
                                std::size_t horizon);

Rational evaluate_cost(const Bcn& bcn, const CostSpec& cost, std::size_t x0,
                       const std::vector<std::size_t>& inputs);

struct QuotientOptimalControl {
  QuotientSystem quotient;
  CostSpec projected;
  std::size_t quotient_x0 = 0;
  OptimalSolution solution;
};

/// cost partition -> refine -> quotient -> project -> optimal control at C x0.
/// The returned inputs are re-evaluated on the original network; a cost
/// mismatch is a std::logic_error.
QuotientOptimalControl optimal_via_quotient(const Bcn& bcn, const CostSpec& cost,
                                            std::size_t x0, std::size_t horizon,
                                            ClassOrder order = ClassOrder::first_occurrence);

} // namespace bcnq

#endif
