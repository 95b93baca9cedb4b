#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "intertwine/generators.hpp"
#include "intertwine/kernels.hpp"

namespace intertwine {

/// Counter-based generator: output i of stream (seed, stream) depends only on
/// those three numbers, so trajectory k is reproducible on any worker.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double exponential(double rate);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct JointState {
  long x = 0;
  long y = 0;
  friend bool operator==(const JointState&, const JointState&) = default;
};

/// Discrete-time skeleton of an intertwined pair: K = I + L^X/theta and
/// Khat = I + L^Y/theta, with Khat link = link K certified exactly.
class UniformizedPair {
 public:
  const RatMatrix& K() const { return K_; }
  const RatMatrix& Khat() const { return Khat_; }
  const FiniteKernel& link() const { return link_; }
  const Rational& theta() const { return theta_; }
  long x_offset() const { return link_.col_offset(); }
  long y_offset() const { return link_.row_offset(); }

  /// Exact law of y' given (y, x'), indexed from y_offset(); empty when
  /// (Khat link)(y, x') = 0, i.e. x' cannot follow any x in the support of y.
  const std::vector<Rational>& y_transition(long y, long x_next) const;

  /// One Diaconis-Fill move: x' ~ K(x, .), then y' ~ Khat(y, y') link(y', x') / (Khat link)(y, x').
  JointState step(JointState s, CounterRng& rng) const;
  /// x ~ link(y, .).
  long sample_link(long y, CounterRng& rng) const;
  double clock_rate() const { return theta_value_; }

 private:
  friend UniformizedPair build_coupling(const FiniteGenerator&, const FiniteKernel&, const FiniteGenerator&,
                                        std::optional<Rational>);
  explicit UniformizedPair(FiniteKernel link) : link_(std::move(link)) {}

  RatMatrix K_;
  RatMatrix Khat_;
  FiniteKernel link_;
  Rational theta_;
  double theta_value_ = 0;
  std::vector<std::vector<double>> x_cdf_;     // per x
  std::vector<std::vector<Rational>> y_law_;   // per (y, x')
  std::vector<std::vector<double>> y_cdf_;     // per (y, x')
  std::vector<std::vector<double>> link_cdf_;  // per y
};

/// Requires LY link = link LX exactly and theta >= both maximal exit rates.
/// Without theta, the smallest valid value is used (1 if both chains are frozen).
UniformizedPair build_coupling(const FiniteGenerator& LY, const FiniteKernel& link, const FiniteGenerator& LX,
                               std::optional<Rational> theta = std::nullopt);

struct TrajectoryEvent {
  double time = 0;
  JointState state;
};

/// Piecewise-constant path; only the initial state and actual changes are recorded.
struct Trajectory {
  std::vector<TrajectoryEvent> events;
  double horizon = 0;

  /// State in force at time t (t in [0, horizon]).
  JointState at(double t) const;
};

/// y0 ~ m0 (indexed from y_offset()), x0 ~ link(y0, .), then Poisson(theta)
/// clock events up to the horizon. Throws std::logic_error if X ever leaves
/// the support of link(Y, .).
Trajectory simulate(const UniformizedPair& pair, std::span<const Rational> m0, double horizon, CounterRng& rng);

/// First time Y sits in `absorbing`, if reached before the horizon.
std::optional<double> absorption_time(const Trajectory& traj, long absorbing = 0);

/// Worker count from WORKER_COUNT, else the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on `workers` threads (static striping).
/// The first exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

/// Trajectory i uses CounterRng(seed, i); the result does not depend on `workers`.
std::vector<Trajectory> simulate_batch(const UniformizedPair& pair, std::span<const Rational> m0, double horizon,
                                       std::size_t samples, std::uint64_t seed, std::size_t workers);

/// P[E(1) + ... + E(N) > t] = 1 - (1 - e^-t)^N. Throws for t < 0 or N < 0.
double hypo_survival(long N, double t);
/// One draw of E(1) + ... + E(N).
double hypo_sample(long N, CounterRng& rng);

}  // namespace intertwine
