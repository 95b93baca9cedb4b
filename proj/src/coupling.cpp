#include "intertwine/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace intertwine {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Cumulative sums computed exactly, then rounded; the entry at the last
// positive weight is exactly 1.
std::vector<double> cumulative(std::span<const Rational> weights) {
  std::vector<double> cdf;
  cdf.reserve(weights.size());
  Rational running = 0;
  for (const auto& w : weights) {
    running += w;
    cdf.push_back(to_double(running));
  }
  return cdf;
}

std::size_t sample_index(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) throw std::logic_error("sampling table does not reach 1");
  return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next() { return mix64(key_ + (++counter_) * kGolden); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

UniformizedPair build_coupling(const FiniteGenerator& LY, const FiniteKernel& link, const FiniteGenerator& LX,
                               std::optional<Rational> theta) {
  if (link.row_offset() != LY.offset() || link.rows() != LY.size() || link.col_offset() != LX.offset() ||
      link.cols() != LX.size()) {
    throw std::invalid_argument("build_coupling: link does not match the generators' state spaces");
  }
  if (!verify_finite_intertwining(LY, link, LX).is_zero()) {
    throw std::invalid_argument("build_coupling: LY link != link LX");
  }
  const Rational needed = std::max(LY.max_exit_rate(), LX.max_exit_rate());
  if (!theta) theta = sgn(needed) > 0 ? needed : Rational(1);
  if (sgn(*theta) <= 0 || *theta < needed) {
    throw std::invalid_argument("build_coupling: theta " + to_string(*theta) + " is below the maximal exit rate " +
                                to_string(needed));
  }

  UniformizedPair pair(link);
  pair.theta_ = *theta;
  pair.theta_value_ = to_double(*theta);
  auto uniformize = [&](const RatMatrix& rates) {
    RatMatrix m = rates;
    m *= 1 / *theta;
    m += RatMatrix::identity(rates.rows());
    return m;
  };
  pair.K_ = uniformize(LX.rates());
  pair.Khat_ = uniformize(LY.rates());
  if (!(pair.Khat_ * link.entries() == link.entries() * pair.K_)) {
    throw std::logic_error("build_coupling: uniformized chains are not intertwined");
  }

  const std::size_t nx = LX.size();
  const std::size_t ny = LY.size();
  for (std::size_t x = 0; x < nx; ++x) pair.x_cdf_.push_back(cumulative(pair.K_.row(x)));
  for (std::size_t y = 0; y < ny; ++y) pair.link_cdf_.push_back(cumulative(link.entries().row(y)));

  const RatMatrix khat_link = pair.Khat_ * link.entries();
  pair.y_law_.assign(ny * nx, {});
  pair.y_cdf_.assign(ny * nx, {});
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t xn = 0; xn < nx; ++xn) {
      const Rational& denom = khat_link(y, xn);
      if (sgn(denom) == 0) continue;
      std::vector<Rational> law(ny);
      Rational total = 0;
      for (std::size_t yn = 0; yn < ny; ++yn) {
        law[yn] = pair.Khat_(y, yn) * link.entries()(yn, xn) / denom;
        total += law[yn];
      }
      if (total != 1) throw std::logic_error("build_coupling: conditional law of y' does not sum to 1");
      pair.y_cdf_[y * nx + xn] = cumulative(law);
      pair.y_law_[y * nx + xn] = std::move(law);
    }
  }
  return pair;
}

const std::vector<Rational>& UniformizedPair::y_transition(long y, long x_next) const {
  const long yi = y - y_offset();
  const long xi = x_next - x_offset();
  if (yi < 0 || yi >= static_cast<long>(link_.rows()) || xi < 0 || xi >= static_cast<long>(link_.cols())) {
    throw std::out_of_range("y_transition: state out of range");
  }
  return y_law_[static_cast<std::size_t>(yi) * link_.cols() + static_cast<std::size_t>(xi)];
}

JointState UniformizedPair::step(JointState s, CounterRng& rng) const {
  const auto xi = static_cast<std::size_t>(s.x - x_offset());
  const auto yi = static_cast<std::size_t>(s.y - y_offset());
  const std::size_t xn = sample_index(x_cdf_[xi], rng.uniform());
  const auto& cdf = y_cdf_[yi * link_.cols() + xn];
  if (cdf.empty()) throw std::logic_error("step: x' is unreachable from the current joint state");
  const std::size_t yn = sample_index(cdf, rng.uniform());
  return {x_offset() + static_cast<long>(xn), y_offset() + static_cast<long>(yn)};
}

long UniformizedPair::sample_link(long y, CounterRng& rng) const {
  return x_offset() + static_cast<long>(sample_index(link_cdf_[static_cast<std::size_t>(y - y_offset())], rng.uniform()));
}

JointState Trajectory::at(double t) const {
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double value, const TrajectoryEvent& e) { return value < e.time; });
  if (it == events.begin()) throw std::out_of_range("Trajectory::at: time before the start");
  return std::prev(it)->state;
}

Trajectory simulate(const UniformizedPair& pair, std::span<const Rational> m0, double horizon, CounterRng& rng) {
  if (m0.size() != pair.link().rows()) throw std::invalid_argument("simulate: m0 has the wrong length");
  if (!(horizon >= 0)) throw std::invalid_argument("simulate: negative horizon");
  Trajectory traj;
  traj.horizon = horizon;
  const long y0 = pair.y_offset() + static_cast<long>(sample_index(cumulative(m0), rng.uniform()));
  JointState s{pair.sample_link(y0, rng), y0};
  traj.events.push_back({0.0, s});
  double t = 0;
  while (true) {
    t += rng.exponential(pair.clock_rate());
    if (t > horizon) break;
    const JointState next = pair.step(s, rng);
    if (sgn(pair.link()(next.y, next.x)) <= 0) throw std::logic_error("simulate: X left the support of link(Y, .)");
    if (next != s) traj.events.push_back({t, next});
    s = next;
  }
  return traj;
}

std::optional<double> absorption_time(const Trajectory& traj, long absorbing) {
  for (const auto& e : traj.events) {
    if (e.state.y == absorbing) return e.time;
  }
  return std::nullopt;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("WORKER_COUNT")) {
    try {
      const long value = std::stol(env);
      if (value >= 1) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("WORKER_COUNT must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<Trajectory> simulate_batch(const UniformizedPair& pair, std::span<const Rational> m0, double horizon,
                                       std::size_t samples, std::uint64_t seed, std::size_t workers) {
  std::vector<Trajectory> out(samples);
  parallel_for(samples, workers, [&](std::size_t i) {
    CounterRng rng(seed, i);
    out[i] = simulate(pair, m0, horizon, rng);
  });
  return out;
}

double hypo_survival(long N, double t) {
  if (N < 0) throw std::invalid_argument("hypo_survival: N < 0");
  if (!(t >= 0)) throw std::invalid_argument("hypo_survival: t < 0");
  if (N == 0) return 0.0;
  // 1 - (1 - e^-t)^N without cancellation for large t.
  return -std::expm1(static_cast<double>(N) * std::log1p(-std::exp(-t)));
}

double hypo_sample(long N, CounterRng& rng) {
  if (N < 0) throw std::invalid_argument("hypo_sample: N < 0");
  double total = 0;
  for (long k = 1; k <= N; ++k) total += rng.exponential(static_cast<double>(k));
  return total;
}

}  // namespace intertwine
