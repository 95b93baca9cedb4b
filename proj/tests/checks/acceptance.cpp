#include "acceptance.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "intertwine/convergence.hpp"
#include "intertwine/coupling.hpp"
#include "intertwine/diagnostics.hpp"
#include "intertwine/feasibility.hpp"
#include "intertwine/generators.hpp"
#include "intertwine/kernels.hpp"
#include "intertwine/stats.hpp"
#include "oracles.hpp"

namespace intertwine::checks {

namespace {

using Clock = std::chrono::steady_clock;

CriterionResult timed(int id, double limit, const std::function<bool(std::string&)>& body) {
  CriterionResult r;
  r.id = id;
  r.limit = limit;
  const auto start = Clock::now();
  try {
    r.pass = body(r.detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit > 0 && r.seconds > limit) {
    r.pass = false;
    r.detail += " (over the time limit)";
  }
  return r;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::vector<Rational> random_nontrivial(std::mt19937_64& rng, long N) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<long> num(-20, 20);
  std::uniform_int_distribution<long> den(1, 20);
  std::vector<Rational> a(static_cast<std::size_t>(N) + 1, Rational(0));
  a[0] = 1;
  bool any = false;
  while (!any) {
    for (long n = 1; n <= N; ++n) {
      const long p = num(rng);
      a[static_cast<std::size_t>(n)] = coin(rng) == 0 || p == 0 ? Rational(0) : Rational(p, den(rng));
      a[static_cast<std::size_t>(n)].canonicalize();
      any = any || sgn(a[static_cast<std::size_t>(n)]) != 0;
    }
  }
  return a;
}

}  // namespace

CriterionResult criterion1_spectra() {
  return timed(1, 5.0, [](std::string& detail) {
    std::size_t checked = 0;
    for (long N = 0; N <= 10; ++N) {
      const FiniteGenerator L = ehrenfest(N);
      const FiniteGenerator D = yule(N);
      const FiniteGenerator Dr = reverse_yule(N);
      for (long n = 0; n <= N; ++n) {
        const ValueVector reverse = n == 0 ? ones(-N, static_cast<std::size_t>(N) + 1) : phi_tilde(n, N);
        if (!check_eigen(L, krawtchouk(N, n), Rational(n)).is_zero() ||
            !check_eigen(D, phi(n, N + 1), Rational(n)).is_zero() ||
            !check_eigen(Dr, reverse, Rational(n)).is_zero()) {
          detail = "nonzero residual at N=" + std::to_string(N) + " n=" + std::to_string(n);
          return false;
        }
        checked += 3;
      }
    }
    const auto h = hermite_table(10);
    for (unsigned n = 0; n <= 10; ++n) {
      if (!(ou_apply(h[n]) + h[n] * Rational(n)).is_zero()) {
        detail = "OU residual at n=" + std::to_string(n);
        return false;
      }
      ++checked;
    }
    detail = std::to_string(checked) + " eigenpairs, all residuals exactly zero";
    return true;
  });
}

CriterionResult criterion2_intertwinings() {
  return timed(2, 10.0, [](std::string& detail) {
    std::size_t checked = 0;
    for (long N = 0; N <= 10; ++N) {
      const FiniteGenerator LN = ehrenfest(N);
      for (long M = 0; M <= N; ++M) {
        if (!verify_finite_intertwining(ehrenfest(M), lambda_chain(M, N), LN).is_zero() ||
            !verify_finite_intertwining(yule(M), lambda_hat_chain(M, N), LN).is_zero()) {
          detail = "nonzero residual at M=" + std::to_string(M) + " N=" + std::to_string(N);
          return false;
        }
        checked += 2;
      }
    }
    for (long N = 0; N <= 8; ++N) {
      const FiniteKernel step = lambda_step(N);
      for (long n = 0; n <= N + 1; ++n) {
        const ValueVector image = step.apply(krawtchouk(N + 1, n));
        const ValueVector expected =
            n <= N ? krawtchouk(N, n) : ValueVector{0, std::vector<Rational>(static_cast<std::size_t>(N) + 1, Rational(0))};
        if (!(image == expected)) {
          detail = "Lambda_N[K_{N+1,n}] != K_{N,n} at N=" + std::to_string(N) + " n=" + std::to_string(n);
          return false;
        }
        ++checked;
      }
      const FiniteKernel hat = lambda_hat(N);
      for (long n = 0; n <= N; ++n) {
        ValueVector expected = phi(n, N + 1);
        const Rational scale = Rational(factorial(static_cast<unsigned long>(n))) * pow2(-n);
        for (auto& v : expected.values) v *= scale;
        if (!(hat.apply(krawtchouk(N, n)) == expected)) {
          detail = "hat Lambda_N[K_{N,n}] != 2^-n n! phi_n at N=" + std::to_string(N) + " n=" + std::to_string(n);
          return false;
        }
        ++checked;
      }
    }
    detail = std::to_string(checked) + " identities, all residuals exactly zero";
    return true;
  });
}

CriterionResult criterion3_max_a2() {
  return timed(3, 1.0, [](std::string& detail) {
    const Rational two = max_a2(2);
    const Rational three = max_a2(3);
    detail = "max_a2(2) = " + to_string(two) + ", max_a2(3) = " + to_string(three);
    return two == Rational(2) && three == Rational(2, 3);
  });
}

CriterionResult criterion4_triviality() {
  return timed(4, 0, [](std::string& detail) {
    for (long N = 0; N <= 4; ++N) {
      for (long M = 0; M <= 4; ++M) {
        const KernelPolytope p = kernel_polytope(ehrenfest(N), yule(M));
        bool delta_rows = p.feasible && p.feasible_point.has_value();
        if (delta_rows) {
          const RatMatrix& k = *p.feasible_point;
          for (std::size_t i = 0; i < k.rows(); ++i) delta_rows = delta_rows && k(i, 0) == 1;
        }
        if (!delta_rows || !p.unique || p.nontrivial) {
          detail = "polytope (L_" + std::to_string(N) + ", D_" + std::to_string(M) + ") is not {delta_0 rows}";
          return false;
        }
      }
    }
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<long> size(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
      const long N = size(rng);
      const auto a = random_nontrivial(rng, N);
      const RowWitness w = ehrenfest_ou_witness(N, a);
      if (sgn(ehrenfest_ou_kernel(N, a).density(w.y)(w.x0)) >= 0) {
        detail = "unsound Ehrenfest-OU witness on trial " + std::to_string(trial);
        return false;
      }
    }
    for (int trial = 0; trial < 200; ++trial) {
      const long N = size(rng);
      const auto a = random_nontrivial(rng, N);
      const RowWitness w = reverse_witness(N, a);
      if (sgn(lambda_tilde_a(N, a).density(w.y)(w.x0)) >= 0) {
        detail = "unsound reverse witness on trial " + std::to_string(trial);
        return false;
      }
    }
    detail = "25 polytopes with delta_0 rows only; 200 + 200 exact negativity witnesses";
    return true;
  });
}

CriterionResult criterion5_signed_link() {
  return timed(5, 0, [](std::string& detail) {
    const HermiteDensityKernel K = HermiteDensityKernel::from_densities(0, {Poly{1}, Poly{0, 0, 1}});
    const OuIntertwiningReport report = verify_ou_intertwining(yule(1), K, 4);
    for (const auto& m : report.modes) {
      if (!m.residual.is_zero()) {
        detail = "residual on h_" + std::to_string(m.n) + " at y=1 is " + to_string(m.residual.at_state(1));
        return !report.passed();
      }
    }
    detail = "all residuals vanished";
    return false;
  });
}

CriterionResult criterion6_hypoexponential() {
  return timed(6, 0, [](std::string& detail) {
    double worst = 0;
    for (long N = 1; N <= 5; ++N) {
      for (int k = 1; k <= 50; ++k) {
        const double t = 0.2 * k;
        worst = std::max(worst, std::fabs(hypo_survival(N, t) - hypo_survival_convolution(N, t)));
      }
    }
    if (worst > 1e-10) {
      detail = "closed form vs convolution differs by " + fmt("%.3g", worst);
      return false;
    }
    // Monte Carlo: the mean (integral of the closed form) and the survival at
    // t = 1, each within 3 standard errors.
    const std::size_t samples = 1'000'000;
    double worst_z = 0;
    for (long N = 1; N <= 5; ++N) {
      std::vector<double> draws(samples);
      parallel_for(samples, worker_count(), [&](std::size_t i) {
        CounterRng rng(6000 + static_cast<std::uint64_t>(N), i);
        draws[i] = hypo_sample(N, rng);
      });
      const auto est = stats::mean_estimate(draws);
      const double mean = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [N](double t) { return hypo_survival(N, t); }, 0.0, 80.0, 15, 1e-14);
      worst_z = std::max(worst_z, std::fabs(est.mean - mean) / est.standard_error);
      std::size_t above = 0;
      for (double d : draws) above += d > 1.0 ? 1 : 0;
      const double s = hypo_survival(N, 1.0);
      const double freq = static_cast<double>(above) / static_cast<double>(samples);
      worst_z = std::max(worst_z, std::fabs(freq - s) / std::sqrt(s * (1 - s) / static_cast<double>(samples)));
    }
    detail = "max |closed - convolution| = " + fmt("%.3g", worst) + "; max Monte Carlo deviation = " +
             fmt("%.3g", worst_z) + " SE";
    return worst_z <= 3.0;
  });
}

CriterionResult criterion7_coupling() {
  return timed(7, 60.0, [](std::string& detail) {
    const long N = 3;
    const UniformizedPair pair = build_coupling(yule(N), lambda_hat(N), ehrenfest(N));
    std::vector<Rational> m0(N + 1, Rational(0));
    m0[N] = 1;
    const auto runs = simulate_batch(pair, m0, 20.0, 100'000, 7, worker_count());
    const std::vector<double> times{0.5, 1.0, 2.0};
    const CouplingDiagnostics d = diagnose_coupling(pair, m0, runs, times);
    double min_p = 1;
    for (const auto& c : d.marginal) min_p = std::min(min_p, c.result.p_value);
    const double marginal_p = min_p;
    min_p = 1;
    for (const auto& c : d.conditional) min_p = std::min(min_p, c.result.p_value);
    const double conditional_p = min_p;
    detail = "min p: marginal " + fmt("%.3g", marginal_p) + ", conditional " + fmt("%.3g", conditional_p) + " (" +
             std::to_string(d.conditional.size()) + " buckets), X_tau ~ pi " + fmt("%.3g", d.stationary.result.p_value) +
             ", independence " + fmt("%.3g", d.independence.result.p_value) + ", tau KS " + fmt("%.3g", d.ks_pvalue);
    const double alpha = 0.001;
    return d.absorbed == d.samples && !d.conditional.empty() && marginal_p >= alpha && conditional_p >= alpha &&
           d.stationary.result.p_value >= alpha && d.independence.result.p_value >= alpha;
  });
}

CriterionResult criterion8_bound_chain() {
  return timed(8, 0, [](std::string& detail) {
    std::vector<double> grid;
    for (int k = 1; k <= 50; ++k) grid.push_back(0.1 * k);
    auto delta = [](long N) {
      std::vector<Rational> m(static_cast<std::size_t>(N) + 1, Rational(0));
      m.back() = 1;
      return m;
    };
    auto check = [&](const SeparationCurve& curve, long N, const std::string& name) {
      for (const auto& r : curve.rows) {
        if (std::fabs(r.bound - (1 - std::pow(1 - std::exp(-r.t), static_cast<double>(N)))) > 1e-12) {
          detail = name + ": bound column is not 1 - (1 - e^-t)^N";
          return false;
        }
      }
      if (auto v = curve.first_violation()) {
        detail = name + ": chain fails at t = " + fmt("%.3g", curve.rows[*v].t);
        return false;
      }
      return true;
    };
    const std::vector<Rational> a2{1, 0, 2};
    const SeparationCurve boundary = bound_curve(delta(2), lambda_a(2, a2), grid);
    if (!check(boundary, 2, "N=2 a=(1,0,2)")) return false;
    double worst = 0;
    for (const auto& r : boundary.rows) worst = std::max(worst, std::fabs(r.separation - std::exp(-2 * r.t)));
    if (worst > 1e-9) {
      detail = "separation differs from e^{-2t} by " + fmt("%.3g", worst);
      return false;
    }
    const std::vector<Rational> a3{1, 0, Rational(2, 3), 0};
    if (!check(bound_curve(delta(3), lambda_a(3, a3), grid), 3, "N=3 a=(1,0,2/3,0)")) return false;
    for (long N = 0; N <= 6; ++N) {
      if (!check(bound_curve(delta(N), lambda_hat(N), grid), N, "Ehrenfest N=" + std::to_string(N))) return false;
    }
    detail = "chain holds on 9 curves x 50 times; |separation - e^{-2t}| <= " + fmt("%.3g", worst);
    return true;
  });
}

CriterionResult criterion9_determinism() {
  return timed(9, 0, [](std::string& detail) {
    auto run = [](const std::string& format, std::size_t workers) {
      cli::RunConfig c;
      c.command = "couple";
      c.N = 3;
      c.samples = 4000;
      c.seed = 7;
      c.format = format;
      std::ostringstream out;
      cli::cmd_couple(c, out, workers);
      return out.str();
    };
    for (const std::string format : {"csv", "json"}) {
      const std::string reference = run(format, 1);
      for (std::size_t workers : {1, 2, 3, 8}) {
        if (run(format, workers) != reference) {
          detail = format + " output differs with " + std::to_string(workers) + " workers";
          return false;
        }
      }
    }
    detail = "csv and json outputs byte-identical across 5 runs with 1, 2, 3 and 8 workers";
    return true;
  });
}

std::vector<CriterionResult> run_all() {
  return {criterion1_spectra(),       criterion2_intertwinings(), criterion3_max_a2(),
          criterion4_triviality(),    criterion5_signed_link(),         criterion6_hypoexponential(),
          criterion7_coupling(),      criterion8_bound_chain(),   criterion9_determinism()};
}

bool run_acceptance(std::ostream& out) {
  bool all = true;
  for (const auto& r : run_all()) {
    all = all && r.pass;
    out << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " [" << fmt("%.2f", r.seconds) << " s";
    if (r.limit > 0) out << " / limit " << fmt("%.0f", r.limit) << " s";
    out << "] " << r.detail << '\n';
  }
  return all;
}

}  // namespace intertwine::checks
