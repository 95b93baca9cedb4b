#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "intertwine/convergence.hpp"
#include "intertwine/coupling.hpp"
#include "intertwine/diagnostics.hpp"
#include "intertwine/feasibility.hpp"
#include "intertwine/generators.hpp"
#include "intertwine/kernels.hpp"

namespace intertwine::cli {

using io::Json;

namespace {

constexpr long kMaxFiniteN = 10;

long require_N(const RunConfig& c, long lo, long hi) {
  if (!c.N) throw UsageError("--N is required");
  if (*c.N < lo || *c.N > hi) {
    throw UsageError("--N must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return *c.N;
}

std::string format_or(const RunConfig& c, const std::string& fallback) {
  const std::string f = c.format.empty() ? fallback : c.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

// a must be (1, a_1, ..., a_N); N is taken from --N or from the length of a.
std::vector<Rational> require_coefficients(const RunConfig& c, long& N) {
  if (c.a.empty()) throw UsageError("--a is required");
  const long len = static_cast<long>(c.a.size());
  if (c.N && *c.N + 1 != len) throw UsageError("--a must have N+1 entries");
  if (c.a.front() != 1) throw UsageError("a_0 must be 1");
  N = len - 1;
  return c.a;
}

std::vector<Rational> dirac(std::size_t size, std::size_t at) {
  std::vector<Rational> m(size, Rational(0));
  m[at] = 1;
  return m;
}

FiniteGenerator named_generator(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("generator spec must look like family:N, got '" + spec + "'");
  const std::string family = spec.substr(0, colon);
  long n = 0;
  try {
    std::size_t used = 0;
    n = std::stol(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw UsageError("bad size in generator spec '" + spec + "'");
  }
  if (n < 0 || n + 1 > static_cast<long>(kMaxPolytopeStates)) {
    throw UsageError("generator size must lie in [0, " + std::to_string(kMaxPolytopeStates - 1) + "]");
  }
  if (family == "ehrenfest") return ehrenfest(n);
  if (family == "yule") return yule(n);
  if (family == "reverse-yule") return reverse_yule(n);
  throw UsageError("unknown generator family '" + family + "'");
}

Json ou_modes(const OuIntertwiningReport& report) {
  Json modes = Json::array();
  for (const auto& m : report.modes) {
    modes.push_back(Json{{"n", m.n}, {"image", io::to_json(m.image)}, {"residualZero", m.residual.is_zero()}});
  }
  return modes;
}

std::string polytope_verdict(const KernelPolytope& p) {
  if (!p.feasible) return "no Markov intertwining";
  if (p.nontrivial) return "non-trivial intertwining exists";
  const RatMatrix& row = *p.feasible_point;
  for (std::size_t j = 0; j < row.cols(); ++j) {
    if (row(0, j) == 1) return "trivial only: δ_" + std::to_string(p.col_offset + static_cast<long>(j)) + " rows";
  }
  return "trivial only: constant rows";
}

Json check_json(const ChiSquareCheck& c) {
  Json j;
  j["label"] = c.label;
  j["t"] = c.t;
  j["y"] = c.y >= 0 ? Json(c.y) : Json(nullptr);
  j["n"] = c.n;
  j["statistic"] = c.result.statistic;
  j["dof"] = c.result.dof;
  j["pValue"] = c.result.p_value;
  return j;
}

}  // namespace

std::vector<Rational> parse_coefficients(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument&) {
      throw UsageError("bad coefficient '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty coefficient list");
  return out;
}

std::vector<double> parse_tgrid(const std::string& text) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("bad number");
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad time value '" + s + "' in --tgrid");
    }
  };
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, step;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, step) || step.empty()) {
      throw UsageError("--tgrid range must look like start:stop:step");
    }
    const double lo = number(a);
    const double hi = number(b);
    const double h = number(step);
    if (h <= 0 || hi < lo) throw UsageError("--tgrid needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((hi - lo) / h + 1e-9));
    for (long k = 0; k <= count; ++k) grid.push_back(lo + static_cast<double>(k) * h);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(number(item));
  }
  if (grid.empty()) throw UsageError("empty --tgrid");
  for (double t : grid) {
    if (t < 0) throw UsageError("--tgrid times must be nonnegative");
  }
  return grid;
}

Json config_echo(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["N"] = c.N ? Json(*c.N) : Json(nullptr);
  j["M"] = c.M ? Json(*c.M) : Json(nullptr);
  Json a = Json::array();
  for (const auto& v : c.a) a.push_back(to_string(v));
  j["a"] = std::move(a);
  j["tgrid"] = c.tgrid_text;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["out"] = c.out;
  j["family"] = c.family;
  j["pair"] = c.pair;
  j["polytope"] = c.polytope;
  j["maxA2"] = c.max_a2;
  j["reverse"] = c.reverse;
  j["hat"] = c.hat;
  j["horizon"] = c.horizon;
  j["theta"] = c.theta ? Json(to_string(*c.theta)) : Json(nullptr);
  return j;
}

int cmd_spectra(const RunConfig& c, std::ostream& out) {
  const long N = require_N(c, 0, kMaxFiniteN);
  Json pairs = Json::array();
  bool certified = true;
  auto record = [&](long n, Json vector, bool zero) {
    certified = certified && zero;
    pairs.push_back(Json{{"n", n}, {"eigenvalue", std::to_string(-n)}, {"eigenvector", std::move(vector)},
                         {"residualZero", zero}});
  };
  if (c.family == "ou") {
    const auto h = hermite_table(static_cast<unsigned>(N));
    for (long n = 0; n <= N; ++n) {
      const Poly& hn = h[static_cast<std::size_t>(n)];
      const Poly residual = ou_apply(hn) + hn * Rational(n);
      record(n, io::to_json(hn), residual.is_zero());
    }
  } else if (c.family == "ehrenfest" || c.family == "yule" || c.family == "reverse-yule") {
    const FiniteGenerator gen =
        c.family == "ehrenfest" ? ehrenfest(N) : (c.family == "yule" ? yule(N) : reverse_yule(N));
    for (long n = 0; n <= N; ++n) {
      ValueVector v;
      if (c.family == "ehrenfest") {
        v = krawtchouk(N, n);
      } else if (c.family == "yule") {
        v = phi(n, N + 1);
      } else {
        v = n == 0 ? ones(-N, static_cast<std::size_t>(N) + 1) : phi_tilde(n, N);
      }
      const bool zero = check_eigen(gen, v, Rational(n)).is_zero();
      record(n, io::to_json(v), zero);
    }
  } else {
    throw UsageError("--family must be one of ehrenfest, yule, reverse-yule, ou");
  }
  Json j;
  j["config"] = config_echo(c);
  j["family"] = c.family;
  j["N"] = N;
  j["eigenpairs"] = std::move(pairs);
  j["certified"] = certified;
  out << j.dump(2) << '\n';
  return certified ? kOk : kInternal;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  Json j;
  j["config"] = config_echo(c);
  int code = kOk;
  if (!c.polytope.empty()) {
    if (!c.pair.empty()) throw UsageError("use either --pair or --polytope");
    const auto comma = c.polytope.find(',');
    if (comma == std::string::npos) throw UsageError("--polytope must look like familyA:N,familyB:M");
    const FiniteGenerator A = named_generator(c.polytope.substr(0, comma));
    const FiniteGenerator B = named_generator(c.polytope.substr(comma + 1));
    const KernelPolytope p = kernel_polytope(A, B);
    j["verdict"] = polytope_verdict(p);
    j["polytope"] = io::to_json(p);
    code = p.feasible ? kOk : kNegative;
  } else if (c.pair == "ehrenfest-ehrenfest" || c.pair == "yule-ehrenfest") {
    const long N = require_N(c, 0, kMaxFiniteN);
    const long M = c.M.value_or(N);
    if (M < 0 || M > N) throw UsageError("--M must lie in [0, N]");
    const bool yule_side = c.pair == "yule-ehrenfest";
    const FiniteKernel K = yule_side ? lambda_hat_chain(M, N) : lambda_chain(M, N);
    const FiniteGenerator A = yule_side ? yule(M) : ehrenfest(M);
    const RatMatrix residual = verify_finite_intertwining(A, K, ehrenfest(N));
    j["kernel"] = io::to_json(K);
    j["residualZero"] = residual.is_zero();
    j["residual"] = io::to_json(residual);
    code = residual.is_zero() ? kOk : kNegative;
  } else if (c.pair == "yule-ou" || c.pair == "reverse-yule-ou" || c.pair == "ehrenfest-ou") {
    long N = 0;
    const auto a = require_coefficients(c, N);
    if (N > kMaxFiniteN) throw UsageError("N must be at most 10");
    std::optional<HermiteDensityKernel> K;
    std::optional<FiniteGenerator> G;
    if (c.pair == "yule-ou") {
      K = lambda_a(N, a);
      G = yule(N);
    } else if (c.pair == "reverse-yule-ou") {
      K = lambda_tilde_a(N, a);
      G = reverse_yule(N);
    } else {
      K = ehrenfest_ou_kernel(N, a);
      G = ehrenfest(N);
    }
    const OuIntertwiningReport report = verify_ou_intertwining(*G, *K, static_cast<unsigned>(N) + 2);
    FeasibilityReport markov;
    if (c.pair == "yule-ou") {
      markov = check_membership_A(N, a);
    } else {
      markov.witness = first_negative_row(*K);
      markov.member = !markov.witness;
    }
    j["intertwines"] = report.passed();
    j["modes"] = ou_modes(report);
    j["markov"] = io::to_json(markov);
    code = report.passed() && markov.member ? kOk : kNegative;
  } else {
    throw UsageError(
        "--pair must be one of ehrenfest-ehrenfest, yule-ehrenfest, yule-ou, reverse-yule-ou, ehrenfest-ou "
        "(or use --polytope)");
  }
  out << j.dump(2) << '\n';
  return code;
}

int cmd_feasible(const RunConfig& c, std::ostream& out) {
  Json j;
  j["config"] = config_echo(c);
  int code = kOk;
  if (c.max_a2) {
    if (c.reverse) throw UsageError("--max-a2 applies to the forward family only");
    const long N = require_N(c, 2, 64);
    j["N"] = N;
    j["maxA2"] = to_string(max_a2(N));
  } else {
    long N = 0;
    const auto a = require_coefficients(c, N);
    const FeasibilityReport r = c.reverse ? check_membership_A_tilde(N, a) : check_membership_A(N, a);
    j["N"] = N;
    j["family"] = c.reverse ? "reverse" : "forward";
    j["report"] = io::to_json(r);
    code = r.member ? kOk : kNegative;
  }
  out << j.dump(2) << '\n';
  return code;
}

int cmd_couple(const RunConfig& c, std::ostream& out, std::size_t workers) {
  const long N = require_N(c, 0, kMaxFiniteN);
  if (c.samples < 1) throw UsageError("--samples must be >= 1");
  if (!(c.horizon > 0) || !std::isfinite(c.horizon)) throw UsageError("--horizon must be positive");
  const std::string format = format_or(c, "json");

  const UniformizedPair pair = build_coupling(yule(N), lambda_hat(N), ehrenfest(N), c.theta);
  const std::vector<Rational> m0 = dirac(static_cast<std::size_t>(N) + 1, static_cast<std::size_t>(N));
  const std::vector<Trajectory> runs = simulate_batch(pair, m0, c.horizon, c.samples, c.seed, workers);

  std::vector<double> times;
  for (double t : {0.5, 1.0, 2.0}) {
    if (t <= c.horizon) times.push_back(t);
  }
  const CouplingDiagnostics d = diagnose_coupling(pair, m0, runs, times);

  Json manifest;
  manifest["config"] = config_echo(c);
  manifest["seed"] = c.seed;
  manifest["theta"] = to_string(pair.theta());
  manifest["horizon"] = c.horizon;
  manifest["counts"] = Json{{"samples", d.samples}, {"events", d.events}, {"absorbed", d.absorbed}};
  double expected_mean = 0;
  for (long k = 1; k <= N; ++k) expected_mean += 1.0 / static_cast<double>(k);
  manifest["tau"] = Json{{"mean", d.tau_mean},
                         {"expectedMean", expected_mean},
                         {"ksStatistic", d.ks_statistic},
                         {"ksPValue", d.ks_pvalue},
                         {"histogram", Json{{"width", d.histogram_width}, {"counts", d.tau_histogram}}}};
  Json marginal = Json::array();
  for (const auto& m : d.marginal) marginal.push_back(check_json(m));
  Json conditional = Json::array();
  for (const auto& m : d.conditional) conditional.push_back(check_json(m));
  manifest["tests"] = Json{{"marginal", std::move(marginal)},
                           {"conditional", std::move(conditional)},
                           {"stationary", check_json(d.stationary)},
                           {"independence", check_json(d.independence)}};

  if (!c.out.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(c.out);
    std::ofstream csv(fs::path(c.out) / "trajectories.csv", std::ios::binary);
    io::write_trajectories_csv(csv, runs);
    std::ofstream json(fs::path(c.out) / "manifest.json", std::ios::binary);
    json << manifest.dump(2) << '\n';
    if (!csv || !json) throw std::runtime_error("could not write to " + c.out);
  }
  if (format == "csv") {
    io::write_trajectories_csv(out, runs);
  } else {
    out << manifest.dump(2) << '\n';
  }
  return kOk;
}

int cmd_converge(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const std::string format = format_or(c, "csv");
  const std::vector<double> tgrid = c.tgrid.empty() ? parse_tgrid("0.1:5:0.1") : c.tgrid;
  SeparationCurve curve;
  long N = 0;
  if (c.hat) {
    if (!c.a.empty()) throw UsageError("use either --hat or --a");
    N = require_N(c, 0, kMaxFiniteN);
    const auto m0 = dirac(static_cast<std::size_t>(N) + 1, static_cast<std::size_t>(N));
    curve = bound_curve(m0, lambda_hat(N), tgrid);
  } else {
    const auto a = require_coefficients(c, N);
    if (N > kMaxFiniteN) throw UsageError("N must be at most 10");
    const FeasibilityReport r = check_membership_A(N, a);
    if (!r.member) {
      err << "error: infeasible coefficients";
      if (r.parity_violation) err << " (a_" << *r.parity_violation << " breaks the parity rule)";
      if (r.witness) {
        err << " (row " << r.witness->y << " is " << to_string(r.witness->value) << " at x = " << to_string(r.witness->x0)
            << ")";
      }
      err << '\n';
      return kNegative;
    }
    const auto m0 = dirac(static_cast<std::size_t>(N) + 1, static_cast<std::size_t>(N));
    curve = bound_curve(m0, lambda_a(N, a), tgrid);
  }
  const auto violation = curve.first_violation();
  if (format == "csv") {
    write_csv(out, curve);
  } else {
    Json rows = Json::array();
    for (const auto& r : curve.rows) {
      rows.push_back(Json{{"t", r.t}, {"tv", r.tv}, {"separation", r.separation}, {"bound", r.bound}});
    }
    Json j;
    j["config"] = config_echo(c);
    j["N"] = N;
    j["rows"] = std::move(rows);
    j["chainHolds"] = !violation;
    out << j.dump(2) << '\n';
  }
  if (violation) {
    const auto& r = curve.rows[*violation];
    err << "error: inequality chain fails at t = " << r.t << " (tv " << r.tv << ", separation " << r.separation
        << ", bound " << r.bound << ")\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace intertwine::cli
