#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "commands.hpp"
#include "intertwine/coupling.hpp"

using namespace intertwine;

namespace {

void add_common(CLI::App* sub, cli::RunConfig& c, std::optional<long>& N) {
  sub->add_option("--N", N, "state-space size");
  sub->add_option("--format", c.format, "json or csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov intertwinings between Ehrenfest, Yule, reverse Yule and Ornstein-Uhlenbeck generators"};
  app.require_subcommand(1);

  cli::RunConfig c;
  std::optional<long> N;
  std::optional<long> M;
  std::string a_text;
  std::string theta_text;

  auto* spectra = app.add_subcommand("spectra", "certify eigenpairs of a generator family");
  add_common(spectra, c, N);
  spectra->add_option("--family", c.family, "ehrenfest, yule, reverse-yule or ou")->required();

  auto* verify = app.add_subcommand("verify", "certify an intertwining relation or solve a kernel polytope");
  add_common(verify, c, N);
  verify->add_option("--M", M, "size of the smaller chain");
  verify->add_option("--pair", c.pair, "ehrenfest-ehrenfest, yule-ehrenfest, yule-ou, reverse-yule-ou, ehrenfest-ou");
  verify->add_option("--polytope", c.polytope, "familyA:N,familyB:M");
  verify->add_option("--a", a_text, "coefficients a_0,...,a_N");

  auto* feasible = app.add_subcommand("feasible", "decide membership of a coefficient vector");
  add_common(feasible, c, N);
  feasible->add_option("--a", a_text, "coefficients a_0,...,a_N");
  feasible->add_flag("--max-a2", c.max_a2, "exact supremum of a_2 in the one-parameter slice");
  feasible->add_flag("--reverse", c.reverse, "use the reverse Yule family");

  auto* couple = app.add_subcommand("couple", "simulate the Yule-to-Ehrenfest coupling");
  add_common(couple, c, N);
  couple->add_option("--samples", c.samples, "number of trajectories")->check(CLI::PositiveNumber);
  couple->add_option("--horizon", c.horizon, "simulation horizon");
  couple->add_option("--seed", c.seed, "64-bit seed");
  couple->add_option("--theta", theta_text, "uniformization rate (default: smallest valid)");
  couple->add_option("--out", c.out, "directory for trajectories.csv and manifest.json");

  auto* converge = app.add_subcommand("converge", "separation, total variation and the hypoexponential bound");
  add_common(converge, c, N);
  converge->add_option("--a", a_text, "coefficients a_0,...,a_N (OU target)");
  converge->add_flag("--hat", c.hat, "Ehrenfest target through the binomial kernel");
  converge->add_option("--tgrid", c.tgrid_text, "start:stop:step or a comma list");

  auto* selftest = app.add_subcommand("selftest", "run every acceptance criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  try {
    c.N = N;
    c.M = M;
    if (!a_text.empty()) c.a = cli::parse_coefficients(a_text);
    if (!c.tgrid_text.empty()) c.tgrid = cli::parse_tgrid(c.tgrid_text);
    if (!theta_text.empty()) {
      try {
        c.theta = parse_rational(theta_text);
      } catch (const std::invalid_argument&) {
        throw cli::UsageError("bad --theta '" + theta_text + "'");
      }
    }
    if (*spectra) {
      c.command = "spectra";
      return cli::cmd_spectra(c, std::cout);
    }
    if (*verify) {
      c.command = "verify";
      return cli::cmd_verify(c, std::cout);
    }
    if (*feasible) {
      c.command = "feasible";
      return cli::cmd_feasible(c, std::cout);
    }
    if (*couple) {
      c.command = "couple";
      return cli::cmd_couple(c, std::cout, worker_count());
    }
    if (*converge) {
      c.command = "converge";
      return cli::cmd_converge(c, std::cout, std::cerr);
    }
    if (*selftest) return checks::run_acceptance(std::cout) ? cli::kOk : cli::kInternal;
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return cli::kInternal;
  }
  return cli::kUsage;
}
