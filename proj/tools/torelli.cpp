// torelli: jacobian rings, period-map kernels and audits for lattice polytopes.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "torelli/cli.hpp"

int main(int argc, char** argv) {
  torelli::RunRequest req;
  CLI::App app{"Jacobian rings, period-map kernels and infinitesimal Torelli audits"};
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--polytope", req.polytope_path, "polytope JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--poly", req.poly, "\"random\", a polynomial JSON file, or inline JSON")->capture_default_str();
    sub->add_option("--seed", req.seed, "seed for random coefficients and trials")->capture_default_str();
    sub->add_option("--bound", req.bound, "coefficient bound for random polynomials")->check(CLI::PositiveNumber);
  };
  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", req.output, "write the report here"); };

  auto* hodge = app.add_subcommand("hodge", "graded dimensions, hodge numbers and duality");
  add_input(hodge);
  hodge->add_option("--trials", req.trials, "random trials for the nondegeneracy certificate")->check(CLI::Range(1, 64));
  auto* kernel = app.add_subcommand("kernel", "period-map kernel in one degree, both routes");
  add_input(kernel);
  kernel->add_option("--k", req.k, "degree")->check(CLI::Range(1, 16));
  auto* classify = app.add_subcommand("classify", "kernel classification and infinitesimal Torelli verdict");
  add_input(classify);
  auto* nondegen = app.add_subcommand("nondegen", "nondegeneracy certificate against random trials");
  add_input(nondegen);
  nondegen->add_option("--trials", req.trials, "random trials")->check(CLI::Range(1, 64));
  auto* stable = app.add_subcommand("stable", "GIT stability and torus stabilizer");
  add_input(stable);
  auto* prop = app.add_subcommand("verify-prop", "generators of J^k restricted to interior points");
  add_input(prop);
  prop->add_option("--k", req.k, "degree")->check(CLI::Range(2, 16));
  auto* scan = app.add_subcommand("scan", "infinitesimal Torelli scan over a polytope corpus");
  scan->add_option("--corpus", req.corpus, "polytope JSON files or directories")->required();
  scan->add_option("--seed", req.seed, "seed")->capture_default_str();
  scan->add_option("--trials", req.trials, "random trials per polytope")->check(CLI::Range(1, 64));
  auto* white = app.add_subcommand("verify-white", "empty tetrahedron sweep");
  white->add_option("--q-max", req.q_max, "largest q")->check(CLI::Range(3, 400));
  for (auto* sub : {hodge, kernel, classify, nondegen, stable, prop, scan, white}) add_output(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return torelli::kExitIo;
  }
  req.command = app.get_subcommands().front()->get_name();

  const char* cache = std::getenv("TORELLI_CACHE_DIR");
  try {
    const auto out = torelli::run(req, cache != nullptr ? cache : "");
    const std::string text = out.report.dump(2) + "\n";
    if (req.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(req.output);
      if (!f || !(f << text)) {
        std::cerr << "error: cannot write " << req.output << "\n";
        return torelli::kExitIo;
      }
    }
    for (const auto& w : out.report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    return out.exit_code;
  } catch (const torelli::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return torelli::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
