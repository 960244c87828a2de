// odsym: command-line front end for fitting, benchmark generation, scoring,
// similarity construction and accuracy sweeps.
//
// Exit codes: 0 success, 2 bad flags or invalid benchmark parameters, 3 file
// or format errors, 4 solver precondition failures, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "odsym/bench.hpp"
#include "odsym/error.hpp"
#include "odsym/init.hpp"
#include "odsym/io.hpp"
#include "odsym/report.hpp"
#include "odsym/rng.hpp"
#include "odsym/solver.hpp"

namespace {

using namespace odsym;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitSolver = 4;

// Invalid values that CLI11 cannot see, e.g. a clique spec with a zero size.
struct UsageError : Error {
  using Error::Error;
};

template <typename F>
auto as_usage(F&& f) {
  try {
    return f();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

const std::map<std::string, Norm> kLosses{{"l1", Norm::L1}, {"l2", Norm::L2}};
const std::map<std::string, InitKind> kInits{
    {"greedy", InitKind::Greedy}, {"zero", InitKind::Zero}, {"random", InitKind::Random}};
const std::map<std::string, SolverPath> kPaths{{"residual", SolverPath::Residual},
                                               {"free", SolverPath::ResidualFree}};
const std::map<std::string, Readout> kReadouts{{"raw", Readout::Raw},
                                               {"hardened", Readout::Hardened}};

// "a:step:b" (inclusive) or a comma list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw UsageError("invalid number '" + s + "' in '" + text + "'");
    }
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t c; (c = text.find(':', start)) != std::string::npos; start = c + 1) {
      parts.push_back(text.substr(start, c - start));
    }
    parts.push_back(text.substr(start));
    if (parts.size() != 3) throw UsageError("range must be start:step:stop, got '" + text + "'");
    const double a = number(parts[0]), step = number(parts[1]), b = number(parts[2]);
    if (!(step > 0.0) || b < a) throw UsageError("empty or invalid range '" + text + "'");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      // Rounded to 12 digits so 0:0.05:0.5 prints as 0.15, not 0.15000000000000002.
      out.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    std::size_t start = 0;
    while (true) {
      auto c = text.find(',', start);
      out.push_back(number(text.substr(start, c - start)));
      if (c == std::string::npos) break;
      start = c + 1;
    }
  }
  return out;
}

std::vector<Index> parse_levels(const std::string& text) {
  std::vector<Index> out;
  for (double v : parse_grid(text)) {
    if (v < 0.0 || v != std::floor(v)) throw UsageError("levels must be nonnegative integers");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

// Shared by both experiment subcommands.
struct ExperimentFlags {
  std::string loss = "l1";
  std::string init = "greedy";
  std::string path = "free";
  std::optional<std::string> readout;
  std::size_t max_sweeps = 500;
  double tol = 1e-6;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string csv;
  std::string json;

  void attach(CLI::App* app) {
    app->add_option("--loss", loss, "l1 or l2")->transform(CLI::IsMember(kLosses))
        ->capture_default_str();
    app->add_option("--init", init, "greedy, zero or random")->transform(CLI::IsMember(kInits))
        ->capture_default_str();
    app->add_option("--path", path, "residual or free")->transform(CLI::IsMember(kPaths))
        ->capture_default_str();
    app->add_option("--readout", readout, "raw or hardened (default depends on the benchmark)")
        ->transform(CLI::IsMember(kReadouts));
    app->add_option("--max-sweeps", max_sweeps)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--tol", tol)->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--trials", trials)->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--threads", threads, "parallel trials; 0 = all cores")->capture_default_str();
    app->add_option("--csv", csv, "sweep table (default: standard output)");
    app->add_option("--json", json, "per-trial results and summaries");
  }

  ExperimentConfig config() const {
    ExperimentConfig c;
    c.loss = kLosses.at(loss);
    c.init = kInits.at(init);
    c.path = kPaths.at(path);
    if (readout) c.readout = kReadouts.at(*readout);
    c.max_sweeps = max_sweeps;
    c.tol = tol;
    c.trials = trials;
    c.seed = seed;
    c.threads = threads;
    return c;
  }

  void emit(std::string_view param, const std::vector<ExperimentResult>& sweep) const {
    std::ostringstream table;
    write_sweep_csv(table, param, sweep);
    if (csv.empty()) {
      std::cout << table.str();
    } else {
      write_text(csv, table.str());
    }
    if (!json.empty()) {
      nlohmann::json all = nlohmann::json::array();
      for (const auto& r : sweep) all.push_back(to_json(r));
      write_text(json, all.dump(2) + "\n");
    }
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Off-diagonal symmetric NMF: fit, generate, evaluate"};
  app.require_subcommand(1);

  // fit ----------------------------------------------------------------------
  struct {
    std::string input, output, report;
    Index rank = 0;
    std::string loss = "l2", init = "greedy", path = "free";
    std::size_t max_sweeps = 500;
    double tol = 1e-6;
    std::uint64_t seed = 0;
  } fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Factor a symmetric matrix");
  fit_cmd->add_option("--input", fit_args.input, "Matrix Market file")->required();
  fit_cmd->add_option("--rank", fit_args.rank)->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--loss", fit_args.loss)->transform(CLI::IsMember(kLosses))
      ->capture_default_str();
  fit_cmd->add_option("--init", fit_args.init)->transform(CLI::IsMember(kInits))
      ->capture_default_str();
  fit_cmd->add_option("--path", fit_args.path)->transform(CLI::IsMember(kPaths))
      ->capture_default_str();
  fit_cmd->add_option("--max-sweeps", fit_args.max_sweeps)->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--tol", fit_args.tol)->check(CLI::NonNegativeNumber)->capture_default_str();
  fit_cmd->add_option("--seed", fit_args.seed)->capture_default_str();
  fit_cmd->add_option("--output", fit_args.output, "factor H as CSV")->required();
  fit_cmd->add_option("--report", fit_args.report, "fit report as JSON");

  // synth --------------------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth", "Generate a benchmark matrix and its clusters");
  synth_cmd->require_subcommand(1);
  struct {
    std::string sizes, out_a, out_truth;
    double noise = 0.0;
    std::uint64_t seed = 0;
    AdversarialSpec adv;
  } synth_args;
  auto* cliques_cmd = synth_cmd->add_subcommand("cliques", "Block-diagonal cliques with flip noise");
  cliques_cmd->add_option("--sizes", synth_args.sizes, "e.g. 10,10,5 or 10x10")->required();
  cliques_cmd->add_option("--noise", synth_args.noise, "flip probability")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  auto* adv_cmd = synth_cmd->add_subcommand("adversarial", "Two cliques plus linked singletons");
  adv_cmd->add_option("--clique-size", synth_args.adv.clique_size)->capture_default_str();
  adv_cmd->add_option("--isolated", synth_args.adv.isolated)->capture_default_str();
  adv_cmd->add_option("--level", synth_args.adv.level)->capture_default_str();
  for (auto* cmd : {cliques_cmd, adv_cmd}) {
    cmd->add_option("--seed", synth_args.seed)->capture_default_str();
    cmd->add_option("--out-a", synth_args.out_a, "Matrix Market output")->required();
    cmd->add_option("--out-truth", synth_args.out_truth, "ground-truth CSV")->required();
  }

  // eval ---------------------------------------------------------------------
  struct {
    std::string h, truth, readout = "hardened";
  } eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Clustering accuracy of H against ground truth");
  eval_cmd->set_help_flag("--help", "Print this help message and exit");
  eval_cmd->add_option("--h", eval_args.h, "factor CSV")->required();
  eval_cmd->add_option("--truth", eval_args.truth)->required();
  eval_cmd->add_option("--readout", eval_args.readout)->transform(CLI::IsMember(kReadouts))
      ->capture_default_str();

  // similarity ---------------------------------------------------------------
  struct {
    std::string counts, output;
  } sim_args;
  auto* sim_cmd = app.add_subcommand("similarity", "Cosine similarity of count-matrix rows");
  sim_cmd->add_option("--counts", sim_args.counts, "Matrix Market count matrix")->required();
  sim_cmd->add_option("--output", sim_args.output, "Matrix Market output")->required();

  // experiment ---------------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "Multi-trial accuracy sweeps");
  exp_cmd->require_subcommand(1);
  ExperimentFlags noise_flags, adv_flags;
  std::string sweep_sizes = "10x10", deltas = "0:0.05:0.5", levels = "0:1:10";
  AdversarialSpec sweep_adv;
  auto* noise_cmd = exp_cmd->add_subcommand("noise-sweep", "Accuracy against flip noise");
  noise_cmd->add_option("--sizes", sweep_sizes)->capture_default_str();
  noise_cmd->add_option("--deltas", deltas, "start:step:stop or a comma list")
      ->capture_default_str();
  noise_flags.attach(noise_cmd);
  auto* adv_sweep_cmd =
      exp_cmd->add_subcommand("adversarial-sweep", "Accuracy against singleton links");
  adv_sweep_cmd->add_option("--clique-size", sweep_adv.clique_size)->capture_default_str();
  adv_sweep_cmd->add_option("--isolated", sweep_adv.isolated)->capture_default_str();
  adv_sweep_cmd->add_option("--levels", levels, "start:step:stop or a comma list")
      ->capture_default_str();
  adv_flags.attach(adv_sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*fit_cmd) {
    const auto a = load_matrix(fit_args.input);
    SolverConfig cfg;
    cfg.loss = kLosses.at(fit_args.loss);
    cfg.rank = fit_args.rank;
    cfg.max_sweeps = fit_args.max_sweeps;
    cfg.tol = fit_args.tol;
    cfg.path = kPaths.at(fit_args.path);
    cfg.seed = fit_args.seed;
    // Stream 1 matches the initialization stream of experiment trial 0.
    auto h0 = initialize(a, cfg.rank, kInits.at(fit_args.init), cfg.loss,
                         derive_seed(fit_args.seed, 1));
    auto result = fit(a, std::move(h0), cfg);
    save_factor(fit_args.output, result.factor);
    if (!fit_args.report.empty()) {
      write_text(fit_args.report, to_json(result.report).dump(2) + "\n");
    }
    std::cerr << "objective " << result.report.final_objective << " after "
              << result.report.sweeps << " sweeps\n";
  } else if (*synth_cmd) {
    // Stream 0 matches the data stream of experiment trial 0.
    const auto seed = derive_seed(synth_args.seed, 0);
    Benchmark bench;
    if (*cliques_cmd) {
      bench = as_usage([&] { return make_cliques(CliqueSpec::parse(synth_args.sizes)); });
      bench.a = add_flip_noise(bench.a, synth_args.noise, seed);
    } else {
      as_usage([&] {
        synth_args.adv.validate();
        return 0;
      });
      bench = make_adversarial(synth_args.adv, seed);
    }
    save_matrix(synth_args.out_a, bench.a);
    save_factor(synth_args.out_truth, bench.truth);
  } else if (*eval_cmd) {
    const auto h = load_factor(eval_args.h);
    const auto truth = load_factor(eval_args.truth);
    const double acc = accuracy(h, truth, kReadouts.at(eval_args.readout));
    std::printf("%.4f\n", acc);
  } else if (*sim_cmd) {
    save_matrix(sim_args.output, cosine_similarity(load_counts(sim_args.counts)));
  } else if (*noise_cmd) {
    auto cfg = noise_flags.config();
    cfg.cliques = as_usage([&] { return CliqueSpec::parse(sweep_sizes); });
    const auto grid = parse_grid(deltas);
    for (double d : grid) {
      if (d < 0.0 || d > 1.0) throw UsageError("noise levels must lie in [0,1]");
    }
    noise_flags.emit("delta", noise_sweep(cfg, grid));
  } else if (*adv_sweep_cmd) {
    auto cfg = adv_flags.config();
    cfg.adversarial = sweep_adv;
    const auto grid = parse_levels(levels);
    for (Index t : grid) {
      as_usage([&] {
        AdversarialSpec s = sweep_adv;
        s.level = t;
        s.validate();
        return 0;
      });
    }
    adv_flags.emit("level", adversarial_sweep(cfg, grid));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
