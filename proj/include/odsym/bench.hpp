#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "odsym/init.hpp"
#include "odsym/matrix.hpp"
#include "odsym/solver.hpp"

namespace odsym {

/// Sizes of the diagonal all-ones blocks of a clique benchmark.
struct CliqueSpec {
  std::vector<Index> sizes;

  Index n() const;
  void validate() const;

  /// Comma-separated sizes; "AxB" expands to A cliques of size B,
  /// e.g. "10x10" or "10,10,5" or "2x50,5".
  static CliqueSpec parse(std::string_view text);
};

/// Two cliques of `clique_size` plus `isolated` singleton elements; each
/// singleton gets `level` links into each clique.
struct AdversarialSpec {
  Index clique_size = 10;
  Index isolated = 10;
  Index level = 0;

  void validate() const;
};

struct Benchmark {
  SparseSymMatrix a;
  FactorMatrix truth;  // one-hot cluster indicator, n x r
};

/// Block-diagonal all-ones A (unit diagonal included) with its indicator.
Benchmark make_cliques(const CliqueSpec& spec);

/// Flips every upper-triangle entry of a binary A (diagonal included) with
/// probability delta and mirrors it. Throws PreconditionError if A is not
/// binary or delta is outside [0,1].
SparseSymMatrix add_flip_noise(const SparseSymMatrix& a, double delta, std::uint64_t seed);

/// Cliques occupy rows [0, c) and [c, 2c); singletons follow and carry a
/// unit diagonal. The attachment points of every singleton are drawn
/// uniformly without replacement from each clique. Ground truth has one column
/// per clique and one per singleton.
Benchmark make_adversarial(const AdversarialSpec& spec, std::uint64_t seed);

// How a real-valued H is compared with the indicator ground truth.
enum class Readout {
  Raw,       // H as computed
  Hardened,  // one-hot row argmax of H, ties to the lowest column
};

FactorMatrix harden(const FactorMatrix& h);

/// 1 - sqrt(min_P |H_P - H*|_F^2 / (r n)), minimized over column
/// permutations P by linear assignment on the r x r column distances (the
/// Frobenius error splits column by column). Clamped at 0 for raw factors
/// with entries far above one. Throws PreconditionError on shape mismatch or
/// when `truth` is not one-hot per row.
double accuracy(const FactorMatrix& h, const FactorMatrix& truth, Readout readout = Readout::Hardened);

struct ExperimentConfig {
  enum class Kind { Cliques, Adversarial };
  Kind kind = Kind::Cliques;
  CliqueSpec cliques{{10, 10, 10, 10, 10, 10, 10, 10, 10, 10}};
  AdversarialSpec adversarial;
  double delta = 0.0;  // flip probability, clique benchmarks only
  Norm loss = Norm::L1;
  InitKind init = InitKind::Greedy;
  SolverPath path = SolverPath::ResidualFree;
  std::size_t max_sweeps = 500;
  double tol = 1e-6;
  // Unset picks the benchmark's own readout: raw H for cliques, hardened H
  // for the adversarial family, whose singleton clusters leave no
  // off-diagonal trace and so are only recoverable through the row argmax.
  std::optional<Readout> readout;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  // Worker threads for independent trials; 0 picks hardware concurrency.
  unsigned threads = 1;

  Readout effective_readout() const;
};

struct TrialOutcome {
  double accuracy = 0.0;
  double final_objective = 0.0;
  std::size_t sweeps = 0;
  double elapsed_seconds = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialOutcome> trials;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over trials
};

/// Trial t draws its benchmark from derive_seed(seed, 2t) and its random
/// initialization from derive_seed(seed, 2t + 1), so results do not depend
/// on the number of threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Runs `cfg` once per delta (clique benchmark) or per level (adversarial).
std::vector<ExperimentResult> noise_sweep(ExperimentConfig cfg, const std::vector<double>& deltas);
std::vector<ExperimentResult> adversarial_sweep(ExperimentConfig cfg,
                                                const std::vector<Index>& levels);

}  // namespace odsym
