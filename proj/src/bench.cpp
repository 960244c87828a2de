#include "odsym/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "odsym/assignment.hpp"
#include "odsym/rng.hpp"

namespace odsym {

namespace {

Index parse_count(std::string_view text) {
  Index v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw PreconditionError("invalid count '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Index CliqueSpec::n() const {
  Index n = 0;
  for (Index s : sizes) n += s;
  return n;
}

void CliqueSpec::validate() const {
  if (sizes.empty()) throw PreconditionError("clique spec is empty");
  for (Index s : sizes) {
    if (s == 0) throw PreconditionError("clique sizes must be at least 1");
  }
}

CliqueSpec CliqueSpec::parse(std::string_view text) {
  CliqueSpec spec;
  while (true) {
    auto comma = text.find(',');
    auto item = text.substr(0, comma);
    auto x = item.find_first_of("xX");
    if (x == std::string_view::npos) {
      spec.sizes.push_back(parse_count(item));
    } else {
      const Index count = parse_count(item.substr(0, x));
      const Index size = parse_count(item.substr(x + 1));
      spec.sizes.insert(spec.sizes.end(), count, size);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  spec.validate();
  return spec;
}

void AdversarialSpec::validate() const {
  if (clique_size == 0) throw PreconditionError("clique size must be at least 1");
  if (level > clique_size) {
    throw PreconditionError("level " + std::to_string(level) + " exceeds clique size " +
                            std::to_string(clique_size));
  }
}

Benchmark make_cliques(const CliqueSpec& spec) {
  spec.validate();
  const Index n = spec.n();
  FactorMatrix truth(n, spec.sizes.size());
  std::vector<Triplet> entries;
  Index offset = 0;
  for (Index c = 0; c < spec.sizes.size(); ++c) {
    const Index s = spec.sizes[c];
    for (Index i = offset; i < offset + s; ++i) {
      truth(i, c) = 1.0;
      for (Index j = i; j < offset + s; ++j) entries.push_back({i, j, 1.0});
    }
    offset += s;
  }
  return {SparseSymMatrix::from_triplets(n, std::move(entries)), std::move(truth)};
}

SparseSymMatrix add_flip_noise(const SparseSymMatrix& a, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw PreconditionError("noise level must lie in [0,1]");
  const Index n = a.size();
  std::vector<char> dense(n * n, 0);
  for (const auto& t : a.upper()) {
    if (t.value != 1.0) throw PreconditionError("flip noise needs a binary matrix");
    dense[t.row * n + t.col] = 1;
  }
  Rng rng(seed);
  std::vector<Triplet> entries;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      char v = dense[i * n + j];
      if (uniform01(rng) < delta) v = !v;
      if (v) entries.push_back({i, j, 1.0});
    }
  }
  return SparseSymMatrix::from_triplets(n, std::move(entries));
}

Benchmark make_adversarial(const AdversarialSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Index c = spec.clique_size, m = spec.isolated, n = 2 * c + m;
  FactorMatrix truth(n, 2 + m);
  std::vector<Triplet> entries;
  for (Index q = 0; q < 2; ++q) {
    for (Index i = q * c; i < (q + 1) * c; ++i) {
      truth(i, q) = 1.0;
      for (Index j = i; j < (q + 1) * c; ++j) entries.push_back({i, j, 1.0});
    }
  }
  Rng rng(seed);
  std::vector<Index> members(c);
  for (Index e = 0; e < m; ++e) {
    const Index item = 2 * c + e;
    truth(item, 2 + e) = 1.0;
    entries.push_back({item, item, 1.0});
    for (Index q = 0; q < 2; ++q) {
      for (Index i = 0; i < c; ++i) members[i] = q * c + i;
      // Partial Fisher-Yates: the first `level` slots are a uniform sample.
      for (Index s = 0; s < spec.level; ++s) {
        const Index pick = s + uniform_below(rng, c - s);
        std::swap(members[s], members[pick]);
        entries.push_back({members[s], item, 1.0});
      }
    }
  }
  return {SparseSymMatrix::from_triplets(n, std::move(entries)), std::move(truth)};
}

FactorMatrix harden(const FactorMatrix& h) {
  FactorMatrix out(h.rows(), h.cols());
  if (h.cols() == 0) return out;
  for (Index i = 0; i < h.rows(); ++i) {
    Index best = 0;
    for (Index l = 1; l < h.cols(); ++l) {
      if (h(i, l) > h(i, best)) best = l;
    }
    out(i, best) = 1.0;
  }
  return out;
}

double accuracy(const FactorMatrix& h, const FactorMatrix& truth, Readout readout) {
  if (h.rows() != truth.rows() || h.cols() != truth.cols()) {
    throw PreconditionError("accuracy: H is " + std::to_string(h.rows()) + "x" +
                            std::to_string(h.cols()) + ", ground truth is " +
                            std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()));
  }
  const Index n = h.rows(), r = h.cols();
  if (n == 0 || r == 0) throw PreconditionError("accuracy: empty factor");
  for (Index i = 0; i < n; ++i) {
    Index ones = 0;
    for (Index l = 0; l < r; ++l) {
      const double v = truth(i, l);
      if (v != 0.0 && v != 1.0) throw PreconditionError("accuracy: ground truth is not binary");
      ones += v == 1.0;
    }
    if (ones != 1) {
      throw PreconditionError("accuracy: ground-truth row " + std::to_string(i + 1) +
                              " is not one-hot");
    }
  }

  const FactorMatrix x = readout == Readout::Hardened ? harden(h) : h;
  std::vector<double> cost(r * r);
  for (Index c = 0; c < r; ++c) {
    auto xc = x.col(c);
    for (Index d = 0; d < r; ++d) {
      auto td = truth.col(d);
      double s = 0.0;
      for (Index i = 0; i < n; ++i) s += (xc[i] - td[i]) * (xc[i] - td[i]);
      cost[c * r + d] = s;
    }
  }
  const auto match = solve_assignment(cost, r);
  double err = 0.0;
  for (Index c = 0; c < r; ++c) err += cost[c * r + match[c]];
  return std::max(0.0, 1.0 - std::sqrt(err / static_cast<double>(r * n)));
}

Readout ExperimentConfig::effective_readout() const {
  if (readout) return *readout;
  return kind == Kind::Adversarial ? Readout::Hardened : Readout::Raw;
}

namespace {

TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t trial) {
  const auto data_seed = derive_seed(cfg.seed, 2 * trial);
  const auto init_seed = derive_seed(cfg.seed, 2 * trial + 1);
  Benchmark bench;
  if (cfg.kind == ExperimentConfig::Kind::Cliques) {
    bench = make_cliques(cfg.cliques);
    bench.a = add_flip_noise(bench.a, cfg.delta, data_seed);
  } else {
    bench = make_adversarial(cfg.adversarial, data_seed);
  }
  SolverConfig solver;
  solver.loss = cfg.loss;
  solver.rank = bench.truth.cols();
  solver.max_sweeps = cfg.max_sweeps;
  solver.tol = cfg.tol;
  solver.path = cfg.path;
  solver.seed = init_seed;
  auto h0 = initialize(bench.a, solver.rank, cfg.init, cfg.loss, init_seed);
  auto fitted = fit(bench.a, std::move(h0), solver);
  return {accuracy(fitted.factor, bench.truth, cfg.effective_readout()), fitted.report.final_objective,
          fitted.report.sweeps, fitted.report.elapsed_seconds};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw PreconditionError("experiment needs at least one trial");
  if (cfg.kind == ExperimentConfig::Kind::Cliques) {
    cfg.cliques.validate();
  } else {
    cfg.adversarial.validate();
  }

  ExperimentResult result;
  result.config = cfg;
  result.trials.resize(cfg.trials);

  unsigned workers = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(cfg.trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < cfg.trials; ++t) result.trials[t] = run_trial(cfg, t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t t = next++; t < cfg.trials; t = next++) {
              result.trials[t] = run_trial(cfg, t);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  double sum = 0.0;
  for (const auto& t : result.trials) sum += t.accuracy;
  result.mean = sum / static_cast<double>(cfg.trials);
  double var = 0.0;
  for (const auto& t : result.trials) var += (t.accuracy - result.mean) * (t.accuracy - result.mean);
  result.stddev = std::sqrt(var / static_cast<double>(cfg.trials));
  return result;
}

std::vector<ExperimentResult> noise_sweep(ExperimentConfig cfg, const std::vector<double>& deltas) {
  cfg.kind = ExperimentConfig::Kind::Cliques;
  std::vector<ExperimentResult> out;
  for (double d : deltas) {
    cfg.delta = d;
    out.push_back(run_experiment(cfg));
  }
  return out;
}

std::vector<ExperimentResult> adversarial_sweep(ExperimentConfig cfg,
                                                const std::vector<Index>& levels) {
  cfg.kind = ExperimentConfig::Kind::Adversarial;
  std::vector<ExperimentResult> out;
  for (Index t : levels) {
    cfg.adversarial.level = t;
    out.push_back(run_experiment(cfg));
  }
  return out;
}

}  // namespace odsym
