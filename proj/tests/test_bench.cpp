#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "odsym/assignment.hpp"
#include "odsym/bench.hpp"
#include "support.hpp"

using namespace odsym;
using namespace odsym::testing;

namespace {

bool same_matrix(const SparseSymMatrix& x, const SparseSymMatrix& y) {
  if (x.size() != y.size() || x.upper().size() != y.upper().size()) return false;
  for (std::size_t e = 0; e < x.upper().size(); ++e) {
    const auto &p = x.upper()[e], &q = y.upper()[e];
    if (p.row != q.row || p.col != q.col || p.value != q.value) return false;
  }
  return true;
}

FactorMatrix swap_columns(const FactorMatrix& h, Index c, Index d) {
  FactorMatrix out = h;
  for (Index i = 0; i < h.rows(); ++i) std::swap(out(i, c), out(i, d));
  return out;
}

}  // namespace

TEST_CASE("clique specs parse shorthand and lists") {
  CHECK(CliqueSpec::parse("10,10,5").sizes == std::vector<Index>{10, 10, 5});
  CHECK(CliqueSpec::parse("10x10").sizes == std::vector<Index>(10, 10));
  CHECK(CliqueSpec::parse("2x50,5").sizes == std::vector<Index>{50, 50, 5});
  CHECK(CliqueSpec::parse("3X2").n() == 6);
  for (const char* bad : {"", "0", "10,,5", "x5", "2x", "a", "1.5", "-3", "10,0"}) {
    CHECK_THROWS_AS(CliqueSpec::parse(bad), PreconditionError);
  }
}

TEST_CASE("clique benchmark structure") {
  auto two = make_cliques(CliqueSpec{{2}});
  CHECK(two.a.size() == 2);
  CHECK(two.a.upper().size() == 3);
  CHECK(two.truth == factor_from_rows({{1}, {1}}));

  auto big = make_cliques(CliqueSpec::parse("10x10"));
  CHECK(big.a.size() == 100);
  CHECK(big.truth.cols() == 10);
  for (Index i = 0; i < 100; ++i) {
    for (Index j = 0; j < 100; ++j) CHECK(big.a(i, j) == (i / 10 == j / 10 ? 1.0 : 0.0));
  }
  for (const char* spec : {"10x10", "4,6,8", "1,1", "2x50,5"}) {
    auto b = make_cliques(CliqueSpec::parse(spec));
    CHECK(od_norm(b.a, b.truth, Norm::L1) == 0.0);
    CHECK(od_norm(b.a, b.truth, Norm::L2) == 0.0);
  }
  CHECK_THROWS_AS(make_cliques(CliqueSpec{}), PreconditionError);
}

TEST_CASE("flip noise limits") {
  auto b = make_cliques(CliqueSpec::parse("3,4"));
  CHECK(same_matrix(add_flip_noise(b.a, 0.0, 1), b.a));
  auto flipped = add_flip_noise(b.a, 1.0, 1);
  for (Index i = 0; i < 7; ++i) {
    for (Index j = 0; j < 7; ++j) CHECK(flipped(i, j) == 1.0 - b.a(i, j));
  }
  CHECK_THROWS_AS(add_flip_noise(b.a, -0.1, 1), PreconditionError);
  CHECK_THROWS_AS(add_flip_noise(b.a, 1.5, 1), PreconditionError);
  auto weighted = SparseSymMatrix::from_triplets(2, {{0, 1, 0.5}});
  CHECK_THROWS_AS(add_flip_noise(weighted, 0.1, 1), PreconditionError);
}

TEST_CASE("flip noise follows binomial statistics and is seed-deterministic") {
  auto b = make_cliques(CliqueSpec::parse("10x10"));
  const double cells = 100.0 * 101.0 / 2.0;
  const double mean = 0.1 * cells, sigma = std::sqrt(cells * 0.1 * 0.9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto noisy = add_flip_noise(b.a, 0.1, seed);
    CHECK(same_matrix(noisy, add_flip_noise(b.a, 0.1, seed)));
    double flips = 0.0;
    for (Index i = 0; i < 100; ++i) {
      for (Index j = i; j < 100; ++j) flips += noisy(i, j) != b.a(i, j);
    }
    CHECK(std::abs(flips - mean) <= 3.0 * sigma);
  }
  CHECK(!same_matrix(add_flip_noise(b.a, 0.1, 1), add_flip_noise(b.a, 0.1, 2)));
}

TEST_CASE("adversarial benchmark structure") {
  SUBCASE("no links keeps the blocks intact") {
    auto b = make_adversarial(AdversarialSpec{10, 10, 0}, 3);
    CHECK(b.a.size() == 30);
    CHECK(b.truth.cols() == 12);
    CHECK(od_norm(b.a, b.truth, Norm::L1) == 0.0);
    CHECK(accuracy(b.truth, b.truth) == 1.0);
    for (Index e = 20; e < 30; ++e) CHECK(b.a.diagonal(e) == 1.0);
  }
  SUBCASE("each singleton links to `level` distinct members of each clique") {
    for (Index t : {1, 4, 7}) {
      auto b = make_adversarial(AdversarialSpec{10, 10, t}, 5);
      for (Index e = 20; e < 30; ++e) {
        Index first = 0, second = 0;
        for (Index i = 0; i < 10; ++i) first += b.a(e, i) == 1.0;
        for (Index i = 10; i < 20; ++i) second += b.a(e, i) == 1.0;
        CHECK(first == t);
        CHECK(second == t);
        for (Index f = 20; f < 30; ++f) {
          if (f != e) CHECK(b.a(e, f) == 0.0);
        }
      }
    }
  }
  SUBCASE("full saturation") {
    auto b = make_adversarial(AdversarialSpec{10, 10, 10}, 7);
    for (Index e = 20; e < 30; ++e) {
      for (Index i = 0; i < 20; ++i) CHECK(b.a(e, i) == 1.0);
    }
  }
  SUBCASE("determinism and validation") {
    CHECK(same_matrix(make_adversarial(AdversarialSpec{10, 10, 3}, 9).a,
                      make_adversarial(AdversarialSpec{10, 10, 3}, 9).a));
    CHECK_THROWS_AS(make_adversarial(AdversarialSpec{10, 10, 11}, 1), PreconditionError);
    CHECK_THROWS_AS(make_adversarial(AdversarialSpec{0, 10, 0}, 1), PreconditionError);
  }
}

TEST_CASE("accuracy examples") {
  auto truth = factor_from_rows({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  CHECK(accuracy(truth, truth) == 1.0);
  CHECK(accuracy(swap_columns(truth, 0, 1), truth) == 1.0);
  auto moved = factor_from_rows({{1, 0}, {0, 1}, {0, 1}, {0, 1}});
  CHECK(accuracy(moved, truth) == doctest::Approx(0.5));
  CHECK(accuracy(moved, truth, Readout::Raw) == doctest::Approx(0.5));
}

TEST_CASE("raw and hardened readouts") {
  auto truth = factor_from_rows({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  auto soft = factor_from_rows({{0.9, 0.1}, {0.6, 0.4}, {0.2, 0.7}, {0, 0.5}});
  CHECK(harden(soft) == truth);
  CHECK(accuracy(soft, truth, Readout::Hardened) == 1.0);
  // column errors 0.01+0.16+0.04+0 and 0.01+0.16+0.09+0.25
  CHECK(accuracy(soft, truth, Readout::Raw) == doctest::Approx(1.0 - std::sqrt(0.72 / 8.0)));
  // ties and all-zero rows go to the lowest column
  CHECK(harden(factor_from_rows({{0, 0}, {2, 2}})) == factor_from_rows({{1, 0}, {1, 0}}));
  // far-off raw factors clamp at zero
  auto huge = factor_from_rows({{50, 50}, {50, 50}, {50, 50}, {50, 50}});
  CHECK(accuracy(huge, truth, Readout::Raw) == 0.0);
}

TEST_CASE("accuracy preconditions") {
  auto truth = factor_from_rows({{1, 0}, {0, 1}});
  CHECK_THROWS_AS(accuracy(FactorMatrix(3, 2), truth), PreconditionError);
  CHECK_THROWS_AS(accuracy(truth, factor_from_rows({{1, 1}, {0, 1}})), PreconditionError);
  CHECK_THROWS_AS(accuracy(truth, factor_from_rows({{0, 0}, {0, 1}})), PreconditionError);
  CHECK_THROWS_AS(accuracy(truth, factor_from_rows({{0.5, 0.5}, {0, 1}})), PreconditionError);
}

TEST_CASE("accuracy is invariant to column permutations of H") {
  Rng rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    const Index r = 1 + uniform_below(rng, 6), n = r + uniform_below(rng, 20);
    FactorMatrix truth(n, r);
    for (Index i = 0; i < n; ++i) truth(i, i < r ? i : uniform_below(rng, r)) = 1.0;
    std::vector<Index> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (Readout ro : {Readout::Raw, Readout::Hardened}) {
      // Hardening breaks row ties by column index, so keep rows tie-free there.
      auto h = random_factor(n, r, rng, ro == Readout::Raw ? 0.5 : 0.0);
      FactorMatrix ph(n, r);
      for (Index l = 0; l < r; ++l) {
        for (Index i = 0; i < n; ++i) ph(i, perm[l]) = h(i, l);
      }
      const double x = accuracy(h, truth, ro), y = accuracy(ph, truth, ro);
      CHECK(x == doctest::Approx(y).epsilon(1e-12));
      CHECK((x >= 0.0 && x <= 1.0));
    }
  }
}

TEST_CASE("assignment solver matches brute force over permutations") {
  Rng rng(82);
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = 1 + uniform_below(rng, 7);
    std::vector<double> cost(r * r);
    for (auto& c : cost) c = uniform_below(rng, 4) == 0 ? 1.0 : 10.0 * uniform01(rng);
    const auto match = solve_assignment(cost, r);
    std::vector<Index> used(match);
    std::sort(used.begin(), used.end());
    for (Index i = 0; i < r; ++i) CHECK(used[i] == i);
    double got = 0.0;
    for (Index i = 0; i < r; ++i) got += cost[i * r + match[i]];

    std::vector<Index> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double s = 0.0;
      for (Index i = 0; i < r; ++i) s += cost[i * r + perm[i]];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == doctest::Approx(best).epsilon(1e-12));
  }
  CHECK(solve_assignment(std::vector<double>{}, 0).empty());
  CHECK_THROWS_AS(solve_assignment(std::vector<double>{1, 2}, 2), PreconditionError);
}

TEST_CASE("experiments are seed-deterministic and thread-independent") {
  ExperimentConfig cfg;
  cfg.cliques = CliqueSpec::parse("4x5");
  cfg.delta = 0.1;
  cfg.trials = 6;
  cfg.seed = 17;
  auto one = run_experiment(cfg);
  cfg.threads = 3;
  auto three = run_experiment(cfg);
  REQUIRE(one.trials.size() == 6);
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(one.trials[t].accuracy == three.trials[t].accuracy);
    CHECK(one.trials[t].final_objective == three.trials[t].final_objective);
  }
  CHECK(one.mean == three.mean);
  double mean = 0.0;
  for (const auto& t : one.trials) mean += t.accuracy / 6.0;
  CHECK(one.mean == doctest::Approx(mean));
  CHECK(one.stddev >= 0.0);
}

TEST_CASE("noiseless cliques are recovered by every loss and path") {
  for (Norm loss : {Norm::L1, Norm::L2}) {
    for (SolverPath path : {SolverPath::ResidualFree, SolverPath::Residual}) {
      ExperimentConfig cfg;
      cfg.loss = loss;
      cfg.path = path;
      cfg.trials = 2;
      for (const char* spec : {"10x10", "2x50", "10,10,5"}) {
        cfg.cliques = CliqueSpec::parse(spec);
        auto res = run_experiment(cfg);
        CHECK(res.mean == 1.0);
        CHECK(res.stddev == 0.0);
      }
    }
  }
}

TEST_CASE("experiment readout defaults follow the benchmark") {
  ExperimentConfig cfg;
  CHECK(cfg.effective_readout() == Readout::Raw);
  cfg.kind = ExperimentConfig::Kind::Adversarial;
  CHECK(cfg.effective_readout() == Readout::Hardened);
  cfg.readout = Readout::Raw;
  CHECK(cfg.effective_readout() == Readout::Raw);
}

TEST_CASE("sweeps run one experiment per value") {
  ExperimentConfig cfg;
  cfg.cliques = CliqueSpec::parse("3x4");
  cfg.trials = 2;
  auto noise = noise_sweep(cfg, {0.0, 0.2});
  REQUIRE(noise.size() == 2);
  CHECK(noise[1].config.delta == 0.2);
  auto adv = adversarial_sweep(cfg, {0, 2});
  REQUIRE(adv.size() == 2);
  CHECK(adv[1].config.adversarial.level == 2);
  CHECK(adv[1].config.kind == ExperimentConfig::Kind::Adversarial);

  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg), PreconditionError);
  cfg.trials = 1;
  CHECK_THROWS_AS(adversarial_sweep(cfg, {11}), PreconditionError);
}

TEST_CASE("noisy clique accuracy is close to the published figures") {
  ExperimentConfig cfg;
  cfg.delta = 0.1;
  cfg.loss = Norm::L1;
  CHECK(run_experiment(cfg).mean >= 0.95);
  cfg.loss = Norm::L2;
  const double l2 = run_experiment(cfg).mean;
  CHECK((l2 >= 0.85 && l2 <= 0.95));
}
