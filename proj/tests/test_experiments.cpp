#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include <borda/borda.hpp>

using namespace borda;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ExperimentConfig parse_config(const std::string& text) {
  std::istringstream is(text);
  return parse_experiment_config(is);
}

// Uniform rows except one perturbed subset; tau[0] = 0.525 under bar1.
PartialRankingModel skewed_example_model() {
  std::vector<double> table(4 * 6, 1.0 / 6.0);
  const std::size_t row = subset_lex_rank(4, {0, 2, 3});
  const double cells[6] = {0.35, 0.10, 0.10, 0.10, 0.15, 0.20};
  for (int j = 0; j < 6; ++j) table[row * 6 + j] = cells[j];
  return PartialRankingModel::from_table(4, 3, std::move(table));
}

}  // namespace

TEST_CASE("config parser fills defaults from a minimal file") {
  const ExperimentConfig cfg = parse_config(
      "# sweep over p\n"
      "n = 5\n"
      "m = 3\n"
      "k = 2\n"
      "r = 10\n"
      "\n"
      "p_grid = 0.2, 0.5  # two grid points\n");
  CHECK(cfg.n == 5);
  CHECK(cfg.m == 3);
  CHECK(cfg.k == 2);
  CHECK(cfg.r == 10);
  REQUIRE(cfg.p_grid.size() == 2);
  CHECK(cfg.p_grid[0] == 0.2);
  CHECK(cfg.p_grid[1] == 0.5);
  CHECK(cfg.model.kind == ModelSpec::Kind::plackett_luce);
  CHECK(cfg.model.weight_name == "w1");
  CHECK(cfg.model.weights.empty());
  CHECK(cfg.model.sigma == 0.0);
  CHECK(cfg.beta_name == "bar1");
  REQUIRE(cfg.estimators.size() == 3);
  CHECK(cfg.estimators[0] == Estimator::borda);
  CHECK(cfg.estimators[1] == Estimator::normalized_borda);
  CHECK(cfg.estimators[2] == Estimator::spectral);
  CHECK(cfg.trials_per_point == 50);
  CHECK(cfg.runs == 20);
  CHECK(cfg.seed == 1);
}

TEST_CASE("config parser reads every key and keeps estimator order") {
  const ExperimentConfig cfg = parse_config(
      "n=6\nm=3\nk=2\nr=4\np_grid=1.0\n"
      "model=noisy_pl\nsigma=0.25\nweights=w2\nbeta=hat\n"
      "estimators=spectral,borda\ntrials_per_point=7\nruns=3\nseed=42\n");
  CHECK(cfg.model.kind == ModelSpec::Kind::noisy_plackett_luce);
  CHECK(cfg.model.sigma == 0.25);
  CHECK(cfg.model.weight_name == "w2");
  CHECK(cfg.beta_name == "hat");
  REQUIRE(cfg.estimators.size() == 2);
  CHECK(cfg.estimators[0] == Estimator::spectral);
  CHECK(cfg.estimators[1] == Estimator::borda);
  CHECK(cfg.trials_per_point == 7);
  CHECK(cfg.runs == 3);
  CHECK(cfg.seed == 42);

  const ExperimentConfig lit = parse_config(
      "n=4\nm=2\nk=1\nr=2\np_grid=0.5\nweights=2,1,3,4.5\n");
  CHECK(lit.model.weight_name.empty());
  const std::vector<double> expected{2.0, 1.0, 3.0, 4.5};
  CHECK(lit.model.weights == expected);
}

TEST_CASE("config parser reports the offending line and key") {
  CHECK_THROWS_WITH(parse_config("n=5\nfoo=1\n"),
                    ContainsSubstring("line 2") && ContainsSubstring("foo"));
  CHECK_THROWS_WITH(parse_config("n=abc\n"), ContainsSubstring("line 1"));
  CHECK_THROWS_WITH(parse_config("n=5\nm=3\nk=2\nr=1\n"),
                    ContainsSubstring("p_grid"));
  CHECK_THROWS_WITH(parse_config("m=3\nk=2\nr=1\np_grid=0.5\n"),
                    ContainsSubstring("'n'"));
  CHECK_THROWS_WITH(parse_config("n=5\nm=3\nk=2\nr=1\np_grid=1.5\n"),
                    ContainsSubstring("(0,1]"));
  CHECK_THROWS_WITH(parse_config("n=5\nm=3\nk=2\nr=1\np_grid=0.5\nweights=1,2\n"),
                    ContainsSubstring("n entries"));
  CHECK_THROWS_WITH(parse_config("just a line\n"), ContainsSubstring("key = value"));
}

TEST_CASE("named weight families") {
  const std::vector<double> w1 = named_weights("w1", 10);
  REQUIRE(w1.size() == 10);
  CHECK(w1.front() == 16.0);
  CHECK(w1.back() == 25.0);
  const std::vector<double> w2 = named_weights("w2", 5);
  for (int i = 0; i < 5; ++i) CHECK_THAT(w2[i], WithinRel(std::pow(1.1, i + 1), 1e-15));
  CHECK_THROWS_AS(named_weights("w3", 5), std::invalid_argument);
}

TEST_CASE("estimator names round trip") {
  for (Estimator e : {Estimator::borda, Estimator::normalized_borda, Estimator::spectral})
    CHECK(parse_estimator(estimator_name(e)) == e);
  const auto two = parse_estimators("spectral, borda");
  REQUIRE(two.size() == 2);
  CHECK(two[0] == Estimator::spectral);
  CHECK(two[1] == Estimator::borda);
  CHECK_THROWS_WITH(parse_estimators("borda,borda"), ContainsSubstring("twice"));
  CHECK_THROWS_AS(parse_estimators("median"), std::invalid_argument);
}

TEST_CASE("observation sampling is seed-deterministic") {
  const auto model = PartialRankingModel::plackett_luce(5, 3, named_weights("w1", 5));
  const ObservationBatch b1 = sample_observations(model, 0.7, 4, 99);
  const ObservationBatch b2 = sample_observations(model, 0.7, 4, 99);
  REQUIRE(b1.size() == b2.size());
  std::ostringstream s1, s2;
  b1.write(s1);
  b2.write(s2);
  CHECK(s1.str() == s2.str());

  const ObservationBatch b3 = sample_observations(model, 0.7, 4, 100);
  std::ostringstream s3;
  b3.write(s3);
  CHECK(s1.str() != s3.str());
}

TEST_CASE("observation sampling honors the thinning rate") {
  const auto model = PartialRankingModel::plackett_luce(5, 3, named_weights("w1", 5));
  CHECK(sample_observations(model, 0.5, 0, 1).size() == 0);
  CHECK(sample_observations(model, 0.0, 4, 1).size() == 0);
  CHECK(sample_observations(model, 1.0, 4, 1).size() == 40);  // C(5,3) * 4
  CHECK_THROWS_AS(sample_observations(model, 1.5, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_observations(model, 0.5, -1, 1), std::invalid_argument);
}

TEST_CASE("tallied scores are unbiased for the associated scores") {
  const auto model = skewed_example_model();
  const ScoreVector beta = score_family("bar1", 3);
  const double rho = 3.0;  // C(3,2)
  const int r = 1, trials = 3000;
  const double p = 0.6;
  double mean = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ObservationBatch batch = sample_observations(model, p, r, mix_seed(5, t));
    mean += borda_tally(batch, beta).scores[0] / (r * p * rho);
  }
  mean /= trials;
  CHECK_THAT(mean, WithinAbs(0.525, 0.03));
}

TEST_CASE("sweeps reproduce byte-identical output") {
  ExperimentConfig cfg;
  cfg.n = 5; cfg.m = 3; cfg.k = 2; cfg.r = 6;
  cfg.p_grid = {0.4, 0.8};
  cfg.trials_per_point = 4;
  cfg.runs = 2;
  cfg.seed = 3;
  const SweepResult r1 = run_sweep(cfg);
  const SweepResult r2 = run_sweep(cfg);
  std::ostringstream raw1, raw2, agg1, agg2;
  write_sweep_raw_csv(r1, raw1);
  write_sweep_raw_csv(r2, raw2);
  write_sweep_agg_csv(r1, agg1);
  write_sweep_agg_csv(r2, agg2);
  CHECK(raw1.str() == raw2.str());
  CHECK(agg1.str() == agg2.str());
  CHECK(r1.ground_truth == r2.ground_truth);

  const auto truth = ground_truth_topk(build_model(cfg), score_family("bar1", 3), 2);
  CHECK(r1.ground_truth == truth.items);
  CHECK(r1.raw.size() == 2 * 3 * 2);
  CHECK(r1.aggregates.size() == 2 * 3);
}

TEST_CASE("sweep CSV schemas") {
  ExperimentConfig cfg;
  cfg.n = 4; cfg.m = 2; cfg.k = 1; cfg.r = 3;
  cfg.p_grid = {0.4};
  cfg.trials_per_point = 2;
  cfg.runs = 2;
  const SweepResult res = run_sweep(cfg);
  std::ostringstream raw, agg;
  write_sweep_raw_csv(res, raw);
  write_sweep_agg_csv(res, agg);

  std::istringstream raw_in(raw.str());
  std::string line;
  REQUIRE(std::getline(raw_in, line));
  CHECK(line == "p,estimator,run,error_rate");
  REQUIRE(std::getline(raw_in, line));
  CHECK(line.substr(0, 12) == "0.4,borda,0,");

  std::istringstream agg_in(agg.str());
  REQUIRE(std::getline(agg_in, line));
  CHECK(line == "p,estimator,mean_error,std_error,relative_error");
  int rows = 0;
  while (std::getline(agg_in, line)) {
    ++rows;
    // Not a perturbed-model sweep, so the relative column stays empty.
    CHECK(line.back() == ',');
  }
  CHECK(rows == 3);
  for (const SweepAggregate& a : res.aggregates) CHECK_FALSE(a.has_relative);
}

TEST_CASE("failure frequency stays under a sharp non-trivial bound") {
  const auto model = PartialRankingModel::adversarial(8, 3, 2, 0.9, 7);
  const ScoreVector beta = score_family("bar1", 3);
  const AssociatedScores scores = associated_scores(model, beta);
  const double delta = delta_gap(scores, 2);
  // Back out the largest alpha the gap still clears (shaved a hair so the
  // membership test is robust to rounding).
  const double alpha =
      0.999 * delta * std::sqrt(200 * 0.3 * scores.rho / std::log(8.0));
  const Theorem1Check check =
      theorem1_empirical_check(model, beta, 2, 200, 0.3, alpha, 2000, 77);
  REQUIRE(check.in_family);
  CHECK_FALSE(check.trivial);
  CHECK(check.bound.clamped < 1e-10);
  CHECK(check.empirical == 0.0);
  CHECK(check.pass);
  CHECK_THAT(check.delta_k, WithinRel(delta, 1e-15));
}

TEST_CASE("perturbed-model sweeps are reproducible and self-consistent") {
  ExperimentConfig cfg;
  cfg.n = 6; cfg.m = 3; cfg.k = 2; cfg.r = 5;
  cfg.p_grid = {0.6};
  cfg.model.kind = ModelSpec::Kind::noisy_plackett_luce;
  cfg.model.sigma = 0.3;
  cfg.trials_per_point = 3;
  cfg.runs = 2;
  cfg.seed = 11;
  const SweepResult r1 = run_sweep(cfg);
  const SweepResult r2 = run_sweep(cfg);
  std::ostringstream a1, a2;
  write_sweep_agg_csv(r1, a1);
  write_sweep_agg_csv(r2, a2);
  CHECK(a1.str() == a2.str());

  // The perturbation is part of the model build, so the ground truth is the
  // perturbed model's own associated-score ranking.
  const auto truth = ground_truth_topk(build_model(cfg), score_family("bar1", 3), 2);
  CHECK(r1.ground_truth == truth.items);
  // Relative column appears whenever the spectral baseline error is nonzero.
  for (const SweepAggregate& a : r1.aggregates) {
    if (!a.has_relative) continue;
    CHECK(a.relative_error >= 0.0);
  }
}
