#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <borda/borda.hpp>

using namespace borda;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

PreflibDataset load_soc(const std::string& name) {
  std::ifstream f(std::string(FIXTURE_DIR) + "/" + name);
  REQUIRE(f.good());
  return parse_preflib_soc(f);
}

PreflibDataset parse_soc(const std::string& text) {
  std::istringstream is(text);
  return parse_preflib_soc(is);
}

std::string serialize(const ObservationBatch& batch) {
  std::ostringstream os;
  batch.write(os);
  return os.str();
}

}  // namespace

TEST_CASE("strict-order file with names and multiplicities") {
  const PreflibDataset ds = load_soc("tiny3.soc");
  CHECK(ds.n == 3);
  const std::vector<std::string> names{"red", "green", "blue"};
  CHECK(ds.names == names);
  const std::vector<long long> counts{2, 1};
  CHECK(ds.counts == counts);
  CHECK(ds.total() == 3);
  REQUIRE(ds.rankings.size() == 2);
  const Ranking first{0, 1, 2}, second{2, 1, 0};
  CHECK(ds.rankings[0] == first);
  CHECK(ds.rankings[1] == second);

  const FullRankingTruth truth = preflib_ground_truth(ds, score_family("bar1", 3));
  CHECK_THAT(truth.scores[0], WithinAbs(2.0, 1e-15));
  CHECK_THAT(truth.scores[1], WithinAbs(1.5, 1e-15));
  CHECK_THAT(truth.scores[2], WithinAbs(1.0, 1e-15));
  CHECK(truth.order == first);
  CHECK_FALSE(truth.tie_broken);
}

TEST_CASE("full-ranking ties are flagged") {
  const PreflibDataset ds = load_soc("tie2.soc");
  const FullRankingTruth truth = preflib_ground_truth(ds, score_family("bar1", 2));
  CHECK(truth.scores[0] == truth.scores[1]);
  CHECK(truth.tie_broken);
  CHECK_THROWS_AS(preflib_ground_truth(ds, score_family("bar1", 3)),
                  std::invalid_argument);
}

TEST_CASE("strict-order parser pinpoints malformed lines") {
  CHECK_THROWS_WITH(parse_soc("3\n1: 1,1,2\n"),
                    ContainsSubstring("line 2") && ContainsSubstring("repeats"));
  CHECK_THROWS_WITH(parse_soc("3\n2: 1,2\n"),
                    ContainsSubstring("line 2") && ContainsSubstring("expected 3"));
  CHECK_THROWS_WITH(parse_soc("0: 1,2\n"),
                    ContainsSubstring("line 1") && ContainsSubstring("positive"));
  CHECK_THROWS_WITH(parse_soc("2\n1: 1,3\n"), ContainsSubstring("out of range"));
  CHECK_THROWS_WITH(parse_soc("# NUMBER ALTERNATIVES: 3\n2\n"),
                    ContainsSubstring("conflicting"));
  CHECK_THROWS_WITH(parse_soc(""), ContainsSubstring("no alternative count"));
  CHECK_THROWS_WITH(parse_soc("3\n"), ContainsSubstring("no rankings"));
  CHECK_THROWS_WITH(parse_soc("# ALTERNATIVE NAME 5: e\n# NUMBER ALTERNATIVES: 3\n"),
                    ContainsSubstring("exceeds"));
}

TEST_CASE("synthetic reference collection parses to the expected census") {
  const PreflibDataset ds = load_soc("synthetic10.soc");
  CHECK(ds.n == 10);
  CHECK(ds.total() == 5000);
  CHECK(ds.rankings.size() == 4974);
  const FullRankingTruth truth = preflib_ground_truth(ds, score_family("bar1", 10));
  Ranking expected(10);
  std::iota(expected.begin(), expected.end(), 0);
  CHECK(truth.order == expected);
  CHECK_FALSE(truth.tie_broken);
}

TEST_CASE("subset extraction induces orders from the sampled votes") {
  const PreflibDataset ds = load_soc("tiny3.soc");

  const ObservationBatch full = extract_mwise(ds, 3, 3, 7);
  REQUIRE(full.size() == 3);
  CHECK(full.n == 3);
  CHECK(full.m == 3);
  CHECK(full.r == 3);
  CHECK(full.synthetic());
  // Drawing all three voters without replacement recovers the vote multiset.
  int up = 0, down = 0;
  const Ranking ascending{0, 1, 2}, descending{2, 1, 0};
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto v = full.ranking(i);
    const Ranking got(v.begin(), v.end());
    if (got == ascending) ++up;
    if (got == descending) ++down;
  }
  CHECK(up == 2);
  CHECK(down == 1);

  const ObservationBatch pairs = extract_mwise(ds, 2, 3, 7);
  REQUIRE(pairs.size() == 3);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto v = pairs.ranking(i);
    CHECK(v[0] != v[1]);
    CHECK(v[0] >= 0);
    CHECK(v[0] < 3);
  }

  CHECK(serialize(extract_mwise(ds, 2, 3, 7)) == serialize(pairs));
  CHECK(serialize(extract_mwise(ds, 2, 3, 8)) != serialize(pairs));

  CHECK_THROWS_AS(extract_mwise(ds, 1, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(extract_mwise(ds, 4, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(extract_mwise(ds, 2, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(extract_mwise(ds, 2, 0, 1), std::invalid_argument);
}

TEST_CASE("exhaustive full-width extraction reproduces the reference order") {
  const PreflibDataset ds = load_soc("synthetic10.soc");
  const ObservationBatch batch = extract_mwise(ds, 10, 5000, 1);
  REQUIRE(batch.size() == 5000);
  const TallyResult tally = borda_tally(batch, score_family("bar1", 10));
  Ranking order(10);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (tally.scores[a] != tally.scores[b]) return tally.scores[a] > tally.scores[b];
    return a < b;
  });
  CHECK(order == preflib_ground_truth(ds, score_family("bar1", 10)).order);
}

TEST_CASE("batch-size sweep over a reference collection") {
  const PreflibDataset ds = load_soc("synthetic10.soc");
  RealDataConfig cfg;
  cfg.m = 7;
  cfg.k = 3;
  cfg.batch_sizes = {200, 400};
  cfg.estimators = {Estimator::borda, Estimator::spectral};
  cfg.trials_per_point = 2;
  cfg.runs = 2;
  cfg.seed = 5;
  const RealDataResult r1 = real_data_experiment(ds, cfg);
  const ItemSet top3{0, 1, 2};
  CHECK(r1.ground_truth == top3);
  CHECK_FALSE(r1.truth_tie_broken);
  CHECK(r1.raw.size() == 8);
  CHECK(r1.aggregates.size() == 4);

  const RealDataResult r2 = real_data_experiment(ds, cfg);
  std::ostringstream raw1, raw2, agg1, agg2;
  write_real_data_raw_csv(r1, raw1);
  write_real_data_raw_csv(r2, raw2);
  write_real_data_agg_csv(r1, agg1);
  write_real_data_agg_csv(r2, agg2);
  CHECK(raw1.str() == raw2.str());
  CHECK(agg1.str() == agg2.str());

  std::istringstream raw_in(raw1.str());
  std::string line;
  REQUIRE(std::getline(raw_in, line));
  CHECK(line == "batch_size,estimator,run,error_rate");
  REQUIRE(std::getline(raw_in, line));
  CHECK(line.substr(0, 4) == "200,");
  std::istringstream agg_in(agg1.str());
  REQUIRE(std::getline(agg_in, line));
  CHECK(line == "batch_size,estimator,mean_error,std_error,relative_error");

  RealDataConfig bad = cfg;
  bad.batch_sizes = {6000};
  CHECK_THROWS_AS(real_data_experiment(ds, bad), std::invalid_argument);
  bad.batch_sizes = {};
  CHECK_THROWS_AS(real_data_experiment(ds, bad), std::invalid_argument);
  bad = cfg;
  bad.k = 0;
  CHECK_THROWS_AS(real_data_experiment(ds, bad), std::invalid_argument);
}
