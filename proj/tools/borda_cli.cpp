// Command-line frontend. Subcommands:
//
//   aggregate       score an observation batch and report the top-k set
//   bounds          closed-form guarantee report for one parameter point
//   gap-curve       achievability/converse alpha curve over m, as CSV
//   simulate        seeded Monte Carlo sweep driven by a config file
//   preflib         ingest a PrefLib .soc file; summarize or run the
//                   batch-size recovery experiment
//   kl-check        exact KL divergence between two models, with the
//                   closed-form bound in the two-block construction
//   variance-check  exact score-difference variance sum against its bound
//
// All item indices on the command line and in printed output are 1-based.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <borda/borda.hpp>

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return is;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::string join_one_based(const std::vector<int>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(items[i] + 1);
  }
  return out;
}

const char* yn(bool b) { return b ? "true" : "false"; }

void setup_aggregate(CLI::App& app) {
  auto* sub = app.add_subcommand("aggregate",
                                 "Score an observation batch and report the top-k set");
  struct Opts {
    std::string input, beta = "bar1", estimator = "borda", scores_csv;
    int k = 1;
  };
  auto opts = std::make_shared<Opts>();
  sub->add_option("--input", opts->input, "observation batch file")->required();
  sub->add_option("--k", opts->k, "size of the selected set")->required();
  sub->add_option("--beta", opts->beta, "score family name (default bar1)");
  sub->add_option("--estimator", opts->estimator,
                  "borda | normalized_borda | spectral (default borda)");
  sub->add_option("--scores-csv", opts->scores_csv, "write per-item scores to this file");
  sub->callback([opts] {
    auto is = open_input(opts->input);
    const borda::ObservationBatch batch = borda::ObservationBatch::read(is);
    const borda::Estimator est = borda::parse_estimator(opts->estimator);
    borda::TallyResult tally;
    switch (est) {
      case borda::Estimator::borda:
        tally = borda::borda_tally(batch, borda::score_family(opts->beta, batch.m));
        break;
      case borda::Estimator::normalized_borda:
        tally = borda::normalized_borda_tally(batch, borda::score_family(opts->beta, batch.m));
        break;
      case borda::Estimator::spectral:
        tally.scores = borda::rank_centrality_scores(batch);
        break;
    }
    const borda::TopKSelection sel = borda::top_k(tally, opts->k);
    std::cout << "top_k: " << join_one_based(sel.items) << '\n'
              << "tie_broken: " << yn(sel.tie_broken) << '\n';
    if (!opts->scores_csv.empty()) {
      auto os = open_output(opts->scores_csv);
      borda::write_tally_csv(tally, os);
    }
  });
}

void setup_bounds(CLI::App& app) {
  auto* sub = app.add_subcommand("bounds",
                                 "Closed-form guarantee report for one parameter point");
  struct Opts {
    int n = 0, m = 0, k = 0, r = 1, h = 0;
    double p = 1.0, alpha = 0.0, nu1 = 0.5, nu2 = 0.5;
    std::string beta = "bar1";
  };
  auto opts = std::make_shared<Opts>();
  sub->add_option("--n", opts->n, "number of items")->required();
  sub->add_option("--m", opts->m, "subset size")->required();
  sub->add_option("--k", opts->k, "selection size")->required();
  sub->add_option("--r", opts->r, "observation rounds (default 1)");
  sub->add_option("--p", opts->p, "observation probability (default 1)");
  sub->add_option("--alpha", opts->alpha, "gap scale alpha (default 0)")->required();
  sub->add_option("--beta", opts->beta, "score family name (default bar1)");
  sub->add_option("--radius", opts->h, "Hamming slack h for the partial-recovery bounds (default 0)");
  sub->add_option("--nu1", opts->nu1, "partial-recovery exponent parameter (default 0.5)");
  sub->add_option("--nu2", opts->nu2, "partial-recovery slack parameter (default 0.5)");
  sub->callback([opts] {
    using borda::detail::fmt_g17;
    const borda::ScoreVector beta = borda::score_family(opts->beta, opts->m);
    const borda::BoundReport rep = borda::make_bound_report(
        opts->n, opts->m, opts->k, opts->r, opts->p, opts->alpha, beta);
    std::cout << "n=" << rep.n << "\nm=" << rep.m << "\nk=" << rep.k << "\nr=" << rep.r
              << "\np=" << fmt_g17(rep.p) << "\nalpha=" << fmt_g17(rep.alpha)
              << "\nrho=" << fmt_g17(rep.rho)
              << "\nregime=" << borda::regime_name(rep.t1.regime)
              << "\np0=" << fmt_g17(rep.t1.p0)
              << "\nexponent=" << fmt_g17(rep.t1.exponent)
              << "\nbound_raw=" << fmt_g17(rep.t1.raw)
              << "\nbound=" << fmt_g17(rep.t1.clamped) << '\n';
    if (rep.has_gh) {
      std::cout << "q=" << rep.gh.q << "\ng=" << fmt_g17(rep.gh.g)
                << "\nh=" << fmt_g17(rep.gh.h)
                << "\nalpha_bar=" << fmt_g17(rep.alpha_bar) << '\n';
    } else {
      std::cout << "q=n/a\ng=n/a\nh=n/a\nalpha_bar=n/a (needs 2k <= n)\n";
    }
    if (opts->h > 0) {
      const borda::TheoremBound t3 = borda::theorem3_upper(
          opts->n, opts->m, opts->k, opts->h, opts->p, opts->alpha, beta.last());
      std::cout << "partial_bound_raw=" << fmt_g17(t3.raw)
                << "\npartial_bound=" << fmt_g17(t3.clamped) << '\n';
      try {
        const double a4 = borda::theorem4_alpha_bar(opts->n, opts->m, opts->k, opts->h,
                                                    beta, opts->nu1, opts->nu2);
        std::cout << "partial_alpha_bar=" << fmt_g17(a4) << '\n';
      } catch (const std::invalid_argument& e) {
        std::cout << "partial_alpha_bar=n/a (" << e.what() << ")\n";
      }
    }
  });
}

void setup_gap_curve(CLI::App& app) {
  auto* sub = app.add_subcommand("gap-curve",
                                 "Achievability/converse alpha curve over m, as CSV");
  struct Opts {
    int n = 0, k = 0, m_min = 2, m_max = 0;
    double p = 1.0, target = 14.0;
    std::string output;
  };
  auto opts = std::make_shared<Opts>();
  sub->add_option("--n", opts->n, "number of items")->required();
  sub->add_option("--k", opts->k, "selection size")->required();
  sub->add_option("--p", opts->p, "observation probability")->required();
  sub->add_option("--m-min", opts->m_min, "smallest subset size (default 2)");
  sub->add_option("--m-max", opts->m_max, "largest subset size")->required();
  sub->add_option("--target-exponent", opts->target,
                  "polynomial failure exponent the upper bound must hit (default 14)");
  sub->add_option("--output", opts->output, "CSV destination (default stdout)");
  sub->callback([opts] {
    const auto rows = borda::bound_gap_curve(opts->n, opts->k, opts->p, opts->m_min,
                                             opts->m_max, opts->target);
    if (opts->output.empty()) {
      borda::write_gap_curve_csv(rows, std::cout);
    } else {
      auto os = open_output(opts->output);
      borda::write_gap_curve_csv(rows, os);
    }
  });
}

void setup_simulate(CLI::App& app) {
  auto* sub = app.add_subcommand("simulate",
                                 "Seeded Monte Carlo sweep driven by a config file");
  struct Opts {
    std::string config, raw_csv, agg_csv;
    std::uint64_t seed = 0;
  };
  auto opts = std::make_shared<Opts>();
  sub->add_option("--config", opts->config, "key = value config file")->required();
  sub->add_option("--raw-csv", opts->raw_csv, "write per-run error rates to this file");
  sub->add_option("--agg-csv", opts->agg_csv,
                  "write aggregated error rates to this file (default stdout)");
  auto* seed_opt = sub->add_option("--seed", opts->seed, "override the config seed");
  sub->callback([opts, seed_opt] {
    auto is = open_input(opts->config);
    borda::ExperimentConfig cfg = borda::parse_experiment_config(is);
    if (seed_opt->count()) cfg.seed = opts->seed;
    const borda::SweepResult result = borda::run_sweep(cfg);
    std::cout << "ground_truth: " << join_one_based(result.ground_truth) << '\n'
              << "truth_tie_broken: " << yn(result.truth_tie_broken) << '\n'
              << "spectral_failures: " << result.spectral_failures << '\n';
    if (!opts->raw_csv.empty()) {
      auto os = open_output(opts->raw_csv);
      borda::write_sweep_raw_csv(result, os);
    }
    if (opts->agg_csv.empty()) {
      borda::write_sweep_agg_csv(result, std::cout);
    } else {
      auto os = open_output(opts->agg_csv);
      borda::write_sweep_agg_csv(result, os);
    }
  });
}

void setup_preflib(CLI::App& app) {
  auto* sub = app.add_subcommand(
      "preflib", "Ingest a PrefLib .soc file; summarize or run the recovery experiment");
  struct Opts {
    std::string input, batch_sizes, beta = "bar1";
    std::string estimators = "borda,normalized_borda,spectral";
    std::string raw_csv, agg_csv;
    int m = 0, k = 0, trials = 10, runs = 10;
    std::uint64_t seed = 1;
  };
  auto opts = std::make_shared<Opts>();
  sub->add_option("--input", opts->input, "PrefLib .soc file")->required();
  sub->add_option("--m", opts->m, "subset size for extracted observations");
  sub->add_option("--k", opts->k, "selection size");
  sub->add_option("--batch-sizes", opts->batch_sizes,
                  "comma list of vote counts to draw; omit for a dataset summary");
  sub->add_option("--estimators", opts->estimators, "comma list (default all three)");
  sub->add_option("--beta", opts->beta, "score family for the estimators (default bar1)");
  sub->add_option("--trials", opts->trials, "trials per run (default 10)");
  sub->add_option("--runs", opts->runs, "runs per batch size (default 10)");
  sub->add_option("--seed", opts->seed, "root seed (default 1)");
  sub->add_option("--raw-csv", opts->raw_csv, "write per-run error rates to this file");
  sub->add_option("--agg-csv", opts->agg_csv,
                  "write aggregated error rates to this file (default stdout)");
  sub->callback([opts] {
    auto is = open_input(opts->input);
    const borda::PreflibDataset ds = borda::parse_preflib_soc(is);
    std::cout << "alternatives: " << ds.n << '\n'
              << "votes: " << ds.total() << '\n'
              << "distinct_rankings: " << ds.rankings.size() << '\n';
    if (opts->batch_sizes.empty()) {
      const borda::FullRankingTruth truth =
          borda::preflib_ground_truth(ds, borda::score_family("bar1", ds.n));
      std::cout << "borda_order: " << join_one_based(truth.order) << '\n'
                << "tie_broken: " << yn(truth.tie_broken) << '\n';
      return;
    }
    borda::RealDataConfig cfg;
    cfg.m = opts->m;
    cfg.k = opts->k;
    for (const std::string& part : borda::detail::split(opts->batch_sizes, ','))
      cfg.batch_sizes.push_back(borda::detail::parse_int(borda::detail::trim(part)));
    cfg.estimators = borda::parse_estimators(opts->estimators);
    cfg.beta_name = opts->beta;
    cfg.trials_per_point = opts->trials;
    cfg.runs = opts->runs;
    cfg.seed = opts->seed;
    const borda::RealDataResult result = borda::real_data_experiment(ds, cfg);
    std::cout << "ground_truth: " << join_one_based(result.ground_truth) << '\n'
              << "truth_tie_broken: " << yn(result.truth_tie_broken) << '\n'
              << "spectral_failures: " << result.spectral_failures << '\n';
    if (!opts->raw_csv.empty()) {
      auto os = open_output(opts->raw_csv);
      borda::write_real_data_raw_csv(result, os);
    }
    if (opts->agg_csv.empty()) {
      borda::write_real_data_agg_csv(result, std::cout);
    } else {
      auto os = open_output(opts->agg_csv);
      borda::write_real_data_agg_csv(result, os);
    }
  });
}

void setup_kl_check(CLI::App& app) {
  auto* sub = app.add_subcommand(
      "kl-check", "Exact KL divergence between two models, with the two-block bound");
  struct Opts {
    std::string model_a, model_b, dump_a, dump_b;
    int n = 0, m = 0, k = 0, top_a = 0, top_b = 0, r = 1;
    double delta = 0.0, p = 1.0;
  };
  auto opts = std::make_shared<Opts>();
  sub->add_option("--model-a", opts->model_a, "model file (file mode)");
  sub->add_option("--model-b", opts->model_b, "model file (file mode)");
  sub->add_option("--n", opts->n, "items (construct mode)");
  sub->add_option("--m", opts->m, "subset size (construct mode)");
  sub->add_option("--k", opts->k, "selection size (construct mode)");
  sub->add_option("--delta", opts->delta, "gap parameter in [0,1) (construct mode)");
  sub->add_option("--top-a", opts->top_a, "planted top item of model A, 1-based (default k)");
  sub->add_option("--top-b", opts->top_b, "planted top item of model B, 1-based (default n)");
  sub->add_option("--r", opts->r, "observation rounds (default 1)");
  sub->add_option("--p", opts->p, "observation probability (default 1)");
  sub->add_option("--dump-a", opts->dump_a, "write model A's table to this file");
  sub->add_option("--dump-b", opts->dump_b, "write model B's table to this file");
  sub->callback([opts] {
    using borda::detail::fmt_g17;
    const bool file_mode = !opts->model_a.empty() || !opts->model_b.empty();
    std::optional<borda::PartialRankingModel> a, b;
    if (file_mode) {
      if (opts->model_a.empty() || opts->model_b.empty())
        throw std::runtime_error("file mode needs both --model-a and --model-b");
      auto ia = open_input(opts->model_a);
      auto ib = open_input(opts->model_b);
      a = borda::PartialRankingModel::read(ia);
      b = borda::PartialRankingModel::read(ib);
    } else {
      if (opts->n == 0 || opts->m == 0 || opts->k == 0)
        throw std::runtime_error("construct mode needs --n, --m, --k and --delta");
      const int top_a = (opts->top_a == 0 ? opts->k : opts->top_a) - 1;
      const int top_b = (opts->top_b == 0 ? opts->n : opts->top_b) - 1;
      a = borda::PartialRankingModel::adversarial(opts->n, opts->m, opts->k, opts->delta,
                                                  top_a);
      b = borda::PartialRankingModel::adversarial(opts->n, opts->m, opts->k, opts->delta,
                                                  top_b);
    }
    const double kl = borda::exact_kl_between(*a, *b, opts->r, opts->p);
    std::cout << "kl=" << fmt_g17(kl) << '\n';
    if (!file_mode) {
      const borda::GhParams gh = borda::gh_parameters(
          opts->n, opts->m, opts->k, borda::score_family("bar1", opts->m));
      const double bound = borda::kl_upper_bound(opts->r, opts->p, gh.h, opts->delta);
      std::cout << "bound=" << fmt_g17(bound) << '\n'
                << "within=" << yn(kl <= bound) << '\n';
    }
    if (!opts->dump_a.empty()) {
      auto os = open_output(opts->dump_a);
      a->write(os);
    }
    if (!opts->dump_b.empty()) {
      auto os = open_output(opts->dump_b);
      b->write(os);
    }
  });
}

void setup_variance_check(CLI::App& app) {
  auto* sub = app.add_subcommand(
      "variance-check", "Exact score-difference variance sum against its closed form");
  struct Opts {
    std::string model_file, beta = "bar1";
    int n = 0, m = 0, a = 0, b = 0;
    double p = 0.5;
    std::uint64_t seed = 1;
  };
  auto opts = std::make_shared<Opts>();
  sub->add_option("--model-file", opts->model_file, "model file; omit for a random model");
  sub->add_option("--n", opts->n, "items (random-model mode)");
  sub->add_option("--m", opts->m, "subset size (random-model mode)");
  sub->add_option("--seed", opts->seed, "random-model seed (default 1)");
  sub->add_option("--beta", opts->beta, "score family name (default bar1)");
  sub->add_option("--p", opts->p, "observation probability")->required();
  sub->add_option("--a", opts->a, "first item, 1-based (default: highest associated score)");
  sub->add_option("--b", opts->b, "second item, 1-based (default: lowest associated score)");
  sub->callback([opts] {
    using borda::detail::fmt_g17;
    std::optional<borda::PartialRankingModel> model;
    if (!opts->model_file.empty()) {
      auto is = open_input(opts->model_file);
      model = borda::PartialRankingModel::read(is);
    } else {
      if (opts->n == 0 || opts->m == 0)
        throw std::runtime_error("random-model mode needs --n and --m");
      model = borda::random_explicit_model(opts->n, opts->m, opts->seed);
    }
    const borda::ScoreVector beta = borda::score_family(opts->beta, model->m());
    const borda::AssociatedScores scores = borda::associated_scores(*model, beta);
    int a = opts->a - 1, b = opts->b - 1;
    if (opts->a == 0)
      a = static_cast<int>(std::max_element(scores.tau.begin(), scores.tau.end()) -
                           scores.tau.begin());
    if (opts->b == 0)
      b = static_cast<int>(std::min_element(scores.tau.begin(), scores.tau.end()) -
                           scores.tau.begin());
    const double var = borda::exact_variance_sum(*model, beta, a, b, opts->p);
    std::cout << "a=" << a + 1 << "\nb=" << b + 1 << "\nvariance_sum=" << fmt_g17(var)
              << '\n';
    if (opts->p <= 0.5) {
      const double gap = scores.tau[a] - scores.tau[b];
      const double bound = borda::variance_sum_upper_bound(scores.rho, opts->p, gap);
      std::cout << "gap=" << fmt_g17(gap) << "\nbound=" << fmt_g17(bound) << '\n'
                << "within=" << yn(var <= bound) << '\n';
    } else {
      std::cout << "bound=n/a (needs p <= 1/2)\n";
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Borda top-k selection from probabilistic m-wise partial rankings"};
  app.require_subcommand(1);
  setup_aggregate(app);
  setup_bounds(app);
  setup_gap_curve(app);
  setup_simulate(app);
  setup_preflib(app);
  setup_kl_check(app);
  setup_variance_check(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
