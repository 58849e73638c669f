#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "polarsample/experiments.hpp"
#include "polarsample/histogram.hpp"
#include "polarsample/ingestion.hpp"
#include "polarsample/latent_ideology.hpp"

namespace polarsample::cli {
namespace {

namespace fs = std::filesystem;

/// Problems with the invocation itself. Exit code 2.
struct ConfigError {
  std::string code;
  std::string message;
};

[[noreturn]] void config_error(std::string code, std::string message) {
  throw ConfigError{std::move(code), std::move(message)};
}

bool is_config_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField:
    case ErrorCode::InvalidField:
    case ErrorCode::SelfRetweetRejected:
    case ErrorCode::IoError:
    case ErrorCode::FormatError:
    case ErrorCode::EmptyInput:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConfigInvalid:
      return true;
    default:
      return false;
  }
}

template <typename T>
void read_if(const Json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

// ---- output helpers ----

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

template <typename Writer>
void write_with(const fs::path& path, Writer writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  writer(out);
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_histogram(const fs::path& path, std::span<const double> values, std::size_t bins) {
  if (values.empty()) return;
  write_with(path, [&](std::ostream& o) { write_histogram_csv(o, make_histogram(values, bins)); });
}

Json failure_json(const BranchOutcome& b) {
  Json j;
  j["n_events"] = b.n_events;
  if (b.ok()) {
    j["report"] = b.output->report;
  } else {
    j["error"] = to_string(*b.failure);
    j["message"] = b.message;
  }
  return j;
}

// ---- shared loading ----

EventSet load_events(const RunConfig& c, std::ostream& err) {
  if (c.inputs.empty()) config_error("missing_input", "no input files given");
  std::vector<fs::path> paths(c.inputs.begin(), c.inputs.end());
  IngestOptions options;
  options.allow_self_retweets = c.allow_self_retweets;
  ParseResult parsed = parse_event_files(paths, input_format_from_string(c.format), options);
  if (parsed.skipped_count > 0) {
    err << fmt::format("skipped {} malformed record(s)\n", parsed.skipped_count);
  }
  return std::move(parsed.events);
}

std::set<std::string> load_seeds(const RunConfig& c) {
  if (c.seeds_path.empty()) config_error("missing_seeds", "a seed file is required");
  if (!fs::exists(c.seeds_path)) config_error("missing_seeds", "no such file: " + c.seeds_path);
  auto seeds = load_id_file(c.seeds_path);
  if (seeds.empty()) config_error("empty_seeds", "seed file lists no accounts: " + c.seeds_path);
  return seeds;
}

std::set<std::string> load_anchor(const RunConfig& c) {
  std::set<std::string> anchor(c.anchor_ids.begin(), c.anchor_ids.end());
  if (!c.anchor_path.empty()) {
    if (!fs::exists(c.anchor_path)) config_error("missing_anchor", "no such file: " + c.anchor_path);
    auto more = load_id_file(c.anchor_path);
    anchor.insert(more.begin(), more.end());
  }
  if (anchor.empty()) {
    config_error("missing_anchor", "an anchor (--anchor or --anchor-file) orients the axis");
  }
  return anchor;
}

KeywordSet load_keywords(const RunConfig& c) {
  if (c.keywords_path.empty()) config_error("missing_keywords", "a keyword file is required");
  if (!fs::exists(c.keywords_path)) {
    config_error("missing_keywords", "no such file: " + c.keywords_path);
  }
  auto terms = load_keyword_file(c.keywords_path);
  if (terms.empty()) config_error("empty_keywords", "keyword file lists no terms");
  return KeywordSet(terms, match_mode_from_string(c.match_mode));
}

void check_inputs_exist(const RunConfig& c) {
  if (c.inputs.empty()) config_error("missing_input", "no input files given");
  for (const auto& p : c.inputs) {
    if (!fs::exists(p)) config_error("missing_input", "no such file: " + p);
  }
  input_format_from_string(c.format);
}

ExperimentOptions experiment_options(const RunConfig& c, std::set<std::string> anchor) {
  ExperimentOptions o;
  o.anchor = std::move(anchor);
  o.n_bootstrap = c.n_bootstrap;
  o.threads = c.threads;
  o.lwcc_mode = lwcc_mode_from_string(c.lwcc_mode);
  return o;
}

RngStream run_rng(const RunConfig& c) { return RngStream(c.rng_seed, 0); }

void validate_common(const RunConfig& c) {
  if (c.n_bootstrap == 0) config_error("invalid_config", "n_bootstrap must be positive");
  if (c.histogram_bins == 0) config_error("invalid_config", "histogram_bins must be positive");
  if (c.threads == 0) config_error("invalid_config", "threads must be positive");
  match_mode_from_string(c.match_mode);
  lwcc_mode_from_string(c.lwcc_mode);
}

void write_manifest(const RunConfig& c, const std::string& command) {
  Json m;
  m["tool"] = "polarsample";
  m["version"] = POLARSAMPLE_VERSION;
  m["command"] = command;
  m["config"] = config_to_json(c);
  write_json(fs::path(c.output_dir) / "manifest.json", m);
}

void prepare_output(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(fs::path(c.output_dir) / "histograms", ec);
  if (ec) config_error("bad_output_dir", "cannot create " + c.output_dir + ": " + ec.message());
}

// ---- commands ----

int cmd_ingest_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_inputs_exist(c);
  if (c.dry_run) return kOk;
  std::vector<fs::path> paths(c.inputs.begin(), c.inputs.end());
  IngestOptions options;
  options.allow_self_retweets = c.allow_self_retweets;
  ParseResult parsed = parse_event_files(paths, input_format_from_string(c.format), options);

  std::set<std::string> retweeters, influencers;
  for (const auto& e : parsed.events.events()) {
    retweeters.insert(e.retweeter_id);
    influencers.insert(e.influencer_id);
  }
  Json report;
  report["n_events"] = parsed.events.size();
  report["n_retweeters"] = retweeters.size();
  report["n_influencers"] = influencers.size();
  report["skipped"] = parsed.skipped_count;
  Json errors = Json::array();
  for (const auto& e : parsed.errors) {
    errors.push_back({{"line", e.line}, {"code", to_string(e.code)}, {"message", e.message}});
  }
  report["errors"] = errors;

  prepare_output(c);
  write_json(fs::path(c.output_dir) / "ingest_report.json", report);
  write_manifest(c, "ingest-check");
  out << report.dump(2) << "\n";
  err << fmt::format("{} events, {} skipped\n", parsed.events.size(), parsed.skipped_count);
  return kOk;
}

int cmd_ideology(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_inputs_exist(c);
  validate_common(c);
  const auto seeds = load_seeds(c);
  const auto anchor = load_anchor(c);
  if (c.dry_run) return kOk;

  const EventSet events = load_events(c, err);
  PipelineOptions popts;
  popts.anchor = anchor;
  popts.n_bootstrap = c.n_bootstrap;
  popts.bootstrap_rng = run_rng(c).derive(streams::kBootstrap);
  popts.lwcc_mode = lwcc_mode_from_string(c.lwcc_mode);
  popts.lwcc_reference_nodes = weak_components(events).nodes;
  const PipelineOutput result = run_pipeline(filter_by_seeds(events, seeds), seeds, {}, popts);

  prepare_output(c);
  const fs::path dir(c.output_dir);
  write_with(dir / "scores.csv", [&](std::ostream& o) { write_scores_csv(o, result.scores); });
  Json report = result.report;
  {
    const auto& sv = result.scores.singular_values;
    report["singular_values"] = std::vector<double>(sv.begin(), sv.begin() + std::min<std::size_t>(sv.size(), 10));
  }
  write_json(dir / "report.json", report);
  const auto users = user_score_values(result.scores);
  write_histogram(dir / "histograms" / "users.csv", users, c.histogram_bins);
  if (c.dump_matrix) {
    write_with(dir / "matrix.csv", [&](std::ostream& o) { write_coordinate(o, result.matrix); });
  }
  write_manifest(c, "ideology");
  out << report.dump(2) << "\n";
  return kOk;
}

int cmd_sweep_sampling(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto seeds = load_seeds(c);
  const auto anchor = load_anchor(c);
  if (c.sweep_kind == "random" && c.replicates == 0) {
    config_error("invalid_config", "replicates must be positive");
  }
  if (c.dry_run) return kOk;

  const EventSet events = load_events(c, err);
  const auto options = experiment_options(c, anchor);
  const bool random = c.sweep_kind == "random";
  err << fmt::format("running {} sweep over {} events\n", c.sweep_kind, events.size());
  const SweepResult result =
      random ? run_random_sweep(events, seeds, c.fractions, c.replicates, run_rng(c), options)
             : run_seed_sweep(events, seeds, c.alphas, run_rng(c), options);

  prepare_output(c);
  const fs::path dir(c.output_dir);
  write_json(dir / "sweep.json", Json(result));
  write_with(dir / "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, result); });
  write_with(dir / "sweep_summary.csv",
             [&](std::ostream& o) { write_sweep_summary_csv(o, result); });
  write_with(dir / "scores.csv",
             [&](std::ostream& o) { write_scores_csv(o, result.reference_scores); });
  write_json(dir / "report.json", Json(result.reference_report));
  write_histogram(dir / "histograms" / "reference.csv", user_score_values(result.reference_scores),
                  c.histogram_bins);
  write_manifest(c, "sweep");

  std::size_t failed = 0;
  for (const auto& p : result.points) failed += p.failed();
  out << Json({{"points", result.points.size()}, {"failed", failed}}).dump() << "\n";
  return kOk;
}

int cmd_sweep_keyword(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto seeds = load_seeds(c);
  const auto anchor = load_anchor(c);
  const KeywordSet keywords = load_keywords(c);
  if (c.dry_run) return kOk;

  const EventSet events = load_events(c, err);
  const auto result =
      run_keyword_experiment(events, keywords, seeds, run_rng(c), experiment_options(c, anchor));

  prepare_output(c);
  const fs::path dir(c.output_dir);
  Json report;
  report["n_filtered"] = result.n_filtered;
  report["with_seeds"] = failure_json(result.with_seeds);
  report["all_influencers"] = failure_json(result.all_influencers);
  write_json(dir / "report.json", report);
  write_histogram(dir / "histograms" / "baseline.csv", user_score_values(result.baseline),
                  c.histogram_bins);
  auto branch_files = [&](const BranchOutcome& b, const std::string& name) {
    if (!b.ok()) return;
    write_with(dir / ("scores_" + name + ".csv"),
               [&](std::ostream& o) { write_scores_csv(o, b.output->scores); });
    write_histogram(dir / "histograms" / (name + ".csv"), user_score_values(b.output->scores),
                    c.histogram_bins);
  };
  branch_files(result.with_seeds, "with_seeds");
  branch_files(result.all_influencers, "all_influencers");
  write_manifest(c, "sweep");
  out << report.dump(2) << "\n";
  return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.sweep_kind != "random" && c.sweep_kind != "seed" && c.sweep_kind != "keyword") {
    config_error("unknown_kind", "sweep kind must be random, seed or keyword, got '" +
                                     c.sweep_kind + "'");
  }
  check_inputs_exist(c);
  validate_common(c);
  if (c.sweep_kind == "keyword") return cmd_sweep_keyword(c, out, err);
  return cmd_sweep_sampling(c, out, err);
}

Json sample_json(const BiasedSample& s) {
  Json j = failure_json(s.pipeline);
  j["keywords"] = s.keywords;
  j["n_baseline_users"] = s.baseline_scores.size();
  j["central_mass_baseline"] = central_mass(s.baseline_scores);
  if (s.pipeline.ok()) {
    j["central_mass_sample"] = central_mass(user_score_values(s.pipeline.output->scores));
  }
  return j;
}

int cmd_keywords_bias(const RunConfig& c, std::ostream& out, std::ostream& err) {
  check_inputs_exist(c);
  validate_common(c);
  const auto seeds = load_seeds(c);
  const auto anchor = load_anchor(c);
  const KeywordSet keywords = load_keywords(c);
  if (c.min_support == 0) config_error("invalid_config", "min_support must be positive");
  if (c.dry_run) return kOk;

  const EventSet events = load_events(c, err);
  const RngStream rng = run_rng(c);
  const auto options = experiment_options(c, anchor);
  PipelineOptions popts;
  popts.anchor = anchor;
  popts.n_bootstrap = c.n_bootstrap;
  popts.bootstrap_rng = rng.derive(streams::kBootstrap);
  const PipelineOutput baseline = run_pipeline(filter_by_seeds(events, seeds), seeds, {}, popts);
  const KeywordBiasResult bias =
      keyword_bias_split(events, keywords, baseline.scores, c.min_support);

  prepare_output(c);
  const fs::path dir(c.output_dir);
  Json report;
  report["match_mode"] = to_string(bias.match_mode);
  report["left_set"] = bias.left_set;
  report["right_set"] = bias.right_set;
  Json per = Json::object();
  for (const auto& [term, s] : bias.per_keyword) {
    per[term] = {{"n_tweets", s.n_tweets}, {"mean_ideology", s.mean_ideology}};
  }
  report["per_keyword"] = per;

  write_with(dir / "keyword_bias.csv", [&](std::ostream& o) {
    o << "keyword,n_tweets,mean_ideology,side\n";
    for (const auto& [term, s] : bias.per_keyword) {
      o << fmt::format("\"{}\",{},{:.17g},{}\n", term, s.n_tweets, s.mean_ideology,
                       s.mean_ideology <= 0.0 ? "left" : "right");
    }
  });
  write_with(dir / "histograms" / "keywords.csv", [&](std::ostream& o) {
    o << "keyword,bin_left,bin_right,count\n";
    for (const auto& [term, s] : bias.per_keyword) {
      const Histogram h = make_histogram(s.scores, c.histogram_bins, -3.0, 3.0);
      for (std::size_t b = 0; b < h.counts.size(); ++b) {
        o << fmt::format("\"{}\",{:.17g},{:.17g},{}\n", term, h.edges[b], h.edges[b + 1],
                         h.counts[b]);
      }
    }
  });

  if (!bias.left_set.empty() && !bias.right_set.empty()) {
    const BiasedComparison cmp =
        run_biased_keyword_comparison(events, bias, seeds, baseline.scores, rng, options);
    report["comparison"] = {{"left", sample_json(cmp.left)},
                            {"right", sample_json(cmp.right)},
                            {"all", sample_json(cmp.all)}};
    auto side_files = [&](const BiasedSample& s, const std::string& name) {
      write_histogram(dir / "histograms" / (name + "_baseline.csv"), s.baseline_scores,
                      c.histogram_bins);
      if (s.pipeline.ok()) {
        write_histogram(dir / "histograms" / (name + "_sample.csv"),
                        user_score_values(s.pipeline.output->scores), c.histogram_bins);
      }
    };
    side_files(cmp.left, "left");
    side_files(cmp.right, "right");
    side_files(cmp.all, "all");
  } else {
    err << "one keyword side is empty; skipping the biased-sample comparison\n";
  }
  write_json(dir / "keyword_bias.json", report);
  write_manifest(c, "keywords-bias");
  out << report.dump(2) << "\n";
  return kOk;
}

int cmd_synth(const RunConfig& c, std::ostream& out, std::ostream&) {
  c.synthetic.validate();
  if (c.dry_run) return kOk;
  const SyntheticData data = generate(c.synthetic, RngStream(c.synthetic.rng_seed, 0));

  prepare_output(c);
  const fs::path dir(c.output_dir);
  write_with(dir / "events.jsonl", [&](std::ostream& o) { write_events_jsonl(o, data.events); });
  write_with(dir / "labels.csv", [&](std::ostream& o) { write_labels_csv(o, data.truth); });
  auto write_ids = [&](const fs::path& path, const std::set<std::string>& ids) {
    write_with(path, [&](std::ostream& o) {
      for (const auto& id : ids) o << id << "\n";
    });
  };
  write_ids(dir / "seeds.txt", data.truth.political_influencers());
  write_ids(dir / "anchor.txt", data.truth.influencers_of(Faction::Left));
  write_manifest(c, "synth");
  out << Json({{"n_events", data.events.size()}, {"output_dir", c.output_dir}}).dump() << "\n";
  return kOk;
}

}  // namespace

Json config_to_json(const RunConfig& c) {
  Json j;
  j["input"] = {{"paths", c.inputs}, {"format", c.format},
                {"allow_self_retweets", c.allow_self_retweets}};
  j["sampling"] = {{"seeds_path", c.seeds_path},
                   {"keywords_path", c.keywords_path},
                   {"match_mode", c.match_mode},
                   {"anchor_ids", c.anchor_ids},
                   {"anchor_path", c.anchor_path}};
  j["sweep"] = {{"kind", c.sweep_kind},
                {"fractions", c.fractions},
                {"alphas", c.alphas},
                {"replicates", c.replicates}};
  j["analysis"] = {{"rng_seed", c.rng_seed},
                   {"n_bootstrap", c.n_bootstrap},
                   {"lwcc_mode", c.lwcc_mode},
                   {"min_support", c.min_support},
                   {"histogram_bins", c.histogram_bins},
                   {"dump_matrix", c.dump_matrix}};
  j["output_dir"] = c.output_dir;
  j["synthetic"] = c.synthetic;
  return j;
}

RunConfig config_from_json(const Json& document) {
  const Json& j = document.contains("config") ? document.at("config") : document;
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("input")) {
      const Json& s = j.at("input");
      read_if(s, "paths", c.inputs);
      read_if(s, "format", c.format);
      read_if(s, "allow_self_retweets", c.allow_self_retweets);
    }
    if (j.contains("sampling")) {
      const Json& s = j.at("sampling");
      read_if(s, "seeds_path", c.seeds_path);
      read_if(s, "keywords_path", c.keywords_path);
      read_if(s, "match_mode", c.match_mode);
      read_if(s, "anchor_ids", c.anchor_ids);
      read_if(s, "anchor_path", c.anchor_path);
    }
    if (j.contains("sweep")) {
      const Json& s = j.at("sweep");
      read_if(s, "kind", c.sweep_kind);
      read_if(s, "fractions", c.fractions);
      read_if(s, "alphas", c.alphas);
      read_if(s, "replicates", c.replicates);
    }
    if (j.contains("analysis")) {
      const Json& s = j.at("analysis");
      read_if(s, "rng_seed", c.rng_seed);
      read_if(s, "n_bootstrap", c.n_bootstrap);
      read_if(s, "lwcc_mode", c.lwcc_mode);
      read_if(s, "min_support", c.min_support);
      read_if(s, "histogram_bins", c.histogram_bins);
      read_if(s, "dump_matrix", c.dump_matrix);
    }
    read_if(j, "output_dir", c.output_dir);
    if (j.contains("synthetic")) c.synthetic = j.at("synthetic").get<SyntheticConfig>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("bad config value: ") + e.what());
  }
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sampling effects on retweet-network polarization measures", "polarsample"};
  app.set_version_flag("--version", std::string(POLARSAMPLE_VERSION));
  app.require_subcommand(1);

  // Flag values live here; only flags actually given override the config file.
  std::string config_path;
  RunConfig flags;
  std::string anchor_csv;
  std::size_t threads = 1;
  bool dry_run = false;
  std::optional<std::size_t> n_users, n_influencers, n_hubs, n_events;
  std::optional<double> cross_rate, moderate_share, moderate_hub_rate, faction_split;
  std::optional<std::uint64_t> synth_seed;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config or a manifest.json to rerun");
    sub->add_option("-o,--out", flags.output_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (results do not depend on it)");
    sub->add_flag("--dry-run", dry_run, "validate the configuration and exit");
  };
  auto inputs = [&](CLI::App* sub) {
    sub->add_option("-i,--input", flags.inputs, "event files (repeatable)");
    sub->add_option("--format", flags.format, "jsonl or csv");
    sub->add_flag("--allow-self-retweets", flags.allow_self_retweets);
  };
  auto analysis = [&](CLI::App* sub) {
    sub->add_option("--seeds", flags.seeds_path, "seed account file");
    sub->add_option("--anchor", anchor_csv, "comma-separated anchor influencer ids");
    sub->add_option("--anchor-file", flags.anchor_path, "anchor influencer id file");
    sub->add_option("--seed", flags.rng_seed, "run seed");
    sub->add_option("--bootstrap", flags.n_bootstrap, "dip bootstrap replicates");
    sub->add_option("--lwcc-mode", flags.lwcc_mode, "sampled or reference");
    sub->add_option("--bins", flags.histogram_bins, "histogram bins");
  };

  CLI::App* ingest = app.add_subcommand("ingest-check", "parse inputs and report problems");
  common(ingest);
  inputs(ingest);

  CLI::App* ideology = app.add_subcommand("ideology", "score users and report metrics");
  common(ideology);
  inputs(ideology);
  analysis(ideology);
  ideology->add_flag("--dump-matrix", flags.dump_matrix, "write the pruned matrix");

  CLI::App* sweep = app.add_subcommand("sweep", "sampling sweep: random, seed or keyword");
  common(sweep);
  inputs(sweep);
  analysis(sweep);
  sweep->add_option("--kind", flags.sweep_kind, "random, seed or keyword");
  sweep->add_option("--fractions", flags.fractions, "random-sampling fractions")->delimiter(',');
  sweep->add_option("--alphas", flags.alphas, "top-seed fractions")->delimiter(',');
  sweep->add_option("--replicates", flags.replicates, "replicates per fraction");
  sweep->add_option("--keywords", flags.keywords_path, "keyword file");
  sweep->add_option("--match", flags.match_mode, "word or substring");

  CLI::App* bias = app.add_subcommand("keywords-bias", "split keywords by mean ideology");
  common(bias);
  inputs(bias);
  analysis(bias);
  bias->add_option("--keywords", flags.keywords_path, "keyword file");
  bias->add_option("--match", flags.match_mode, "word or substring");
  bias->add_option("--min-support", flags.min_support, "minimum scored tweets per keyword");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic polarized network");
  common(synth);
  synth->add_option("--users", n_users);
  synth->add_option("--influencers", n_influencers);
  synth->add_option("--hubs", n_hubs);
  synth->add_option("--events", n_events);
  synth->add_option("--cross-rate", cross_rate);
  synth->add_option("--moderate-share", moderate_share);
  synth->add_option("--moderate-hub-rate", moderate_hub_rate, "share of moderate retweets to hubs");
  synth->add_option("--faction-split", faction_split);
  synth->add_option("--synth-seed", synth_seed);

  std::vector<const char*> argv{"polarsample"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << POLARSAMPLE_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << Json({{"error", "usage"}, {"message", e.what()}}).dump() << "\n";
    return kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    RunConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) config_error("missing_config", "cannot read " + config_path);
      Json doc;
      try {
        doc = Json::parse(in);
      } catch (const Json::exception& e) {
        config_error("invalid_config", e.what());
      }
      c = config_from_json(doc);
    }
    auto given = [&](const char* name) { return sub->get_option_no_throw(name) &&
                                                sub->count(name) > 0; };
    if (given("--input")) c.inputs = flags.inputs;
    if (given("--format")) c.format = flags.format;
    if (given("--allow-self-retweets")) c.allow_self_retweets = true;
    if (given("--out")) c.output_dir = flags.output_dir;
    if (given("--seeds")) c.seeds_path = flags.seeds_path;
    if (given("--anchor")) {
      c.anchor_ids.clear();
      for (const auto& id : CLI::detail::split(anchor_csv, ',')) {
        if (!id.empty()) c.anchor_ids.push_back(id);
      }
    }
    if (given("--anchor-file")) c.anchor_path = flags.anchor_path;
    if (given("--seed")) c.rng_seed = flags.rng_seed;
    if (given("--bootstrap")) c.n_bootstrap = flags.n_bootstrap;
    if (given("--lwcc-mode")) c.lwcc_mode = flags.lwcc_mode;
    if (given("--bins")) c.histogram_bins = flags.histogram_bins;
    if (given("--dump-matrix")) c.dump_matrix = true;
    if (given("--kind")) c.sweep_kind = flags.sweep_kind;
    if (given("--fractions")) c.fractions = flags.fractions;
    if (given("--alphas")) c.alphas = flags.alphas;
    if (given("--replicates")) c.replicates = flags.replicates;
    if (given("--keywords")) c.keywords_path = flags.keywords_path;
    if (given("--match")) c.match_mode = flags.match_mode;
    if (given("--min-support")) c.min_support = flags.min_support;
    if (n_users) c.synthetic.n_users = *n_users;
    if (n_influencers) c.synthetic.n_influencers = *n_influencers;
    if (n_hubs) c.synthetic.n_hubs = *n_hubs;
    if (n_events) c.synthetic.n_events = *n_events;
    if (cross_rate) c.synthetic.cross_rate = *cross_rate;
    if (moderate_share) c.synthetic.moderate_share = *moderate_share;
    if (moderate_hub_rate) c.synthetic.moderate_hub_rate = *moderate_hub_rate;
    if (faction_split) c.synthetic.faction_split = *faction_split;
    if (synth_seed) c.synthetic.rng_seed = *synth_seed;
    c.threads = threads;
    c.dry_run = dry_run;

    const std::string name = sub->get_name();
    int code = kOk;
    if (name == "ingest-check") code = cmd_ingest_check(c, out, err);
    else if (name == "ideology") code = cmd_ideology(c, out, err);
    else if (name == "sweep") code = cmd_sweep(c, out, err);
    else if (name == "keywords-bias") code = cmd_keywords_bias(c, out, err);
    else code = cmd_synth(c, out, err);

    if (dry_run) {
      out << Json({{"dry_run", true}, {"command", name}, {"config", config_to_json(c)}}).dump(2)
          << "\n";
    }
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.message << "\n";
    out << Json({{"error", e.code}, {"message", e.message}}).dump() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    out << Json({{"error", to_string(e.code())}, {"message", e.what()}}).dump() << "\n";
    return is_config_code(e.code()) ? kConfigError : kPipelineFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    out << Json({{"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    return kPipelineFailure;
  }
}

}  // namespace polarsample::cli
