#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "nl2sql/complexity.hpp"
#include "nl2sql/corpus.hpp"
#include "nl2sql/cot.hpp"
#include "nl2sql/curator.hpp"
#include "nl2sql/dataset_io.hpp"
#include "nl2sql/digest.hpp"
#include "nl2sql/error.hpp"
#include "nl2sql/evaluator.hpp"
#include "nl2sql/file_io.hpp"
#include "nl2sql/gateway.hpp"
#include "nl2sql/prediction.hpp"
#include "nl2sql/report.hpp"

namespace nl2sql::cli {

namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

struct DistributionFlags {
  double hard = 0.4;
  double medium = 0.5;
  double easy = 0.1;
  std::size_t total = 0;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd, bool total_required) {
    auto* t = cmd->add_option("--total", total, "Number of items to draw");
    if (total_required) t->required();
    cmd->add_option("--hard", hard, "Fraction of Hard items")->capture_default_str();
    cmd->add_option("--medium", medium, "Fraction of Medium items")->capture_default_str();
    cmd->add_option("--easy", easy, "Fraction of Easy items")->capture_default_str();
    cmd->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
  }

  DistributionSpec spec() const { return {hard, medium, easy, total}; }
};

struct SchemaFlags {
  fs::path tables;
  fs::path db_root;
  std::size_t samples = 0;
  bool no_overlay = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--tables", tables, "Schema catalog (tables.json)")->required();
    cmd->add_option("--db-root", db_root, "Directory holding database/<db_id>/<db_id>.sqlite")->required();
    cmd->add_option("--samples", samples, "Sample values per column (0 disables)")->capture_default_str();
    cmd->add_flag("--no-overlay", no_overlay, "Do not take declared types from the database files");
  }

  DescribeOptions options() const { return {samples > 0, samples > 0 ? samples : 3}; }
};

// Catalog entry, with declared types from the database file when present.
SchemaDescription describe_one(const SchemaCatalog& catalog, const SchemaFlags& flags, const std::string& db_id,
                               std::ostream& err) {
  auto it = catalog.find(db_id);
  if (it == catalog.end()) throw InvalidArgument("MissingDatabase", "database " + db_id + " is not in the catalog");
  DbSchema schema = it->second;
  const fs::path db_file = database_path(flags.db_root, db_id);
  const bool have_file = fs::exists(db_file);
  if (have_file && !flags.no_overlay) schema = overlay_declared_types(schema, read_schema_from_database(db_id, db_file));
  if (flags.samples > 0 && !have_file) {
    throw InvalidArgument("MissingDatabase", "database " + db_id + " not found at " + db_file.string());
  }
  auto desc = describe_schema(schema, flags.options(), have_file ? std::optional<fs::path>(db_file) : std::nullopt);
  for (const auto& w : desc.warnings) err << "warning: " << w << "\n";
  for (const auto& d : schema.dangling_foreign_keys) err << "warning: DanglingForeignKey: " << db_id << ": " << d << "\n";
  return desc;
}

std::map<std::string, SchemaDescription> describe_all(const CuratedDataset& dataset, const SchemaFlags& flags,
                                                      std::ostream& err) {
  const auto catalog = load_schemas(flags.tables);
  std::map<std::string, SchemaDescription> out;
  for (const auto& item : dataset.items) {
    const auto& id = item.example.db_id;
    if (!out.contains(id)) out.emplace(id, describe_one(catalog, flags, id, err));
  }
  return out;
}

std::string digest_of_files(const std::vector<fs::path>& paths) {
  if (paths.size() == 1) return sha256_file(paths.front());
  std::string joined;
  for (const auto& p : paths) joined += sha256_file(p);
  return sha256_hex(joined);
}

void print_distribution(const CuratedDataset& ds, std::ostream& out) {
  out << ds.items.size() << " items:";
  for (DifficultyBucket b : {DifficultyBucket::Hard, DifficultyBucket::Medium, DifficultyBucket::Easy}) {
    out << " " << to_string(b) << " " << ds.manifest.counts[static_cast<std::size_t>(b)];
  }
  out << "\n";
}

// ---- score -------------------------------------------------------------------

struct ScoreCmd {
  std::vector<fs::path> inputs;
  fs::path out;
  fs::path summary_csv;
  WeightsConfig weights;
  ThresholdsConfig thresholds;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("score", "Score and bucket every example of Spider-format files");
    c->add_option("--in", inputs, "Examples file(s) (train.json, dev.json, ...)")->required()->check(CLI::ExistingFile);
    c->add_option("--out", out, "Scored items (JSONL)")->required();
    c->add_option("--summary-csv", summary_csv, "Also write the distribution summary as CSV");
    c->add_option("--weight-join", weights.join)->capture_default_str();
    c->add_option("--weight-group-by", weights.group_by)->capture_default_str();
    c->add_option("--weight-order-by", weights.order_by)->capture_default_str();
    c->add_option("--weight-having", weights.having)->capture_default_str();
    c->add_option("--weight-nesting", weights.nesting)->capture_default_str();
    c->add_option("--weight-limit", weights.limit)->capture_default_str();
    c->add_option("--weight-distinct", weights.distinct)->capture_default_str();
    c->add_option("--weight-aggregate", weights.aggregate)->capture_default_str();
    c->add_option("--easy-max", thresholds.easy_max)->capture_default_str();
    c->add_option("--medium-max", thresholds.medium_max)->capture_default_str();
  }

  int run(std::ostream& o, std::ostream& e) const {
    weights.validate();
    thresholds.validate();
    std::vector<NlSqlExample> examples;
    for (const auto& p : inputs) {
      auto part = load_examples(p);
      examples.insert(examples.end(), part.begin(), part.end());
    }
    auto scored = score_corpus(examples, weights, thresholds);
    for (const auto& s : scored.skipped) {
      e << "warning: skipped example " << s.source_index << ": " << s.reason << "\n";
    }
    CuratedDataset ds = passthrough(std::move(scored.items), weights, thresholds);
    ds.manifest.mode = "scored";
    ds.manifest.source_digest = digest_of_files(inputs);
    save_dataset(ds, out);
    if (!summary_csv.empty()) write_file_atomic(summary_csv, render_summary_csv(scored.summary));
    o << render_summary_table(scored.summary);
    if (!scored.skipped.empty()) o << scored.skipped.size() << " examples skipped (unparseable gold SQL)\n";
    return kExitOk;
  }
};

// ---- curate ------------------------------------------------------------------

struct CurateCmd {
  fs::path in;
  fs::path out;
  bool passthrough_mode = false;
  DistributionFlags dist;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("curate", "Draw a stratified training set from scored items");
    c->add_option("--in", in, "Scored items (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--out", out, "Curated items (JSONL)")->required();
    c->add_flag("--passthrough", passthrough_mode, "Keep every item (full-corpus mode)");
    dist.add(c, false);
  }

  int run(std::ostream& o, std::ostream&) const {
    const auto pool = load_dataset(in);
    CuratedDataset ds;
    if (passthrough_mode) {
      ds = passthrough(pool.items, pool.manifest.weights, pool.manifest.thresholds);
    } else {
      if (dist.total == 0) throw InvalidArgument("ConfigError", "--total is required unless --passthrough is given");
      ds = stratified_curate(pool.items, dist.spec(), dist.seed);
      ds.manifest.weights = pool.manifest.weights;
      ds.manifest.thresholds = pool.manifest.thresholds;
    }
    ds.manifest.source_digest = sha256_file(in);
    save_dataset(ds, out);
    print_distribution(ds, o);
    return kExitOk;
  }
};

// ---- split -------------------------------------------------------------------

struct SplitCmd {
  fs::path in;
  fs::path train_out;
  fs::path val_out;
  std::size_t train = 0;
  std::size_t val = 0;
  std::uint64_t seed = 0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("split", "Stratified train/validation split of a curated set");
    c->add_option("--in", in, "Curated items (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--train-out", train_out, "Training part (JSONL)")->required();
    c->add_option("--val-out", val_out, "Validation part (JSONL)")->required();
    c->add_option("--train", train, "Training item count")->required();
    c->add_option("--val", val, "Validation item count")->required();
    c->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
  }

  int run(std::ostream& o, std::ostream&) const {
    const auto ds = load_dataset(in);
    auto [tr, va] = split_train_val(ds, train, val, seed);
    tr.manifest.source_digest = va.manifest.source_digest = sha256_file(in);
    save_dataset(tr, train_out);
    save_dataset(va, val_out);
    o << "train: ";
    print_distribution(tr, o);
    o << "val: ";
    print_distribution(va, o);
    return kExitOk;
  }
};

// ---- benchmark -----------------------------------------------------------------

struct BenchmarkCmd {
  fs::path in;
  std::vector<fs::path> exclude;
  fs::path out;
  DistributionFlags dist;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("benchmark", "Draw a leakage-free evaluation benchmark");
    c->add_option("--in", in, "Scored pool (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--exclude", exclude, "Dataset(s) the benchmark must not overlap")->check(CLI::ExistingFile);
    c->add_option("--out", out, "Benchmark items (JSONL)")->required();
    dist.add(c, true);
  }

  int run(std::ostream& o, std::ostream&) const {
    const auto pool = load_dataset(in);
    std::vector<ScoredExample> excluded;
    for (const auto& p : exclude) {
      const auto ds = load_dataset(p);
      excluded.insert(excluded.end(), ds.items.begin(), ds.items.end());
    }
    auto ds = build_benchmark(pool.items, dist.spec(), excluded, dist.seed);
    ds.manifest.weights = pool.manifest.weights;
    ds.manifest.thresholds = pool.manifest.thresholds;
    ds.manifest.source_digest = sha256_file(in);
    save_dataset(ds, out);
    print_distribution(ds, o);
    o << ds.manifest.excluded << " pool items excluded as overlapping\n";
    return kExitOk;
  }
};

// ---- describe ------------------------------------------------------------------

struct DescribeCmd {
  SchemaFlags schema;
  std::vector<std::string> db_ids;
  fs::path out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("describe", "Render schema descriptions used in prompts");
    schema.add(c);
    c->add_option("--db-id", db_ids, "Database id(s); default: every catalog entry");
    c->add_option("--out", out, "Write a JSON object db_id -> description instead of printing");
  }

  int run(std::ostream& o, std::ostream& e) const {
    const auto catalog = load_schemas(schema.tables);
    std::vector<std::string> ids = db_ids;
    if (ids.empty()) {
      for (const auto& [id, s] : catalog) ids.push_back(id);
    }
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    std::string text;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto desc = describe_one(catalog, schema, ids[i], e);
      j[ids[i]] = desc.text;
      if (i) text += "\n\n";
      if (ids.size() > 1) text += "# " + ids[i] + "\n";
      text += desc.text;
    }
    if (out.empty()) {
      o << text << "\n";
    } else {
      write_file_atomic(out, j.dump(2) + "\n");
      o << ids.size() << " schema descriptions written to " << out.string() << "\n";
    }
    return kExitOk;
  }
};

// ---- infer ---------------------------------------------------------------------

struct InferCmd {
  fs::path in;
  fs::path out;
  SchemaFlags schema;
  EndpointConfig endpoint;
  std::string mode = "direct";
  bool self_correction = false;
  bool retry_failed = false;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("infer", "Query a chat-completion endpoint for every dataset item");
    c->add_option("--in", in, "Dataset (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--out", out, "Prediction file (JSONL); resumed when it exists")->required();
    schema.add(c);
    c->add_option("--base-url", endpoint.base_url, "Endpoint base URL, e.g. http://127.0.0.1:8000")->required();
    c->add_option("--path", endpoint.path, "Request path")->capture_default_str();
    c->add_option("--model", endpoint.model, "Model name")->required();
    c->add_option("--token-env", endpoint.token_env, "Environment variable holding a bearer token");
    c->add_option("--timeout", endpoint.timeout_seconds, "Request timeout in seconds")->capture_default_str();
    c->add_option("--max-retries", endpoint.max_retries)->capture_default_str();
    c->add_option("--backoff-base", endpoint.backoff_base_seconds, "First retry delay in seconds")
        ->capture_default_str();
    c->add_option("--backoff-multiplier", endpoint.backoff_multiplier)->capture_default_str();
    c->add_option("--max-concurrent", endpoint.max_concurrent, "Requests in flight at once")->capture_default_str();
    c->add_option("--temperature", endpoint.temperature)->capture_default_str();
    c->add_option("--mode", mode, "direct or cot")->capture_default_str();
    c->add_flag("--self-correction", self_correction, "Ask the model to re-verify before answering");
    c->add_flag("--retry-failed", retry_failed, "Re-request items stored with a transport error");
  }

  int run(std::ostream& o, std::ostream& e) const {
    const auto ds = load_dataset(in);
    const PromptOptions prompt{parse_prompt_mode(mode), self_correction};
    const auto items = build_batch(ds, describe_all(ds, schema, e), prompt);

    std::stop_source stop;
    g_interrupted = false;
    auto previous = std::signal(SIGINT, on_sigint);
    std::jthread watcher([&](std::stop_token self) {
      while (!self.stop_requested()) {
        if (g_interrupted) {
          stop.request_stop();
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
    });
    BatchOptions options;
    options.retry_failed = retry_failed;
    BatchResult result;
    try {
      result = run_batch(items, endpoint, out, stop.get_token(), options);
    } catch (...) {
      std::signal(SIGINT, previous);
      throw;
    }
    watcher.request_stop();
    std::signal(SIGINT, previous);

    o << "requested " << result.requested << ", resumed " << result.resumed << ", failed " << result.failed
      << " (model " << endpoint.model << ", temperature " << endpoint.temperature << ", mode " << mode << ")\n";
    if (result.cancelled) {
      e << "error: Cancelled: run interrupted; rerun the same command to resume\n";
      return kExitError;
    }
    return kExitOk;
  }
};

// ---- build-cot -----------------------------------------------------------------

struct BuildCotCmd {
  fs::path in;
  fs::path teacher;
  fs::path out;
  SchemaFlags schema;
  bool use_gold_sql = false;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("build-cot", "Assemble chain-of-thought training records from teacher output");
    c->add_option("--in", in, "Dataset (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--teacher", teacher, "Teacher predictions from `infer --mode cot`")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--out", out, "Record file (JSONL messages envelope)")->required();
    schema.add(c);
    c->add_flag("--use-gold-sql", use_gold_sql, "Use the gold SQL as the final answer instead of the teacher's");
  }

  int run(std::ostream& o, std::ostream& e) const {
    const auto ds = load_dataset(in);
    const auto descriptions = describe_all(ds, schema, e);
    std::map<std::string, Prediction> by_key;
    for (auto& p : load_predictions(teacher).predictions) by_key.emplace(p.key, std::move(p));

    std::vector<CotRecord> records;
    std::string keys;
    std::size_t skipped = 0;
    for (const auto& item : ds.items) {
      const auto key = prediction_key(item.example);
      auto it = by_key.find(key);
      try {
        if (it == by_key.end()) throw InvalidArgument("MissingPrediction", "no teacher output");
        if (it->second.error) throw InvalidArgument("TeacherFailed", *it->second.error);
        auto [reasoning, sql] = split_teacher_output(it->second.raw_output);
        if (use_gold_sql) sql = item.example.gold_sql;
        records.push_back(assemble_cot_record(item.example, descriptions.at(item.example.db_id), reasoning, sql));
        keys += key + "\n";
      } catch (const Error& err) {
        ++skipped;
        e << "warning: skipped " << key << ": " << err.kind() << ": " << err.what() << "\n";
      }
    }
    export_records(records, out);
    fs::path keys_path = out;
    keys_path += ".keys";
    write_file_atomic(keys_path, keys);
    o << records.size() << " records written, " << skipped << " skipped\n";
    return kExitOk;
  }
};

// ---- validate-cot --------------------------------------------------------------

struct ValidateCotCmd {
  fs::path records_path;
  fs::path in;
  fs::path db_root;
  fs::path out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("validate-cot", "Check record structure and execution match against gold");
    c->add_option("--records", records_path, "Record file (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--in", in, "Dataset the records were built from (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--db-root", db_root, "Directory holding database/<db_id>/<db_id>.sqlite")->required();
    c->add_option("--out", out, "Per-record results (JSONL)");
  }

  int run(std::ostream& o, std::ostream& e) const {
    const auto records = import_records(records_path);
    const auto ds = load_dataset(in);
    std::map<std::string, const NlSqlExample*> by_key;
    for (const auto& item : ds.items) by_key.emplace(prediction_key(item.example), &item.example);

    std::vector<std::string> keys;
    fs::path keys_path = records_path;
    keys_path += ".keys";
    if (fs::exists(keys_path)) {
      keys = split_lines(read_file(keys_path));
    } else {
      for (const auto& item : ds.items) keys.push_back(prediction_key(item.example));
    }
    if (keys.size() < records.size()) {
      throw InvalidArgument("SizeMismatch", std::to_string(records.size()) + " records but only " +
                                                std::to_string(keys.size()) + " dataset keys");
    }

    std::size_t structural = 0, matched = 0, judged = 0;
    std::map<std::string, std::size_t> taxonomies;
    std::string lines;
    for (std::size_t i = 0; i < records.size(); ++i) {
      auto it = by_key.find(keys[i]);
      if (it == by_key.end()) throw InvalidArgument("SizeMismatch", "record key " + keys[i] + " is not in the dataset");
      const auto& gold = *it->second;
      const auto db_file = database_path(db_root, gold.db_id);
      if (!fs::exists(db_file)) throw InvalidArgument("MissingDatabase", "database " + gold.db_id + " not found");
      const auto r = validate_cot_record(records[i], gold, db_file);
      structural += r.structural_ok;
      if (r.execution_match) {
        ++judged;
        matched += *r.execution_match;
      }
      ++taxonomies[r.step_coverage.taxonomy];
      nlohmann::ordered_json j;
      j["key"] = keys[i];
      j["structural_ok"] = r.structural_ok;
      j["execution_match"] = r.execution_match ? nlohmann::ordered_json(*r.execution_match) : nullptr;
      j["failure_reason"] = r.failure_reason ? std::string(to_string(*r.failure_reason)) : std::string();
      j["taxonomy"] = r.step_coverage.taxonomy;
      nlohmann::ordered_json steps = nlohmann::ordered_json::array();
      for (CotStep s : kAllCotSteps) {
        if (r.step_coverage.has(s)) steps.push_back(to_string(s));
      }
      j["steps"] = steps;
      j["detail"] = r.detail;
      j["warnings"] = r.warnings;
      lines += j.dump() + "\n";
      if (r.failure_reason) e << "warning: " << keys[i] << ": " << to_string(*r.failure_reason) << ": " << r.detail << "\n";
    }
    if (!out.empty()) write_file_atomic(out, lines);
    o << records.size() << " records: " << structural << " structurally valid, " << matched << "/" << judged
      << " execution matches\n";
    for (const auto& [t, n] : taxonomies) o << "  " << t << ": " << n << "\n";
    return kExitOk;
  }
};

// ---- evaluate ------------------------------------------------------------------

struct EvaluateCmd {
  fs::path predictions;
  fs::path benchmark;
  fs::path db_root;
  fs::path out;
  fs::path summary;
  double timeout_seconds = 30.0;
  std::size_t workers = 1;
  bool ignore_order = false;
  bool set_semantics = false;
  bool match_column_names = false;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("evaluate", "Execution accuracy of a prediction set");
    c->add_option("--predictions", predictions, "Prediction file (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--benchmark", benchmark, "Benchmark items (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--db-root", db_root, "Directory holding database/<db_id>/<db_id>.sqlite")->required();
    c->add_option("--out", out, "Evaluation report (JSON)")->required();
    c->add_option("--summary", summary, "Also write the human-readable summary here");
    c->add_option("--timeout", timeout_seconds, "Per-query timeout in seconds")->capture_default_str();
    c->add_option("--workers", workers, "Parallel evaluation workers")->capture_default_str();
    c->add_flag("--ignore-order", ignore_order, "Compare rows as multisets even when gold has ORDER BY");
    c->add_flag("--set-semantics", set_semantics, "Collapse duplicate rows before comparing");
    c->add_flag("--match-column-names", match_column_names, "Also require equal column names");
    c->add_option("--rel-tol", rel_tol, "Relative numeric tolerance")->capture_default_str();
    c->add_option("--abs-tol", abs_tol, "Absolute numeric tolerance near zero")->capture_default_str();
  }

  int run(std::ostream& o, std::ostream& e) const {
    if (!(timeout_seconds > 0)) throw InvalidArgument("ConfigError", "--timeout must be positive");
    const auto file = load_predictions(predictions);
    if (file.truncated_tail) e << "warning: prediction file ends with a truncated line; it was ignored\n";
    const auto ds = load_dataset(benchmark);
    EvaluationSettings settings;
    settings.compare.respect_gold_order = !ignore_order;
    settings.compare.duplicates_significant = !set_semantics;
    settings.compare.match_column_names = match_column_names;
    settings.compare.relative_tolerance = rel_tol;
    settings.compare.absolute_tolerance = abs_tol;
    settings.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(timeout_seconds * 1000));
    settings.workers = workers;
    const auto report = evaluate(file.predictions, ds, db_root, settings);
    write_file_atomic(out, report_to_json(report));
    const auto text = render_report_summary(report);
    if (!summary.empty()) write_file_atomic(summary, text);
    o << text;
    if (report.overall.gold_failed) {
      e << "warning: " << report.overall.gold_failed << " gold queries failed and were excluded\n";
    }
    return kExitOk;
  }
};

// ---- report --------------------------------------------------------------------

struct ReportCmd {
  fs::path ledger;
  fs::path out;
  std::string format = "markdown";
  fs::path series_dir;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("report", "Render the comparative accuracy table of a run ledger");
    c->add_option("--ledger", ledger, "Run ledger (JSON)")->required()->check(CLI::ExistingFile);
    c->add_option("--out", out, "Comparison table file")->required();
    c->add_option("--format", format, "markdown or csv")->capture_default_str();
    c->add_option("--series-dir", series_dir, "Also write figure series CSVs here");
  }

  int run(std::ostream& o, std::ostream&) const {
    const auto fmt = parse_table_format(format);
    const auto l = load_ledger(ledger);
    const auto reports = load_ledger_reports(l);
    const auto table = render_comparison(l, reports, fmt);
    write_file_atomic(out, table);
    if (!series_dir.empty()) {
      for (const auto& [name, contents] : render_figure_series(l, reports)) write_file_atomic(series_dir / name, contents);
    }
    o << table;
    return kExitOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Text-to-SQL dataset curation, inference and execution-accuracy toolkit", "nl2sql"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file mirroring the command line flags");
  // Lets --config appear after the subcommand name.
  app.fallthrough();

  ScoreCmd score;
  CurateCmd curate;
  SplitCmd split;
  BenchmarkCmd benchmark;
  DescribeCmd describe;
  BuildCotCmd build_cot;
  ValidateCotCmd validate_cot;
  InferCmd infer;
  EvaluateCmd evaluate_cmd;
  ReportCmd report;
  score.add(app);
  curate.add(app);
  split.add(app);
  benchmark.add(app);
  describe.add(app);
  build_cot.add(app);
  validate_cot.add(app);
  infer.add(app);
  evaluate_cmd.add(app);
  report.add(app);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "score") return score.run(out, err);
    if (name == "curate") return curate.run(out, err);
    if (name == "split") return split.run(out, err);
    if (name == "benchmark") return benchmark.run(out, err);
    if (name == "describe") return describe.run(out, err);
    if (name == "build-cot") return build_cot.run(out, err);
    if (name == "validate-cot") return validate_cot.run(out, err);
    if (name == "infer") return infer.run(out, err);
    if (name == "evaluate") return evaluate_cmd.run(out, err);
    if (name == "report") return report.run(out, err);
    err << "error: UsageError: unknown subcommand " << name << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: InternalError: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace nl2sql::cli
