#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "verdictforge/cli.hpp"

namespace {

constexpr const char* kDescription =
    "verdictforge: aggregates crowd judgments about a disputed incident "
    "into one logically coherent verdict via quality-weighted MaxSAT "
    "consensus instead of majority voting.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{kDescription};
  app.require_subcommand(1);

  verdictforge::cli::SelectOptions select_options;
  CLI::App* select = app.add_subcommand(
      "select", "Filter a posts.jsonl corpus down to high-conflict posts");
  select->add_option("--input", select_options.input, "posts.jsonl to read")
      ->required();
  select->add_option("--output", select_options.output,
                     "selected posts.jsonl to write (scores.csv lands "
                     "beside it)")
      ->required();
  select->add_option("--min-comments", select_options.min_comments,
                     "minimum top-level comments per post")
      ->capture_default_str();
  select->add_option("--threshold", select_options.threshold,
                     "controversy score must be strictly above this")
      ->capture_default_str();

  verdictforge::cli::ExtractOptions extract_options;
  std::string backend = "rule_based";
  std::string rule_table_path;
  CLI::App* extract = app.add_subcommand(
      "extract", "Extract content/quality vectors for every post");
  extract->add_option("--input", extract_options.input, "posts.jsonl to read")
      ->required();
  extract->add_option("--output", extract_options.output,
                      "analyses.jsonl to write")
      ->required();
  extract->add_option("--backend", backend, "rule_based or remote")
      ->check(CLI::IsMember({"rule_based", "remote"}))
      ->capture_default_str();
  extract->add_option("--rule-table", rule_table_path,
                      "rule table JSON overriding the built-in v1 table");
  extract->add_option("--endpoint", extract_options.config.endpoint_url,
                      "chat-completion endpoint URL (remote backend)");
  extract->add_option("--model", extract_options.config.model_name,
                      "model name sent to the endpoint (remote backend)");
  extract->add_option("--temperature", extract_options.config.temperature,
                      "sampling temperature")
      ->capture_default_str();
  extract
      ->add_option("--max-output-tokens",
                   extract_options.config.max_output_tokens,
                   "completion token cap per call")
      ->capture_default_str();
  extract->add_option("--retries", extract_options.config.retry_limit,
                      "attempts per post before giving up")
      ->capture_default_str();
  extract->add_option("--timeout", extract_options.config.timeout_seconds,
                      "per-request timeout in seconds")
      ->capture_default_str();
  extract->add_option("--jobs", extract_options.jobs,
                      "posts extracted concurrently")
      ->capture_default_str();

  verdictforge::cli::SolveOptions solve_options;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the weighted consensus instance for every post");
  solve->add_option("--analyses", solve_options.analyses,
                    "analyses.jsonl to read")
      ->required();
  solve->add_option("--output", solve_options.output, "trace.jsonl to write")
      ->required();
  solve->add_flag("--cross-check", solve_options.cross_check,
                  "run the exhaustive oracle on every instance and abort "
                  "on divergence");

  verdictforge::cli::ReportOptions report_options;
  std::string annotations_path;
  CLI::App* report = app.add_subcommand(
      "report", "Run the pipeline over cached analyses and emit report "
                "tables");
  report->add_option("--posts", report_options.posts, "posts.jsonl to read")
      ->required();
  report->add_option("--analyses", report_options.analyses,
                     "analyses.jsonl to read")
      ->required();
  report->add_option("--annotations", annotations_path,
                     "human annotation CSV (post_id,label or "
                     "post_id,reviewer_id,label)");
  report->add_option("--out-dir", report_options.out_dir,
                     "directory for outcomes.csv, transitions.csv, "
                     "summary.json")
      ->required();
  report->add_option("--jobs", report_options.jobs,
                     "posts solved concurrently")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (select->parsed()) {
    return verdictforge::cli::run_select(select_options, std::cerr);
  }
  if (extract->parsed()) {
    extract_options.config.backend =
        backend == "remote" ? verdictforge::ExtractorBackend::Remote
                            : verdictforge::ExtractorBackend::RuleBased;
    if (!rule_table_path.empty()) {
      extract_options.config.rule_table_path = rule_table_path;
    }
    return verdictforge::cli::run_extract(extract_options, std::cerr);
  }
  if (solve->parsed()) {
    return verdictforge::cli::run_solve(solve_options, std::cerr);
  }
  if (report->parsed()) {
    if (!annotations_path.empty()) {
      report_options.annotations = annotations_path;
    }
    return verdictforge::cli::run_report(report_options, std::cerr);
  }
  return 1;
}
