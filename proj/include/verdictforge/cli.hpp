#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "verdictforge/consensus.hpp"
#include "verdictforge/corpus.hpp"
#include "verdictforge/csv.hpp"
#include "verdictforge/errors.hpp"
#include "verdictforge/extraction.hpp"
#include "verdictforge/report.hpp"

// Batch subcommands behind the verdictforge CLI. Kept header-side so the
// acceptance suite drives the exact code path the binary runs.
//
// Exit codes: 0 success, 2 partial (some posts failed), 1 total failure.

namespace verdictforge::cli {

struct SelectOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::int64_t min_comments = 50;
  double threshold = 0.9;
};

struct ExtractOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  ExtractorConfig config;
  int jobs = 1;
};

struct SolveOptions {
  std::filesystem::path analyses;
  std::filesystem::path output;
  bool cross_check = false;
};

struct ReportOptions {
  std::filesystem::path posts;
  std::filesystem::path analyses;
  std::optional<std::filesystem::path> annotations;
  std::filesystem::path out_dir;
  int jobs = 1;
};

/// Streams the corpus, keeps posts passing both selection gates, and
/// writes them in input order plus a scores.csv sidecar next to the
/// output file.
inline int run_select(const SelectOptions& options, std::ostream& log) {
  try {
    PostStream stream(options.input);
    std::ofstream out(options.output, std::ios::binary);
    if (!out) {
      throw IoError("cannot open for writing: " + options.output.string());
    }
    const std::filesystem::path scores_path =
        options.output.parent_path() / "scores.csv";
    CsvWriter scores(scores_path.string());
    scores.row({"post_id", "entropy", "fraction_polar", "score",
                "labeled_count"});
    std::size_t seen = 0;
    std::size_t selected = 0;
    std::size_t reported_errors = 0;
    while (auto post = stream.next()) {
      ++seen;
      for (; reported_errors < stream.errors().size(); ++reported_errors) {
        const MalformedRecord& record = stream.errors()[reported_errors];
        log << "warning: skipped malformed record at line "
            << record.line_number << ": " << record.message << "\n";
      }
      if (!passes_selection(*post, options.min_comments, options.threshold)) {
        continue;
      }
      ++selected;
      const ControversyScore score = controversy_score(*post);
      out << post_to_json(*post).dump() << '\n';
      scores.row({post->id, format_fixed6(score.entropy),
                  format_fixed6(score.fraction_polar),
                  format_fixed6(score.score),
                  std::to_string(score.labeled_count)});
    }
    for (; reported_errors < stream.errors().size(); ++reported_errors) {
      const MalformedRecord& record = stream.errors()[reported_errors];
      log << "warning: skipped malformed record at line "
          << record.line_number << ": " << record.message << "\n";
    }
    if (!out) throw IoError("write failed: " + options.output.string());
    log << "selected " << selected << " of " << seen << " posts\n";
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

/// Extracts analyses for every post and writes the cache file. Posts are
/// processed with bounded parallelism; output order follows input order.
inline int run_extract(const ExtractOptions& options, std::ostream& log) {
  try {
    std::vector<MalformedRecord> malformed;
    const std::vector<Post> posts = read_posts_jsonl(options.input, &malformed);
    for (const MalformedRecord& record : malformed) {
      log << "warning: skipped malformed record at line " << record.line_number
          << ": " << record.message << "\n";
    }
    if (posts.empty()) {
      log << "error: no posts to extract\n";
      return 1;
    }
    auto extractor = make_extractor(options.config);
    std::vector<std::optional<PostAnalyses>> slots(posts.size());
    std::vector<std::optional<PostFailure>> failures(posts.size());
    detail::parallel_for(posts.size(), options.jobs, [&](std::size_t i) {
      try {
        slots[i] = PostAnalyses{posts[i].id,
                                extractor->extract_post(posts[i])};
      } catch (const std::exception& e) {
        failures[i] = PostFailure{posts[i].id, e.what()};
      }
    });
    std::vector<PostAnalyses> extracted;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < posts.size(); ++i) {
      if (slots[i]) extracted.push_back(std::move(*slots[i]));
      if (failures[i]) {
        ++failed;
        log << "error: post '" << failures[i]->post_id
            << "': " << failures[i]->reason << "\n";
      }
    }
    write_analyses_jsonl(options.output, extracted);
    log << "extracted " << extracted.size() << " of " << posts.size()
        << " posts\n";
    if (failed == posts.size()) return 1;
    return failed > 0 ? 2 : 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

/// Solves every cached post and writes one trace line each. With
/// cross_check, the brute-force oracle runs on every instance and any
/// divergence from the closed form aborts the run.
inline int run_solve(const SolveOptions& options, std::ostream& log) {
  try {
    const std::vector<PostAnalyses> cache =
        read_analyses_jsonl(options.analyses);
    std::ofstream out(options.output, std::ios::binary);
    if (!out) {
      throw IoError("cannot open for writing: " + options.output.string());
    }
    std::size_t failed = 0;
    for (const PostAnalyses& entry : cache) {
      std::vector<SoftConstraint> constraints;
      ConsensusAssignment assignment;
      try {
        constraints = build_constraints(entry.analyses);
        assignment = solve_closed_form(constraints);
      } catch (const std::exception& e) {
        ++failed;
        log << "error: post '" << entry.post_id << "': " << e.what() << "\n";
        continue;
      }
      if (options.cross_check) {
        const ConsensusAssignment oracle = solve_oracle(constraints);
        if (oracle.values != assignment.values ||
            oracle.total_cost != assignment.total_cost) {
          log << "fatal: solver/oracle divergence on post '" << entry.post_id
              << "'\n";
          return 1;
        }
      }
      const ExplanationTrace trace = explain(assignment, constraints);
      out << trace_to_json(entry.post_id, assignment, trace).dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + options.output.string());
    log << "solved " << (cache.size() - failed) << " of " << cache.size()
        << " posts\n";
    if (!cache.empty() && failed == cache.size()) return 1;
    return failed > 0 ? 2 : 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

/// Full reporting pass over a corpus plus its cached analyses, with
/// optional human annotations.
inline int run_report(const ReportOptions& options, std::ostream& log) {
  try {
    std::vector<MalformedRecord> malformed;
    const std::vector<Post> posts = read_posts_jsonl(options.posts, &malformed);
    for (const MalformedRecord& record : malformed) {
      log << "warning: skipped malformed record at line " << record.line_number
          << ": " << record.message << "\n";
    }
    if (posts.empty()) {
      log << "error: no posts to report on\n";
      return 1;
    }
    const std::vector<PostAnalyses> cache =
        read_analyses_jsonl(options.analyses);
    PipelineResult result =
        run_pipeline_cached(posts, cache, options.jobs);
    AggregationReport report =
        options.annotations
            ? compare_with_annotations(result.outcomes, *options.annotations)
            : build_report(result.outcomes);
    report.failures = result.failures;
    emit_report(report, result.outcomes, options.out_dir);
    for (const PostFailure& failure : result.failures) {
      log << "error: post '" << failure.post_id << "': " << failure.reason
          << "\n";
    }
    log << "reported " << result.outcomes.size() << " posts ("
        << result.failures.size() << " failed) to " << options.out_dir.string()
        << "\n";
    if (result.outcomes.empty()) return 1;
    return result.failures.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace verdictforge::cli
