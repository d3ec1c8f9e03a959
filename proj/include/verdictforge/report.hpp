#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "verdictforge/consensus.hpp"
#include "verdictforge/corpus.hpp"
#include "verdictforge/csv.hpp"
#include "verdictforge/errors.hpp"
#include "verdictforge/extraction.hpp"
#include "verdictforge/verdict.hpp"

namespace verdictforge {

/// One post's end-to-end outcome: solver verdict next to the crowd
/// baseline. controversy is all zeros when the post had no labeled
/// top-level comments (no baseline, majority absent).
struct PostOutcome {
  std::string post_id;
  std::optional<VerdictLabel> majority;
  VerdictLabel solver = VerdictLabel::NTA;
  bool changed = false;  // majority present and != solver
  Rule rule = Rule::Vindication;
  ControversyScore controversy;
};

struct PostFailure {
  std::string post_id;
  std::string reason;
};

struct PipelineResult {
  std::vector<PostOutcome> outcomes;  // sorted by post_id
  std::vector<PostFailure> failures;  // sorted by post_id
};

struct AnnotationStats {
  std::int64_t annotated = 0;  // outcomes with a usable human label
  std::int64_t matched = 0;    // of those, solver == human label
  std::vector<std::string> unknown_post_ids;  // annotated but not in outcomes
  std::vector<std::string> tied_post_ids;     // reviewer tie, excluded
};

struct AggregationReport {
  std::int64_t n_posts = 0;
  double change_rate = 0.0;
  // transitions[majority][solver], axes in label order NTA, YTA, ESH, NAH.
  std::array<std::array<std::int64_t, 4>, 4> transitions{};
  std::optional<double> agreement_rate;
  std::array<std::int64_t, 4> per_rule_counts{};
  AnnotationStats annotation;
  std::vector<PostFailure> failures;
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      fn(i);
    }
  };
  const std::size_t pool_size =
      std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::vector<std::thread> pool;
  pool.reserve(pool_size);
  for (std::size_t k = 0; k < pool_size; ++k) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

/// Weight, solve, and classify one post given its analyses.
inline PostOutcome outcome_for(const Post& post,
                               const std::vector<CommentAnalysis>& analyses) {
  PostOutcome outcome;
  outcome.post_id = post.id;
  const std::vector<SoftConstraint> constraints = build_constraints(analyses);
  const ConsensusAssignment assignment = solve_closed_form(constraints);
  const VerdictResult verdict = classify(assignment);
  outcome.solver = verdict.label;
  outcome.rule = verdict.rule;
  outcome.majority = majority_label(post);
  outcome.changed = outcome.majority && *outcome.majority != outcome.solver;
  try {
    outcome.controversy = controversy_score(post);
  } catch (const NoLabeledComments&) {
    outcome.controversy = ControversyScore{};
  }
  return outcome;
}

inline void sort_result(PipelineResult& result) {
  std::sort(result.outcomes.begin(), result.outcomes.end(),
            [](const PostOutcome& a, const PostOutcome& b) {
              return a.post_id < b.post_id;
            });
  std::sort(result.failures.begin(), result.failures.end(),
            [](const PostFailure& a, const PostFailure& b) {
              return a.post_id < b.post_id;
            });
}

}  // namespace detail

/// Extract -> weight -> solve -> classify for every post, fanning out
/// across a bounded worker pool. A post that fails lands in `failures`
/// with its reason, never silently dropped. The extractor must tolerate
/// concurrent extract_post calls when workers > 1.
inline PipelineResult run_pipeline(const std::vector<Post>& posts,
                                   Extractor& extractor, int workers = 1) {
  if (posts.empty()) throw EmptyInput("pipeline requires at least one post");
  std::vector<std::optional<PostOutcome>> slots(posts.size());
  std::vector<std::optional<PostFailure>> failures(posts.size());
  detail::parallel_for(posts.size(), workers, [&](std::size_t i) {
    const Post& post = posts[i];
    try {
      slots[i] = detail::outcome_for(post, extractor.extract_post(post));
    } catch (const std::exception& e) {
      failures[i] = PostFailure{post.id, e.what()};
    }
  });
  PipelineResult result;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    if (slots[i]) result.outcomes.push_back(std::move(*slots[i]));
    if (failures[i]) result.failures.push_back(std::move(*failures[i]));
  }
  detail::sort_result(result);
  return result;
}

inline PipelineResult run_pipeline(const std::vector<Post>& posts,
                                   const ExtractorConfig& config,
                                   int workers = 1) {
  auto extractor = make_extractor(config);
  return run_pipeline(posts, *extractor, workers);
}

/// Pipeline over previously extracted analyses. Posts absent from the
/// cache become failures.
inline PipelineResult run_pipeline_cached(
    const std::vector<Post>& posts, const std::vector<PostAnalyses>& cache,
    int workers = 1) {
  if (posts.empty()) throw EmptyInput("pipeline requires at least one post");
  std::unordered_map<std::string, const std::vector<CommentAnalysis>*> by_id;
  for (const PostAnalyses& entry : cache) {
    by_id[entry.post_id] = &entry.analyses;
  }
  std::vector<std::optional<PostOutcome>> slots(posts.size());
  std::vector<std::optional<PostFailure>> failures(posts.size());
  detail::parallel_for(posts.size(), workers, [&](std::size_t i) {
    const Post& post = posts[i];
    auto it = by_id.find(post.id);
    if (it == by_id.end()) {
      failures[i] = PostFailure{post.id, "no cached analyses for post"};
      return;
    }
    try {
      slots[i] = detail::outcome_for(post, *it->second);
    } catch (const std::exception& e) {
      failures[i] = PostFailure{post.id, e.what()};
    }
  });
  PipelineResult result;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    if (slots[i]) result.outcomes.push_back(std::move(*slots[i]));
    if (failures[i]) result.failures.push_back(std::move(*failures[i]));
  }
  detail::sort_result(result);
  return result;
}

/// Transition counts, change rate, and per-rule counts. Posts without a
/// majority label stay out of the change-rate denominator; a change is
/// undefined without a baseline.
inline AggregationReport build_report(const std::vector<PostOutcome>& outcomes) {
  AggregationReport report;
  report.n_posts = static_cast<std::int64_t>(outcomes.size());
  std::int64_t with_majority = 0;
  std::int64_t changed = 0;
  for (const PostOutcome& outcome : outcomes) {
    ++report.per_rule_counts[rule_index(outcome.rule)];
    if (!outcome.majority) continue;
    ++with_majority;
    ++report.transitions[label_index(*outcome.majority)]
                        [label_index(outcome.solver)];
    if (outcome.changed) ++changed;
  }
  report.change_rate =
      with_majority == 0
          ? 0.0
          : static_cast<double>(changed) / static_cast<double>(with_majority);
  return report;
}

// --- human annotations ------------------------------------------------------
//
// CSV, either `post_id,label` or `post_id,reviewer_id,label` per row
// (an optional header row is recognized by its literal "post_id" first
// field). Per-reviewer labels reduce by plurality; a tie excludes the
// post from the agreement rate and is reported.

namespace detail {

struct AnnotationFile {
  // post_id -> reduced label; nullopt marks a reviewer tie
  std::vector<std::pair<std::string, std::optional<VerdictLabel>>> reduced;
};

inline AnnotationFile read_annotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open annotations file: " + path.string());
  std::map<std::string, std::array<std::int64_t, 4>> votes;
  std::vector<std::string> order;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = csv_split(line);
    if (line_number == 1 && !fields.empty() && fields[0] == "post_id") {
      continue;  // header
    }
    if (fields.size() != 2 && fields.size() != 3) {
      throw Error("annotations line " + std::to_string(line_number) +
                  ": expected 2 or 3 fields, got " +
                  std::to_string(fields.size()));
    }
    const std::string& post_id = fields[0];
    const std::string& label_text = fields.back();
    const auto label = label_from_string(label_text);
    if (!label) {
      throw Error("annotations line " + std::to_string(line_number) +
                  ": unknown label '" + label_text + "'");
    }
    auto [it, inserted] = votes.try_emplace(post_id);
    if (inserted) order.push_back(post_id);
    ++it->second[label_index(*label)];
  }
  AnnotationFile file;
  for (const std::string& post_id : order) {
    const auto& histogram = votes[post_id];
    std::int64_t best = 0;
    for (std::int64_t count : histogram) best = std::max(best, count);
    int winners = 0;
    VerdictLabel winner = VerdictLabel::NTA;
    for (VerdictLabel label : kAllLabels) {
      if (histogram[label_index(label)] == best) {
        ++winners;
        winner = label;
      }
    }
    if (winners == 1) {
      file.reduced.emplace_back(post_id, winner);
    } else {
      file.reduced.emplace_back(post_id, std::nullopt);
    }
  }
  return file;
}

}  // namespace detail

/// Scores solver verdicts against independent human annotations.
/// agreement_rate is the matched fraction over annotated posts present in
/// `outcomes`; absent when nothing usable was annotated. Unknown post ids
/// are listed, never fatal.
inline AggregationReport compare_with_annotations(
    const std::vector<PostOutcome>& outcomes,
    const std::filesystem::path& annotations_path) {
  AggregationReport report = build_report(outcomes);
  std::unordered_map<std::string, const PostOutcome*> by_id;
  for (const PostOutcome& outcome : outcomes) {
    by_id[outcome.post_id] = &outcome;
  }
  const detail::AnnotationFile file =
      detail::read_annotations(annotations_path);
  for (const auto& [post_id, label] : file.reduced) {
    auto it = by_id.find(post_id);
    if (it == by_id.end()) {
      report.annotation.unknown_post_ids.push_back(post_id);
      continue;
    }
    if (!label) {
      report.annotation.tied_post_ids.push_back(post_id);
      continue;
    }
    ++report.annotation.annotated;
    if (it->second->solver == *label) ++report.annotation.matched;
  }
  if (report.annotation.annotated > 0) {
    report.agreement_rate =
        static_cast<double>(report.annotation.matched) /
        static_cast<double>(report.annotation.annotated);
  }
  std::sort(report.annotation.unknown_post_ids.begin(),
            report.annotation.unknown_post_ids.end());
  std::sort(report.annotation.tied_post_ids.begin(),
            report.annotation.tied_post_ids.end());
  return report;
}

// --- emission ---------------------------------------------------------------

/// Writes outcomes.csv, transitions.csv, and summary.json into out_dir.
/// Rows are sorted by post_id and reals fixed to six decimals, so
/// identical inputs produce byte-identical files.
inline void emit_report(const AggregationReport& report,
                        std::vector<PostOutcome> outcomes,
                        const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory: " + out_dir.string());

  std::sort(outcomes.begin(), outcomes.end(),
            [](const PostOutcome& a, const PostOutcome& b) {
              return a.post_id < b.post_id;
            });

  CsvWriter outcomes_csv((out_dir / "outcomes.csv").string());
  outcomes_csv.row({"post_id", "majority", "solver", "changed", "rule",
                    "entropy", "score"});
  for (const PostOutcome& outcome : outcomes) {
    outcomes_csv.row({
        outcome.post_id,
        outcome.majority ? std::string(to_string(*outcome.majority)) : "",
        std::string(to_string(outcome.solver)),
        outcome.changed ? "true" : "false",
        std::string(to_string(outcome.rule)),
        format_fixed6(outcome.controversy.entropy),
        format_fixed6(outcome.controversy.score),
    });
  }

  CsvWriter transitions_csv((out_dir / "transitions.csv").string());
  transitions_csv.row({"from", "to", "count"});
  for (VerdictLabel from : kAllLabels) {
    for (VerdictLabel to : kAllLabels) {
      transitions_csv.row(
          {std::string(to_string(from)), std::string(to_string(to)),
           std::to_string(report.transitions[label_index(from)]
                                            [label_index(to)])});
    }
  }

  nlohmann::json per_rule;
  for (Rule rule : kAllRules) {
    per_rule[std::string(to_string(rule))] =
        report.per_rule_counts[rule_index(rule)];
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const PostFailure& failure : report.failures) {
    failures.push_back(
        {{"post_id", failure.post_id}, {"reason", failure.reason}});
  }
  nlohmann::json summary = {
      {"n_posts", report.n_posts},
      {"change_rate", report.change_rate},
      {"agreement_rate", report.agreement_rate
                             ? nlohmann::json(*report.agreement_rate)
                             : nlohmann::json(nullptr)},
      {"per_rule_counts", std::move(per_rule)},
      {"annotation_coverage",
       {{"annotated", report.annotation.annotated},
        {"matched", report.annotation.matched},
        {"unknown_post_ids", report.annotation.unknown_post_ids},
        {"tied_post_ids", report.annotation.tied_post_ids}}},
      {"failures", std::move(failures)},
  };
  std::ofstream summary_out(out_dir / "summary.json", std::ios::binary);
  if (!summary_out) {
    throw IoError("cannot open for writing: " +
                  (out_dir / "summary.json").string());
  }
  summary_out << summary.dump(2) << '\n';
  if (!summary_out) {
    throw IoError("write failed: " + (out_dir / "summary.json").string());
  }
}

}  // namespace verdictforge
