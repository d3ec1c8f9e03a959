#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "verdictforge/errors.hpp"
#include "verdictforge/labels.hpp"

namespace verdictforge {

struct Comment {
  std::string id;
  std::string body;
  std::int64_t score = 0;        // upvotes minus downvotes
  std::int64_t created_utc = 0;  // epoch seconds
  bool is_top_level = false;
  std::optional<VerdictLabel> parsed_label;
};

struct Post {
  std::string id;
  std::string title;
  std::string body;
  std::vector<Comment> comments;  // input order preserved

  std::size_t top_level_count() const {
    return static_cast<std::size_t>(
        std::count_if(comments.begin(), comments.end(),
                      [](const Comment& c) { return c.is_top_level; }));
  }
};

/// Entropy-based disagreement measure over the label distribution of a
/// post's labeled top-level comments.
struct ControversyScore {
  double entropy = 0.0;          // bits, in [0, 2]
  double fraction_polar = 0.0;   // (NTA + YTA) / labeled total
  double score = 0.0;            // entropy * fraction_polar
  std::int64_t labeled_count = 0;
  std::array<std::int64_t, 4> label_histogram = {0, 0, 0, 0};
};

/// Finds the first verdict acronym in `body`: case-insensitive, matched on
/// whole tokens only (neighbors must not be ASCII alphanumerics or '_').
/// Earliest occurrence wins; spelled-out phrases are not recognized.
inline std::optional<VerdictLabel> parse_label(std::string_view body) {
  auto is_word_char = [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
           (c >= 'A' && c <= 'Z') || c == '_';
  };
  for (std::size_t i = 0; i + 3 <= body.size(); ++i) {
    if (i > 0 && is_word_char(body[i - 1])) continue;
    if (i + 3 < body.size() && is_word_char(body[i + 3])) continue;
    if (auto label = label_from_string(body.substr(i, 3))) return label;
  }
  return std::nullopt;
}

/// The baseline verdict: label of the highest-scoring labeled top-level
/// comment. Ties break by earliest created_utc, then ascending id, so the
/// result never depends on list position. Absent when no top-level
/// comment carries a label.
inline std::optional<VerdictLabel> majority_label(const Post& post) {
  const Comment* best = nullptr;
  for (const Comment& c : post.comments) {
    if (!c.is_top_level || !c.parsed_label) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    if (c.score != best->score) {
      if (c.score > best->score) best = &c;
    } else if (c.created_utc != best->created_utc) {
      if (c.created_utc < best->created_utc) best = &c;
    } else if (c.id < best->id) {
      best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->parsed_label;
}

/// Shannon entropy (bits) and polar-fraction score for a label histogram.
/// 0 * log2(0) is taken as 0.
inline ControversyScore controversy_from_histogram(
    const std::array<std::int64_t, 4>& histogram) {
  ControversyScore result;
  result.label_histogram = histogram;
  for (std::int64_t count : histogram) result.labeled_count += count;
  if (result.labeled_count == 0) {
    throw NoLabeledComments("<histogram>");
  }
  const double total = static_cast<double>(result.labeled_count);
  double entropy = 0.0;
  for (std::int64_t count : histogram) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / total;
    entropy -= p * std::log2(p);
  }
  result.entropy = entropy;
  result.fraction_polar =
      static_cast<double>(histogram[label_index(VerdictLabel::NTA)] +
                          histogram[label_index(VerdictLabel::YTA)]) /
      total;
  result.score = result.entropy * result.fraction_polar;
  return result;
}

/// Label distribution over labeled top-level comments only; unlabeled
/// comments are invisible to the distribution. Throws NoLabeledComments
/// when the post has none.
inline ControversyScore controversy_score(const Post& post) {
  std::array<std::int64_t, 4> histogram = {0, 0, 0, 0};
  bool any = false;
  for (const Comment& c : post.comments) {
    if (!c.is_top_level || !c.parsed_label) continue;
    ++histogram[label_index(*c.parsed_label)];
    any = true;
  }
  if (!any) throw NoLabeledComments(post.id);
  return controversy_from_histogram(histogram);
}

/// Selection gate: at least `min_comments` top-level comments (labeled or
/// not) and controversy score strictly above `threshold`. Posts whose
/// score is undefined (no labeled comments) never pass.
inline bool passes_selection(const Post& post, std::int64_t min_comments,
                             double threshold) {
  if (static_cast<std::int64_t>(post.top_level_count()) < min_comments) {
    return false;
  }
  try {
    return controversy_score(post).score > threshold;
  } catch (const NoLabeledComments&) {
    return false;
  }
}

/// Filters a materialized corpus, preserving input order.
inline std::vector<Post> select_controversial(const std::vector<Post>& posts,
                                              std::int64_t min_comments,
                                              double threshold) {
  std::vector<Post> selected;
  for (const Post& post : posts) {
    if (passes_selection(post, min_comments, threshold)) {
      selected.push_back(post);
    }
  }
  return selected;
}

// --- JSONL ingestion ------------------------------------------------------
//
// One post object per line:
//   {"id": str, "title": str, "body": str,
//    "comments": [{"id": str, "body": str, "score": int,
//                  "created_utc": int, "is_top_level": bool}]}
// Unknown fields are ignored.

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& obj,
                                           const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(std::string("missing field '") + key + "'");
  }
  return *it;
}

inline std::string require_string(const nlohmann::json& obj,
                                  const char* key) {
  const auto& value = require_field(obj, key);
  if (!value.is_string()) {
    throw Error(std::string("field '") + key + "' is not a string");
  }
  return value.get<std::string>();
}

inline std::int64_t require_int(const nlohmann::json& obj, const char* key) {
  const auto& value = require_field(obj, key);
  if (!value.is_number_integer()) {
    throw Error(std::string("field '") + key + "' is not an integer");
  }
  return value.get<std::int64_t>();
}

inline bool require_bool(const nlohmann::json& obj, const char* key) {
  const auto& value = require_field(obj, key);
  if (!value.is_boolean()) {
    throw Error(std::string("field '") + key + "' is not a boolean");
  }
  return value.get<bool>();
}

}  // namespace detail

/// Builds a Post from one parsed JSONL record, parsing comment labels
/// eagerly. Throws Error on schema problems (empty or duplicate ids,
/// missing or mistyped fields).
inline Post post_from_json(const nlohmann::json& record) {
  if (!record.is_object()) throw Error("post record is not an object");
  Post post;
  post.id = detail::require_string(record, "id");
  if (post.id.empty()) throw Error("post id is empty");
  post.title = detail::require_string(record, "title");
  post.body = detail::require_string(record, "body");
  const auto& comments = detail::require_field(record, "comments");
  if (!comments.is_array()) throw Error("field 'comments' is not an array");
  std::unordered_set<std::string> seen_ids;
  for (const auto& entry : comments) {
    if (!entry.is_object()) throw Error("comment entry is not an object");
    Comment comment;
    comment.id = detail::require_string(entry, "id");
    if (comment.id.empty()) throw Error("comment id is empty");
    if (!seen_ids.insert(comment.id).second) {
      throw Error("duplicate comment id '" + comment.id + "'");
    }
    comment.body = detail::require_string(entry, "body");
    comment.score = detail::require_int(entry, "score");
    comment.created_utc = detail::require_int(entry, "created_utc");
    comment.is_top_level = detail::require_bool(entry, "is_top_level");
    comment.parsed_label = parse_label(comment.body);
    post.comments.push_back(std::move(comment));
  }
  return post;
}

/// Serializes a post back to the canonical JSONL schema. Fields not in
/// the schema are not carried through ingestion, so they do not reappear.
inline nlohmann::json post_to_json(const Post& post) {
  nlohmann::json comments = nlohmann::json::array();
  for (const Comment& c : post.comments) {
    comments.push_back({{"id", c.id},
                        {"body", c.body},
                        {"score", c.score},
                        {"created_utc", c.created_utc},
                        {"is_top_level", c.is_top_level}});
  }
  return {{"id", post.id},
          {"title", post.title},
          {"body", post.body},
          {"comments", std::move(comments)}};
}

/// Streams posts out of a JSONL file in file order. A malformed line is
/// skipped and recorded with its 1-based line number; it never aborts the
/// stream. Opening a missing or unreadable file throws IoError.
class PostStream {
 public:
  explicit PostStream(const std::filesystem::path& path)
      : in_(path, std::ios::binary), path_(path.string()) {
    if (!in_) throw IoError("cannot open posts file: " + path_);
  }

  /// Next well-formed post, or nullopt at end of file.
  std::optional<Post> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      if (line.empty() || line == "\r") continue;
      try {
        return post_from_json(nlohmann::json::parse(line));
      } catch (const std::exception& e) {
        errors_.push_back({line_number_, e.what()});
      }
    }
    return std::nullopt;
  }

  const std::vector<MalformedRecord>& errors() const { return errors_; }

 private:
  std::ifstream in_;
  std::string path_;
  std::size_t line_number_ = 0;
  std::vector<MalformedRecord> errors_;
};

/// Materializes a whole corpus. Malformed-line reports, if any, are
/// appended to `errors` when it is non-null.
inline std::vector<Post> read_posts_jsonl(
    const std::filesystem::path& path,
    std::vector<MalformedRecord>* errors = nullptr) {
  PostStream stream(path);
  std::vector<Post> posts;
  while (auto post = stream.next()) posts.push_back(std::move(*post));
  if (errors != nullptr) {
    errors->insert(errors->end(), stream.errors().begin(),
                   stream.errors().end());
  }
  return posts;
}

inline void write_posts_jsonl(const std::filesystem::path& path,
                              const std::vector<Post>& posts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const Post& post : posts) {
    out << post_to_json(post).dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace verdictforge
