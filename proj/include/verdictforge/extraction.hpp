#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "verdictforge/analysis.hpp"
#include "verdictforge/corpus.hpp"
#include "verdictforge/errors.hpp"
#include "verdictforge/rule_table.hpp"

namespace verdictforge {

inline constexpr const char* kApiKeyEnvVar = "VERDICT_FORGE_API_KEY";

enum class ExtractorBackend { RuleBased, Remote };

struct ExtractorConfig {
  ExtractorBackend backend = ExtractorBackend::RuleBased;
  std::string endpoint_url;  // remote: full URL of the chat endpoint
  std::string model_name;    // remote: model identifier sent on the wire
  double temperature = 0.0;
  int max_output_tokens = 1000;
  int retry_limit = 3;
  int timeout_seconds = 60;
  double retry_backoff_seconds = 1.0;  // doubles per failed attempt
  std::optional<std::filesystem::path> rule_table_path;  // rule_based override
};

// --- response schema --------------------------------------------------------
//
// Backends must return one strictly valid JSON object:
//   {"analyses": [{"comment_id": "<string>",
//                  "comment_content_vector": [harm, intent, empathy, apology],
//                  "comment_quality_vector": [justif, ethic, delib, fairness,
//                                             nonbias],
//                  "reasoning": "<max two sentences>"}]}
// with content entries in {0,1}, quality entries in {1..5}, no extra keys,
// no trailing commas, and no non-JSON preamble or trailing text.

inline nlohmann::json analysis_to_json(const CommentAnalysis& analysis) {
  return {{"comment_id", analysis.comment_id},
          {"comment_content_vector", analysis.content.as_ints()},
          {"comment_quality_vector", analysis.quality.as_ints()},
          {"reasoning", analysis.reasoning}};
}

/// Canonical serialization of a full response object.
inline std::string serialize_response(
    const std::vector<CommentAnalysis>& analyses) {
  nlohmann::json entries = nlohmann::json::array();
  for (const CommentAnalysis& analysis : analyses) {
    entries.push_back(analysis_to_json(analysis));
  }
  return nlohmann::json{{"analyses", std::move(entries)}}.dump();
}

namespace detail {

inline int require_bounded_int(const nlohmann::json& value,
                               const std::string& comment_id,
                               const std::string& field, int lo, int hi) {
  if (!value.is_number_integer()) {
    throw SchemaViolation(comment_id, field,
                          "field '" + field + "' is not an integer");
  }
  const auto n = value.get<std::int64_t>();
  if (n < lo || n > hi) {
    throw SchemaViolation(comment_id, field,
                          "field '" + field + "' = " + std::to_string(n) +
                              " outside [" + std::to_string(lo) + "," +
                              std::to_string(hi) + "]");
  }
  return static_cast<int>(n);
}

/// Validates one analysis entry: exact key set, bounded integer vectors.
inline CommentAnalysis analysis_from_json(const nlohmann::json& entry) {
  if (!entry.is_object()) {
    throw SchemaViolation("", "analyses", "analysis entry is not an object");
  }
  auto id_it = entry.find("comment_id");
  if (id_it == entry.end() || !id_it->is_string()) {
    throw SchemaViolation("", "comment_id",
                          "missing or non-string 'comment_id'");
  }
  CommentAnalysis analysis;
  analysis.comment_id = id_it->get<std::string>();
  for (const auto& [key, value] : entry.items()) {
    (void)value;
    if (key != "comment_id" && key != "comment_content_vector" &&
        key != "comment_quality_vector" && key != "reasoning") {
      throw SchemaViolation(analysis.comment_id, key,
                            "unexpected field '" + key + "'");
    }
  }
  auto content_it = entry.find("comment_content_vector");
  if (content_it == entry.end() || !content_it->is_array() ||
      content_it->size() != 4) {
    throw SchemaViolation(analysis.comment_id, "comment_content_vector",
                          "missing or malformed 'comment_content_vector'");
  }
  std::array<int, 4> content{};
  for (std::size_t i = 0; i < 4; ++i) {
    content[i] = require_bounded_int(
        (*content_it)[i], analysis.comment_id,
        "comment_content_vector[" + std::to_string(i) + "]", 0, 1);
  }
  analysis.content = ContentVector{content[0] == 1, content[1] == 1,
                                   content[2] == 1, content[3] == 1};
  auto quality_it = entry.find("comment_quality_vector");
  if (quality_it == entry.end() || !quality_it->is_array() ||
      quality_it->size() != 5) {
    throw SchemaViolation(analysis.comment_id, "comment_quality_vector",
                          "missing or malformed 'comment_quality_vector'");
  }
  std::array<int, 5> quality{};
  for (std::size_t i = 0; i < 5; ++i) {
    quality[i] = require_bounded_int(
        (*quality_it)[i], analysis.comment_id,
        "comment_quality_vector[" + std::to_string(i) + "]", 1, 5);
  }
  analysis.quality = QualityVector{quality[0], quality[1], quality[2],
                                   quality[3], quality[4]};
  auto reasoning_it = entry.find("reasoning");
  if (reasoning_it == entry.end() || !reasoning_it->is_string()) {
    throw SchemaViolation(analysis.comment_id, "reasoning",
                          "missing or non-string 'reasoning'");
  }
  analysis.reasoning = reasoning_it->get<std::string>();
  return analysis;
}

}  // namespace detail

/// Parses and validates a verbatim backend response body against the
/// schema and the exact expected comment-id set. Any preamble, trailing
/// text, or trailing comma fails the JSON parse; range and type errors
/// raise SchemaViolation; id-set mismatches raise MissingComment.
inline std::vector<CommentAnalysis> validate_response(
    std::string_view raw, const std::set<std::string>& expected_ids) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte > 0 ? e.byte - 1 : 0, e.what());
  }
  if (!doc.is_object()) {
    throw SchemaViolation("", "analyses", "response is not a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "analyses") {
      throw SchemaViolation("", key, "unexpected top-level field '" + key + "'");
    }
  }
  auto analyses_it = doc.find("analyses");
  if (analyses_it == doc.end() || !analyses_it->is_array()) {
    throw SchemaViolation("", "analyses", "missing or non-array 'analyses'");
  }
  std::vector<CommentAnalysis> analyses;
  std::set<std::string> seen;
  for (const auto& entry : *analyses_it) {
    CommentAnalysis analysis = detail::analysis_from_json(entry);
    if (expected_ids.find(analysis.comment_id) == expected_ids.end()) {
      throw MissingComment(analysis.comment_id,
                           "response names unknown comment id '" +
                               analysis.comment_id + "'");
    }
    if (!seen.insert(analysis.comment_id).second) {
      throw SchemaViolation(analysis.comment_id, "comment_id",
                            "duplicate comment id '" + analysis.comment_id +
                                "'");
    }
    analyses.push_back(std::move(analysis));
  }
  for (const std::string& id : expected_ids) {
    if (seen.find(id) == seen.end()) {
      throw MissingComment(id, "response omits comment id '" + id + "'");
    }
  }
  return analyses;
}

// --- prompt construction ----------------------------------------------------

inline std::string build_system_prompt() {
  return
      "You are a fair and neutral comment evaluator. Your task is to "
      "evaluate comments on a Reddit 'Am I the Asshole' (AITA) post. For "
      "every comment listed you will produce a content vector of four "
      "binary predicates describing the claims the comment makes about the "
      "original poster, a quality vector of five integer scores describing "
      "the comment's own epistemic quality, and a reasoning string of at "
      "most two sentences.\n"
      "\n"
      "Content predicates, each encoded as 0 or 1. Each dimension is "
      "grounded in explicit moral theories to maintain interpretive "
      "consistency:\n"
      "- harm: the comment asserts the poster's action caused unjustified "
      "harm. Follows Dyadic Morality (Schein & Gray, 2018).\n"
      "- intent: the comment asserts the harm was deliberate rather than "
      "accidental. Follows Dyadic Morality (Schein & Gray, 2018).\n"
      "- empathy: the comment asserts the poster showed empathy or genuine "
      "concern for the other party. Draws on the Care/Harm foundation of "
      "Moral Foundations Theory (Graham et al., 2013).\n"
      "- apology: the comment asserts the poster apologized or attempted "
      "to repair the relationship. Follows Image Repair Theory (Benoit, "
      "1997).\n"
      "\n"
      "Quality dimensions, each an integer from 1 to 5:\n"
      "- justification: strength of stated reasons and evidence. Derives "
      "from Toulmin's Argumentation Model (1958).\n"
      "- ethic: grounding in explicit ethical principles.\n"
      "- deliberation: engagement with multiple considerations or "
      "counterarguments. Derives from Toulmin's Argumentation Model "
      "(1958).\n"
      "- fairness: impartiality toward both parties. Follows Ideal "
      "Observer Theory (Smith, 1759).\n"
      "- nonbias: absence of loaded, prejudiced, or abusive language; 5 "
      "means fully unbiased.\n"
      "\n"
      "Your output MUST be valid JSON: a single object with the schema\n"
      "{\n"
      "  \"analyses\": [\n"
      "    {\n"
      "      \"comment_id\": \"<string>\",\n"
      "      \"comment_content_vector\": [harm, intent, empathy, apology],\n"
      "      \"comment_quality_vector\": [justif, ethic, delib, fairness, "
      "nonbias],\n"
      "      \"reasoning\": \"<max two sentences>\"\n"
      "    }\n"
      "  ]\n"
      "}\n"
      "where comment_content_vector entries are integers in {0,1} and "
      "comment_quality_vector entries are integers in {1,...,5}. Return "
      "exactly one analysis per comment id provided, in the order "
      "provided. Trailing commas, non-JSON preamble, and any text outside "
      "the JSON object are prohibited.";
}

/// The user prompt: the whole post and all of its top-level comments in
/// one message, so the comment set shares context. Byte-deterministic.
inline std::string build_user_prompt(const Post& post) {
  std::ostringstream out;
  out << "POST TITLE: " << post.title << "\n";
  out << "POST BODY:\n" << post.body << "\n\n";
  out << "TOP-LEVEL COMMENTS (" << post.top_level_count() << "):\n";
  for (const Comment& comment : post.comments) {
    if (!comment.is_top_level) continue;
    out << "[comment id=" << comment.id << "]\n" << comment.body << "\n\n";
  }
  out << "Evaluate every comment listed above.";
  return out.str();
}

/// System and user parts concatenated; identical posts yield identical
/// bytes.
inline std::string build_prompt(const Post& post) {
  return build_system_prompt() + "\n\n" + build_user_prompt(post);
}

// --- backends ---------------------------------------------------------------

/// Produces one CommentAnalysis per top-level comment of a post.
class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual std::vector<CommentAnalysis> extract_post(const Post& post) = 0;
};

class RuleBasedExtractor final : public Extractor {
 public:
  RuleBasedExtractor() : table_(&RuleTable::v1()) {}
  explicit RuleBasedExtractor(const RuleTable& table) : table_(&table) {}

  std::vector<CommentAnalysis> extract_post(const Post& post) override {
    std::vector<CommentAnalysis> analyses;
    for (const Comment& comment : post.comments) {
      if (!comment.is_top_level) continue;
      analyses.push_back(table_->apply(comment));
    }
    if (analyses.empty()) {
      throw EmptyInput("post '" + post.id + "' has no top-level comments");
    }
    return analyses;
  }

 private:
  const RuleTable* table_;
};

/// Chat-completion-style HTTP backend. One request carries one post and
/// all of its top-level comments; the response body's message content
/// must be the schema object. Credentials come from VERDICT_FORGE_API_KEY.
class RemoteExtractor final : public Extractor {
 public:
  explicit RemoteExtractor(ExtractorConfig config)
      : config_(std::move(config)) {
    if (config_.endpoint_url.empty()) {
      throw Error("remote backend requires an endpoint URL");
    }
    const char* key = std::getenv(kApiKeyEnvVar);
    if (key == nullptr || *key == '\0') {
      throw Error(std::string("remote backend requires credentials in $") +
                  kApiKeyEnvVar);
    }
    api_key_ = key;
    split_url(config_.endpoint_url, origin_, path_);
  }

  std::vector<CommentAnalysis> extract_post(const Post& post) override {
    std::set<std::string> expected_ids;
    for (const Comment& comment : post.comments) {
      if (comment.is_top_level) expected_ids.insert(comment.id);
    }
    if (expected_ids.empty()) {
      throw EmptyInput("post '" + post.id + "' has no top-level comments");
    }

    nlohmann::json messages = nlohmann::json::array();
    messages.push_back({{"role", "system"}, {"content", build_system_prompt()}});
    messages.push_back({{"role", "user"}, {"content", build_user_prompt(post)}});

    std::string last_cause = "no attempt made";
    for (int attempt = 1; attempt <= config_.retry_limit; ++attempt) {
      if (attempt > 1) {
        const double factor = std::pow(2.0, attempt - 2);
        backoff(config_.retry_backoff_seconds * factor);
      }
      std::string raw;
      try {
        raw = request_completion(messages);
      } catch (const Error& e) {
        last_cause = e.what();
        continue;
      }
      try {
        return validate_response(raw, expected_ids);
      } catch (const Error& validation_error) {
        // One corrective re-prompt per attempt: feed the validator's error
        // back before this attempt counts as failed.
        nlohmann::json retry_messages = messages;
        retry_messages.push_back({{"role", "assistant"}, {"content", raw}});
        retry_messages.push_back(
            {{"role", "user"},
             {"content",
              std::string("Your previous response violated the required "
                          "schema: ") +
                  validation_error.what() +
                  " Return only the corrected JSON object."}});
        try {
          const std::string corrected = request_completion(retry_messages);
          return validate_response(corrected, expected_ids);
        } catch (const Error& e) {
          last_cause = e.what();
          continue;
        }
      }
    }
    throw ExtractionFailed(post.id, last_cause);
  }

 private:
  static void split_url(const std::string& url, std::string& origin,
                        std::string& path) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      throw Error("endpoint URL must include a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
      origin = url;
      path = "/";
    } else {
      origin = url.substr(0, path_start);
      path = url.substr(path_start);
    }
  }

  static void backoff(double seconds) {
    if (seconds <= 0.0) return;
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
  }

  std::string request_completion(const nlohmann::json& messages) {
    nlohmann::json body = {{"model_name", config_.model_name},
                           {"temperature", config_.temperature},
                           {"max_output_tokens", config_.max_output_tokens},
                           {"messages", messages}};
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers = {
        {"Authorization", "Bearer " + api_key_},
    };
    auto result = client.Post(path_, headers, body.dump(), "application/json");
    if (!result) {
      throw Error("transport error: " + httplib::to_string(result.error()));
    }
    if (result->status != 200) {
      // Includes context-window overflows: the post is never chunked into
      // multiple calls, the backend's refusal is surfaced instead.
      throw Error("endpoint returned HTTP " + std::to_string(result->status) +
                  ": " + result->body);
    }
    nlohmann::json envelope;
    try {
      envelope = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(std::string("malformed completion envelope: ") + e.what());
    }
    try {
      return envelope.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw Error("completion envelope has no choices[0].message.content");
    }
  }

  ExtractorConfig config_;
  std::string api_key_;
  std::string origin_;
  std::string path_;
};

inline std::unique_ptr<Extractor> make_extractor(const ExtractorConfig& config) {
  switch (config.backend) {
    case ExtractorBackend::RuleBased: {
      if (config.rule_table_path) {
        auto table = std::make_shared<RuleTable>(
            RuleTable::load(*config.rule_table_path));
        // Keep the loaded table alive alongside the extractor.
        struct OwningRuleBased final : Extractor {
          explicit OwningRuleBased(std::shared_ptr<RuleTable> t)
              : table(std::move(t)), inner(*table) {}
          std::vector<CommentAnalysis> extract_post(const Post& post) override {
            return inner.extract_post(post);
          }
          std::shared_ptr<RuleTable> table;
          RuleBasedExtractor inner;
        };
        return std::make_unique<OwningRuleBased>(std::move(table));
      }
      return std::make_unique<RuleBasedExtractor>();
    }
    case ExtractorBackend::Remote:
      return std::make_unique<RemoteExtractor>(config);
  }
  throw Error("unknown extractor backend");
}

/// One-shot extraction for a single post under the given configuration.
inline std::vector<CommentAnalysis> extract_post(const Post& post,
                                                 const ExtractorConfig& config) {
  return make_extractor(config)->extract_post(post);
}

// --- analysis cache ---------------------------------------------------------
//
// analyses.jsonl, one line per post:
//   {"post_id": str, "analyses": [CommentAnalysis...]}
// Solving and reporting read this file so extraction never reruns.

struct PostAnalyses {
  std::string post_id;
  std::vector<CommentAnalysis> analyses;
};

inline void write_analyses_jsonl(const std::filesystem::path& path,
                                 const std::vector<PostAnalyses>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const PostAnalyses& entry : entries) {
    nlohmann::json analyses = nlohmann::json::array();
    for (const CommentAnalysis& analysis : entry.analyses) {
      analyses.push_back(analysis_to_json(analysis));
    }
    out << nlohmann::json{{"post_id", entry.post_id},
                          {"analyses", std::move(analyses)}}
               .dump()
        << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

/// Strict reader for the cache format this library writes itself.
inline std::vector<PostAnalyses> read_analyses_jsonl(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open analyses file: " + path.string());
  std::vector<PostAnalyses> entries;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.byte > 0 ? e.byte - 1 : 0,
                       "analyses line " + std::to_string(line_number) + ": " +
                           e.what());
    }
    PostAnalyses entry;
    if (!record.is_object() || !record.contains("post_id") ||
        !record["post_id"].is_string() || !record.contains("analyses") ||
        !record["analyses"].is_array()) {
      throw SchemaViolation("", "post_id",
                            "analyses line " + std::to_string(line_number) +
                                ": expected {post_id, analyses}");
    }
    entry.post_id = record["post_id"].get<std::string>();
    for (const auto& item : record["analyses"]) {
      entry.analyses.push_back(detail::analysis_from_json(item));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace verdictforge
