#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "verdictforge/analysis.hpp"
#include "verdictforge/corpus.hpp"
#include "verdictforge/errors.hpp"
#include "verdictforge/rule_table_v1.hpp"

namespace verdictforge {

// Deterministic keyword table backing the offline extractor. The table is
// a versioned data artifact (data/rule_table_<version>.json); the matching
// semantics live here:
//
//  * the comment body is ASCII-lowercased once; a pattern matches if it
//    occurs as a substring, and counts at most once however often it occurs;
//  * a content predicate is 1 iff some positive cue matches and no negative
//    cue does (negations veto, so "never said sorry" does not assert an
//    apology);
//  * a quality score is clamp(base + matched cue deltas + length bonuses,
//    1, 5); for nonbias, any force_floor match (slurs, abuse) pins the
//    score to 1 outright.

struct QualityCue {
  std::string pattern;
  int delta = 0;
};

struct LengthBonus {
  int min_words = 0;
  int delta = 0;
};

struct ContentRule {
  std::vector<std::string> positive;
  std::vector<std::string> negative;
};

struct QualityRule {
  int base = 1;
  std::vector<QualityCue> cues;
  std::vector<LengthBonus> length_bonus;
  std::vector<std::string> force_floor;
};

class RuleTable {
 public:
  static RuleTable from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.byte > 0 ? e.byte - 1 : 0,
                       std::string("rule table: ") + e.what());
    }
    RuleTable table;
    table.version_ = doc.at("version").get<std::string>();
    const auto& content = doc.at("content");
    table.harm_ = parse_content(content.at("harm"));
    table.intent_ = parse_content(content.at("intent"));
    table.empathy_ = parse_content(content.at("empathy"));
    table.apology_ = parse_content(content.at("apology"));
    const auto& quality = doc.at("quality");
    table.justification_ = parse_quality(quality.at("justification"));
    table.ethic_ = parse_quality(quality.at("ethic"));
    table.deliberation_ = parse_quality(quality.at("deliberation"));
    table.fairness_ = parse_quality(quality.at("fairness"));
    table.nonbias_ = parse_quality(quality.at("nonbias"));
    return table;
  }

  static RuleTable load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open rule table: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
  }

  /// The built-in v1 table.
  static const RuleTable& v1() {
    static const RuleTable table = from_json_text(rule_table_v1_json());
    return table;
  }

  const std::string& version() const { return version_; }

  ContentVector content_of(std::string_view body) const {
    const std::string lowered = lowercase(body);
    return ContentVector{
        match_content(harm_, lowered),
        match_content(intent_, lowered),
        match_content(empathy_, lowered),
        match_content(apology_, lowered),
    };
  }

  QualityVector quality_of(std::string_view body) const {
    const std::string lowered = lowercase(body);
    const int words = word_count(lowered);
    return QualityVector{
        score_quality(justification_, lowered, words),
        score_quality(ethic_, lowered, words),
        score_quality(deliberation_, lowered, words),
        score_quality(fairness_, lowered, words),
        score_quality(nonbias_, lowered, words),
    };
  }

  CommentAnalysis apply(const Comment& comment) const {
    const std::string lowered = lowercase(comment.body);
    const int words = word_count(lowered);
    CommentAnalysis analysis;
    analysis.comment_id = comment.id;
    analysis.content = ContentVector{
        match_content(harm_, lowered),
        match_content(intent_, lowered),
        match_content(empathy_, lowered),
        match_content(apology_, lowered),
    };
    analysis.quality = QualityVector{
        score_quality(justification_, lowered, words),
        score_quality(ethic_, lowered, words),
        score_quality(deliberation_, lowered, words),
        score_quality(fairness_, lowered, words),
        score_quality(nonbias_, lowered, words),
    };
    analysis.reasoning = "Rule table " + version_ + " matched " +
                         std::to_string(matched_content_cues(lowered)) +
                         " content cue(s) and " +
                         std::to_string(matched_quality_cues(lowered)) +
                         " quality cue(s).";
    return analysis;
  }

 private:
  static ContentRule parse_content(const nlohmann::json& node) {
    ContentRule rule;
    rule.positive = node.at("positive").get<std::vector<std::string>>();
    rule.negative = node.at("negative").get<std::vector<std::string>>();
    return rule;
  }

  static QualityRule parse_quality(const nlohmann::json& node) {
    QualityRule rule;
    rule.base = node.at("base").get<int>();
    for (const auto& cue : node.at("cues")) {
      rule.cues.push_back(
          {cue.at("pattern").get<std::string>(), cue.at("delta").get<int>()});
    }
    if (node.contains("length_bonus")) {
      for (const auto& bonus : node.at("length_bonus")) {
        rule.length_bonus.push_back({bonus.at("min_words").get<int>(),
                                     bonus.at("delta").get<int>()});
      }
    }
    if (node.contains("force_floor")) {
      rule.force_floor = node.at("force_floor").get<std::vector<std::string>>();
    }
    return rule;
  }

  static std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
      return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    });
    return out;
  }

  static bool matches(std::string_view lowered, std::string_view pattern) {
    return lowered.find(pattern) != std::string_view::npos;
  }

  static int word_count(std::string_view lowered) {
    int count = 0;
    bool in_word = false;
    for (char c : lowered) {
      const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
      if (!space && !in_word) ++count;
      in_word = !space;
    }
    return count;
  }

  static bool match_content(const ContentRule& rule,
                            std::string_view lowered) {
    for (const auto& pattern : rule.negative) {
      if (matches(lowered, pattern)) return false;
    }
    for (const auto& pattern : rule.positive) {
      if (matches(lowered, pattern)) return true;
    }
    return false;
  }

  static int score_quality(const QualityRule& rule, std::string_view lowered,
                           int words) {
    for (const auto& pattern : rule.force_floor) {
      if (matches(lowered, pattern)) return 1;
    }
    int score = rule.base;
    for (const auto& cue : rule.cues) {
      if (matches(lowered, cue.pattern)) score += cue.delta;
    }
    for (const auto& bonus : rule.length_bonus) {
      if (words >= bonus.min_words) score += bonus.delta;
    }
    return std::clamp(score, 1, 5);
  }

  int matched_content_cues(std::string_view lowered) const {
    int count = 0;
    for (const ContentRule* rule : {&harm_, &intent_, &empathy_, &apology_}) {
      for (const auto& pattern : rule->positive) {
        if (matches(lowered, pattern)) ++count;
      }
      for (const auto& pattern : rule->negative) {
        if (matches(lowered, pattern)) ++count;
      }
    }
    return count;
  }

  int matched_quality_cues(std::string_view lowered) const {
    int count = 0;
    for (const QualityRule* rule :
         {&justification_, &ethic_, &deliberation_, &fairness_, &nonbias_}) {
      for (const auto& cue : rule->cues) {
        if (matches(lowered, cue.pattern)) ++count;
      }
      for (const auto& pattern : rule->force_floor) {
        if (matches(lowered, pattern)) ++count;
      }
    }
    return count;
  }

  std::string version_;
  ContentRule harm_, intent_, empathy_, apology_;
  QualityRule justification_, ethic_, deliberation_, fairness_, nonbias_;
};

/// Deterministic offline extraction of one comment with the built-in
/// table. A determinism harness for the pipeline, not a model.
inline CommentAnalysis rule_based_extract(const Comment& comment) {
  return RuleTable::v1().apply(comment);
}

}  // namespace verdictforge
