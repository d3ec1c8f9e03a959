#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace verdictforge {

/// Four Boolean moral predicates a comment asserts about the protagonist.
/// Serialized as integers in {0,1} in the order [harm, intent, empathy,
/// apology].
struct ContentVector {
  bool harm = false;
  bool intent = false;
  bool empathy = false;
  bool apology = false;

  std::array<int, 4> as_ints() const {
    return {harm ? 1 : 0, intent ? 1 : 0, empathy ? 1 : 0, apology ? 1 : 0};
  }

  friend bool operator==(const ContentVector&, const ContentVector&) = default;
};

/// Five 1-5 epistemic-quality scores. Serialized in the order
/// [justification, ethic, deliberation, fairness, nonbias]. Higher
/// nonbias means less biased language.
struct QualityVector {
  int justification = 1;
  int ethic = 1;
  int deliberation = 1;
  int fairness = 1;
  int nonbias = 1;

  std::array<int, 5> as_ints() const {
    return {justification, ethic, deliberation, fairness, nonbias};
  }

  bool valid() const {
    for (int v : as_ints()) {
      if (v < 1 || v > 5) return false;
    }
    return true;
  }

  friend bool operator==(const QualityVector&, const QualityVector&) = default;
};

/// One comment's extracted vectors plus a short free-text rationale
/// (at most two sentences by contract with the extractor).
struct CommentAnalysis {
  std::string comment_id;
  ContentVector content;
  QualityVector quality;
  std::string reasoning;

  friend bool operator==(const CommentAnalysis&,
                         const CommentAnalysis&) = default;
};

}  // namespace verdictforge
