#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "verdictforge/consensus.hpp"
#include "verdictforge/labels.hpp"

namespace verdictforge {

/// Which branch of the hierarchical decision tree produced the verdict.
enum class Rule : int {
  Vindication = 0,  // no harm -> NTA
  Malice = 1,       // intentional harm -> YTA
  Tragedy = 2,      // accidental harm, repaired -> NAH
  Negligence = 3,   // accidental harm, unrepaired -> ESH
};

inline constexpr std::array<Rule, 4> kAllRules = {
    Rule::Vindication, Rule::Malice, Rule::Tragedy, Rule::Negligence};

inline constexpr std::size_t rule_index(Rule rule) {
  return static_cast<std::size_t>(rule);
}

inline constexpr std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::Vindication: return "Vindication";
    case Rule::Malice: return "Malice";
    case Rule::Tragedy: return "Tragedy";
    case Rule::Negligence: return "Negligence";
  }
  return "?";
}

struct VerdictResult {
  VerdictLabel label = VerdictLabel::NTA;
  Rule rule = Rule::Vindication;
  ConsensusAssignment assignment;
};

namespace detail {

struct VerdictRow {
  VerdictLabel label;
  Rule rule;
};

// Explicit expansion of the decision tree over all 16 (H, I, E, A)
// combinations, indexed by bits 8=harm, 4=intent, 2=empathy, 1=apology.
//   harm=F                      -> NTA (Vindication)
//   harm=T, intent=T            -> YTA (Malice)
//   harm=T, intent=F, E or A    -> NAH (Tragedy)
//   harm=T, intent=F, !E, !A    -> ESH (Negligence)
inline constexpr std::array<VerdictRow, 16> kVerdictTable = {{
    /* 0  FFFF */ {VerdictLabel::NTA, Rule::Vindication},
    /* 1  FFFT */ {VerdictLabel::NTA, Rule::Vindication},
    /* 2  FFTF */ {VerdictLabel::NTA, Rule::Vindication},
    /* 3  FFTT */ {VerdictLabel::NTA, Rule::Vindication},
    /* 4  FTFF */ {VerdictLabel::NTA, Rule::Vindication},
    /* 5  FTFT */ {VerdictLabel::NTA, Rule::Vindication},
    /* 6  FTTF */ {VerdictLabel::NTA, Rule::Vindication},
    /* 7  FTTT */ {VerdictLabel::NTA, Rule::Vindication},
    /* 8  TFFF */ {VerdictLabel::ESH, Rule::Negligence},
    /* 9  TFFT */ {VerdictLabel::NAH, Rule::Tragedy},
    /* 10 TFTF */ {VerdictLabel::NAH, Rule::Tragedy},
    /* 11 TFTT */ {VerdictLabel::NAH, Rule::Tragedy},
    /* 12 TTFF */ {VerdictLabel::YTA, Rule::Malice},
    /* 13 TTFT */ {VerdictLabel::YTA, Rule::Malice},
    /* 14 TTTF */ {VerdictLabel::YTA, Rule::Malice},
    /* 15 TTTT */ {VerdictLabel::YTA, Rule::Malice},
}};

}  // namespace detail

/// Maps a consensus assignment to its verdict. Total over all 16 inputs.
inline VerdictResult classify(const ConsensusAssignment& assignment) {
  const std::size_t index = (assignment.harm() ? 8u : 0u) |
                            (assignment.intent() ? 4u : 0u) |
                            (assignment.empathy() ? 2u : 0u) |
                            (assignment.apology() ? 1u : 0u);
  const detail::VerdictRow row = detail::kVerdictTable[index];
  return VerdictResult{row.label, row.rule, assignment};
}

}  // namespace verdictforge
