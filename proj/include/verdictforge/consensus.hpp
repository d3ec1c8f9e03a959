#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "verdictforge/analysis.hpp"
#include "verdictforge/errors.hpp"
#include "verdictforge/weighting.hpp"

namespace verdictforge {

/// The four global predicates the solver assigns. Order is fixed:
/// Harm, Intent, Empathy, Apology.
enum class Predicate : int { Harm = 0, Intent = 1, Empathy = 2, Apology = 3 };

inline constexpr std::array<Predicate, 4> kAllPredicates = {
    Predicate::Harm, Predicate::Intent, Predicate::Empathy,
    Predicate::Apology};

inline constexpr std::size_t predicate_index(Predicate p) {
  return static_cast<std::size_t>(p);
}

inline constexpr std::string_view to_string(Predicate p) {
  switch (p) {
    case Predicate::Harm: return "harm";
    case Predicate::Intent: return "intent";
    case Predicate::Empathy: return "empathy";
    case Predicate::Apology: return "apology";
  }
  return "?";
}

/// One unit soft clause: violating it costs `weight`. Harm/Intent
/// constraints carry the source comment's w_logic, Empathy/Apology its
/// w_ethic.
struct SoftConstraint {
  Predicate predicate = Predicate::Harm;
  bool polarity = false;  // the asserted value
  std::int64_t weight = 0;
  std::string source_comment_id;

  friend bool operator==(const SoftConstraint&,
                         const SoftConstraint&) = default;
};

/// A solved truth assignment with its violation cost and per-predicate
/// support totals. margin[p] = weight asserting True - weight asserting
/// False; the assigned value is True iff margin > 0 (an exact tie
/// resolves to False).
struct ConsensusAssignment {
  std::array<bool, 4> values = {false, false, false, false};
  std::int64_t total_cost = 0;
  std::array<std::int64_t, 4> margin = {0, 0, 0, 0};
  std::array<std::int64_t, 4> weight_true = {0, 0, 0, 0};
  std::array<std::int64_t, 4> weight_false = {0, 0, 0, 0};

  bool value_of(Predicate p) const { return values[predicate_index(p)]; }
  bool harm() const { return values[0]; }
  bool intent() const { return values[1]; }
  bool empathy() const { return values[2]; }
  bool apology() const { return values[3]; }

  friend bool operator==(const ConsensusAssignment&,
                         const ConsensusAssignment&) = default;
};

/// Expands analyses into 4 * |analyses| unit constraints: harm and intent
/// claims weighted by w_logic, empathy and apology claims by w_ethic.
inline std::vector<SoftConstraint> build_constraints(
    const std::vector<CommentAnalysis>& analyses) {
  if (analyses.empty()) {
    throw EmptyInput("cannot build constraints from zero analyses");
  }
  std::vector<SoftConstraint> constraints;
  constraints.reserve(analyses.size() * 4);
  for (const CommentAnalysis& a : analyses) {
    const StreamWeights w = split_stream_weights(a.quality);
    constraints.push_back(
        {Predicate::Harm, a.content.harm, w.w_logic, a.comment_id});
    constraints.push_back(
        {Predicate::Intent, a.content.intent, w.w_logic, a.comment_id});
    constraints.push_back(
        {Predicate::Empathy, a.content.empathy, w.w_ethic, a.comment_id});
    constraints.push_back(
        {Predicate::Apology, a.content.apology, w.w_ethic, a.comment_id});
  }
  return constraints;
}

/// Minimum-penalty assignment, computed directly. All soft clauses are
/// unit clauses over four independent Booleans, so the weighted MaxSAT
/// optimum decomposes per predicate: assign the side with the larger
/// asserted weight and pay the smaller side. Exact integers throughout;
/// with soft constraints only, every instance is satisfiable-at-cost, so
/// there is no UNSAT branch.
inline ConsensusAssignment solve_closed_form(
    const std::vector<SoftConstraint>& constraints) {
  if (constraints.empty()) {
    throw EmptyInput("cannot solve an empty constraint set");
  }
  ConsensusAssignment result;
  for (const SoftConstraint& c : constraints) {
    const std::size_t p = predicate_index(c.predicate);
    if (c.polarity) {
      result.weight_true[p] += c.weight;
    } else {
      result.weight_false[p] += c.weight;
    }
  }
  for (std::size_t p = 0; p < 4; ++p) {
    result.margin[p] = result.weight_true[p] - result.weight_false[p];
    result.values[p] = result.margin[p] > 0;
    result.total_cost += std::min(result.weight_true[p],
                                  result.weight_false[p]);
  }
  return result;
}

/// Brute-force verifier: enumerates all 16 assignments of (H, I, E, A)
/// and returns the one with minimum total violation cost. Ties among
/// cost-minimal assignments break lexicographically with False < True in
/// predicate order Harm, Intent, Empathy, Apology. Independent of the
/// closed-form path by construction.
inline ConsensusAssignment solve_oracle(
    const std::vector<SoftConstraint>& constraints) {
  if (constraints.empty()) {
    throw EmptyInput("cannot solve an empty constraint set");
  }
  std::array<bool, 4> best_values = {false, false, false, false};
  std::int64_t best_cost = -1;
  // Index bits: 8 = Harm, 4 = Intent, 2 = Empathy, 1 = Apology, so
  // ascending index enumerates assignments in lexicographic order.
  for (int index = 0; index < 16; ++index) {
    const std::array<bool, 4> values = {
        (index & 8) != 0, (index & 4) != 0, (index & 2) != 0,
        (index & 1) != 0};
    std::int64_t cost = 0;
    for (const SoftConstraint& c : constraints) {
      if (values[predicate_index(c.predicate)] != c.polarity) {
        cost += c.weight;
      }
    }
    if (best_cost < 0 || cost < best_cost) {
      best_cost = cost;
      best_values = values;
    }
  }
  ConsensusAssignment result;
  result.values = best_values;
  result.total_cost = best_cost;
  for (const SoftConstraint& c : constraints) {
    const std::size_t p = predicate_index(c.predicate);
    if (c.polarity) {
      result.weight_true[p] += c.weight;
    } else {
      result.weight_false[p] += c.weight;
    }
  }
  for (std::size_t p = 0; p < 4; ++p) {
    result.margin[p] = result.weight_true[p] - result.weight_false[p];
  }
  return result;
}

/// Reference to one constraint inside an explanation.
struct ConstraintRef {
  std::string comment_id;
  Predicate predicate = Predicate::Harm;
  bool asserted = false;
  std::int64_t weight = 0;

  friend bool operator==(const ConstraintRef&, const ConstraintRef&) = default;
};

struct PredicateExplanation {
  Predicate predicate = Predicate::Harm;
  bool assigned = false;
  std::int64_t margin = 0;
  std::int64_t weight_true = 0;
  std::int64_t weight_false = 0;
  std::vector<ConstraintRef> top_supporting;  // agree with the assignment
  std::vector<ConstraintRef> top_opposing;    // disagree; at most 3 each
};

/// The explainability surface: which testimony carried each predicate and
/// which constraints the optimum had to violate.
struct ExplanationTrace {
  std::array<PredicateExplanation, 4> predicates;
  std::vector<ConstraintRef> violated;
  std::int64_t total_cost = 0;
};

namespace detail {

inline std::vector<ConstraintRef> top_weighted(std::vector<ConstraintRef> refs,
                                               std::size_t limit) {
  std::sort(refs.begin(), refs.end(),
            [](const ConstraintRef& a, const ConstraintRef& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              return a.comment_id < b.comment_id;
            });
  if (refs.size() > limit) refs.resize(limit);
  return refs;
}

}  // namespace detail

/// Builds the trace for an assignment. Recomputes support totals and cost
/// from the constraints; any disagreement with the assignment's stored
/// figures means the pair do not belong together and raises TraceMismatch.
inline ExplanationTrace explain(const ConsensusAssignment& assignment,
                                const std::vector<SoftConstraint>& constraints) {
  std::array<std::int64_t, 4> weight_true = {0, 0, 0, 0};
  std::array<std::int64_t, 4> weight_false = {0, 0, 0, 0};
  std::array<std::vector<ConstraintRef>, 4> supporting;
  std::array<std::vector<ConstraintRef>, 4> opposing;
  std::vector<ConstraintRef> violated;

  for (const SoftConstraint& c : constraints) {
    const std::size_t p = predicate_index(c.predicate);
    (c.polarity ? weight_true[p] : weight_false[p]) += c.weight;
    const ConstraintRef ref{c.source_comment_id, c.predicate, c.polarity,
                            c.weight};
    if (c.polarity == assignment.values[p]) {
      supporting[p].push_back(ref);
    } else {
      opposing[p].push_back(ref);
      violated.push_back(ref);
    }
  }

  std::int64_t recomputed_cost = 0;
  for (const ConstraintRef& ref : violated) recomputed_cost += ref.weight;
  if (recomputed_cost != assignment.total_cost ||
      weight_true != assignment.weight_true ||
      weight_false != assignment.weight_false) {
    throw TraceMismatch(
        "assignment was not produced from these constraints");
  }

  ExplanationTrace trace;
  trace.total_cost = recomputed_cost;
  trace.violated = std::move(violated);
  for (std::size_t p = 0; p < 4; ++p) {
    PredicateExplanation& e = trace.predicates[p];
    e.predicate = kAllPredicates[p];
    e.assigned = assignment.values[p];
    e.margin = weight_true[p] - weight_false[p];
    e.weight_true = weight_true[p];
    e.weight_false = weight_false[p];
    e.top_supporting = detail::top_weighted(std::move(supporting[p]), 3);
    e.top_opposing = detail::top_weighted(std::move(opposing[p]), 3);
  }
  return trace;
}

// --- trace serialization ----------------------------------------------------

inline nlohmann::json constraint_ref_to_json(const ConstraintRef& ref) {
  return {{"comment_id", ref.comment_id},
          {"predicate", std::string(to_string(ref.predicate))},
          {"asserted", ref.asserted},
          {"weight", ref.weight}};
}

/// One trace.jsonl line:
/// {"post_id": ..., "assignment": {...}, "total_cost": ...,
///  "margins": {...}, "violated": [...]}
inline nlohmann::json trace_to_json(const std::string& post_id,
                                    const ConsensusAssignment& assignment,
                                    const ExplanationTrace& trace) {
  nlohmann::json margins;
  for (Predicate p : kAllPredicates) {
    margins[std::string(to_string(p))] =
        assignment.margin[predicate_index(p)];
  }
  nlohmann::json violated = nlohmann::json::array();
  for (const ConstraintRef& ref : trace.violated) {
    violated.push_back(constraint_ref_to_json(ref));
  }
  return {{"post_id", post_id},
          {"assignment",
           {{"harm", assignment.harm()},
            {"intent", assignment.intent()},
            {"empathy", assignment.empathy()},
            {"apology", assignment.apology()}}},
          {"total_cost", assignment.total_cost},
          {"margins", std::move(margins)},
          {"violated", std::move(violated)}};
}

}  // namespace verdictforge
