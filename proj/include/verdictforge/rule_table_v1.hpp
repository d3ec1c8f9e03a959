#pragma once

#include <string_view>

namespace verdictforge {

/// Byte-exact embedded copy of data/rule_table_v1.json, so the default
/// extractor works without locating the data directory. A unit test pins
/// this constant against the file; change both together and bump the
/// version.
inline std::string_view rule_table_v1_json() {
  static constexpr std::string_view kJson = R"json_v1({
  "version": "v1",
  "content": {
    "harm": {
      "positive": ["hurt", "harm", "damag", "cruel", "ruin", "wreck", "humiliat", "insult", "traumat", "betray", "destroy"],
      "negative": ["no harm", "harmless", "didn't hurt", "didnt hurt", "wasn't hurt", "wasnt hurt", "not hurt", "no one was hurt", "nobody was hurt", "no damage", "no real harm"]
    },
    "intent": {
      "positive": ["on purpose", "intentional", "deliberate", "meant to", "malicious", "out of spite", "spiteful", "knew exactly", "planned it", "set out to"],
      "negative": ["accident", "unintentional", "not intentional", "didn't mean", "didnt mean", "never meant", "by mistake", "no intent", "without realizing", "without meaning"]
    },
    "empathy": {
      "positive": ["empath", "compassion", "understand how", "understands how", "understood how", "feel for", "feels for", "feel bad", "feels bad", "felt bad", "cares about", "cared about", "considerate", "checked in on", "comfort"],
      "negative": ["no empathy", "lack of empathy", "lacks empathy", "doesn't care", "doesnt care", "does not care", "didn't care", "didnt care", "cold-hearted", "coldhearted", "tone-deaf", "no compassion", "couldn't care less", "couldnt care less"]
    },
    "apology": {
      "positive": ["sorry", "apolog", "make amends", "made amends", "make it right", "made it right", "remorse"],
      "negative": ["never said sorry", "never sorry", "not sorry", "never apolog", "didn't apolog", "didnt apolog", "no apology", "without apolog", "refuse to apolog", "refuses to apolog", "refused to apolog", "no remorse", "zero remorse"]
    }
  },
  "quality": {
    "justification": {
      "base": 1,
      "cues": [
        {"pattern": "because", "delta": 2},
        {"pattern": "therefore", "delta": 2},
        {"pattern": "since", "delta": 1},
        {"pattern": "the reason", "delta": 1},
        {"pattern": "given that", "delta": 1},
        {"pattern": "for example", "delta": 1},
        {"pattern": "evidence", "delta": 1},
        {"pattern": "points out", "delta": 1}
      ]
    },
    "ethic": {
      "base": 3,
      "cues": [
        {"pattern": "moral", "delta": 1},
        {"pattern": "ethic", "delta": 1},
        {"pattern": "principle", "delta": 1},
        {"pattern": "right thing", "delta": 1},
        {"pattern": "integrity", "delta": 1},
        {"pattern": "respect", "delta": 1},
        {"pattern": "obligation", "delta": 1}
      ]
    },
    "deliberation": {
      "base": 1,
      "cues": [
        {"pattern": "on the other hand", "delta": 1},
        {"pattern": "however", "delta": 1},
        {"pattern": "that said", "delta": 1},
        {"pattern": "both sides", "delta": 1},
        {"pattern": "consider", "delta": 1},
        {"pattern": "weigh", "delta": 1},
        {"pattern": "i can see", "delta": 1},
        {"pattern": "at the same time", "delta": 1}
      ],
      "length_bonus": [
        {"min_words": 40, "delta": 1},
        {"min_words": 120, "delta": 1}
      ]
    },
    "fairness": {
      "base": 3,
      "cues": [
        {"pattern": "to be fair", "delta": 1},
        {"pattern": "both sides", "delta": 1},
        {"pattern": "perspective", "delta": 1},
        {"pattern": "impartial", "delta": 1},
        {"pattern": "objectively", "delta": 1},
        {"pattern": "in their shoes", "delta": 1},
        {"pattern": "i see both", "delta": 1}
      ]
    },
    "nonbias": {
      "base": 3,
      "cues": [
        {"pattern": "i think", "delta": 1},
        {"pattern": "i believe", "delta": 1},
        {"pattern": "in my opinion", "delta": 1},
        {"pattern": "imo", "delta": 1},
        {"pattern": "obviously", "delta": -1},
        {"pattern": "everyone knows", "delta": -1},
        {"pattern": "disgusting", "delta": -1},
        {"pattern": "insane", "delta": -1},
        {"pattern": "crazy", "delta": -1}
      ],
      "force_floor": ["idiot", "moron", "stupid", "dumbass", "trash", "scumbag", "pathetic", "loser", "shut up"]
    }
  }
}
)json_v1";
  return kJson;
}

}  // namespace verdictforge
