#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace verdictforge {

/// The four community verdict labels. The declaration order NTA < YTA <
/// ESH < NAH is the total ordering used for tie-breaking and report axes.
enum class VerdictLabel : int { NTA = 0, YTA = 1, ESH = 2, NAH = 3 };

inline constexpr std::array<VerdictLabel, 4> kAllLabels = {
    VerdictLabel::NTA, VerdictLabel::YTA, VerdictLabel::ESH,
    VerdictLabel::NAH};

inline constexpr std::size_t label_index(VerdictLabel label) {
  return static_cast<std::size_t>(label);
}

inline constexpr std::string_view to_string(VerdictLabel label) {
  switch (label) {
    case VerdictLabel::NTA: return "NTA";
    case VerdictLabel::YTA: return "YTA";
    case VerdictLabel::ESH: return "ESH";
    case VerdictLabel::NAH: return "NAH";
  }
  return "?";
}

/// Parses an exact label token ("NTA", "nta", ...). Case-insensitive,
/// no surrounding text allowed. Returns nullopt for anything else.
inline std::optional<VerdictLabel> label_from_string(std::string_view text) {
  if (text.size() != 3) return std::nullopt;
  auto upper = [](char c) {
    return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
  };
  const std::array<char, 3> t = {upper(text[0]), upper(text[1]),
                                 upper(text[2])};
  for (VerdictLabel label : kAllLabels) {
    const std::string_view name = to_string(label);
    if (t[0] == name[0] && t[1] == name[1] && t[2] == name[2]) return label;
  }
  return std::nullopt;
}

}  // namespace verdictforge
