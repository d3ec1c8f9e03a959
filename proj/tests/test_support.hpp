#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "verdictforge/analysis.hpp"
#include "verdictforge/corpus.hpp"

namespace vf_test {

inline std::filesystem::path source_root() {
  return std::filesystem::path(VERDICTFORGE_SOURCE_DIR);
}

inline std::filesystem::path fixture_path(const std::string& name) {
  return source_root() / "tests" / "fixtures" / name;
}

/// Unique scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    const auto stamp =
        std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("verdictforge_" + tag + "_" + std::to_string(stamp) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline verdictforge::Comment make_comment(std::string id, std::string body,
                                          std::int64_t score = 0,
                                          std::int64_t created = 0,
                                          bool top_level = true) {
  verdictforge::Comment comment;
  comment.id = std::move(id);
  comment.body = std::move(body);
  comment.score = score;
  comment.created_utc = created;
  comment.is_top_level = top_level;
  comment.parsed_label = verdictforge::parse_label(comment.body);
  return comment;
}

inline verdictforge::Post make_post(std::string id,
                                    std::vector<verdictforge::Comment> comments) {
  verdictforge::Post post;
  post.id = std::move(id);
  post.title = "title of " + post.id;
  post.body = "body of " + post.id;
  post.comments = std::move(comments);
  return post;
}

inline verdictforge::QualityVector random_quality(std::mt19937& rng) {
  std::uniform_int_distribution<int> likert(1, 5);
  return verdictforge::QualityVector{likert(rng), likert(rng), likert(rng),
                                     likert(rng), likert(rng)};
}

inline verdictforge::ContentVector random_content(std::mt19937& rng) {
  std::bernoulli_distribution bit(0.5);
  return verdictforge::ContentVector{bit(rng), bit(rng), bit(rng), bit(rng)};
}

inline verdictforge::CommentAnalysis random_analysis(std::mt19937& rng,
                                                     std::string id) {
  verdictforge::CommentAnalysis analysis;
  analysis.comment_id = std::move(id);
  analysis.content = random_content(rng);
  analysis.quality = random_quality(rng);
  analysis.reasoning = "Randomized fixture analysis.";
  return analysis;
}

}  // namespace vf_test
