#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace verdictforge {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A file could not be opened, read, or written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

/// Input text is not valid JSON. `offset` is the 0-based byte position of
/// the first offending character.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : Error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A structurally valid JSON response violates the analysis schema:
/// a field is missing, has the wrong type, or is out of range.
class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string comment_id, std::string field,
                  const std::string& what)
      : Error(what), comment_id_(std::move(comment_id)),
        field_(std::move(field)) {}
  const std::string& comment_id() const { return comment_id_; }
  const std::string& field() const { return field_; }

 private:
  std::string comment_id_;
  std::string field_;
};

/// A response omitted an expected comment id or named an unknown one.
class MissingComment : public Error {
 public:
  MissingComment(std::string comment_id, const std::string& what)
      : Error(what), comment_id_(std::move(comment_id)) {}
  const std::string& comment_id() const { return comment_id_; }

 private:
  std::string comment_id_;
};

/// Extraction for one post gave up after exhausting its retry budget.
class ExtractionFailed : public Error {
 public:
  ExtractionFailed(std::string post_id, std::string cause)
      : Error("extraction failed for post '" + post_id + "': " + cause),
        post_id_(std::move(post_id)), cause_(std::move(cause)) {}
  const std::string& post_id() const { return post_id_; }
  const std::string& cause() const { return cause_; }

 private:
  std::string post_id_;
  std::string cause_;
};

/// A controversy score was requested for a post with no labeled
/// top-level comments, so the label distribution is undefined.
class NoLabeledComments : public Error {
 public:
  explicit NoLabeledComments(std::string post_id)
      : Error("post '" + post_id + "' has no labeled top-level comments"),
        post_id_(std::move(post_id)) {}
  const std::string& post_id() const { return post_id_; }

 private:
  std::string post_id_;
};

/// An operation that requires at least one element received none.
class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

/// An explanation was requested for an assignment that does not match the
/// constraint set it claims to come from (detected by cost recomputation).
class TraceMismatch : public Error {
 public:
  explicit TraceMismatch(const std::string& what) : Error(what) {}
};

/// One unparseable line in a JSONL stream. Collected, never thrown:
/// a malformed record is skipped and reported, the stream continues.
struct MalformedRecord {
  std::size_t line_number = 0;  // 1-based
  std::string message;
};

}  // namespace verdictforge
