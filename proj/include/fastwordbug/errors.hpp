#ifndef FASTWORDBUG_ERRORS_HPP
#define FASTWORDBUG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fastwordbug {

// File and format problems (missing files, bad CSV/JSON, unwritable paths).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Remote classifier failures. Each failure mode is distinguishable so the
// caller can report it precisely; the query that triggered it is still
// counted.
class RemoteError : public std::runtime_error {
 public:
  enum class Kind { Network, HttpStatus, MalformedResponse, LabelMismatch };

  RemoteError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace fastwordbug

#endif  // FASTWORDBUG_ERRORS_HPP
