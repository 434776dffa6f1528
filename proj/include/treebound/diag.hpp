#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace treebound {

// 1-based source position. Column counts bytes, which is fine for the
// ASCII-only surface syntax.
struct Span {
  uint32_t line = 0;
  uint32_t col = 0;
};

inline std::string span_str(const std::string& file, Span s) {
  return file + ":" + std::to_string(s.line) + ":" + std::to_string(s.col);
}

// User-facing error tied to a source location (lexing, parsing, typing,
// constraint-side restrictions). CLI maps these to exit code 2.
class SourceError : public std::runtime_error {
 public:
  SourceError(const std::string& file, Span span, const std::string& msg)
      : std::runtime_error(span_str(file, span) + ": " + msg), span_(span) {}
  Span span() const { return span_; }

 private:
  Span span_;
};

// A broken analyzer invariant (never the analyzed program's fault).
// CLI maps these to exit code 3.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg)
      : std::logic_error("internal invariant violated: " + msg) {}
};

[[noreturn]] inline void internal_fail(const std::string& msg) { throw InternalError(msg); }

inline void internal_check(bool ok, const std::string& msg) {
  if (!ok) internal_fail(msg);
}

}  // namespace treebound
