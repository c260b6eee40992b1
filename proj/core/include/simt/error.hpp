#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptySentence : public Error {
 public:
  EmptySentence() : Error("sentence is empty after trimming") {}
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus is empty") {}
};

/// Malformed input. `line()` is 1-based; 0 when the error has no line context.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class BoundsError : public Error {
 public:
  BoundsError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InputMismatch : public Error {
 public:
  using Error::Error;
};

class ScriptUnderrun : public Error {
 public:
  ScriptUnderrun() : Error("scripted backend exhausted before EOS") {}
};

class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class MalformedResponse : public Error {
 public:
  using Error::Error;
};

class ReplayMiss : public Error {
 public:
  using Error::Error;
};

/// Wraps an error raised while processing the pair at `index` (0-based).
class PairError : public Error {
 public:
  PairError(std::size_t index, const std::string& what)
      : Error("pair " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace simt
