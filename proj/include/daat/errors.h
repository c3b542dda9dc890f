// Exception types shared by every daat module.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace daat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition (empty word, length mismatch, bad shape, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A probability term whose denominator is zero (unseen sub-string, df = 0).
class UndefinedProbability : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  AlignmentError(const std::string& what, std::size_t index)
      : Error("sentence " + std::to_string(index) + ": " + what),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Malformed model container, config file or lexicon.
class FormatError : public Error {
 public:
  using Error::Error;
};

class StaleGraph : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace daat
