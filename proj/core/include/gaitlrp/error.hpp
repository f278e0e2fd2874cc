#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gaitlrp {

// Base of every error raised by the library. Callers that only care about
// "bad input vs. internal failure" can catch this and inspect the subclass.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRangeAge : public Error {
 public:
  explicit OutOfRangeAge(int age);
  int age() const noexcept { return age_; }

 private:
  int age_;
};

// Malformed dataset or config input. `line` is 1-based; 0 when the problem is
// not tied to a single line (e.g. a trial missing one of its rows).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyDataset : public Error {
 public:
  EmptyDataset() : Error("dataset is empty") {}
};

class DegenerateCurve : public Error {
 public:
  explicit DegenerateCurve(std::size_t length);
};

class EmptySelection : public Error {
 public:
  EmptySelection() : Error("subject selection is empty") {}
};

class InsufficientSubjects : public Error {
 public:
  InsufficientSubjects(int class_index, std::size_t subjects, int k);
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(int epoch, std::optional<int> fold = std::nullopt);
  int epoch() const noexcept { return epoch_; }
  std::optional<int> fold() const noexcept { return fold_; }

 private:
  int epoch_;
  std::optional<int> fold_;
};

class MissingClass : public Error {
 public:
  explicit MissingClass(int class_index);
};

class EmptyMatrix : public Error {
 public:
  EmptyMatrix() : Error("confusion matrix has no entries") {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Any non-divergence failure inside one cross-validation fold.
class FoldError : public Error {
 public:
  FoldError(int fold, const std::string& what);
  int fold() const noexcept { return fold_; }

 private:
  int fold_;
};

}  // namespace gaitlrp
