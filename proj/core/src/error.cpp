#include "gaitlrp/error.hpp"

#include <fmt/format.h>

namespace gaitlrp {

OutOfRangeAge::OutOfRangeAge(int age)
    : Error(fmt::format("age {} outside the labeled range [20, 79]", age)), age_(age) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

DegenerateCurve::DegenerateCurve(std::size_t length)
    : Error(fmt::format("curve of length {} cannot be resampled (need >= 2)", length)) {}

InsufficientSubjects::InsufficientSubjects(int class_index, std::size_t subjects, int k)
    : Error(fmt::format("class {} has {} subjects, fewer than k = {}", class_index, subjects, k)) {}

DivergenceError::DivergenceError(int epoch, std::optional<int> fold)
    : Error(fold ? fmt::format("training diverged at epoch {} (fold {})", epoch, *fold)
                 : fmt::format("training diverged at epoch {}", epoch)),
      epoch_(epoch),
      fold_(fold) {}

MissingClass::MissingClass(int class_index)
    : Error(fmt::format("no relevance profile for class {}", class_index)) {}

FoldError::FoldError(int fold, const std::string& what)
    : Error(fmt::format("fold {}: {}", fold, what)), fold_(fold) {}

}  // namespace gaitlrp
