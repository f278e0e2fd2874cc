#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>

#include "gaitlrp/data/dataset.hpp"

namespace gaitlrp::data {

inline constexpr std::size_t kDefaultLength = 100;

// Dataset file format (UTF-8, header row):
//
//   subject_id,age,trial,side,component,v0,v1,...,v{L-1}
//
// side is L or R, component is AP, ML or V, one curve per row and all six
// rows of a trial present. Curves whose length differs from `target_length`
// are resampled onto it.
//
// Errors: ParseError (with the 1-based line) for malformed rows, non-finite
// values, wrong column counts, duplicate or missing rows; EmptyDataset for a
// file without trials; IoError when the file cannot be opened.
Dataset load_dataset(const std::filesystem::path& path,
                     std::size_t target_length = kDefaultLength);
Dataset read_dataset(std::istream& in, std::size_t target_length = kDefaultLength);

// Writes the format above with shortest round-trip number formatting.
void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

}  // namespace gaitlrp::data
