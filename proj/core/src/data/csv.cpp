#include "gaitlrp/data/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include <fmt/format.h>

#include "gaitlrp/data/resample.hpp"
#include "gaitlrp/error.hpp"

namespace gaitlrp::data {
namespace {

constexpr std::size_t kMetaColumns = 5;

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view field, std::size_t line, const char* what) {
  field = trim(field);
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError(line, fmt::format("invalid {} '{}'", what, field));
  }
  return value;
}

double parse_sample(std::string_view field, std::size_t line, std::size_t column) {
  field = trim(field);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError(line, fmt::format("column {}: invalid number '{}'", column + 1, field));
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, fmt::format("column {}: non-finite value '{}'", column + 1, field));
  }
  return value;
}

Side parse_side(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field == "L") return Side::Left;
  if (field == "R") return Side::Right;
  throw ParseError(line, fmt::format("side must be L or R, got '{}'", field));
}

Component parse_component(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field == "AP") return Component::AP;
  if (field == "ML") return Component::ML;
  if (field == "V") return Component::V;
  throw ParseError(line, fmt::format("component must be AP, ML or V, got '{}'", field));
}

struct PendingTrial {
  GrfTrial trial;
  std::size_t first_line = 0;
  std::array<bool, kNumChannels> seen{};
};

}  // namespace

Dataset read_dataset(std::istream& in, std::size_t target_length) {
  if (target_length < 2) throw DegenerateCurve(target_length);

  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;

  // Header, skipping leading blank lines.
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw EmptyDataset();
  {
    std::string_view header = trim(line);
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    const auto fields = split_commas(header);
    static constexpr std::array<std::string_view, kMetaColumns> kExpected = {
        "subject_id", "age", "trial", "side", "component"};
    if (fields.size() < kMetaColumns + 2) {
      throw ParseError(line_no, "header needs subject_id,age,trial,side,component and >= 2 samples");
    }
    for (std::size_t i = 0; i < kMetaColumns; ++i) {
      if (trim(fields[i]) != kExpected[i]) {
        throw ParseError(line_no, fmt::format("header column {} should be '{}', got '{}'", i + 1,
                                              kExpected[i], trim(fields[i])));
      }
    }
    columns = fields.size();
  }

  std::vector<PendingTrial> pending;
  std::map<std::pair<std::string, int>, std::size_t> index;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto fields = split_commas(row);
    if (fields.size() != columns) {
      throw ParseError(line_no, fmt::format("expected {} columns, found {}", columns, fields.size()));
    }
    std::string subject(trim(fields[0]));
    if (subject.empty()) throw ParseError(line_no, "empty subject_id");
    const int age = parse_int(fields[1], line_no, "age");
    const int trial_no = parse_int(fields[2], line_no, "trial");
    const Side side = parse_side(fields[3], line_no);
    const Component comp = parse_component(fields[4], line_no);

    auto [it, inserted] = index.try_emplace({subject, trial_no}, pending.size());
    if (inserted) {
      try {
        assign_age_group(age);
      } catch (const OutOfRangeAge& e) {
        throw ParseError(line_no, e.what());
      }
      PendingTrial p;
      p.trial.subject_id = subject;
      p.trial.age_years = age;
      p.trial.trial_number = trial_no;
      p.first_line = line_no;
      pending.push_back(std::move(p));
    }
    PendingTrial& p = pending[it->second];
    if (p.trial.age_years != age) {
      throw ParseError(line_no, fmt::format("age {} differs from {} on line {}", age,
                                            p.trial.age_years, p.first_line));
    }
    const std::size_t ch = channel_index(side, comp);
    if (p.seen[ch]) {
      throw ParseError(line_no, fmt::format("duplicate {} {} row for subject {} trial {}",
                                            side_code(side), component_code(comp), subject, trial_no));
    }
    p.seen[ch] = true;

    std::vector<double> curve;
    curve.reserve(columns - kMetaColumns);
    for (std::size_t c = kMetaColumns; c < columns; ++c) {
      curve.push_back(parse_sample(fields[c], line_no, c));
    }
    p.trial.channels[ch] = curve.size() == target_length ? std::move(curve)
                                                           : resample_curve(curve, target_length);
  }

  if (pending.empty()) throw EmptyDataset();

  std::vector<GrfTrial> trials;
  trials.reserve(pending.size());
  for (auto& p : pending) {
    for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
      if (!p.seen[ch]) {
        throw ParseError(p.first_line,
                         fmt::format("subject {} trial {} is missing its {} {} row",
                                     p.trial.subject_id, p.trial.trial_number,
                                     side_code(static_cast<Side>(ch / kNumComponents)),
                                     component_code(static_cast<Component>(ch % kNumComponents))));
      }
    }
    trials.push_back(std::move(p.trial));
  }
  return Dataset(std::move(trials));
}

Dataset load_dataset(const std::filesystem::path& path, std::size_t target_length) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file " + path.string());
  return read_dataset(in, target_length);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  const std::size_t n = dataset.length();
  std::string buf = "subject_id,age,trial,side,component";
  for (std::size_t i = 0; i < n; ++i) fmt::format_to(std::back_inserter(buf), ",v{}", i);
  buf += '\n';
  out << buf;
  for (const GrfTrial& t : dataset.trials()) {
    for (std::size_t ch = 0; ch < kNumChannels; ++ch) {
      buf.clear();
      fmt::format_to(std::back_inserter(buf), "{},{},{},{},{}", t.subject_id, t.age_years,
                     t.trial_number, side_code(static_cast<Side>(ch / kNumComponents)),
                     component_code(static_cast<Component>(ch % kNumComponents)));
      for (double v : t.channels[ch]) fmt::format_to(std::back_inserter(buf), ",{}", v);
      buf += '\n';
      out << buf;
    }
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset file " + path.string());
  write_dataset(out, dataset);
  if (!out) throw IoError("failed writing dataset file " + path.string());
}

}  // namespace gaitlrp::data
