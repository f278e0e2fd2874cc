#include "gaitlrp/eval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "gaitlrp/error.hpp"

namespace gaitlrp::eval {
namespace {

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(line, fmt::format("invalid number '{}'", s));
  }
  return v;
}

std::size_t parse_size(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(line, fmt::format("invalid count '{}'", s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t pos; (pos = s.find(sep, start)) != std::string_view::npos; start = pos + 1) {
    out.push_back(s.substr(start, pos - start));
  }
  out.push_back(s.substr(start));
  return out;
}

std::string_view strip_cr(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

void append_rows(std::string& buf, std::string_view class_name,
                 const std::vector<data::ChannelLabel>& channels, std::size_t T,
                 const nn::Tensor& mean, const nn::Tensor* sd, const nn::Tensor& relevance) {
  for (std::size_t c = 0; c < channels.size(); ++c) {
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t i = c * T + t;
      fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{}\n", class_name,
                     channels[c].side, channels[c].component, t, mean.empty() ? 0.0 : mean[i],
                     sd && !sd->empty() ? (*sd)[i] : 0.0, relevance[i]);
    }
  }
}

// Coordinates are written with fixed precision so output bytes stay stable.
std::string coord(double v) { return fmt::format("{:.2f}", v); }

struct Frame {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  double x(double v) const { return left + (v - x_min) / (x_max - x_min) * width; }
  double y(double v) const { return top + height - (v - y_min) / (y_max - y_min) * height; }
};

void axes(std::string& svg, const Frame& f, std::string_view y_label) {
  fmt::format_to(std::back_inserter(svg),
                 "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                 "stroke=\"#444444\" stroke-width=\"0.8\"/>\n",
                 coord(f.left), coord(f.top), coord(f.width), coord(f.height));
  fmt::format_to(std::back_inserter(svg),
                 "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">% stance</text>\n",
                 coord(f.left + f.width / 2), coord(f.top + f.height + 28));
  for (int pct = 0; pct <= 100; pct += 25) {
    const double xv = f.x_min + (f.x_max - f.x_min) * pct / 100.0;
    fmt::format_to(std::back_inserter(svg),
                   "<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"middle\">{}</text>\n",
                   coord(f.x(xv)), coord(f.top + f.height + 13), pct);
  }
  fmt::format_to(std::back_inserter(svg),
                 "<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"end\">{:.3g}</text>\n"
                 "<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"end\">{:.3g}</text>\n",
                 coord(f.left - 4), coord(f.top + 8), f.y_max, coord(f.left - 4),
                 coord(f.top + f.height), f.y_min);
  fmt::format_to(std::back_inserter(svg),
                 "<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\" "
                 "transform=\"rotate(-90 {} {})\">{}</text>\n",
                 coord(f.left - 36), coord(f.top + f.height / 2), coord(f.left - 36),
                 coord(f.top + f.height / 2), y_label);
}

}  // namespace

// --- metrics ---------------------------------------------------------------------

void write_metrics(std::ostream& out, const CvResult& result) {
  std::string buf;
  auto it = std::back_inserter(buf);
  fmt::format_to(it, "accuracy_mean={}\n", result.accuracy_mean);
  fmt::format_to(it, "accuracy_sd={}\n", result.accuracy_sd);
  fmt::format_to(it, "zero_rule={}\n", result.zero_rule);
  fmt::format_to(it, "subject_vote_accuracy={}\n", result.subject_vote_accuracy);
  fmt::format_to(it, "folds={}\n", result.fold_accuracies.size());
  for (std::size_t f = 0; f < result.fold_accuracies.size(); ++f) {
    fmt::format_to(it, "fold_accuracy_{}={}\n", f, result.fold_accuracies[f]);
  }
  fmt::format_to(it, "trials={}\n", result.confusion.total());
  buf += "confusion_matrix=\n";
  for (int i = 0; i < ConfusionMatrix::kSize; ++i) {
    for (int j = 0; j < ConfusionMatrix::kSize; ++j) {
      fmt::format_to(it, "{}{}", j ? " " : "", result.confusion.at(i, j));
    }
    buf += '\n';
  }
  out << buf;
}

Metrics read_metrics(std::istream& in) {
  Metrics m;
  std::string line;
  std::size_t line_no = 0;
  std::size_t folds = 0;
  std::map<std::size_t, double> fold_values;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = strip_cr(line);
    if (row.empty()) continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    const std::string_view key = row.substr(0, eq);
    const std::string_view value = row.substr(eq + 1);
    if (key == "accuracy_mean") {
      m.accuracy_mean = parse_double(value, line_no);
    } else if (key == "accuracy_sd") {
      m.accuracy_sd = parse_double(value, line_no);
    } else if (key == "zero_rule") {
      m.zero_rule = parse_double(value, line_no);
    } else if (key == "subject_vote_accuracy") {
      m.subject_vote_accuracy = parse_double(value, line_no);
    } else if (key == "folds") {
      folds = parse_size(value, line_no);
    } else if (key.starts_with("fold_accuracy_")) {
      fold_values[parse_size(key.substr(14), line_no)] = parse_double(value, line_no);
    } else if (key == "trials") {
      m.trials = parse_size(value, line_no);
    } else if (key == "confusion_matrix") {
      for (int i = 0; i < ConfusionMatrix::kSize; ++i) {
        if (!std::getline(in, line)) throw ParseError(line_no, "truncated confusion matrix");
        ++line_no;
        const auto cells = split(strip_cr(line), ' ');
        if (cells.size() != ConfusionMatrix::kSize) {
          throw ParseError(line_no, "confusion matrix row needs 3 counts");
        }
        for (int j = 0; j < ConfusionMatrix::kSize; ++j) {
          m.confusion.add(i, j, parse_size(cells[j], line_no));
        }
      }
    }
  }
  if (fold_values.size() != folds) throw ParseError(0, "fold accuracy count does not match folds");
  for (const auto& [f, v] : fold_values) {
    if (f >= folds) throw ParseError(0, "fold index out of range");
    m.fold_accuracies.push_back(v);
  }
  return m;
}

// --- relevance export --------------------------------------------------------------

void write_relevance(std::ostream& out, const RelevanceTable& table) {
  std::string buf = kRelevanceHeader;
  buf += '\n';
  for (const auto& p : table.relevance.profiles) {
    if (!p) continue;
    append_rows(buf, data::age_group_name(p->group), table.channels, table.length,
                p->mean_signal, &p->sd_signal, p->mean_relevance);
  }
  if (!table.total.empty()) {
    const nn::Tensor none;
    const auto& pooled = table.relevance.pooled;
    append_rows(buf, "TOTAL", table.channels, table.length, pooled ? pooled->mean_signal : none,
                pooled ? &pooled->sd_signal : nullptr, table.total);
  }
  out << buf;
}

void write_trial_relevance(std::ostream& out, const std::vector<data::ChannelLabel>& channels,
                           data::AgeGroup explained_class, const nn::Tensor& signal_rows,
                           const nn::Tensor& relevance_rows) {
  std::string buf = kRelevanceHeader;
  buf += '\n';
  append_rows(buf, data::age_group_name(explained_class), channels, relevance_rows.dim(1),
              signal_rows, nullptr, relevance_rows);
  out << buf;
}

RelevanceTable read_relevance(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || strip_cr(line) != kRelevanceHeader) {
    throw ParseError(1, "relevance file must start with the header " + std::string(kRelevanceHeader));
  }

  struct Row {
    std::string side, component;
    std::size_t t;
    double mean, sd, relevance;
  };
  std::vector<std::string> class_order;
  std::map<std::string, std::vector<Row>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = strip_cr(line);
    if (row.empty()) continue;
    const auto f = split(row, ',');
    if (f.size() != 7) throw ParseError(line_no, "expected 7 columns");
    std::string cls(f[0]);
    if (!rows.contains(cls)) class_order.push_back(cls);
    rows[cls].push_back({std::string(f[1]), std::string(f[2]), parse_size(f[3], line_no),
                         parse_double(f[4], line_no), parse_double(f[5], line_no),
                         parse_double(f[6], line_no)});
  }
  if (class_order.empty()) throw ParseError(0, "relevance file has no rows");

  RelevanceTable table;
  // Channel order and length come from the first class block.
  for (const Row& r : rows[class_order.front()]) {
    const bool known = std::any_of(table.channels.begin(), table.channels.end(), [&](const auto& c) {
      return c.side == r.side && c.component == r.component;
    });
    if (!known) table.channels.push_back({r.side, r.component});
    table.length = std::max(table.length, r.t + 1);
  }
  const std::size_t C = table.channels.size();
  const std::size_t T = table.length;

  auto fill = [&](const std::string& cls, nn::Tensor& mean, nn::Tensor& sd, nn::Tensor& rel) {
    const auto& block = rows[cls];
    if (block.size() != C * T) {
      throw ParseError(0, fmt::format("class {} has {} rows, expected {}", cls, block.size(), C * T));
    }
    mean = nn::Tensor({C, T});
    sd = nn::Tensor({C, T});
    rel = nn::Tensor({C, T});
    for (const Row& r : block) {
      const auto it = std::find_if(table.channels.begin(), table.channels.end(), [&](const auto& c) {
        return c.side == r.side && c.component == r.component;
      });
      if (it == table.channels.end() || r.t >= T) {
        throw ParseError(0, fmt::format("class {} has an unexpected row {},{},{}", cls, r.side,
                                        r.component, r.t));
      }
      const std::size_t i = static_cast<std::size_t>(it - table.channels.begin()) * T + r.t;
      mean[i] = r.mean;
      sd[i] = r.sd;
      rel[i] = r.relevance;
    }
  };

  for (const std::string& cls : class_order) {
    if (cls == "TOTAL") {
      lrp::ClassRelevanceProfile pooled;
      fill(cls, pooled.mean_signal, pooled.sd_signal, table.total);
      table.relevance.pooled = std::move(pooled);
      continue;
    }
    data::AgeGroup group{};
    bool found = false;
    for (data::AgeGroup g : data::kAllAgeGroups) {
      if (data::age_group_name(g) == cls) {
        group = g;
        found = true;
      }
    }
    if (!found) throw ParseError(0, "unknown class '" + cls + "' in relevance file");
    lrp::ClassRelevanceProfile p;
    p.group = group;
    fill(cls, p.mean_signal, p.sd_signal, p.mean_relevance);
    table.relevance.profiles[data::class_index(group)] = std::move(p);
  }
  for (data::AgeGroup g : data::kAllAgeGroups) {
    if (!table.relevance.profiles[data::class_index(g)]) table.relevance.missing.push_back(g);
  }
  return table;
}

// --- colour scale --------------------------------------------------------------------

Rgb ColorScale::color(double relevance, double magnitude) noexcept {
  if (!(magnitude > 0.0) || !std::isfinite(relevance)) return kNeutral;
  const double v = std::clamp(relevance / magnitude, -1.0, 1.0);
  const Rgb& end = v >= 0.0 ? kInFavor : kAgainst;
  const double a = std::abs(v);
  auto mix = [a](int from, int to) {
    return static_cast<int>(std::lround(from + a * (to - from)));
  };
  return {mix(kNeutral.r, end.r), mix(kNeutral.g, end.g), mix(kNeutral.b, end.b)};
}

std::string to_hex(Rgb c) { return fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b); }

// --- SVG ------------------------------------------------------------------------------

std::string class_svg_name(data::AgeGroup group, const data::ChannelLabel& label) {
  return fmt::format("class_{}_{}_{}.svg", data::age_group_name(group), label.side, label.component);
}

std::string render_class_svg(const lrp::ClassRelevanceProfile& profile, std::size_t channel,
                             const data::ChannelLabel& label) {
  const std::size_t T = profile.mean_signal.dim(1);
  const std::size_t base = channel * T;

  double magnitude = 0.0;
  for (double r : profile.mean_relevance.data()) magnitude = std::max(magnitude, std::abs(r));

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t t = 0; t < T; ++t) {
    lo = std::min(lo, profile.mean_signal[base + t] - profile.sd_signal[base + t]);
    hi = std::max(hi, profile.mean_signal[base + t] + profile.sd_signal[base + t]);
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  const Frame f{60, 36, 480, 220, 0.0, static_cast<double>(T - 1), lo - pad, hi + pad};

  std::string svg;
  auto it = std::back_inserter(svg);
  svg +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"320\" "
      "viewBox=\"0 0 640 320\">\n";
  fmt::format_to(it,
                 "<title>{} {} {}</title>\n<rect width=\"640\" height=\"320\" fill=\"#ffffff\"/>\n",
                 data::age_group_name(profile.group), label.side, label.component);
  fmt::format_to(it, "<text x=\"300\" y=\"20\" font-size=\"13\" text-anchor=\"middle\">{} | {} {}</text>\n",
                 data::age_group_name(profile.group), label.side, label.component);

  // Band: one segment per time point covering [t - 0.5, t + 0.5].
  auto band_at = [&](double t) {
    const auto i = static_cast<std::size_t>(std::floor(t));
    const std::size_t j = std::min(i + 1, T - 1);
    const double a = t - static_cast<double>(i);
    const double m = (1 - a) * profile.mean_signal[base + i] + a * profile.mean_signal[base + j];
    const double s = (1 - a) * profile.sd_signal[base + i] + a * profile.sd_signal[base + j];
    return std::pair{m + s, m - s};
  };
  svg += "<g id=\"band\" stroke=\"none\">\n";
  for (std::size_t t = 0; t < T; ++t) {
    const double t0 = t == 0 ? 0.0 : static_cast<double>(t) - 0.5;
    const double t1 = t + 1 == T ? static_cast<double>(T - 1) : static_cast<double>(t) + 0.5;
    const auto [u0, l0] = band_at(t0);
    const auto [um, lm] = band_at(static_cast<double>(t));
    const auto [u1, l1] = band_at(t1);
    const Rgb c = ColorScale::color(profile.mean_relevance[base + t], magnitude);
    fmt::format_to(it,
                   "<polygon data-t=\"{}\" fill=\"{}\" points=\"{},{} {},{} {},{} {},{} {},{} {},{}\"/>\n",
                   t, to_hex(c), coord(f.x(t0)), coord(f.y(u0)), coord(f.x(t)), coord(f.y(um)),
                   coord(f.x(t1)), coord(f.y(u1)), coord(f.x(t1)), coord(f.y(l1)), coord(f.x(t)),
                   coord(f.y(lm)), coord(f.x(t0)), coord(f.y(l0)));
  }
  svg += "</g>\n<polyline id=\"mean\" fill=\"none\" stroke=\"#111111\" stroke-width=\"1.4\" points=\"";
  for (std::size_t t = 0; t < T; ++t) {
    fmt::format_to(it, "{}{},{}", t ? " " : "", coord(f.x(static_cast<double>(t))),
                   coord(f.y(profile.mean_signal[base + t])));
  }
  svg += "\"/>\n";
  axes(svg, f, "normalized force");

  // Colour bar.
  fmt::format_to(it,
                 "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
                 "<stop offset=\"0\" stop-color=\"{}\"/><stop offset=\"0.5\" stop-color=\"{}\"/>"
                 "<stop offset=\"1\" stop-color=\"{}\"/></linearGradient></defs>\n",
                 to_hex(ColorScale::kAgainst), to_hex(ColorScale::kNeutral),
                 to_hex(ColorScale::kInFavor));
  svg +=
      "<rect id=\"colorbar\" x=\"570\" y=\"36\" width=\"14\" height=\"220\" fill=\"url(#scale)\" "
      "stroke=\"#444444\" stroke-width=\"0.5\"/>\n";
  fmt::format_to(it,
                 "<text x=\"590\" y=\"44\" font-size=\"9\">+{:.3g}</text>\n"
                 "<text x=\"590\" y=\"149\" font-size=\"9\">0</text>\n"
                 "<text x=\"590\" y=\"256\" font-size=\"9\">-{:.3g}</text>\n"
                 "<text x=\"577\" y=\"276\" font-size=\"9\" text-anchor=\"middle\">relevance</text>\n",
                 magnitude, magnitude);
  svg += "</svg>\n";
  return svg;
}

std::string render_total_svg(const nn::Tensor& total, const std::vector<data::ChannelLabel>& channels) {
  const std::size_t C = total.dim(0);
  const std::size_t T = total.dim(1);
  double peak = 0.0;
  for (double v : total.data()) peak = std::max(peak, v);
  if (!(peak > 0.0)) peak = 1.0;

  const double panel = 110.0;
  const double height = 50.0 + panel * static_cast<double>(C);
  std::string svg;
  auto it = std::back_inserter(svg);
  fmt::format_to(it,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"{0}\" "
                 "viewBox=\"0 0 640 {0}\">\n<title>total relevance</title>\n"
                 "<rect width=\"640\" height=\"{0}\" fill=\"#ffffff\"/>\n"
                 "<text x=\"320\" y=\"20\" font-size=\"13\" text-anchor=\"middle\">"
                 "total relevance (sum over classes of |mean relevance|)</text>\n",
                 coord(height));
  for (std::size_t c = 0; c < C; ++c) {
    const Frame f{70, 36 + panel * static_cast<double>(c), 520, panel - 40, 0.0,
                  static_cast<double>(T - 1), 0.0, peak};
    fmt::format_to(it, "<g id=\"total_{}_{}\">\n<polygon fill=\"#f2a900\" fill-opacity=\"0.35\" points=\"",
                   channels[c].side, channels[c].component);
    fmt::format_to(it, "{},{}", coord(f.x(0)), coord(f.y(0)));
    for (std::size_t t = 0; t < T; ++t) {
      fmt::format_to(it, " {},{}", coord(f.x(static_cast<double>(t))), coord(f.y(total.at(c, t))));
    }
    fmt::format_to(it, " {},{}\"/>\n<polyline fill=\"none\" stroke=\"#8a5a00\" stroke-width=\"1.2\" points=\"",
                   coord(f.x(static_cast<double>(T - 1))), coord(f.y(0)));
    for (std::size_t t = 0; t < T; ++t) {
      fmt::format_to(it, "{}{},{}", t ? " " : "", coord(f.x(static_cast<double>(t))),
                     coord(f.y(total.at(c, t))));
    }
    svg += "\"/>\n";
    fmt::format_to(it, "<text x=\"{}\" y=\"{}\" font-size=\"11\">{} {}</text>\n", coord(f.left + 4),
                   coord(f.top + 12), channels[c].side, channels[c].component);
    axes(svg, f, "relevance");
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_plots(const std::filesystem::path& directory, const RelevanceTable& table) {
  ensure_directory(directory);
  for (const auto& p : table.relevance.profiles) {
    if (!p) continue;
    for (std::size_t c = 0; c < table.channels.size(); ++c) {
      write_file(directory / class_svg_name(p->group, table.channels[c]),
                 render_class_svg(*p, c, table.channels[c]));
    }
  }
  if (!table.total.empty()) {
    write_file(directory / "total_relevance.svg", render_total_svg(table.total, table.channels));
  }
}

RelevanceTable relevance_table(const CvResult& result) {
  RelevanceTable table;
  table.channels = data::channel_labels(result.layout);
  table.length = result.length;
  table.relevance = result.relevance;
  if (result.relevance.complete()) table.total = lrp::total_relevance(result.relevance);
  return table;
}

void export_report(const CvResult& result, const std::filesystem::path& directory) {
  ensure_directory(directory);
  const RelevanceTable table = relevance_table(result);

  std::ostringstream metrics;
  write_metrics(metrics, result);
  write_file(directory / "metrics.txt", metrics.str());

  std::ostringstream relevance;
  write_relevance(relevance, table);
  write_file(directory / "relevance.csv", relevance.str());

  write_plots(directory, table);
}

}  // namespace gaitlrp::eval
