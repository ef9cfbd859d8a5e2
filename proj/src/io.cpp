#include "sigtestsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sigtestsim/errors.hpp"

namespace sigtestsim {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw parse_error("non-numeric value '" + s + "' at " + where);
  }
  return v;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::vector<std::string> data_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_data_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_data_error("cannot write file: " + path);
  out << content;
}

ScoreMatrix load_score_matrix(const std::string& path,
                              const std::string& measure) {
  const auto lines = data_lines(read_text_file(path));
  if (lines.empty()) throw parse_error(path + ": empty score matrix");
  const auto header = split_csv(lines[0]);
  if (header.size() < 2 || header[0] != "topic") {
    throw parse_error(path + ": header must be 'topic,<system>,...'");
  }

  ScoreMatrix mat;
  mat.measure = measure;
  mat.systems.assign(header.begin() + 1, header.end());
  const SupportHint hint = mat.support();

  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv(lines[r]);
    if (cells.size() != header.size()) {
      throw parse_error(path + ": row '" + cells[0] + "' has " +
                        std::to_string(cells.size() - 1) + " cells, expected " +
                        std::to_string(header.size() - 1));
    }
    mat.topics.push_back(cells[0]);
    std::vector<double> row(mat.systems.size());
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) {
        throw parse_error(path + ": missing cell at row '" + cells[0] +
                          "', column '" + header[c] + "'");
      }
      const double v = parse_double(
          cells[c], path + " row '" + cells[0] + "' column '" + header[c] + "'");
      if (!hint.contains(v)) {
        throw parse_error(path + ": value " + cells[c] + " at row '" + cells[0] +
                          "', column '" + header[c] +
                          "' outside the support of measure " + measure);
      }
      row[c - 1] = v;
    }
    mat.scores.push_back(std::move(row));
  }
  if (mat.topics.empty()) throw parse_error(path + ": no topic rows");
  return mat;
}

std::string score_matrix_csv(const ScoreMatrix& matrix,
                             const std::vector<std::string>& header_comments) {
  std::string out;
  for (const auto& c : header_comments) out += "# " + c + "\n";
  out += "topic";
  for (const auto& s : matrix.systems) out += "," + s;
  out += "\n";
  for (std::size_t t = 0; t < matrix.topics.size(); ++t) {
    out += matrix.topics[t];
    for (double v : matrix.scores[t]) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::vector<std::string> config_comments(const ExperimentConfig& config) {
  std::string tests;
  for (const auto& t : config.tests) {
    if (!tests.empty()) tests += ",";
    tests += test_name(t);
  }
  auto join = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) {
      if (!s.empty()) s += ",";
      s += format_double(x);
    }
    return s;
  };
  return {
      "master_seed=" + std::to_string(config.master_seed),
      "mode=" + experiment_mode_name(config.mode) +
          " n_topics=" + std::to_string(config.n_topics) +
          " trials=" + std::to_string(config.trials) +
          " tails=" + std::to_string(config.tails) +
          " replicas=" + std::to_string(config.replicas) +
          " sign_h=" + format_double(config.sign_h),
      "tests=" + tests,
      "alphas=" + join(config.alphas),
      "deltas=" + join(config.deltas),
      "top_fraction=" + format_double(config.top_fraction) +
          " baseline_bottom_fraction=" +
          format_double(config.baseline_bottom_fraction) +
          " candidate_pool=" + std::to_string(config.candidate_pool),
  };
}

std::string report_csv(const ExperimentResult& result) {
  std::string out;
  for (const auto& c : config_comments(result.config)) out += "# " + c + "\n";
  out += "test,n,alpha,delta,trials,rejections,rate\n";
  for (const ReportRow& row : result.rows) {
    out += row.test;
    out += "," + std::to_string(row.n_topics);
    out += "," + format_double(row.alpha);
    out += ",";
    if (row.delta) out += format_double(*row.delta);
    out += "," + std::to_string(row.trials);
    out += "," + std::to_string(row.rejections);
    out += "," + format_double(row.rate());
    out += "\n";
  }
  return out;
}

std::string trial_log_csv(const ExperimentResult& result) {
  const auto& config = result.config;
  std::string out;
  for (const auto& c : config_comments(config)) out += "# " + c + "\n";
  out += "trial,test,n,alpha,delta,p1,p2,mean_d,seed\n";
  for (const TrialRecord& rec : result.records) {
    for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
      out += std::to_string(rec.trial);
      out += "," + test_name(config.tests[ti]);
      out += "," + std::to_string(config.n_topics);
      out += ",";  // p-values are alpha-independent
      out += ",";
      if (config.mode != ExperimentMode::type1) {
        out += format_double(config.deltas[rec.delta_index]);
      }
      out += "," + format_double(rec.p1[ti]);
      out += "," + format_double(rec.p2[ti]);
      out += "," + format_double(rec.mean_d);
      out += "," + std::to_string(rec.seed);
      out += "\n";
    }
  }
  return out;
}

std::vector<ReportRow> load_report_csv(const std::string& path) {
  const auto lines = data_lines(read_text_file(path));
  if (lines.empty()) throw parse_error(path + ": empty report");
  if (split_csv(lines[0]) !=
      std::vector<std::string>{"test", "n", "alpha", "delta", "trials",
                               "rejections", "rate"}) {
    throw parse_error(path + ": unexpected report header");
  }
  std::vector<ReportRow> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_csv(lines[r]);
    if (cells.size() != 7) {
      throw parse_error(path + ": bad report row " + std::to_string(r));
    }
    ReportRow row;
    row.test = cells[0];
    row.n_topics = static_cast<std::size_t>(
        parse_double(cells[1], path + " row " + std::to_string(r)));
    row.alpha = parse_double(cells[2], path + " row " + std::to_string(r));
    if (!cells[3].empty()) {
      row.delta = parse_double(cells[3], path + " row " + std::to_string(r));
    }
    row.trials = static_cast<std::size_t>(
        parse_double(cells[4], path + " row " + std::to_string(r)));
    row.rejections = static_cast<std::size_t>(
        parse_double(cells[5], path + " row " + std::to_string(r)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// SVG emission

namespace {

const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#ff7f0e", "#9467bd", "#8c564b"};
  return palette[i % 6];
}

std::string fmt_tick(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<ChartSeries>& series,
                           bool diagonal,
                           const std::vector<std::string>& comments) {
  constexpr double width = 640, height = 480;
  constexpr double ml = 70, mr = 150, mt = 40, mb = 55;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;

  double x_min = HUGE_VAL, x_max = -HUGE_VAL, y_max = 0.0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (!(x_min < x_max)) {
    x_min = 0.0;
    x_max = 1.0;
  }
  if (diagonal) y_max = std::max(y_max, x_max);
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;
  const double y_min = 0.0;

  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) {
    return mt + ph - (y - y_min) / (y_max - y_min) * ph;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (const auto& c : comments) svg += "<!-- " + c + " -->\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt_tick(ml + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"15\">" + title + "</text>\n";

  // axes
  svg += "<line x1=\"" + fmt_tick(ml) + "\" y1=\"" + fmt_tick(mt + ph) +
         "\" x2=\"" + fmt_tick(ml + pw) + "\" y2=\"" + fmt_tick(mt + ph) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt_tick(ml) + "\" y1=\"" + fmt_tick(mt) + "\" x2=\"" +
         fmt_tick(ml) + "\" y2=\"" + fmt_tick(mt + ph) + "\" stroke=\"black\"/>\n";

  constexpr int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double xv = x_min + (x_max - x_min) * i / n_ticks;
    const double yv = y_min + (y_max - y_min) * i / n_ticks;
    svg += "<line x1=\"" + fmt_tick(px(xv)) + "\" y1=\"" + fmt_tick(mt + ph) +
           "\" x2=\"" + fmt_tick(px(xv)) + "\" y2=\"" + fmt_tick(mt + ph + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt_tick(px(xv)) + "\" y=\"" + fmt_tick(mt + ph + 18) +
           "\" text-anchor=\"middle\">" + fmt_tick(xv) + "</text>\n";
    svg += "<line x1=\"" + fmt_tick(ml - 5) + "\" y1=\"" + fmt_tick(py(yv)) +
           "\" x2=\"" + fmt_tick(ml) + "\" y2=\"" + fmt_tick(py(yv)) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt_tick(ml - 8) + "\" y=\"" + fmt_tick(py(yv) + 4) +
           "\" text-anchor=\"end\">" + fmt_tick(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt_tick(ml + pw / 2) + "\" y=\"" +
         fmt_tick(height - 12) + "\" text-anchor=\"middle\">" + x_label +
         "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt_tick(mt + ph / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt_tick(mt + ph / 2) + ")\">" + y_label + "</text>\n";

  if (diagonal) {
    const double d_hi = std::min(x_max, y_max);
    svg += "<line x1=\"" + fmt_tick(px(std::max(x_min, 0.0))) + "\" y1=\"" +
           fmt_tick(py(std::max(x_min, 0.0))) + "\" x2=\"" + fmt_tick(px(d_hi)) +
           "\" y2=\"" + fmt_tick(py(d_hi)) +
           "\" stroke=\"#999999\" stroke-dasharray=\"5,4\" class=\"diagonal\"/>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      if (!pts.empty()) pts += " ";
      pts += fmt_tick(px(x)) + "," + fmt_tick(py(y));
    }
    svg += "<polyline fill=\"none\" stroke=\"" +
           std::string(series_color(i)) + "\" stroke-width=\"1.8\" points=\"" +
           pts + "\"/>\n";
    const double ly = mt + 16.0 * static_cast<double>(i) + 10.0;
    svg += "<line x1=\"" + fmt_tick(ml + pw + 10) + "\" y1=\"" + fmt_tick(ly) +
           "\" x2=\"" + fmt_tick(ml + pw + 34) + "\" y2=\"" + fmt_tick(ly) +
           "\" stroke=\"" + series_color(i) + "\" stroke-width=\"1.8\"/>\n";
    svg += "<text x=\"" + fmt_tick(ml + pw + 40) + "\" y=\"" + fmt_tick(ly + 4) +
           "\">" + series[i].name + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string report_chart_svg(const ExperimentConfig& config,
                             const std::vector<ReportRow>& rows) {
  const bool type1 = config.mode == ExperimentMode::type1;
  // Non-type1 charts plot rate against delta at the alpha closest to 0.05.
  double chart_alpha = config.alphas.front();
  for (double a : config.alphas) {
    if (std::fabs(a - 0.05) < std::fabs(chart_alpha - 0.05)) chart_alpha = a;
  }

  std::vector<ChartSeries> series;
  for (TestId test : config.tests) {
    ChartSeries s;
    s.name = test_name(test);
    for (const ReportRow& row : rows) {
      if (row.test != s.name) continue;
      if (type1) {
        s.points.emplace_back(row.alpha, row.rate());
      } else if (row.delta && row.alpha == chart_alpha) {
        s.points.emplace_back(*row.delta, row.rate());
      }
    }
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }
  const std::string what = type1 ? "Type I error rate"
                           : config.mode == ExperimentMode::power
                               ? "Power"
                               : "Type III error rate";
  const std::string title =
      what + " (n=" + std::to_string(config.n_topics) +
      (type1 ? "" : ", alpha=" + format_double(chart_alpha)) + ")";
  return svg_line_chart(title, type1 ? "alpha" : "delta", what, series, type1,
                        config_comments(config));
}

}  // namespace sigtestsim
