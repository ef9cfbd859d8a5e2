#ifndef SIGTESTSIM_IO_HPP
#define SIGTESTSIM_IO_HPP

#include <string>
#include <vector>

#include "sigtestsim/experiments.hpp"

namespace sigtestsim {

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);
double parse_double(const std::string& s, const std::string& where);

// Score matrix CSV: header "topic,<system>,...", one row per topic.
// Lines starting with '#' are ignored.
ScoreMatrix load_score_matrix(const std::string& path,
                              const std::string& measure);
std::string score_matrix_csv(const ScoreMatrix& matrix,
                             const std::vector<std::string>& header_comments = {});

// Report CSV: test,n,alpha,delta,trials,rejections,rate
std::string report_csv(const ExperimentResult& result);
// Per-trial log CSV: trial,test,n,alpha,delta,p1,p2,mean_d,seed
std::string trial_log_csv(const ExperimentResult& result);

std::vector<ReportRow> load_report_csv(const std::string& path);

// Comment lines embedding the master seed and the resolved configuration.
std::vector<std::string> config_comments(const ExperimentConfig& config);

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Plain hand-emitted line chart: axes, ticks, one polyline per series,
// legend, optional y=x reference diagonal.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<ChartSeries>& series,
                           bool diagonal,
                           const std::vector<std::string>& comments = {});

// Build chart series from report rows: x = alpha (type1) or delta
// (power/type3), one series per test. Rows with other grid values are
// filtered by the caller.
std::string report_chart_svg(const ExperimentConfig& config,
                             const std::vector<ReportRow>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace sigtestsim

#endif  // SIGTESTSIM_IO_HPP
