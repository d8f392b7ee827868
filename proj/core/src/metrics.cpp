#include "oet/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oet/config.hpp"
#include "oet/error.hpp"

namespace oet {

namespace fs = std::filesystem;

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  if (inter <= 0.0) return 0.0;
  // Areas use the same interval arithmetic as the intersection so that
  // identical boxes give exactly 1.
  const double area_a = ((a.x + a.w) - a.x) * ((a.y + a.h) - a.y);
  const double area_b = ((b.x + b.w) - b.x) * ((b.y + b.h) - b.y);
  const double uni = area_a + area_b - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_error(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

EvaluationReport evaluate(std::span<const BoundingBox> results,
                          std::span<const BoundingBox> ground_truth) {
  if (results.size() != ground_truth.size()) {
    throw InvalidInput("evaluate: " + std::to_string(results.size()) +
                       " results vs " + std::to_string(ground_truth.size()) +
                       " ground-truth boxes");
  }
  if (results.empty()) throw InvalidInput("evaluate: need at least one frame");

  const size_t n = results.size();
  std::vector<double> errors(n);
  std::vector<double> overlaps(n);
  for (size_t i = 0; i < n; ++i) {
    errors[i] = center_error(results[i], ground_truth[i]);
    overlaps[i] = iou(results[i], ground_truth[i]);
  }

  EvaluationReport r;
  r.frames = static_cast<int>(n);
  r.precision_curve.resize(kPrecisionThresholds);
  for (int tau = 0; tau < kPrecisionThresholds; ++tau) {
    const auto hits = std::count_if(errors.begin(), errors.end(),
                                    [tau](double e) { return e <= tau; });
    r.precision_curve[tau] = static_cast<double>(hits) / n;
  }
  r.precision_at_20 = r.precision_curve[20];

  r.success_curve.resize(kSuccessThresholds);
  for (int k = 0; k < kSuccessThresholds; ++k) {
    const double theta = success_threshold(k);
    const auto hits = std::count_if(overlaps.begin(), overlaps.end(), [&](double o) {
      return k == 0 ? o > 0.0 : o >= theta;
    });
    r.success_curve[k] = static_cast<double>(hits) / n;
  }
  double sum = 0.0;
  for (double v : r.success_curve) sum += v;
  r.auc = sum / kSuccessThresholds;

  double err_sum = 0.0;
  double ov_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    err_sum += errors[i];
    ov_sum += overlaps[i];
  }
  r.mean_center_error = err_sum / n;
  r.mean_overlap = ov_sum / n;
  return r;
}

double drr(int d, int m, int n) {
  if (m < 1 || n < 1) throw InvalidParameter("drr: m and n must be positive");
  const int bound = std::min(m, n);
  if (d < 0 || d > bound) throw InvalidParameter("drr: d must lie in [0, min(m, n)]");
  return static_cast<double>(d) / bound;
}

double fdr(std::span<const double> scores_pos, std::span<const double> scores_neg) {
  if (scores_pos.empty() || scores_neg.empty()) {
    throw InvalidInput("fdr: both score lists must be non-empty");
  }
  auto moments = [](std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, var / static_cast<double>(v.size())};
  };
  const auto [mp, vp] = moments(scores_pos);
  const auto [mn, vn] = moments(scores_neg);
  return (mp - mn) * (mp - mn) / (vp + vn + 1e-12);
}

std::string format_report(const EvaluationReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "frames = %d\n"
                "precision_at_20 = %.9f\n"
                "auc = %.9f\n"
                "mean_center_error = %.9f\n"
                "mean_overlap = %.9f\n",
                r.frames, r.precision_at_20, r.auc, r.mean_center_error, r.mean_overlap);
  return buf;
}

std::pair<fs::path, fs::path> write_report(const fs::path& path,
                                           const EvaluationReport& r) {
  auto write = [](const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
    out << body;
    if (!out) throw IoError("failed writing '" + p.string() + "'");
  };
  write(path, format_report(r));

  const fs::path base = path.parent_path() / path.stem();
  const fs::path precision_path = base.string() + "_precision.csv";
  const fs::path success_path = base.string() + "_success.csv";
  char line[64];
  std::string precision = "threshold_px,precision\n";
  for (size_t t = 0; t < r.precision_curve.size(); ++t) {
    std::snprintf(line, sizeof line, "%zu,%.9f\n", t, r.precision_curve[t]);
    precision += line;
  }
  std::string success = "threshold_overlap,success\n";
  for (size_t k = 0; k < r.success_curve.size(); ++k) {
    std::snprintf(line, sizeof line, "%.2f,%.9f\n",
                  success_threshold(static_cast<int>(k)), r.success_curve[k]);
    success += line;
  }
  write(precision_path, precision);
  write(success_path, success);
  return {precision_path, success_path};
}

std::vector<double> read_curve_csv(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<double> values;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected threshold,value");
    double v = 0.0;
    const char* begin = line.data() + comma + 1;
    const char* end = line.data() + line.size();
    if (end > begin && end[-1] == '\r') --end;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) throw ParseError(line_no, "non-numeric value");
    values.push_back(v);
  }
  return values;
}

}  // namespace oet
