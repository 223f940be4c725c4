#include "frv/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "frv/errors.hpp"

namespace frv {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

// integral of the piecewise-linear curve over [a, b]
double curve_integral(const DensityCurve& c, double a, double b) {
  if (b <= a) return 0.0;
  double acc = 0.0;
  auto seg = [&](double x0, double x1, double y0, double y1) {
    const double lo = std::max(a, x0), hi = std::min(b, x1);
    if (hi <= lo) return;
    const double t0 = (lo - x0) / (x1 - x0), t1 = (hi - x0) / (x1 - x0);
    const double v0 = y0 + (y1 - y0) * t0, v1 = y0 + (y1 - y0) * t1;
    acc += 0.5 * (v0 + v1) * (hi - lo);
  };
  for (size_t i = 0; i + 1 < c.lambdas.size(); ++i)
    seg(c.lambdas[i], c.lambdas[i + 1], c.rho[i], c.rho[i + 1]);
  return acc;
}

}  // namespace

double curve_interpolate(const DensityCurve& curve, double lambda) {
  const auto& xs = curve.lambdas;
  if (xs.empty() || lambda < xs.front() || lambda > xs.back()) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), lambda);
  if (it == xs.begin()) return curve.rho.front();
  if (it == xs.end()) return curve.rho.back();
  const size_t i = size_t(it - xs.begin()) - 1;
  const double t = (lambda - xs[i]) / (xs[i + 1] - xs[i]);
  return curve.rho[i] + (curve.rho[i + 1] - curve.rho[i]) * t;
}

ComparisonReport compare_spectrum(const SpectrumSample& sample,
                                  const DensityCurve& curve,
                                  bool crop_support) {
  if (curve.support_intervals.empty())
    throw std::invalid_argument("theory curve has no detected support");
  const std::vector<double> pooled = sample.pooled_sorted();
  if (pooled.empty()) throw std::invalid_argument("empty spectrum sample");

  const double thy_lo = curve.support_intervals.front().first;
  const double thy_hi = curve.support_intervals.back().second;
  if (pooled.back() < thy_lo || pooled.front() > thy_hi)
    throw SolverError("empirical and theoretical supports do not overlap");

  const double span = thy_hi - thy_lo;
  double lo, hi;
  if (crop_support) {
    lo = thy_lo;
    hi = thy_hi;
  } else {
    lo = std::min(pooled.front(), thy_lo - 0.05 * span);
    hi = std::max(pooled.back(), thy_hi + 0.05 * span);
  }

  // cube-root bin scaling: the L1 statistical floor decays like
  // bins/sqrt(count), and density-estimation bias stays second order
  const int nb = std::min<int>(200, int(std::ceil(std::cbrt(double(pooled.size())))));
  const double width = (hi - lo) / nb;

  ComparisonReport rep;
  rep.crop_support = crop_support;
  rep.flagged_solver_points = curve.flagged_points;
  rep.r = curve.r;

  double l1 = 0.0;
  for (int i = 0; i < nb; ++i) {
    const double e0 = lo + width * i, e1 = e0 + width;
    const auto cnt = std::upper_bound(pooled.begin(), pooled.end(), e1) -
                     std::lower_bound(pooled.begin(), pooled.end(), e0);
    const double emp = double(cnt) / (double(pooled.size()) * width);
    const double thy = curve_integral(curve, e0, e1) / width;
    l1 += std::abs(emp - thy) * width;
  }
  rep.l1_distance = l1;

  // KS against the (normalized) theory CDF
  const double total = curve_integral(curve, curve.lambdas.front(),
                                      curve.lambdas.back());
  double ks = 0.0;
  const double n = double(pooled.size());
  for (size_t i = 0; i < pooled.size(); ++i) {
    const double f =
        curve_integral(curve, curve.lambdas.front(), pooled[i]) / total;
    ks = std::max(ks, std::abs(double(i + 1) / n - f));
    ks = std::max(ks, std::abs(double(i) / n - f));
  }
  rep.ks_distance = ks;

  for (int k = 1; k <= 2; ++k) {
    ComparisonReport::MomentRow row;
    row.k = k;
    row.theory = curve_moment(curve, k);
    double mean = 0.0;
    for (double x : pooled) mean += std::pow(x, k);
    mean /= n;
    row.empirical = mean;
    // pooled SE across replica means
    const size_t reps = sample.eigenvalues.size();
    if (reps > 1) {
      std::vector<double> rm(reps, 0.0);
      for (size_t rix = 0; rix < reps; ++rix) {
        for (double x : sample.eigenvalues[rix]) rm[rix] += std::pow(x, k);
        rm[rix] /= double(sample.eigenvalues[rix].size());
      }
      double mu = 0.0;
      for (double v : rm) mu += v;
      mu /= double(reps);
      double var = 0.0;
      for (double v : rm) var += (v - mu) * (v - mu);
      var /= double(reps - 1);
      row.pooled_se = std::sqrt(var / double(reps));
    } else {
      double var = 0.0;
      for (double x : pooled) var += std::pow(std::pow(x, k) - mean, 2);
      var /= std::max(1.0, n - 1.0);
      row.pooled_se = std::sqrt(var / n);
    }
    rep.moments.push_back(row);
  }
  return rep;
}

void write_density_csv(const std::filesystem::path& path,
                       const DensityCurve& curve) {
  auto out = open_out(path);
  out << "lambda,density\n";
  for (size_t i = 0; i < curve.lambdas.size(); ++i)
    out << fmt17(curve.lambdas[i]) << ',' << fmt17(curve.rho[i]) << '\n';
}

DensityCurve read_density_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  DensityCurve curve;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    curve.lambdas.push_back(std::stod(line.substr(0, comma)));
    curve.rho.push_back(std::stod(line.substr(comma + 1)));
  }
  // support approximated from positive-density runs; moments recomputed
  bool open = false;
  double lo = 0.0;
  for (size_t i = 0; i < curve.lambdas.size(); ++i) {
    if (curve.rho[i] > 0.0 && !open) {
      open = true;
      lo = curve.lambdas[i];
    } else if (curve.rho[i] <= 0.0 && open) {
      open = false;
      curve.support_intervals.emplace_back(lo, curve.lambdas[i - 1]);
    }
  }
  if (open) curve.support_intervals.emplace_back(lo, curve.lambdas.back());
  curve.normalization = curve_moment(curve, 0);
  curve.first_moment = curve_moment(curve, 1);
  curve.second_moment = curve_moment(curve, 2);
  return curve;
}

void write_autocov_csv(const std::filesystem::path& path,
                       const AutoCovModel& model, int max_lag) {
  auto out = open_out(path);
  out << "lag,value\n";
  for (int d = 0; d <= max_lag; ++d)
    out << d << ',' << fmt17(model(d)) << '\n';
}

void write_eigenvalues_csv(const std::filesystem::path& path,
                           const SpectrumSample& sample) {
  auto out = open_out(path);
  out << "replica,index,eigenvalue\n";
  for (size_t rix = 0; rix < sample.eigenvalues.size(); ++rix)
    for (size_t i = 0; i < sample.eigenvalues[rix].size(); ++i)
      out << rix << ',' << i << ',' << fmt17(sample.eigenvalues[rix][i]) << '\n';
}

SpectrumSample read_eigenvalues_csv(const std::filesystem::path& path,
                                    std::optional<int> bins) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  SpectrumSample sample;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const size_t replica = std::stoul(line.substr(0, c1));
    if (replica >= sample.eigenvalues.size())
      sample.eigenvalues.resize(replica + 1);
    sample.eigenvalues[replica].push_back(std::stod(line.substr(c2 + 1)));
  }
  if (sample.eigenvalues.empty())
    throw std::runtime_error("no eigenvalues in " + path.string());
  sample.histogram = bin_eigenvalues(sample.pooled_sorted(), bins);
  return sample;
}

void write_histogram_csv(const std::filesystem::path& path,
                         const Histogram& histogram) {
  auto out = open_out(path);
  out << "bin_lo,bin_hi,density\n";
  for (size_t i = 0; i < histogram.density.size(); ++i)
    out << fmt17(histogram.edges[i]) << ',' << fmt17(histogram.edges[i + 1])
        << ',' << fmt17(histogram.density[i]) << '\n';
}

Histogram read_histogram_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Histogram h;
  std::string line;
  std::getline(in, line);
  double last_hi = 0.0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    h.edges.push_back(std::stod(line.substr(0, c1)));
    last_hi = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    h.density.push_back(std::stod(line.substr(c2 + 1)));
  }
  h.edges.push_back(last_hi);
  return h;
}

std::string report_to_json(const ComparisonReport& report, double l1_max) {
  nlohmann::json j;
  j["schema"] = 1;
  j["l1_distance"] = report.l1_distance;
  j["ks_distance"] = report.ks_distance;
  j["l1_max"] = l1_max;
  j["pass"] = report.l1_distance < l1_max;
  j["crop_support"] = report.crop_support;
  j["moments"] = nlohmann::json::array();
  for (const auto& m : report.moments)
    j["moments"].push_back({{"k", m.k},
                            {"theory", m.theory},
                            {"empirical", m.empirical},
                            {"pooled_se", m.pooled_se}});
  j["flagged_solver_points"] = report.flagged_solver_points;
  j["config"] = {{"N", report.num_series},
                 {"T", report.num_samples},
                 {"replicas", report.replicas},
                 {"seed", report.seed},
                 {"r", report.r},
                 {"process", report.process_label}};
  return j.dump(2);
}

void write_report_json(const std::filesystem::path& path,
                       const ComparisonReport& report, double l1_max) {
  auto out = open_out(path);
  out << report_to_json(report, l1_max) << '\n';
}

namespace {

constexpr int kW = 640, kH = 420;
constexpr int kMarginL = 56, kMarginR = 16, kMarginT = 16, kMarginB = 40;

struct Scale {
  double x0, x1, y1;
  double px(double x) const {
    return kMarginL + (x - x0) / (x1 - x0) * (kW - kMarginL - kMarginR);
  }
  double py(double y) const {
    return kH - kMarginB - y / y1 * (kH - kMarginT - kMarginB);
  }
};

void svg_axes(std::ostream& out, const Scale& s) {
  out << "<rect width='" << kW << "' height='" << kH << "' fill='white'/>\n";
  out << "<line x1='" << kMarginL << "' y1='" << kH - kMarginB << "' x2='"
      << kW - kMarginR << "' y2='" << kH - kMarginB
      << "' stroke='black' stroke-width='1'/>\n";
  out << "<line x1='" << kMarginL << "' y1='" << kMarginT << "' x2='"
      << kMarginL << "' y2='" << kH - kMarginB
      << "' stroke='black' stroke-width='1'/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double x = s.x0 + (s.x1 - s.x0) * i / 5.0;
    const double y = s.y1 * i / 5.0;
    char lbl[32];
    std::snprintf(lbl, sizeof(lbl), "%.3g", x);
    out << "<text x='" << s.px(x) << "' y='" << kH - kMarginB + 16
        << "' font-size='11' text-anchor='middle' font-family='sans-serif'>"
        << lbl << "</text>\n";
    std::snprintf(lbl, sizeof(lbl), "%.3g", y);
    out << "<text x='" << kMarginL - 6 << "' y='" << s.py(y) + 4
        << "' font-size='11' text-anchor='end' font-family='sans-serif'>" << lbl
        << "</text>\n";
  }
}

void svg_curve(std::ostream& out, const Scale& s, const DensityCurve& curve,
               const char* color, bool dashed) {
  out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5'";
  if (dashed) out << " stroke-dasharray='6,4'";
  out << " points='";
  for (size_t i = 0; i < curve.lambdas.size(); ++i)
    out << s.px(curve.lambdas[i]) << ',' << s.py(curve.rho[i]) << ' ';
  out << "'/>\n";
}

}  // namespace

void write_density_svg(const std::filesystem::path& path,
                       const DensityCurve& curve) {
  auto out = open_out(path);
  Scale s{curve.lambdas.front(), curve.lambdas.back(),
          1.1 * *std::max_element(curve.rho.begin(), curve.rho.end())};
  if (s.y1 <= 0) s.y1 = 1.0;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW
      << "' height='" << kH << "'>\n";
  svg_axes(out, s);
  svg_curve(out, s, curve, "#b40426", false);
  out << "</svg>\n";
}

void write_overlay_svg(const std::filesystem::path& path,
                       const Histogram& histogram, const DensityCurve& curve) {
  auto out = open_out(path);
  const double hmax =
      *std::max_element(histogram.density.begin(), histogram.density.end());
  const double cmax = *std::max_element(curve.rho.begin(), curve.rho.end());
  Scale s{std::min(histogram.edges.front(), curve.lambdas.front()),
          std::max(histogram.edges.back(), curve.lambdas.back()),
          1.1 * std::max(hmax, cmax)};
  if (s.y1 <= 0) s.y1 = 1.0;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW
      << "' height='" << kH << "'>\n";
  svg_axes(out, s);
  for (size_t i = 0; i < histogram.density.size(); ++i) {
    const double x0 = s.px(histogram.edges[i]);
    const double x1 = s.px(histogram.edges[i + 1]);
    const double y = s.py(histogram.density[i]);
    out << "<rect x='" << x0 << "' y='" << y << "' width='" << x1 - x0
        << "' height='" << s.py(0) - y
        << "' fill='#3d9948' fill-opacity='0.65'/>\n";
  }
  svg_curve(out, s, curve, "#b40426", true);
  out << "</svg>\n";
}

}  // namespace frv
