#ifndef FRV_REPORT_HPP
#define FRV_REPORT_HPP

#include <filesystem>
#include <string>

#include "frv/montecarlo.hpp"
#include "frv/spectral.hpp"

namespace frv {

/// Quantitative agreement between an empirical spectrum and a theory curve.
struct ComparisonReport {
  double l1_distance = 0.0;  // integral of |rho_emp - rho_thy| on shared bins
  double ks_distance = 0.0;  // sup of the CDF gap
  struct MomentRow {
    int k;
    double theory;
    double empirical;
    double pooled_se;
  };
  std::vector<MomentRow> moments;  // k = 1, 2
  std::vector<double> flagged_solver_points;
  bool crop_support = false;
  // config echo
  int num_series = 0, num_samples = 0, replicas = 0;
  std::uint64_t seed = 0;
  double r = 0.0;
  std::string process_label;
};

/// Shared binning spans the theory support +-5% unioned with the empirical
/// range, so eigenvalues leaking past the thermodynamic edges count toward
/// the distance; crop_support restricts to the theory support instead. Bin
/// count scales as the cube root of the pooled eigenvalue count (capped at
/// 200), the density-estimation scaling that keeps the metric's statistical
/// floor low.
ComparisonReport compare_spectrum(const SpectrumSample& sample,
                                  const DensityCurve& curve,
                                  bool crop_support = false);

/// Theory curve evaluated by linear interpolation (zero outside the grid).
double curve_interpolate(const DensityCurve& curve, double lambda);

// --- file emission (all decimals serialized with 17 significant digits) ---

void write_density_csv(const std::filesystem::path& path,
                       const DensityCurve& curve);
DensityCurve read_density_csv(const std::filesystem::path& path);

void write_autocov_csv(const std::filesystem::path& path,
                       const AutoCovModel& model, int max_lag);

void write_eigenvalues_csv(const std::filesystem::path& path,
                           const SpectrumSample& sample);
/// Rebuilds the per-replica eigenvalue lists; the histogram is re-binned
/// with the auto rule (or `bins` when given).
SpectrumSample read_eigenvalues_csv(const std::filesystem::path& path,
                                    std::optional<int> bins = std::nullopt);

void write_histogram_csv(const std::filesystem::path& path,
                         const Histogram& histogram);
Histogram read_histogram_csv(const std::filesystem::path& path);

std::string report_to_json(const ComparisonReport& report, double l1_max);
void write_report_json(const std::filesystem::path& path,
                       const ComparisonReport& report, double l1_max);

/// Self-contained SVG line plot of a density curve.
void write_density_svg(const std::filesystem::path& path,
                       const DensityCurve& curve);

/// Histogram (filled steps) with the dashed theory curve overlaid.
void write_overlay_svg(const std::filesystem::path& path,
                       const Histogram& histogram, const DensityCurve& curve);

}  // namespace frv

#endif
