#ifndef FRV_MONTECARLO_HPP
#define FRV_MONTECARLO_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "frv/process.hpp"

namespace frv {

/// Deterministic per-replica Gaussian stream. The engine is mt19937_64
/// seeded by a SplitMix64 hash of (seed, replica); uniforms come from the
/// top 53 bits; normals from the Marsaglia polar method:
///   draw u, v uniform on (-1,1) until 0 < s = u^2+v^2 < 1,
///   return u * sqrt(-2 ln s / s) (partner v * sqrt(...) is cached).
/// Everything is fully specified, so streams reproduce across platforms.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream_index);

  double uniform();  // on (-1, 1)
  double gaussian();

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream_index);

  /// Independent substream keyed by (replica, variable, role). Role 0 draws
  /// the retained-window innovations, role 1 the burn-in trail (consumed
  /// backwards in time), so lengthening the burn-in never changes the
  /// window's draws.
  static GaussianStream substream(std::uint64_t seed, std::uint64_t replica,
                                  std::uint64_t variable, std::uint64_t role);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Monte Carlo run description: N decoupled copies of the process sampled
/// over T time steps, repeated over seeded replicas.
struct SimulationConfig {
  ProcessSpec process;
  int num_series;                 // N
  int num_samples;                // T
  int replicas = 1;
  std::uint64_t seed = 0;
  std::optional<int> burn_in;     // explicit; empty selects Auto

  SimulationConfig(ProcessSpec process_, int n, int t)
      : process(std::move(process_)), num_series(n), num_samples(t) {}

  double ratio() const { return double(num_series) / double(num_samples); }

  /// Auto = 0 for pure moving averages (simulated exactly with q2 presample
  /// innovations); max(1000, ceil(50 T_max)) otherwise, T_max the slowest
  /// characteristic time.
  int effective_burn_in() const;

  void validate() const;
};

/// One replica's N x T data panel; rows are variables, columns time.
Eigen::MatrixXd simulate_panel(const SimulationConfig& config,
                               int replica_index);

/// c = (1/T) Y Y^T, no demeaning (the processes are zero-mean).
Eigen::MatrixXd pearson_estimator(const Eigen::MatrixXd& panel);

/// Full spectrum of a symmetric matrix, ascending. Rejects matrices that are
/// not symmetric within 1e-12 (relative to the largest entry).
std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& matrix);

struct DualityReport {
  bool applicable = true;   // false when N == T
  bool passed = false;
  double max_rel_deviation = 0.0;
  int zero_modes_expected = 0;
  int zero_modes_found = 0;
  std::string note;
};

/// Checks that c = (1/T) Y Y^T and its dual a = (1/N) Y^T Y share nonzero
/// spectra after rescaling c's by 1/r, and that the larger estimator carries
/// exactly |T - N| zero modes.
DualityReport dual_estimator_spectrum_check(const Eigen::MatrixXd& panel);

struct Histogram {
  std::vector<double> edges;    // bins + 1 ascending edges
  std::vector<double> density;  // normalized to unit area
};

struct SpectrumSample {
  std::vector<std::vector<double>> eigenvalues;  // per replica, ascending
  Histogram histogram;

  std::size_t pooled_count() const;
  std::vector<double> pooled_sorted() const;
};

/// Unit-area histogram over [min, max] of the sorted sample. Auto bins =
/// ceil(sqrt(count)), capped at 200.
Histogram bin_eigenvalues(const std::vector<double>& pooled_sorted,
                          std::optional<int> bins = std::nullopt);

/// Runs every replica (fanned out over worker threads, reduced in replica
/// order so results are schedule-independent), pools the eigenvalues and
/// bins them. Auto bins = ceil(sqrt(pooled count)), capped at 200.
SpectrumSample aggregate_spectrum(const SimulationConfig& config,
                                  std::optional<int> bins = std::nullopt,
                                  int threads = 0);

/// Worker cap: FRV_THREADS when set, hardware concurrency otherwise.
int worker_count();

}  // namespace frv

#endif
