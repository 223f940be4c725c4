#include "frv/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "frv/errors.hpp"

namespace frv {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t GaussianStream::mix(std::uint64_t seed, std::uint64_t stream_index) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state = stream_index ^ 0xD1B54A32D192ED03ULL;
  std::uint64_t b = splitmix64(state);
  state = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
  return splitmix64(state);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t stream_index)
    : engine_(mix(seed, stream_index)) {}

GaussianStream GaussianStream::substream(std::uint64_t seed,
                                         std::uint64_t replica,
                                         std::uint64_t variable,
                                         std::uint64_t role) {
  return GaussianStream(mix(mix(seed, replica), variable), role);
}

double GaussianStream::uniform() {
  // top 53 bits -> [0,1), shifted to (-1,1); the engine output sequence is
  // pinned by the standard, so this is platform independent
  const double u = double(engine_() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

double GaussianStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = uniform();
    v = uniform();
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

void SimulationConfig::validate() const {
  if (num_series <= 1) throw std::invalid_argument("need N > 1");
  if (num_samples < 1) throw std::invalid_argument("need T >= 1");
  if (replicas < 1) throw std::invalid_argument("need replicas >= 1");
  if (burn_in) {
    const int qsum = process.q1() + process.q2();
    if (*burn_in < qsum)
      throw std::invalid_argument("explicit burn-in must be >= q1 + q2");
  }
}

int SimulationConfig::effective_burn_in() const {
  if (burn_in) return *burn_in;
  if (!process.has_ar_part()) return 0;  // exact with q2 presamples
  const auto times = autocovariance(process).characteristic_times();
  const double tmax = times.empty() ? 0.0 : times.front();
  return std::max(1000, int(std::ceil(50.0 * tmax)));
}

Eigen::MatrixXd simulate_panel(const SimulationConfig& config,
                               int replica_index) {
  config.validate();
  if (replica_index < 0 || replica_index >= config.replicas)
    throw std::invalid_argument("replica index out of range");

  const ProcessSpec& spec = config.process;
  const int n = config.num_series;
  const int t = config.num_samples;
  const int q1 = spec.q1();
  const int q2 = spec.q2();
  const auto& a = spec.ma_coeffs();
  const auto& b = spec.ar_coeffs();

  const std::uint64_t rep = std::uint64_t(replica_index);
  Eigen::MatrixXd panel(n, t);

  if (!spec.has_ar_part()) {
    // pure moving average: exact, q2 presample innovations per variable
    std::vector<double> eps(t + q2);
    for (int i = 0; i < n; ++i) {
      GaussianStream window = GaussianStream::substream(config.seed, rep, i, 0);
      for (auto& e : eps) e = window.gaussian();
      for (int s = 0; s < t; ++s) {
        double y = 0.0;
        for (int alpha = 0; alpha <= q2; ++alpha) y += a[alpha] * eps[s + q2 - alpha];
        panel(i, s) = y;
      }
    }
    return panel;
  }

  const int burn = config.effective_burn_in();
  // innovation timeline eps[j] = e_{j - burn - q2}, j = 0 .. burn+q2+t-1;
  // the window stream fills t+q2 recent slots forward in time, the trail
  // stream fills the burn-in slots backwards, so a longer burn-in only
  // prepends older draws and the retained window is unchanged
  std::vector<double> eps(burn + q2 + t);
  std::vector<double> yhist(q1, 0.0);  // yhist[k] = Y at offset -(k+1)
  for (int i = 0; i < n; ++i) {
    GaussianStream window = GaussianStream::substream(config.seed, rep, i, 0);
    GaussianStream trail = GaussianStream::substream(config.seed, rep, i, 1);
    for (int j = 0; j < t + q2; ++j) eps[burn + j] = window.gaussian();
    for (int j = burn - 1; j >= 0; --j) eps[j] = trail.gaussian();

    std::fill(yhist.begin(), yhist.end(), 0.0);
    for (int s = -burn - q2; s < t; ++s) {
      const int j = s + burn + q2;  // index of e_s
      double y = 0.0;
      for (int beta = 1; beta <= q1; ++beta) y += b[beta - 1] * yhist[beta - 1];
      for (int alpha = 0; alpha <= q2 && alpha <= j; ++alpha)
        y += a[alpha] * eps[j - alpha];
      for (int k = q1 - 1; k > 0; --k) yhist[k] = yhist[k - 1];
      yhist[0] = y;
      if (s >= 0) panel(i, s) = y;
    }
  }
  return panel;
}

Eigen::MatrixXd pearson_estimator(const Eigen::MatrixXd& panel) {
  return (panel * panel.transpose()) / double(panel.cols());
}

std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("matrix must be square");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("matrix not symmetric within 1e-12");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("symmetric eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

DualityReport dual_estimator_spectrum_check(const Eigen::MatrixXd& panel) {
  DualityReport report;
  const long n = panel.rows();
  const long t = panel.cols();
  if (n == t) {
    report.applicable = false;
    report.passed = true;
    report.note = "N == T: duality degenerate, check skipped";
    return report;
  }
  const double r = double(n) / double(t);

  std::vector<double> ec = eigenvalues_symmetric(pearson_estimator(panel));
  Eigen::MatrixXd dual = (panel.transpose() * panel) / double(n);
  std::vector<double> ea = eigenvalues_symmetric(dual);
  std::sort(ec.rbegin(), ec.rend());
  std::sort(ea.rbegin(), ea.rend());

  const long small = std::min(n, t);
  const auto& big = (n > t) ? ec : ea;
  const double big_max = std::abs(big.front());
  report.zero_modes_expected = int(std::labs(t - n));
  for (size_t i = small; i < big.size(); ++i)
    if (std::abs(big[i]) < 1e-8 * big_max) ++report.zero_modes_found;

  double worst = 0.0;
  for (long i = 0; i < small; ++i) {
    const double lhs = ec[i] / r;  // c's spectrum rescaled
    const double rhs = ea[i];
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs)));
  }
  report.max_rel_deviation = worst;
  report.passed = worst < 1e-8 &&
                  report.zero_modes_found == report.zero_modes_expected;
  if (!report.passed) {
    std::ostringstream msg;
    msg << "duality mismatch: max relative deviation " << worst << ", "
        << report.zero_modes_found << "/" << report.zero_modes_expected
        << " zero modes";
    report.note = msg.str();
  }
  return report;
}

std::size_t SpectrumSample::pooled_count() const {
  std::size_t c = 0;
  for (const auto& v : eigenvalues) c += v.size();
  return c;
}

std::vector<double> SpectrumSample::pooled_sorted() const {
  std::vector<double> all;
  all.reserve(pooled_count());
  for (const auto& v : eigenvalues) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());
  return all;
}

int worker_count() {
  if (const char* env = std::getenv("FRV_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SpectrumSample aggregate_spectrum(const SimulationConfig& config,
                                  std::optional<int> bins, int threads) {
  config.validate();
  const int reps = config.replicas;
  SpectrumSample sample;
  sample.eigenvalues.resize(reps);

  const int workers = std::min(reps, threads > 0 ? threads : worker_count());
  std::atomic<int> next{0};
  auto run = [&]() {
    for (int k = next.fetch_add(1); k < reps; k = next.fetch_add(1)) {
      Eigen::MatrixXd panel = simulate_panel(config, k);
      auto ev = eigenvalues_symmetric(pearson_estimator(panel));
      // the estimator is PSD; rounding-level negatives get clamped
      const double floor = -1e-10 * std::max(1.0, std::abs(ev.back()));
      for (auto& v : ev)
        if (v < 0.0 && v > floor) v = 0.0;
      sample.eigenvalues[k] = std::move(ev);
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

  sample.histogram = bin_eigenvalues(sample.pooled_sorted(), bins);
  return sample;
}

Histogram bin_eigenvalues(const std::vector<double>& pooled,
                          std::optional<int> bins) {
  if (pooled.empty()) throw std::invalid_argument("no eigenvalues to bin");
  const int nb = bins ? *bins
                      : std::min<int>(200, int(std::ceil(std::sqrt(
                                               double(pooled.size())))));
  if (nb < 1) throw std::invalid_argument("need at least one bin");
  double lo = pooled.front();
  double hi = pooled.back();
  if (hi <= lo) hi = lo + 1.0;

  Histogram h;
  h.edges.resize(nb + 1);
  for (int i = 0; i <= nb; ++i) h.edges[i] = lo + (hi - lo) * double(i) / nb;
  std::vector<std::size_t> counts(nb, 0);
  for (double x : pooled) {
    int idx = int((x - lo) / (hi - lo) * nb);
    idx = std::clamp(idx, 0, nb - 1);
    ++counts[idx];
  }
  h.density.resize(nb);
  const double width = (hi - lo) / nb;
  for (int i = 0; i < nb; ++i)
    h.density[i] = double(counts[i]) / (double(pooled.size()) * width);
  return h;
}

}  // namespace frv
