#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "zemtwist/sim.hpp"

namespace zemtwist {

namespace {

// Linear interpolation between order statistics (type 7).
double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

RunResult evaluate(const ScenarioConfig& base, const RunDraw& draw, Mode mode,
                   std::size_t index) {
  ScenarioConfig sc = base;
  sc.plantCoeffs = draw.plant;
  sc.maneuver.phase = draw.phase;
  const Trace trace = run_engagement(sc, mode);

  RunResult r;
  r.index = index;
  r.missDistance = trace.terminal.missDistance;
  r.interceptTime = trace.terminal.interceptTime;
  r.reason = trace.terminal.reason;
  r.zemOvershoot = terminal_zem_overshoot(trace);
  for (const auto& s : trace.samples) r.maxAbsDelta = std::max(r.maxAbsDelta, std::abs(s.delta));
  r.canardReversals = canard_reversal_count(trace);
  r.betaIntegral = beta_integral(trace);
  r.alphaWarning = trace.alphaWarning;
  return r;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RunDraw draw_run(const ScenarioConfig& sc, std::uint64_t seed, std::size_t index) {
  RunDraw d;
  d.seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index)));
  std::mt19937_64 rng(d.seed);
  d.plant = sample_coeffs(sc.coeffs, sc.uncertainty, rng);
  d.phase = sc.maneuver.phase;
  if (sc.uncertainty.randomizePhase) {
    std::uniform_real_distribution<double> phase(0.0, sc.maneuver.period);
    d.phase = phase(rng);
  }
  return d;
}

CampaignStats summarize(const std::vector<RunResult>& runs) {
  CampaignStats st;
  st.runs = runs.size();
  std::vector<double> miss;
  double overshoot = 0.0;
  double reversals = 0.0;
  for (const auto& r : runs) {
    if (r.reason == TerminationReason::Diverged) {
      ++st.diverged;
      continue;
    }
    miss.push_back(r.missDistance);
    overshoot += r.zemOvershoot;
    reversals += r.canardReversals;
  }
  st.completed = miss.size();
  if (miss.empty()) return st;

  const double n = static_cast<double>(miss.size());
  double sum = 0.0;
  for (double m : miss) sum += m;
  st.meanMiss = sum / n;
  double ss = 0.0;
  for (double m : miss) ss += (m - st.meanMiss) * (m - st.meanMiss);
  st.stdMiss = miss.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  std::sort(miss.begin(), miss.end());
  st.maxMiss = miss.back();
  st.q50 = quantile(miss, 0.50);
  st.q90 = quantile(miss, 0.90);
  st.q95 = quantile(miss, 0.95);
  st.medianMiss = st.q50;
  st.meanZemOvershoot = overshoot / n;
  st.meanReversals = reversals / n;
  return st;
}

Campaign monte_carlo(const ScenarioConfig& sc, std::size_t n, std::uint64_t seed,
                     const std::vector<Mode>& modes, unsigned threads) {
  sc.validate();
  Campaign c;
  c.seed = seed;
  c.draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.draws.push_back(draw_run(sc, seed, i));

  c.modes.resize(modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    c.modes[m].mode = modes[m];
    c.modes[m].runs.resize(n);
  }

  const std::size_t jobs = n * modes.size();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) {
      const std::size_t m = j / n;
      const std::size_t i = j % n;
      c.modes[m].runs[i] = evaluate(sc, c.draws[i], modes[m], i);
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (auto& mc : c.modes) mc.stats = summarize(mc.runs);
  return c;
}

}  // namespace zemtwist
