#include "amc/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "amc/detection.hpp"
#include "amc/errors.hpp"
#include "amc/rng.hpp"

namespace amc {

namespace {

struct Sampler {
  const OraclePoint& point;
  const OracleConfig& cfg;
  // Exact-draw population sizes.
  std::int64_t n_single = 0;
  std::int64_t n_new = 0;
  std::int64_t n_base = 0;
  // ISI bookkeeping.
  double tail_estimate = 0.0;
  int warmup = 0;

  Sampler(const OraclePoint& p, const OracleConfig& c) : point(p), cfg(c) {
    if (const auto* single = std::get_if<ReceptorConfig>(&point.receptors)) {
      n_single = single->count;
    } else {
      const auto& mix = std::get<MixtureConfig>(point.receptors);
      n_new = std::llround(mix.alpha * mix.count);
      n_base = mix.count - n_new;
    }
    if (point.isi) {
      const auto& link = *point.isi;
      double tail = 0.0;
      for (std::size_t k = static_cast<std::size_t>(link.memory); k < link.taps.size(); ++k) {
        tail += link.taps[k];
      }
      tail_estimate = link.channel.mean_molecules() * tail;
      warmup = cfg.mode == OracleMode::DecisionFeedback ? 4 * link.memory : 0;
    }
  }

  double bound_count(Xoshiro256& rng, double c) const {
    if (!cfg.exact_binomial) {
      const auto stats = binding_stats(c, point.receptors);
      return stats.mean + std::sqrt(stats.variance) * rng.normal();
    }
    if (const auto* single = std::get_if<ReceptorConfig>(&point.receptors)) {
      return static_cast<double>(binomial(rng, n_single, bind_prob(c, single->kd)));
    }
    const auto& mix = std::get<MixtureConfig>(point.receptors);
    const auto a = binomial(rng, n_new, bind_prob(c, mix.kd_new));
    const auto b = binomial(rng, n_base, bind_prob(c, mix.kd_base));
    return static_cast<double>(a + b);
  }

  int draw_bit(Xoshiro256& rng) const { return rng.uniform() < point.p1 ? 1 : 0; }

  double level(int bit) const { return bit != 0 ? point.c1 : point.c0; }

  bool memoryless_error(Xoshiro256& rng) const {
    const int bit = draw_bit(rng);
    double c = level(bit);
    if (point.interference) {
      const auto& dist = *point.interference;
      c += dist.degenerate() ? dist.mean()
                             : std::exp(dist.mu_log() + dist.sigma_log() * rng.normal());
    }
    return decide(bound_count(rng, c), *point.threshold) != bit;
  }

  bool isi_error(Xoshiro256& rng, std::vector<std::uint8_t>& sent,
                 std::vector<std::uint8_t>& decoded) const {
    const auto& link = *point.isi;
    const auto& ch = link.channel;
    const std::size_t depth = link.taps.size();
    const std::size_t memory = static_cast<std::size_t>(link.memory);
    const std::size_t total = depth + static_cast<std::size_t>(warmup) + 1;
    sent.resize(total);
    decoded.resize(total);
    for (std::size_t j = 0; j < depth; ++j) {
      sent[j] = static_cast<std::uint8_t>(draw_bit(rng));
      decoded[j] = sent[j];
    }
    bool error = false;
    for (std::size_t j = depth; j < total; ++j) {
      const int bit = draw_bit(rng);
      sent[j] = static_cast<std::uint8_t>(bit);
      double omega = 0.0;
      for (std::size_t k = 1; k <= depth; ++k) omega += ch.molecules(sent[j - k]) * link.taps[k - 1];
      const auto& memo = cfg.mode == OracleMode::Genie ? sent : decoded;
      double estimate = tail_estimate;
      for (std::size_t k = 1; k <= memory; ++k) estimate += ch.molecules(memo[j - k]) * link.taps[k - 1];

      const double lambda = optimal_threshold(binding_stats(point.c0 + estimate, point.receptors),
                                              binding_stats(point.c1 + estimate, point.receptors));
      const int guess = decide(bound_count(rng, level(bit) + omega), lambda);
      decoded[j] = static_cast<std::uint8_t>(guess);
      error = guess != bit;
    }
    return error;
  }
};

}  // namespace

std::string_view to_string(OracleMode mode) {
  return mode == OracleMode::Genie ? "genie" : "decision-feedback";
}

BepEstimate simulate_bep(const OraclePoint& point, const OracleConfig& cfg) {
  if (cfg.trials == 0) throw ConfigError("oracle: trials must be > 0");
  if (cfg.chunk_size == 0) throw ConfigError("oracle: chunk_size must be > 0");
  if (!point.isi && !point.threshold) throw ConfigError("oracle: no threshold for a memoryless point");
  if (point.isi && point.interference) {
    throw ConfigError("oracle: ISI and random interference cannot be combined");
  }
  if (point.isi && point.isi->memory > static_cast<int>(point.isi->taps.size())) {
    throw LengthMismatch("oracle: memory M exceeds I");
  }
  validate(point.receptors);

  const Sampler sampler(point, cfg);
  const std::uint64_t chunks = (cfg.trials + cfg.chunk_size - 1) / cfg.chunk_size;
  std::vector<std::uint64_t> chunk_errors(chunks, 0);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    std::vector<std::uint8_t> sent;
    std::vector<std::uint8_t> decoded;
    try {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t begin = c * cfg.chunk_size;
        const std::uint64_t end = std::min(cfg.trials, begin + cfg.chunk_size);
        std::uint64_t errors = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
          Xoshiro256 rng(split_seed(cfg.seed, i));
          const bool err = point.isi ? sampler.isi_error(rng, sent, decoded)
                                     : sampler.memoryless_error(rng);
          errors += err ? 1 : 0;
        }
        chunk_errors[c] = errors;
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, chunks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  BepEstimate est;
  est.trials = cfg.trials;
  for (const auto e : chunk_errors) est.errors += e;
  const double n = static_cast<double>(cfg.trials);
  est.bep = static_cast<double>(est.errors) / n;
  est.std_error = est.errors == 0 ? 3.0 / n : std::sqrt(est.bep * (1.0 - est.bep) / n);
  return est;
}

}  // namespace amc
