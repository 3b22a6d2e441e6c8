#include "qcool/photonics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "qcool/rng.hpp"

namespace qcool {

namespace {

constexpr double kPsPerSecond = 1e12;

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be a finite non-negative number");
  }
}

double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

EmpiricalParams frequencies(std::uint64_t s, std::uint64_t f, std::uint64_t l) {
  const std::uint64_t n = s + f + l;
  if (n == 0) return {0, 0, 0, 0, 0, 0, 0};
  const double dn = static_cast<double>(n);
  auto se = [dn](double p) { return std::sqrt(p * (1.0 - p) / dn); };
  const double ps = static_cast<double>(s) / dn;
  const double pf = static_cast<double>(f) / dn;
  const double pl = static_cast<double>(l) / dn;
  return {ps, pf, pl, se(ps), se(pf), se(pl), n};
}

// Poisson arrival process with exponential inter-arrival times on an
// integer picosecond clock.
class ArrivalStream {
 public:
  ArrivalStream(double rate, std::uint64_t seed, std::int64_t start_ps)
      : rng_(seed), active_(rate > 0.0), exp_(active_ ? rate : 1.0), next_ps_(start_ps) {
    advance();
  }

  std::int64_t next() const { return next_ps_; }
  bool active() const { return active_; }
  Rng& rng() { return rng_; }

  void advance() {
    if (!active_) {
      next_ps_ = std::numeric_limits<std::int64_t>::max();
      return;
    }
    next_ps_ += std::llround(exp_(rng_) * kPsPerSecond);
  }

 private:
  Rng rng_;
  bool active_;
  std::exponential_distribution<double> exp_;
  std::int64_t next_ps_;
};

enum StreamId : std::uint64_t { kPairs = 0, kSingles = 1, kNoise = 2 };

// Sends a photon that entered the first splitter on towards A or B, or
// reports that it left through the discarded port.
std::optional<Detector> route(std::uint64_t bits) {
  if ((bits & 1U) == 0U) return std::nullopt;
  return (bits & 2U) != 0U ? Detector::A : Detector::B;
}

class WindowTracker {
 public:
  WindowTracker(std::int64_t window_ps, CoincidenceTally& tally)
      : window_ps_(window_ps), tally_(tally) {}

  // Evaluates every window that closes before `now`, then drops clicks no
  // later window can see.
  void close_before(std::int64_t now) {
    while (!pending_.empty() && pending_.front() + window_ps_ < now) {
      evaluate(pending_.front());
      pending_.pop_front();
    }
    const std::int64_t keep_from = pending_.empty() ? now : std::min(now, pending_.front());
    while (!buffer_.empty() && buffer_.front().time_ps < keep_from) buffer_.pop_front();
  }

  void push(const Click& c, bool opens_window) {
    buffer_.push_back(c);
    if (opens_window) pending_.push_back(c.time_ps);
  }

  void flush() {
    while (!pending_.empty()) {
      evaluate(pending_.front());
      pending_.pop_front();
    }
    buffer_.clear();
  }

 private:
  void evaluate(std::int64_t start) {
    const std::int64_t stop = start + window_ps_;
    int n_r = 0;
    int n_a = 0;
    int n_b = 0;
    const Click* at_a = nullptr;
    const Click* at_b = nullptr;
    for (const auto& c : buffer_) {
      if (c.time_ps < start) continue;
      if (c.time_ps > stop) break;
      switch (c.detector) {
        case Detector::R:
          ++n_r;
          break;
        case Detector::A:
          ++n_a;
          at_a = &c;
          break;
        case Detector::B:
          ++n_b;
          at_b = &c;
          break;
      }
    }
    if (n_r != 1 || n_a != 1 || n_b != 1) return;
    TripleKind kind = TripleKind::loss;
    if (at_a->provenance == Provenance::signal) {
      kind = TripleKind::success;
    } else if (at_b->provenance == Provenance::signal) {
      kind = TripleKind::flip;
    }
    tally_.add({start, kind, at_b->passes_ground});
  }

  std::int64_t window_ps_;
  CoincidenceTally& tally_;
  std::deque<Click> buffer_;
  std::deque<std::int64_t> pending_;
};

CoincidenceTally simulate_segment(const RateConfig& config, double duration,
                                  std::int64_t start_ps, std::uint64_t seed,
                                  const ClickSink& sink) {
  CoincidenceTally tally;
  tally.config = config;
  tally.duration = duration;

  const std::int64_t window_ps = std::max<std::int64_t>(1, std::llround(config.window * kPsPerSecond));
  const std::int64_t end_ps = start_ps + std::llround(duration * kPsPerSecond);

  std::array<ArrivalStream, 3> streams{
      ArrivalStream(config.rate_singlet, derive_seed(seed, kPairs), start_ps),
      ArrivalStream(config.rate_singles, derive_seed(seed, kSingles), start_ps),
      ArrivalStream(config.rate_noise, derive_seed(seed, kNoise), start_ps)};

  WindowTracker tracker(window_ps, tally);
  auto emit = [&](const Click& c) {
    const bool in_run = c.time_ps <= end_ps;
    tracker.push(c, in_run && c.detector == Detector::R);
    if (sink && in_run) sink(c);
  };

  while (true) {
    std::size_t which = 0;
    for (std::size_t k = 1; k < streams.size(); ++k) {
      if (streams[k].next() < streams[which].next()) which = k;
    }
    auto& stream = streams[which];
    const std::int64_t t = stream.next();
    if (!stream.active() || t > end_ps + window_ps) break;

    tracker.close_before(t);
    const bool in_run = t <= end_ps;
    switch (which) {
      case kPairs: {
        if (in_run) ++tally.emitted.pairs;
        emit({t, Detector::R, Provenance::signal, false});
        const std::uint64_t bits = stream.rng()();
        if (auto det = route(bits)) {
          // the reduced polarization of the signal photon is maximally mixed
          emit({t, *det, Provenance::signal, (bits & 4U) != 0U});
        }
        break;
      }
      case kSingles:
        if (in_run) ++tally.emitted.singles;
        emit({t, Detector::R, Provenance::single, false});
        break;
      case kNoise: {
        if (in_run) ++tally.emitted.noise;
        const std::uint64_t bits = stream.rng()();
        const bool excited = unit_uniform(stream.rng()) < config.noise_excited;
        if (auto det = route(bits)) emit({t, *det, Provenance::noise, !excited});
        break;
      }
      default:
        break;
    }
    stream.advance();
  }
  tracker.flush();
  return tally;
}

}  // namespace

void RateConfig::validate() const {
  require_nonnegative(rate_singlet, "rate_singlet");
  require_nonnegative(rate_singles, "rate_singles");
  require_nonnegative(rate_noise, "rate_noise");
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw std::invalid_argument("window must be a finite positive number of seconds");
  }
  if (!(noise_excited >= 0.0 && noise_excited <= 1.0)) {
    throw std::invalid_argument("noise_excited must lie in [0, 1]");
  }
}

std::vector<std::string> RateConfig::warnings() const {
  std::vector<std::string> out;
  auto check = [&](double rate, const char* name) {
    const double product = rate * window;
    if (product > 0.1) {
      out.push_back(std::string(name) + " * window = " + std::to_string(product) +
                    " exceeds 0.1; multi-photon windows become frequent");
    }
  };
  check(rate_singlet, "rate_singlet");
  check(rate_singles, "rate_singles");
  check(rate_noise, "rate_noise");
  return out;
}

bool RateConfig::same_channel(const RateConfig& o) const {
  return rate_singlet == o.rate_singlet && rate_singles == o.rate_singles &&
         rate_noise == o.rate_noise && window == o.window;
}

double rate_ratio(const RateConfig& config) {
  if (!(config.rate_singlet > 0.0)) {
    throw std::invalid_argument("rate_singlet must be positive to form the rate ratio");
  }
  return config.rate_noise * config.rate_singles * config.window / config.rate_singlet;
}

double singlet_fraction(const RateConfig& config) {
  if (!(config.rate_singles > 0.0)) {
    throw std::invalid_argument("rate_singles must be positive to form r_Psi");
  }
  return config.rate_singlet / (4.0 * config.rate_singles);
}

ChannelParams params_from_ratio(double ratio) {
  if (!(ratio >= 0.0)) throw std::invalid_argument("rate ratio must be non-negative");
  if (std::isinf(ratio)) return {0.0, 0.0, 1.0};
  const double s = 1.0 / (2.0 + ratio);
  return {s, s, 1.0 - 2.0 * s};
}

double model_loss_success_ratio(const RateConfig& config) {
  return rate_ratio(config) + 0.5 * config.rate_noise * config.window;
}

AccessibleBounds accessible_bounds(double success, double singlet_fraction) {
  if (!(singlet_fraction > 0.0)) throw std::invalid_argument("r_Psi must be positive");
  if (!(success >= 0.0 && success <= 1.0)) throw std::invalid_argument("P_S must lie in [0, 1]");
  const double second = singlet_fraction >= 1.0 ? std::numeric_limits<double>::infinity()
                                                 : (1.0 - success) / (1.0 - singlet_fraction);
  return {success / singlet_fraction, second};
}

const char* to_string(Detector d) {
  switch (d) {
    case Detector::R:
      return "R";
    case Detector::A:
      return "A";
    case Detector::B:
      return "B";
  }
  return "?";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::signal:
      return "signal";
    case Provenance::noise:
      return "noise";
    case Provenance::single:
      return "single";
  }
  return "?";
}

ChannelParams EmpiricalParams::params() const {
  if (n == 0) throw std::invalid_argument("no heralded triples to estimate from");
  return ChannelParams::from_success_loss(success, loss);
}

EmpiricalParams CoincidenceTally::empirical() const {
  return frequencies(n_success, n_flip, n_loss);
}

EmpiricalParams CoincidenceTally::heralded_empirical() const {
  return frequencies(h_success, h_flip, h_loss);
}

std::pair<double, double> CoincidenceTally::photonic_constraint() const {
  const auto n = n_triple();
  if (n == 0) return {0.0, 0.0};
  const double dn = static_cast<double>(n);
  const double mean = (static_cast<double>(n_success) - static_cast<double>(n_flip)) / dn;
  const double second = static_cast<double>(n_success + n_flip) / dn;
  return {mean, std::sqrt(std::max(0.0, second - mean * mean) / dn)};
}

void CoincidenceTally::add(const TripleEvent& e) {
  switch (e.kind) {
    case TripleKind::success:
      ++n_success;
      if (e.heralded) ++h_success;
      break;
    case TripleKind::flip:
      ++n_flip;
      if (e.heralded) ++h_flip;
      break;
    case TripleKind::loss:
      ++n_loss;
      if (e.heralded) ++h_loss;
      break;
  }
  events.push_back(e);
}

CoincidenceTally merge(const CoincidenceTally& a, const CoincidenceTally& b) {
  CoincidenceTally out;
  out.config = a.config;
  out.duration = a.duration + b.duration;
  out.emitted = {a.emitted.pairs + b.emitted.pairs, a.emitted.singles + b.emitted.singles,
                 a.emitted.noise + b.emitted.noise};
  out.events.reserve(a.events.size() + b.events.size());
  std::merge(a.events.begin(), a.events.end(), b.events.begin(), b.events.end(),
             std::back_inserter(out.events),
             [](const TripleEvent& x, const TripleEvent& y) { return x.time_ps < y.time_ps; });
  auto events = std::move(out.events);
  out.events.clear();
  out.events.reserve(events.size());
  for (const auto& e : events) out.add(e);
  return out;
}

CoincidenceTally simulate_streams(const RateConfig& config, double duration,
                                  std::uint64_t seed, const ClickSink& sink) {
  config.validate();
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be a finite positive number of seconds");
  }
  return simulate_segment(config, duration, 0, seed, sink);
}

CoincidenceTally simulate_sharded(const RateConfig& config, double duration,
                                  std::uint64_t seed, unsigned shards, unsigned workers) {
  config.validate();
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be a finite positive number of seconds");
  }
  shards = std::max(1U, shards);
  const double segment = duration / shards;
  std::vector<CoincidenceTally> parts(shards);
  detail::parallel_for(shards, workers, [&](std::size_t k) {
    const auto start = std::llround(static_cast<double>(k) * segment * kPsPerSecond);
    parts[k] = simulate_segment(config, segment, start, derive_seed(seed, 1000 + k), {});
  });
  CoincidenceTally out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out = merge(out, parts[k]);
  return out;
}

CoincidenceTally mix_detections(const CoincidenceTally& ground, const CoincidenceTally& excited,
                                double p_t, std::uint64_t seed) {
  if (!(p_t >= 0.0 && p_t <= 1.0)) throw std::invalid_argument("p_T must lie in [0, 1]");
  if (!ground.config.same_channel(excited.config) || ground.duration != excited.duration) {
    throw std::invalid_argument("tallies to mix must share rates, window and duration");
  }
  if (ground.config.noise_excited != 0.0 || excited.config.noise_excited != 1.0) {
    throw std::invalid_argument(
        "mixing expects one ground-polarized and one excited-polarized noise record");
  }
  Rng rng(seed);
  CoincidenceTally kept_ground;
  CoincidenceTally kept_excited;
  for (const auto& e : ground.events) {
    if (unit_uniform(rng) < 1.0 - p_t) kept_ground.add(e);
  }
  for (const auto& e : excited.events) {
    if (unit_uniform(rng) < p_t) kept_excited.add(e);
  }
  CoincidenceTally out = merge(kept_ground, kept_excited);
  out.config = ground.config;
  out.config.noise_excited = p_t;
  out.duration = ground.duration;
  return out;
}

DensityMatrix heralded_state_estimate(const CoincidenceTally& tally, const EnvironmentSpec& spec) {
  if (tally.n_triple() == 0) throw std::invalid_argument("empty coincidence tally");
  return conditional_state(tally.empirical().params(), spec).state;
}

}  // namespace qcool
