#include "tbsc/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>

#include "tbsc/detail/parallel.hpp"
#include "tbsc/errors.hpp"

namespace tbsc {

BinMatrix recovery_matrix(const StreamCodeSpec& spec) {
  const auto b = static_cast<std::size_t>(spec.b());
  const auto k = static_cast<std::size_t>(spec.k());
  const auto w = static_cast<std::size_t>(spec.w());
  const auto h = static_cast<std::size_t>(spec.horizon());
  BinMatrix m(b * k, h * w);
  for (std::size_t r = 1; r <= b; ++r) {
    for (std::size_t c = 1; c <= h; ++c) {
      const auto idx = static_cast<std::int64_t>(b) - static_cast<std::int64_t>(r) +
                       static_cast<std::int64_t>(c);
      m.set_block((r - 1) * k + 1, (c - 1) * w + 1, spec.parity(idx));
    }
  }
  return m;
}

DelayProfile oracle_recovery_times(const StreamCodeSpec& spec) {
  const auto b = static_cast<std::size_t>(spec.b());
  const auto k = static_cast<std::size_t>(spec.k());
  const auto w = static_cast<std::size_t>(spec.w());
  const auto h = static_cast<std::size_t>(spec.horizon());
  const auto unknowns = b * k;

  // Column j of the recovery matrix is the equation contributed by one
  // parity symbol; as a row it lives in the space of erased symbols.
  const BinMatrix eqs = transpose(recovery_matrix(spec));

  std::vector<std::optional<std::size_t>> pinned_at(unknowns);
  std::vector<BitVector> prefix;
  for (std::size_t c = 1; c <= h; ++c) {
    for (std::size_t col = (c - 1) * w + 1; col <= c * w; ++col) prefix.push_back(eqs.row(col));
    const auto base = rank(prefix);
    for (std::size_t x = 0; x < unknowns; ++x) {
      if (pinned_at[x]) continue;
      auto augmented = prefix;
      BitVector unit(unknowns);
      unit.set(x);
      augmented.push_back(std::move(unit));
      if (rank(std::move(augmented)) == base) pinned_at[x] = c;
    }
  }

  DelayProfile out{std::vector<int>(k, 0)};
  for (std::size_t r = 1; r <= b; ++r) {
    for (std::size_t j = 1; j <= k; ++j) {
      const auto& c = pinned_at[(r - 1) * k + (j - 1)];
      if (!c) {
        throw ConstructionInvalid("S_" + std::to_string(j) + "[t+" + std::to_string(r - 1) +
                                  "] is not determined by the recovery matrix; not a valid (" +
                                  std::to_string(b) + "," + std::to_string(h) + ") code");
      }
      const int delay = static_cast<int>(b + *c) - static_cast<int>(r);
      out.delays[j - 1] = std::max(out.delays[j - 1], delay);
    }
  }
  return out;
}

namespace {

void check_schedule_params(int b, int window, Time horizon) {
  if (b < 1 || window < 2 || horizon < 0) {
    throw InvalidParameters("schedule enumeration needs b >= 1, window >= 2, horizon >= 0");
  }
}

// counts[i] = number of admissible sets over [i, horizon) when a run may
// start at i; counts[i] = 1 for i >= horizon.
std::vector<double> suffix_counts(int b, int window, Time horizon) {
  const auto n = static_cast<std::size_t>(horizon);
  std::vector<double> counts(n + 1, 1.0);
  auto at = [&](Time i) { return i >= horizon ? 1.0 : counts[static_cast<std::size_t>(i)]; };
  for (Time i = horizon - 1; i >= 0; --i) {
    double total = at(i + 1);
    for (int len = 1; len <= b && i + len <= horizon; ++len) total += at(i + len - 1 + window);
    counts[static_cast<std::size_t>(i)] = total;
  }
  return counts;
}

bool colex_less(const ErasureSchedule& a, const ErasureSchedule& b) {
  return std::lexicographical_compare(a.erased.rbegin(), a.erased.rend(), b.erased.rbegin(),
                                      b.erased.rend());
}

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double count_schedules(int b, int window, Time horizon) {
  check_schedule_params(b, window, horizon);
  return suffix_counts(b, window, horizon).front();
}

std::vector<ErasureSchedule> enumerate_schedules(int b, int window, Time horizon) {
  const double count = count_schedules(b, window, horizon);
  if (count > kEnumerationGuard) {
    throw TooLarge(std::to_string(static_cast<long long>(count)) +
                   " admissible schedules exceed the enumeration guard; use randomized mode");
  }
  std::vector<ErasureSchedule> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<Time> current;
  std::function<void(Time)> walk = [&](Time i) {
    if (i >= horizon) {
      out.emplace_back(current, b, window);
      return;
    }
    walk(i + 1);
    for (int len = 1; len <= b && i + len <= horizon; ++len) {
      for (int d = 0; d < len; ++d) current.push_back(i + d);
      walk(i + len - 1 + window);
      current.resize(current.size() - static_cast<std::size_t>(len));
    }
  };
  walk(0);
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

ErasureSchedule sample_schedule(int b, int window, Time horizon, std::mt19937_64& rng) {
  check_schedule_params(b, window, horizon);
  const auto counts = suffix_counts(b, window, horizon);
  auto at = [&](Time i) { return i >= horizon ? 1.0 : counts[static_cast<std::size_t>(i)]; };
  std::vector<Time> erased;
  Time i = 0;
  while (i < horizon) {
    double u = unit_interval(rng) * at(i);
    if (u < at(i + 1)) {
      ++i;
      continue;
    }
    u -= at(i + 1);
    int len = 1;
    const int max_len = static_cast<int>(std::min<Time>(b, horizon - i));
    while (len < max_len && u >= at(i + len - 1 + window)) {
      u -= at(i + len - 1 + window);
      ++len;
    }
    for (int d = 0; d < len; ++d) erased.push_back(i + d);
    i += len - 1 + window;
  }
  return {std::move(erased), b, window};
}

std::string to_string(VerifyMode mode) {
  return mode == VerifyMode::kExhaustive ? "exhaustive" : "randomized";
}

namespace {

std::vector<BitVector> random_source(const RelayNetworkSpec& spec, Time horizon,
                                     std::mt19937_64& rng) {
  std::vector<BitVector> source;
  source.reserve(static_cast<std::size_t>(horizon));
  for (Time t = 0; t < horizon; ++t) {
    source.push_back(random_bits(static_cast<std::size_t>(spec.k()), rng));
  }
  return source;
}

// Removes erased times one at a time while the pair keeps failing.
FailureCase shrink(const RelayNetworkSpec& spec, FailureCase failing,
                   const std::vector<BitVector>& source) {
  auto fails = [&](const ErasureSchedule& sr, const ErasureSchedule& rd) {
    auto rep = simulate_network(spec, sr, rd, source);
    return rep.success ? std::optional<std::string>{} : std::optional<std::string>{rep.failure};
  };
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto* hop : {&failing.sr, &failing.rd}) {
      for (std::size_t i = 0; i < hop->erased.size(); ++i) {
        ErasureSchedule candidate = *hop;
        candidate.erased.erase(candidate.erased.begin() + static_cast<std::ptrdiff_t>(i));
        const auto& sr = hop == &failing.sr ? candidate : failing.sr;
        const auto& rd = hop == &failing.rd ? candidate : failing.rd;
        if (auto reason = fails(sr, rd)) {
          *hop = candidate;
          failing.reason = *reason;
          progress = true;
          break;
        }
      }
    }
  }
  return failing;
}

}  // namespace

VerificationReport verify_tbsc(const RelayNetworkSpec& spec, const VerifyOptions& options) {
  VerificationReport rep;
  rep.b1 = spec.b1();
  rep.b2 = spec.b2();
  rep.T = spec.T();
  rep.mode = options.mode;
  rep.seed = options.seed;
  rep.budget = options.mode == VerifyMode::kRandomized ? options.budget : 0;
  rep.horizon = options.horizon > 0 ? options.horizon
                : options.mode == VerifyMode::kExhaustive ? 2 * (Time{spec.T()} + 1)
                                                           : default_simulation_horizon(spec);

  const int sr_b = spec.sr().b();
  const int sr_window = spec.sr().horizon() + 1;
  const int rd_b = spec.rd().b();
  const int rd_window = spec.rd().horizon() + 1;

  std::mt19937_64 rng(options.seed);
  const auto source = random_source(spec, rep.horizon, rng);

  // Pairs are addressed by index; `pair_at` must be safe to call concurrently.
  std::size_t total = 0;
  std::function<std::pair<ErasureSchedule, ErasureSchedule>(std::size_t)> pair_at;
  std::vector<ErasureSchedule> sr_list;
  std::vector<ErasureSchedule> rd_list;
  if (options.mode == VerifyMode::kExhaustive) {
    const double pairs = count_schedules(sr_b, sr_window, rep.horizon) *
                         count_schedules(rd_b, rd_window, rep.horizon);
    if (pairs > static_cast<double>(options.max_pairs)) {
      throw TooLarge(std::to_string(static_cast<long long>(pairs)) +
                     " schedule pairs exceed the exhaustive limit; lower --horizon or use "
                     "randomized mode");
    }
    sr_list = enumerate_schedules(sr_b, sr_window, rep.horizon);
    rd_list = enumerate_schedules(rd_b, rd_window, rep.horizon);
    total = sr_list.size() * rd_list.size();
    pair_at = [&](std::size_t i) {
      return std::make_pair(sr_list[i / rd_list.size()], rd_list[i % rd_list.size()]);
    };
  } else {
    for (std::size_t i = 0; i < options.budget; ++i) {
      sr_list.push_back(sample_schedule(sr_b, sr_window, rep.horizon, rng));
      rd_list.push_back(sample_schedule(rd_b, rd_window, rep.horizon, rng));
    }
    total = options.budget;
    pair_at = [&](std::size_t i) { return std::make_pair(sr_list[i], rd_list[i]); };
  }

  std::atomic<std::size_t> first_failure{total};
  std::mutex merge_mutex;
  std::atomic<std::size_t> checked{0};
  std::vector<int> worst(static_cast<std::size_t>(spec.k()), 0);
  std::optional<FailureCase> failure;

  detail::parallel_for(total, [&](std::size_t i) {
    if (i > first_failure.load()) return;
    auto [sr, rd] = pair_at(i);
    auto sim = simulate_network(spec, sr, rd, source);
    ++checked;
    std::lock_guard lock(merge_mutex);
    if (!sim.success) {
      if (i < first_failure.load()) {
        first_failure = i;
        failure = FailureCase{std::move(sr), std::move(rd), sim.failure};
      }
      return;
    }
    for (std::size_t j = 0; j < worst.size(); ++j) {
      worst[j] = std::max(worst[j], sim.max_delay.delays[j]);
    }
  });

  rep.pairs_checked = checked.load();
  rep.max_delay.delays = std::move(worst);
  if (failure) rep.failure = shrink(spec, std::move(*failure), source);
  rep.pass = !rep.failure && rep.max_delay.max() <= spec.T();
  return rep;
}

}  // namespace tbsc
