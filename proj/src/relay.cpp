#include "tbsc/relay.hpp"

#include <algorithm>
#include <random>

#include "tbsc/errors.hpp"

namespace tbsc {

RelayNetworkSpec::RelayNetworkSpec(int b1, int b2, int T, StreamCodeSpec sr, StreamCodeSpec rd,
                                   DelayProfile d_sr, DelayProfile d_rd)
    : b1_(b1),
      b2_(b2),
      T_(T),
      sr_(std::move(sr)),
      rd_(std::move(rd)),
      d_sr_(std::move(d_sr)),
      d_rd_(std::move(d_rd)) {
  if (sr_.b() != b1_ || rd_.b() != b2_) {
    throw InvalidParameters("hop codes must correct bursts of b1 (SR) and b2 (RD)");
  }
  if (sr_.k() != rd_.k() || sr_.w() != rd_.w()) {
    throw InvalidParameters("SR and RD codes must share k and n");
  }
  const auto k = static_cast<std::size_t>(sr_.k());
  if (d_sr_.size() != k || d_rd_.size() != k) {
    throw InvalidParameters("delay tables must have k entries");
  }
  if (d_sr_.max() > sr_.horizon()) {
    throw InvalidParameters("SR delay table exceeds the SR code horizon");
  }
  for (std::size_t i = 1; i <= k; ++i) {
    if (d_sr_[k + 1 - i] + d_rd_[i] > T_) {
      throw InvalidParameters("relay lag " + std::to_string(d_sr_[k + 1 - i]) +
                              " plus RD delay " + std::to_string(d_rd_[i]) + " of coordinate " +
                              std::to_string(i) + " exceeds T=" + std::to_string(T_));
    }
  }
}

int RelayNetworkSpec::lag(int i) const {
  if (i < 1 || i > k()) throw std::out_of_range("relay coordinate outside [k]");
  return d_sr_[static_cast<std::size_t>(k() + 1 - i)];
}

DelayProfile RelayNetworkSpec::predicted_end_to_end() const {
  DelayProfile out;
  const auto k = static_cast<std::size_t>(this->k());
  for (std::size_t j = 1; j <= k; ++j) out.delays.push_back(d_sr_[j] + d_rd_[k + 1 - j]);
  return out;
}

RelayNetworkSpec RelayNetworkSpec::with_sr(StreamCodeSpec sr) const {
  return {b1_, b2_, T_, std::move(sr), rd_, d_sr_, d_rd_};
}

int relay_lag(int i, int k, int b2) {
  if (i < 1 || i > k || b2 < 1) throw InvalidParameters("relay_lag needs 1 <= i <= k, b2 >= 1");
  return (k + 1 - i + b2 - 1) / b2;
}

Relay::Relay(const RelayNetworkSpec& spec) : k_(spec.k()), decoder_(spec.sr()) {
  for (int i = 1; i <= k_; ++i) lags_.push_back(spec.lag(i));
}

Relay::Output Relay::step(const Received& y) {
  const Time t = decoder_.time();
  const auto k = static_cast<std::size_t>(k_);
  Output out;
  out.decoded = decoder_.step(y);
  decoded_.push_front({BitVector(k), BitVector(k)});
  const auto keep = static_cast<std::size_t>(*std::max_element(lags_.begin(), lags_.end())) + 1;
  if (decoded_.size() > keep) decoded_.pop_back();
  for (const auto& s : out.decoded) {
    const auto age = static_cast<std::size_t>(t - s.time);
    if (age >= decoded_.size()) continue;
    decoded_[age].known[static_cast<std::size_t>(s.coord) - 1] = true;
    decoded_[age].value[static_cast<std::size_t>(s.coord) - 1] = s.value;
  }
  out.r = emit(t);
  return out;
}

const Relay::Slot* Relay::slot(Time t) const {
  const Time age = decoder_.time() - 1 - t;
  if (age < 0 || static_cast<std::size_t>(age) >= decoded_.size()) return nullptr;
  return &decoded_[static_cast<std::size_t>(age)];
}

BitVector Relay::emit(Time t) const {
  BitVector r(static_cast<std::size_t>(k_));
  for (int i = 1; i <= k_; ++i) {
    const Time u = t - lags_[static_cast<std::size_t>(i) - 1];
    if (u < 0) continue;
    const auto j = static_cast<std::size_t>(k_ + 1 - i) - 1;
    const Slot* s = slot(u);
    if (s == nullptr || !s->known[j]) {
      throw RelayCausalityError("R_" + std::to_string(i) + "[" + std::to_string(t) +
                                "] needs S_" + std::to_string(j + 1) + "[" + std::to_string(u) +
                                "], not decoded by the relay");
    }
    r[static_cast<std::size_t>(i) - 1] = s->value[j];
  }
  return r;
}

Time default_simulation_horizon(const RelayNetworkSpec& spec) { return 4 * (spec.T() + 1); }

ErasureSchedule sr_schedule(const RelayNetworkSpec& spec, std::vector<Time> erased) {
  return {std::move(erased), spec.sr().b(), spec.sr().horizon() + 1};
}

ErasureSchedule rd_schedule(const RelayNetworkSpec& spec, std::vector<Time> erased) {
  return {std::move(erased), spec.rd().b(), spec.rd().horizon() + 1};
}

namespace {

std::string describe(const char* hop, const ErasureSchedule& s) {
  std::string out = std::string(hop) + " {";
  for (std::size_t i = 0; i < s.erased.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s.erased[i]);
  }
  return out + "}";
}

}  // namespace

SimulationReport simulate_network(const RelayNetworkSpec& spec, const ErasureSchedule& sr_sched,
                                  const ErasureSchedule& rd_sched,
                                  const std::vector<BitVector>& source, bool trace) {
  if (!is_admissible(sr_schedule(spec, sr_sched.erased))) {
    throw InvalidParameters("SR schedule " + describe("", sr_sched) +
                            " is not admissible for the SR channel");
  }
  if (!is_admissible(rd_schedule(spec, rd_sched.erased))) {
    throw InvalidParameters("RD schedule " + describe("", rd_sched) +
                            " is not admissible for the RD channel");
  }
  const auto k = static_cast<std::size_t>(spec.k());
  const Time horizon = static_cast<Time>(source.size());
  for (const auto& s : source) {
    if (s.size() != k) throw DimensionError("source packets must have k bits");
  }

  SimulationReport rep;
  rep.horizon = horizon;
  rep.sr_schedule = sr_sched;
  rep.rd_schedule = rd_sched;
  rep.relay_recovery.assign(source.size(), std::vector<std::optional<Time>>(k));
  rep.destination_recovery.assign(source.size(), std::vector<std::optional<Time>>(k));

  Encoder sr_enc(spec.sr());
  Encoder rd_enc(spec.rd());
  Relay relay(spec);
  Decoder dest(spec.rd());

  try {
    for (Time t = 0; t < horizon; ++t) {
      Received y = sr_enc.encode(source[static_cast<std::size_t>(t)]);
      if (trace) rep.trace.push_back("X " + format_trace_line(t, y));
      if (sr_sched.contains(t)) y.reset();
      if (trace) rep.trace.push_back("Y " + format_trace_line(t, y));

      auto relayed = relay.step(y);
      for (const auto& s : relayed.decoded) {
        const auto coord = static_cast<std::size_t>(s.coord) - 1;
        rep.relay_recovery[static_cast<std::size_t>(s.time)][coord] = s.recovered_at;
      }
      if (trace) rep.trace.push_back("R " + std::to_string(t) + " | " + bits_to_string(relayed.r));

      Received z = rd_enc.encode(relayed.r);
      if (trace) rep.trace.push_back("Z " + format_trace_line(t, z));
      if (rd_sched.contains(t)) z.reset();

      std::string delivered;
      for (const auto& s : dest.step(z)) {
        const int j = spec.k() + 1 - s.coord;
        const Time src = s.time - spec.lag(s.coord);
        if (src < 0) {
          if (s.value) throw DecodeError("destination recovered a nonzero pre-stream symbol");
          continue;
        }
        const auto uj = static_cast<std::size_t>(j) - 1;
        if (s.value != source[static_cast<std::size_t>(src)][uj]) {
          throw DecodeError("destination recovered a wrong value for S_" + std::to_string(j) +
                            "[" + std::to_string(src) + "]");
        }
        rep.destination_recovery[static_cast<std::size_t>(src)][uj] = s.recovered_at;
        if (trace) {
          delivered += " S" + std::to_string(j) + "[" + std::to_string(src) +
                       "]=" + (s.value ? "1" : "0");
        }
      }
      if (trace) rep.trace.push_back("D " + std::to_string(t) + " |" + delivered);
    }
  } catch (const RelayCausalityError& e) {
    rep.failure = e.what();
  } catch (const DecodeError& e) {
    rep.failure = e.what();
  }

  rep.accounted = std::max<Time>(0, horizon - spec.T());
  rep.max_delay.delays.assign(k, 0);
  for (Time s = 0; s < rep.accounted && rep.failure.empty(); ++s) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& when = rep.destination_recovery[static_cast<std::size_t>(s)][j];
      if (!when || *when - s > spec.T()) {
        rep.failure = "S_" + std::to_string(j + 1) + "[" + std::to_string(s) +
                      "] missed its deadline at the destination";
        break;
      }
      rep.max_delay.delays[j] = std::max(rep.max_delay.delays[j], static_cast<int>(*when - s));
    }
  }
  rep.success = rep.failure.empty();
  return rep;
}

SimulationReport simulate_network(const RelayNetworkSpec& spec, const ErasureSchedule& sr_sched,
                                  const ErasureSchedule& rd_sched, Time horizon,
                                  std::uint64_t seed, bool trace) {
  if (horizon <= 0) horizon = default_simulation_horizon(spec);
  std::mt19937_64 rng(seed);
  std::vector<BitVector> source;
  source.reserve(static_cast<std::size_t>(horizon));
  for (Time t = 0; t < horizon; ++t) {
    source.push_back(random_bits(static_cast<std::size_t>(spec.k()), rng));
  }
  return simulate_network(spec, sr_sched, rd_sched, source, trace);
}

DelayProfile worst_case_delays(const RelayNetworkSpec& spec, Time horizon) {
  if (horizon <= 0) horizon = default_simulation_horizon(spec);
  const Time T = spec.T();
  std::mt19937_64 rng(0x7b5c);
  std::vector<BitVector> source;
  for (Time t = 0; t < horizon; ++t) {
    source.push_back(random_bits(static_cast<std::size_t>(spec.k()), rng));
  }

  // -1 stands for "no burst on this hop".
  DelayProfile worst{std::vector<int>(static_cast<std::size_t>(spec.k()), 0)};
  for (Time sr_start = -1; sr_start <= T && sr_start + spec.b1() <= horizon; ++sr_start) {
    auto sr = sr_start < 0 ? sr_schedule(spec, {})
                           : burst_schedule(sr_start, spec.b1(), spec.sr().b(),
                                            spec.sr().horizon() + 1);
    for (Time rd_start = -1; rd_start <= 2 * T + 1 && rd_start + spec.b2() <= horizon;
         ++rd_start) {
      auto rd = rd_start < 0 ? rd_schedule(spec, {})
                             : burst_schedule(rd_start, spec.b2(), spec.rd().b(),
                                              spec.rd().horizon() + 1);
      auto rep = simulate_network(spec, sr, rd, source);
      if (!rep.success) {
        throw ConstructionInvalid(rep.failure + " (" + describe("SR", sr) + ", " +
                                  describe("RD", rd) + ")");
      }
      for (std::size_t j = 0; j < worst.delays.size(); ++j) {
        worst.delays[j] = std::max(worst.delays[j], rep.max_delay.delays[j]);
      }
    }
  }
  return worst;
}

}  // namespace tbsc
