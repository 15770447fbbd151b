#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "tbsc/streaming_code.hpp"

namespace tbsc {

/// A (b1, b2, T) three-node code: SR code, RD code and the relay schedule.
///
/// The relay forwards R_i[t] = S_{k+1-i}[t - lag(i)] with
/// lag(i) = d_sr[k+1-i], so a source symbol S_j[t] reaches the destination
/// after d_sr[j] + (RD delay of coordinate k+1-j).
class RelayNetworkSpec {
 public:
  RelayNetworkSpec(int b1, int b2, int T, StreamCodeSpec sr, StreamCodeSpec rd,
                   DelayProfile d_sr, DelayProfile d_rd);

  int b1() const { return b1_; }
  int b2() const { return b2_; }
  int T() const { return T_; }
  int k() const { return sr_.k(); }
  const StreamCodeSpec& sr() const { return sr_; }
  const StreamCodeSpec& rd() const { return rd_; }
  /// Delay table of the SR code; drives the relay schedule.
  const DelayProfile& d_sr() const { return d_sr_; }
  /// Delay profile the RD code is expected to meet.
  const DelayProfile& d_rd() const { return d_rd_; }

  /// Lag (in packets) of RD input coordinate i in [k].
  int lag(int i) const;
  int max_lag() const { return d_sr_.max(); }
  /// Expected end-to-end delay of source coordinate j: d_sr[j] + d_rd[k+1-j].
  DelayProfile predicted_end_to_end() const;

  /// Copy with a different SR code, keeping every table; for negative controls.
  RelayNetworkSpec with_sr(StreamCodeSpec sr) const;

  friend bool operator==(const RelayNetworkSpec&, const RelayNetworkSpec&) = default;

 private:
  int b1_;
  int b2_;
  int T_;
  StreamCodeSpec sr_;
  StreamCodeSpec rd_;
  DelayProfile d_sr_;
  DelayProfile d_rd_;
};

/// l_i = ceil((k+1-i)/b2), the per-coordinate lag multiplier of the
/// reversed-coordinate relay map.
int relay_lag(int i, int k, int b2);

/// Decode-and-forward relay: decodes the SR stream and emits R[t].
class Relay {
 public:
  explicit Relay(const RelayNetworkSpec& spec);

  struct Output {
    BitVector r;                            // R[t]
    std::vector<RecoveredSymbol> decoded;  // SR symbols first known at t
  };

  /// Feeds Y[t] for t = time() and emits R[t].
  Output step(const Received& y);
  /// R[t] from the symbols decoded so far. Throws RelayCausalityError if a
  /// referenced source symbol is not decoded yet.
  BitVector emit(Time t) const;
  Time time() const { return decoder_.time(); }

 private:
  struct Slot {
    BitVector known;
    BitVector value;
  };

  const Slot* slot(Time t) const;

  int k_;
  std::vector<int> lags_;  // lags_[i-1] = lag(i)
  Decoder decoder_;
  std::deque<Slot> decoded_;  // decoded_[i] holds S[time() - 1 - i]
};

struct SimulationReport {
  Time horizon = 0;
  ErasureSchedule sr_schedule;
  ErasureSchedule rd_schedule;
  // [source time][coord - 1]; nullopt if never recovered.
  std::vector<std::vector<std::optional<Time>>> relay_recovery;
  std::vector<std::vector<std::optional<Time>>> destination_recovery;
  // Source times s < accounted have their whole deadline window s..s+T
  // inside the simulation; only those enter max_delay and success.
  Time accounted = 0;
  DelayProfile max_delay;
  bool success = false;
  std::string failure;  // empty on success
  std::vector<std::string> trace;
};

/// 4 (T + 1) packets.
Time default_simulation_horizon(const RelayNetworkSpec& spec);

/// Runs source -> SR channel -> relay -> RD channel -> destination for
/// source.size() packets. Schedules must be admissible for their hop;
/// inadmissible ones throw InvalidParameters before anything runs.
/// Decoding failures are reported, not thrown.
SimulationReport simulate_network(const RelayNetworkSpec& spec, const ErasureSchedule& sr_sched,
                                  const ErasureSchedule& rd_sched,
                                  const std::vector<BitVector>& source, bool trace = false);

/// Same, with a pseudo-random source stream of `horizon` packets
/// (default_simulation_horizon when horizon <= 0).
SimulationReport simulate_network(const RelayNetworkSpec& spec, const ErasureSchedule& sr_sched,
                                  const ErasureSchedule& rd_sched, Time horizon,
                                  std::uint64_t seed, bool trace = false);

/// Hop schedules carry the burst limit and window of their code.
ErasureSchedule sr_schedule(const RelayNetworkSpec& spec, std::vector<Time> erased);
ErasureSchedule rd_schedule(const RelayNetworkSpec& spec, std::vector<Time> erased);

/// Per-coordinate maximum destination delay over every pair of single
/// full-length bursts (or no burst) on the two hops. Throws
/// ConstructionInvalid on any failure or delay above T.
DelayProfile worst_case_delays(const RelayNetworkSpec& spec, Time horizon = 0);

}  // namespace tbsc
