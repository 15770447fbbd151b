#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "tbsc/gf2.hpp"

namespace tbsc {

/// Packet time index. Streams start at t = 0.
using Time = std::int64_t;
using Rational = boost::rational<std::int64_t>;

/// "num/den", always with an explicit denominator.
std::string format_rational(const Rational& r);
Rational parse_rational(std::string_view text);

/// A systematic (b, T') point-to-point streaming code over GF(2).
///
/// Packet t carries X[t] = (S[t], P[t]) with P[t] = sum_{i=0}^{T'} S[t-i] P_i,
/// where every P_i is k x w and S[t] = 0 for t < 0. `horizon` is T'.
class StreamCodeSpec {
 public:
  /// `parity` must hold exactly horizon + 1 matrices of shape k x w.
  StreamCodeSpec(int b, int horizon, int k, int w, std::vector<BinMatrix> parity);

  int b() const { return b_; }
  int horizon() const { return horizon_; }
  int k() const { return k_; }
  int w() const { return w_; }
  int n() const { return k_ + w_; }
  Rational rate() const { return {k_, k_ + w_}; }

  /// P_i, or the zero matrix when i lies outside [0, horizon].
  const BinMatrix& parity(std::int64_t i) const;
  const std::vector<BinMatrix>& parity_family() const { return parity_; }
  std::vector<int> nonzero_parity_indices() const;

  /// Copy of this code with P_i replaced; used to build negative controls.
  StreamCodeSpec with_parity(int i, BinMatrix m) const;

  friend bool operator==(const StreamCodeSpec&, const StreamCodeSpec&) = default;

 private:
  int b_;
  int horizon_;
  int k_;
  int w_;
  std::vector<BinMatrix> parity_;
  BinMatrix zero_;
};

/// Worst-case recovery delay of each message coordinate, coordinate 1 first.
struct DelayProfile {
  std::vector<int> delays;

  std::size_t size() const { return delays.size(); }
  int operator[](std::size_t coord) const { return delays.at(coord - 1); }  // 1-based
  int max() const;
  /// Comma-separated, e.g. "2,2,2,4,4".
  std::string to_string() const;

  friend bool operator==(const DelayProfile&, const DelayProfile&) = default;
};

/// A set of erased packet times for a channel that allows bursts of length
/// at most `b` with consecutive bursts spaced by at least `window` (T' + 1).
struct ErasureSchedule {
  std::vector<Time> erased;  // sorted, unique, non-negative
  int b = 1;
  int window = 2;

  ErasureSchedule() = default;
  ErasureSchedule(std::vector<Time> erased_times, int max_burst, int window_size);

  bool contains(Time t) const;
  /// Maximal runs of consecutive erased times as [first, last] pairs.
  std::vector<std::pair<Time, Time>> runs() const;

  friend bool operator==(const ErasureSchedule&, const ErasureSchedule&) = default;
};

/// Every maximal run has length <= b and for consecutive runs r, r'
/// start(r') - end(r) >= window.
bool is_admissible(const ErasureSchedule& sched);

/// Single burst of `length` packets starting at `start`.
ErasureSchedule burst_schedule(Time start, int length, int b, int window);

struct Packet {
  BitVector message;
  BitVector parity;
  friend bool operator==(const Packet&, const Packet&) = default;
};

using Received = std::optional<Packet>;

/// n uniformly random bits drawn from raw engine output (portable across
/// standard libraries, unlike the <random> distributions).
BitVector random_bits(std::size_t n, std::mt19937_64& rng);

/// "t | message-bits | parity-bits" or "t | ERASED".
std::string format_trace_line(Time t, const Received& packet);
std::pair<Time, Received> parse_trace_line(std::string_view line);

class Encoder {
 public:
  explicit Encoder(StreamCodeSpec spec);

  /// Encodes S[t] for t = time(); messages must be supplied in time order.
  Packet encode(const BitVector& message);
  Time time() const { return next_; }
  const StreamCodeSpec& spec() const { return spec_; }

 private:
  StreamCodeSpec spec_;
  std::vector<int> active_;        // indices of nonzero P_i
  std::deque<BitVector> history_;  // history_[i] == S[t - i]
  Time next_ = 0;
};

struct RecoveredSymbol {
  Time time;  // source packet time
  int coord;  // 1-based message coordinate
  bool value;
  Time recovered_at;

  int delay() const { return static_cast<int>(recovered_at - time); }
  friend bool operator==(const RecoveredSymbol&, const RecoveredSymbol&) = default;
};

/// Online decoder for a StreamCodeSpec.
///
/// Each erased message symbol becomes an unknown of an IncrementalSolver.
/// Every received parity packet contributes w equations over the unknowns it
/// touches, with the contribution of already known symbols folded into the
/// right-hand side. A symbol is stamped with the time of the packet whose
/// processing pinned it. Pinned unknowns are retired from the solver at once.
class Decoder {
 public:
  explicit Decoder(StreamCodeSpec spec);

  /// Processes Y[t] for t = time(). Returns symbols first known at t.
  /// Throws DecodeError if the received parity contradicts the known symbols.
  std::vector<RecoveredSymbol> step(const Received& y);

  Time time() const { return next_; }
  /// Erased symbols not yet recovered, as (time, coord).
  std::vector<std::pair<Time, int>> unresolved() const;
  const StreamCodeSpec& spec() const { return spec_; }

 private:
  struct Slot {
    BitVector known;
    BitVector value;
    std::vector<std::size_t> var;  // solver index of each unknown coordinate
  };

  StreamCodeSpec spec_;
  // parity_cols_[i][c] = column c of P_i as a k-bit mask.
  std::vector<std::vector<BitVector>> parity_cols_;
  std::deque<Slot> window_;  // window_[i] is the slot for time next_ - 1 - i
  IncrementalSolver solver_;
  std::vector<std::pair<Time, int>> owner_;  // solver var -> (time, coord)
  Time next_ = 0;
};

/// Measures the delay profile by decoding a worst-case burst of length b
/// after a clean history. Shorter bursts 1..b-1 are decoded as well and must
/// not exceed the full-burst profile.
/// Throws ConstructionInvalid if a symbol misses the horizon.
DelayProfile measure_delay_profile(const StreamCodeSpec& spec);

/// Decodes a pseudo-random stream of `length` packets erased per `sched` and
/// checks every recovered value against the data (DecodeError on mismatch).
/// Returns the recovered erased symbols. Erased symbols still unknown after
/// the last packet go to `missing` when it is non-null.
std::vector<RecoveredSymbol> decode_with_schedule(const StreamCodeSpec& spec,
                                                  const ErasureSchedule& sched, Time length,
                                                  std::uint64_t seed,
                                                  std::vector<std::pair<Time, int>>* missing);

}  // namespace tbsc
