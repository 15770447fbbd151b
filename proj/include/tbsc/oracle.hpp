#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tbsc/gf2.hpp"
#include "tbsc/relay.hpp"
#include "tbsc/streaming_code.hpp"

namespace tbsc {

/// Matrix relating a worst-case burst S[t..t+b-1] (rows, b*k) to the parity
/// packets P[t+b..t+b+horizon-1] received after it (columns, horizon*w).
/// Block (r, c) is P_{b-r+c}.
BinMatrix recovery_matrix(const StreamCodeSpec& spec);

/// Delay profile computed from recovery_matrix alone: symbol x is pinned by
/// the first c block columns when appending e_x to those columns (viewed as
/// equations) does not raise their rank. Row r pinned at prefix c has delay
/// b + c - r. Throws ConstructionInvalid if some symbol is never pinned.
DelayProfile oracle_recovery_times(const StreamCodeSpec& spec);

inline constexpr double kEnumerationGuard = 1e6;

/// Number of admissible erased sets over [0, horizon).
double count_schedules(int b, int window, Time horizon);

/// Every admissible erased set over [0, horizon), ordered by the numeric
/// value of its characteristic bitmask (bit i <-> time i).
/// Throws TooLarge above kEnumerationGuard sets.
std::vector<ErasureSchedule> enumerate_schedules(int b, int window, Time horizon);

/// Uniform draw from the admissible erased sets over [0, horizon).
ErasureSchedule sample_schedule(int b, int window, Time horizon, std::mt19937_64& rng);

enum class VerifyMode { kExhaustive, kRandomized };

std::string to_string(VerifyMode mode);

struct VerifyOptions {
  VerifyMode mode = VerifyMode::kExhaustive;
  std::size_t budget = 1000;  // randomized pairs
  std::uint64_t seed = 1;
  Time horizon = 0;  // 0: 2(T+1) exhaustive, 4(T+1) randomized
  std::size_t max_pairs = 4'000'000;
};

struct FailureCase {
  ErasureSchedule sr;
  ErasureSchedule rd;
  std::string reason;
};

struct VerificationReport {
  int b1 = 0;
  int b2 = 0;
  int T = 0;
  VerifyMode mode = VerifyMode::kExhaustive;
  Time horizon = 0;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::size_t pairs_checked = 0;
  DelayProfile max_delay;
  bool pass = false;
  std::optional<FailureCase> failure;  // shrunk to a minimal reproduction
};

/// Runs the network over pairs of admissible hop schedules and checks every
/// destination delay against T. Failures are report content.
VerificationReport verify_tbsc(const RelayNetworkSpec& spec, const VerifyOptions& options);

}  // namespace tbsc
