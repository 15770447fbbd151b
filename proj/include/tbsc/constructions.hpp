#pragma once

#include <string>

#include "tbsc/gf2.hpp"
#include "tbsc/relay.hpp"
#include "tbsc/streaming_code.hpp"

namespace tbsc {

/// Identity blocks at multiples of the burst length.
///
/// Message dimension k splits as k = p*w + q with 0 < q <= w. Group j of w
/// coordinates (j = 1..p) is carried by P_{j*b}; the last q coordinates land
/// in P_{(p+1)*b}. Requires (p+1)*b <= horizon.
struct TypeAParams {
  int b;
  int w;
  int k;
  int horizon;

  int p() const { return (k - 1) / w; }
  int q() const { return k - p() * w; }
};

/// Shifted identity blocks plus single-entry matrices below P'_b.
///
/// Parity width equals the burst length b; k = p*b + q with 0 < q <= b.
/// Requires horizon >= max(k, b).
struct TypeBParams {
  int b;
  int k;
  int horizon;

  int p() const { return (k - 1) / b; }
  int q() const { return k - p() * b; }
};

StreamCodeSpec build_type_a(const TypeAParams& params);
StreamCodeSpec build_type_b(const TypeBParams& params);

DelayProfile predicted_profile_a(const TypeAParams& params);
DelayProfile predicted_profile_b(const TypeBParams& params);

/// i mod n with the result in {1..n}.
int mod1(int i, int n);

/// Top-left square part of the recovery matrix of a Type-B code: blocks
/// P'_{b-r+c} for block row r in [b] and block column c in [q], each cut to
/// its top q rows. The result is (b*q) x (b*q).
BinMatrix reduced_p0_matrix(const StreamCodeSpec& type_b, int q);

/// For q < b: the right b-q columns of the reduced blocks P'_i (1 <= i < b),
/// arranged with block (r, c) = P'_{b-q-r+c} for r in [b-q], c in [q].
/// This q(b-q) x q(b-q) matrix must be a permutation matrix.
BinMatrix reduced_permutation_block(const StreamCodeSpec& type_b, int q);

bool is_permutation_matrix(const BinMatrix& m);

/// min{(T-b1)/(T-b1+b2), (T-b2)/(T-b2+b1)}; requires T >= b1 + b2.
Rational rate_bound(int b1, int b2, int T);

/// Which family the SR hop uses (the RD hop takes the other one). Equal burst
/// lengths use the Type-A SR recipe.
enum class ConstructionPath { kSrTypeA, kSrTypeB, kEqualBurst, kNone };

std::string to_string(ConstructionPath path);
ConstructionPath parse_construction_path(const std::string& text);

struct FeasibilityReport {
  int b1;
  int b2;
  int T;
  // (T - max) / min >= ceil((T - min) / max)
  bool feasible;
  // T - b1 - b2 >= b1*b2 / |b1 - b2|; false when b1 == b2
  bool sufficient;
  // max(b1, b2) divides T - b1 - b2
  bool prior_work;
  Rational optimal_rate;
  ConstructionPath path;

  /// Human-readable statement of the constraint, with its evaluated sides.
  std::string constraint() const;
};

FeasibilityReport feasibility(int b1, int b2, int T);

/// Rate-optimal (b1, b2, T) three-node code.
///
/// b1 <= b2: SR = Type-A(b1, w=b2, k=T-b1, horizon T-b2),
///           RD = Type-B(b2, k=T-b1, horizon T-b1).
/// b2 < b1:  SR = Type-B(b1, k=T-b2, horizon T-b2),
///           RD = Type-A(b2, w=b1, k=T-b2, horizon T-b1).
/// The relay lags come from the SR delay profile. Throws
/// InfeasibleParameters naming the violated constraint.
RelayNetworkSpec build_tbsc(int b1, int b2, int T);

}  // namespace tbsc
