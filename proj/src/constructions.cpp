#include "tbsc/constructions.hpp"

#include <algorithm>
#include <sstream>

#include "tbsc/errors.hpp"

namespace tbsc {

namespace {

std::vector<BinMatrix> zero_family(int horizon, int k, int w) {
  return std::vector<BinMatrix>(static_cast<std::size_t>(horizon) + 1,
                                BinMatrix(static_cast<std::size_t>(k),
                                          static_cast<std::size_t>(w)));
}

// Identity of size `n` placed with its top-left corner on (row, col).
void place_identity(BinMatrix& m, int row, int col, int n) {
  for (int d = 0; d < n; ++d) {
    m.set(static_cast<std::size_t>(row + d), static_cast<std::size_t>(col + d));
  }
}

BinMatrix& at(std::vector<BinMatrix>& family, int i) { return family[static_cast<std::size_t>(i)]; }

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

int mod1(int i, int n) {
  if (n < 1) throw InvalidParameters("mod1 needs a positive modulus");
  return ((i - 1) % n + n) % n + 1;
}

StreamCodeSpec build_type_a(const TypeAParams& a) {
  if (a.b < 1 || a.w < 1 || a.k < 1) {
    throw InvalidParameters("Type-A needs b, w, k >= 1");
  }
  const int p = a.p();
  const int q = a.q();
  if ((p + 1) * a.b > a.horizon) {
    throw InfeasibleParameters("Type-A needs (p+1)*b <= horizon: (" + std::to_string(p) +
                               "+1)*" + std::to_string(a.b) + " > " + std::to_string(a.horizon));
  }
  auto family = zero_family(a.horizon, a.k, a.w);
  for (int j = 1; j <= p; ++j) place_identity(at(family, j * a.b), (j - 1) * a.w + 1, 1, a.w);
  place_identity(at(family, (p + 1) * a.b), p * a.w + 1, 1, q);
  return {a.b, a.horizon, a.k, a.w, std::move(family)};
}

StreamCodeSpec build_type_b(const TypeBParams& t) {
  if (t.b < 1 || t.k < 1) throw InvalidParameters("Type-B needs b, k >= 1");
  const int p = t.p();
  const int q = t.q();
  const int b = t.b;
  if (t.horizon < std::max(t.k, b)) {
    throw InfeasibleParameters("Type-B needs horizon >= max(k, b): " + std::to_string(t.horizon) +
                               " < " + std::to_string(std::max(t.k, b)));
  }
  auto family = zero_family(t.horizon, t.k, b);
  for (int j = 1; j <= p; ++j) place_identity(at(family, j * b + q), (j - 1) * b + q + 1, 1, b);
  place_identity(at(family, b), 1, 1, q);
  if (q != b) {
    for (int i = 1; i <= b - 1; ++i) {
      at(family, i).set(static_cast<std::size_t>(mod1(i, q)),
                        static_cast<std::size_t>(q + mod1(i, b - q)));
    }
  }
  return {b, t.horizon, t.k, b, std::move(family)};
}

DelayProfile predicted_profile_a(const TypeAParams& a) {
  DelayProfile out;
  for (int j = 1; j <= a.p(); ++j) out.delays.insert(out.delays.end(), a.w, j * a.b);
  out.delays.insert(out.delays.end(), a.q(), (a.p() + 1) * a.b);
  return out;
}

DelayProfile predicted_profile_b(const TypeBParams& t) {
  DelayProfile out;
  out.delays.assign(t.q(), t.b);
  for (int j = 1; j <= t.p(); ++j) out.delays.insert(out.delays.end(), t.b, j * t.b + t.q());
  return out;
}

BinMatrix reduced_p0_matrix(const StreamCodeSpec& type_b, int q) {
  const int b = type_b.b();
  if (q < 1 || q > b || q > type_b.k() || type_b.w() != b) {
    throw InvalidParameters("reduced_p0_matrix needs 1 <= q <= b = w and q <= k");
  }
  const auto uq = static_cast<std::size_t>(q);
  const auto ub = static_cast<std::size_t>(b);
  BinMatrix out(ub * uq, uq * ub);
  for (int r = 1; r <= b; ++r) {
    for (int c = 1; c <= q; ++c) {
      const auto& block = type_b.parity(b - r + c);
      out.set_block((static_cast<std::size_t>(r) - 1) * uq + 1,
                    (static_cast<std::size_t>(c) - 1) * ub + 1, block.submatrix(1, 1, uq, ub));
    }
  }
  return out;
}

BinMatrix reduced_permutation_block(const StreamCodeSpec& type_b, int q) {
  const int b = type_b.b();
  if (q < 1 || q >= b || q > type_b.k() || type_b.w() != b) {
    throw InvalidParameters("reduced_permutation_block needs 1 <= q < b = w and q <= k");
  }
  const auto uq = static_cast<std::size_t>(q);
  const auto width = static_cast<std::size_t>(b - q);
  BinMatrix out(width * uq, uq * width);
  for (int r = 1; r <= b - q; ++r) {
    for (int c = 1; c <= q; ++c) {
      const auto& block = type_b.parity(b - q - r + c);
      out.set_block((static_cast<std::size_t>(r) - 1) * uq + 1,
                    (static_cast<std::size_t>(c) - 1) * width + 1,
                    block.submatrix(1, uq + 1, uq, width));
    }
  }
  return out;
}

bool is_permutation_matrix(const BinMatrix& m) {
  if (m.rows() != m.cols()) return false;
  std::vector<std::size_t> col_count(m.cols(), 0);
  for (std::size_t r = 1; r <= m.rows(); ++r) {
    const auto& row = m.row(r);
    if (row.count() != 1) return false;
    ++col_count[row.find_first()];
  }
  return std::all_of(col_count.begin(), col_count.end(), [](std::size_t n) { return n == 1; });
}

Rational rate_bound(int b1, int b2, int T) {
  if (b1 < 1 || b2 < 1) throw InvalidParameters("burst lengths must be positive");
  if (T < b1 + b2) {
    throw InvalidParameters("T must be at least b1 + b2 (" + std::to_string(T) + " < " +
                            std::to_string(b1 + b2) + ")");
  }
  return std::min(Rational(T - b1, T - b1 + b2), Rational(T - b2, T - b2 + b1));
}

std::string to_string(ConstructionPath path) {
  switch (path) {
    case ConstructionPath::kSrTypeA: return "sr-type-a";
    case ConstructionPath::kSrTypeB: return "sr-type-b";
    case ConstructionPath::kEqualBurst: return "equal-b";
    case ConstructionPath::kNone: return "none";
  }
  return "none";
}

ConstructionPath parse_construction_path(const std::string& text) {
  for (auto p : {ConstructionPath::kSrTypeA, ConstructionPath::kSrTypeB,
                 ConstructionPath::kEqualBurst, ConstructionPath::kNone}) {
    if (to_string(p) == text) return p;
  }
  throw std::invalid_argument("unknown construction path '" + text + "'");
}

std::string FeasibilityReport::constraint() const {
  const int lo = std::min(b1, b2);
  const int hi = std::max(b1, b2);
  std::ostringstream s;
  s << "(T-max{b1,b2})/min{b1,b2} >= ceil((T-min{b1,b2})/max{b1,b2}): (" << T << "-" << hi
    << ")/" << lo << " = " << format_rational(Rational(T - hi, lo)) << " vs ceil((" << T << "-"
    << lo << ")/" << hi << ") = " << ceil_div(T - lo, hi);
  return s.str();
}

FeasibilityReport feasibility(int b1, int b2, int T) {
  FeasibilityReport rep{b1, b2, T, false, false, false, rate_bound(b1, b2, T),
                        ConstructionPath::kNone};
  const std::int64_t lo = std::min(b1, b2);
  const std::int64_t hi = std::max(b1, b2);
  // x >= n for integer n iff floor(x) >= n.
  rep.feasible = (T - hi) / lo >= ceil_div(T - lo, hi);
  if (b1 != b2) {
    rep.sufficient = static_cast<std::int64_t>(T - b1 - b2) * (hi - lo) >=
                     static_cast<std::int64_t>(b1) * b2;
  }
  rep.prior_work = (T - b1 - b2) % hi == 0;
  if (rep.feasible) {
    rep.path = b1 < b2   ? ConstructionPath::kSrTypeA
               : b2 < b1 ? ConstructionPath::kSrTypeB
                         : ConstructionPath::kEqualBurst;
  }
  return rep;
}

RelayNetworkSpec build_tbsc(int b1, int b2, int T) {
  auto rep = feasibility(b1, b2, T);
  if (!rep.feasible) throw InfeasibleParameters("infeasible parameters: " + rep.constraint());

  if (b1 <= b2) {
    TypeAParams sr{b1, b2, T - b1, T - b2};
    TypeBParams rd{b2, T - b1, T - b1};
    return {b1,
            b2,
            T,
            build_type_a(sr),
            build_type_b(rd),
            predicted_profile_a(sr),
            predicted_profile_b(rd)};
  }
  TypeBParams sr{b1, T - b2, T - b2};
  TypeAParams rd{b2, b1, T - b2, T - b1};
  return {b1,
          b2,
          T,
          build_type_b(sr),
          build_type_a(rd),
          predicted_profile_b(sr),
          predicted_profile_a(rd)};
}

}  // namespace tbsc
