#include "tbsc/streaming_code.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "tbsc/errors.hpp"

namespace tbsc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::int64_t parse_int(std::string_view s, const char* what) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + std::string(s) +
                                "'");
  }
  return v;
}

}  // namespace

std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, "rational"));
  auto den = parse_int(text.substr(slash + 1), "rational denominator");
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return {parse_int(text.substr(0, slash), "rational numerator"), den};
}

StreamCodeSpec::StreamCodeSpec(int b, int horizon, int k, int w, std::vector<BinMatrix> parity)
    : b_(b),
      horizon_(horizon),
      k_(k),
      w_(w),
      parity_(std::move(parity)),
      zero_(static_cast<std::size_t>(std::max(k, 1)), static_cast<std::size_t>(std::max(w, 1))) {
  if (k < 1 || w < 1) throw InvalidParameters("streaming code needs k >= 1 and w >= 1");
  if (b < 1 || b > horizon) {
    throw InvalidParameters("streaming code needs 1 <= b <= horizon, got b=" +
                            std::to_string(b) + " horizon=" + std::to_string(horizon));
  }
  if (parity_.size() != static_cast<std::size_t>(horizon) + 1) {
    throw DimensionError("expected " + std::to_string(horizon + 1) + " parity matrices, got " +
                         std::to_string(parity_.size()));
  }
  for (const auto& p : parity_) {
    if (p.rows() != static_cast<std::size_t>(k) || p.cols() != static_cast<std::size_t>(w)) {
      throw DimensionError("parity matrices must be k x w");
    }
  }
}

const BinMatrix& StreamCodeSpec::parity(std::int64_t i) const {
  if (i < 0 || i > horizon_) return zero_;
  return parity_[static_cast<std::size_t>(i)];
}

std::vector<int> StreamCodeSpec::nonzero_parity_indices() const {
  std::vector<int> out;
  for (int i = 0; i <= horizon_; ++i) {
    if (!parity_[static_cast<std::size_t>(i)].is_zero()) out.push_back(i);
  }
  return out;
}

StreamCodeSpec StreamCodeSpec::with_parity(int i, BinMatrix m) const {
  if (i < 0 || i > horizon_) throw std::out_of_range("parity index outside [0, horizon]");
  auto family = parity_;
  family[static_cast<std::size_t>(i)] = std::move(m);
  return {b_, horizon_, k_, w_, std::move(family)};
}

int DelayProfile::max() const {
  return delays.empty() ? 0 : *std::max_element(delays.begin(), delays.end());
}

std::string DelayProfile::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < delays.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(delays[i]);
  }
  return out;
}

ErasureSchedule::ErasureSchedule(std::vector<Time> erased_times, int max_burst, int window_size)
    : erased(std::move(erased_times)), b(max_burst), window(window_size) {
  if (b < 1 || window < 2) throw InvalidParameters("schedule needs b >= 1 and window >= 2");
  std::sort(erased.begin(), erased.end());
  erased.erase(std::unique(erased.begin(), erased.end()), erased.end());
  if (!erased.empty() && erased.front() < 0) {
    throw InvalidParameters("erased times must be non-negative");
  }
}

bool ErasureSchedule::contains(Time t) const {
  return std::binary_search(erased.begin(), erased.end(), t);
}

std::vector<std::pair<Time, Time>> ErasureSchedule::runs() const {
  std::vector<std::pair<Time, Time>> out;
  for (auto t : erased) {
    if (!out.empty() && out.back().second + 1 == t) {
      out.back().second = t;
    } else {
      out.emplace_back(t, t);
    }
  }
  return out;
}

bool is_admissible(const ErasureSchedule& sched) {
  auto runs = sched.runs();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].second - runs[i].first + 1 > sched.b) return false;
    if (i > 0 && runs[i].first - runs[i - 1].second < sched.window) return false;
  }
  return true;
}

ErasureSchedule burst_schedule(Time start, int length, int b, int window) {
  std::vector<Time> erased(static_cast<std::size_t>(std::max(length, 0)));
  std::iota(erased.begin(), erased.end(), start);
  return {std::move(erased), b, window};
}

BitVector random_bits(std::size_t n, std::mt19937_64& rng) {
  BitVector bits(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = (word >> (i % 64)) & 1U;
  }
  return bits;
}

std::string format_trace_line(Time t, const Received& packet) {
  std::string out = std::to_string(t) + " | ";
  if (!packet) return out + "ERASED";
  return out + bits_to_string(packet->message) + " | " + bits_to_string(packet->parity);
}

std::pair<Time, Received> parse_trace_line(std::string_view line) {
  auto bar = line.find('|');
  if (bar == std::string_view::npos) throw std::invalid_argument("trace line lacks '|'");
  Time t = parse_int(line.substr(0, bar), "trace time");
  auto rest = trim(line.substr(bar + 1));
  if (rest == "ERASED") return {t, std::nullopt};
  auto bar2 = rest.find('|');
  if (bar2 == std::string_view::npos) throw std::invalid_argument("trace line lacks parity");
  return {t, Packet{bits_from_string(trim(rest.substr(0, bar2))),
                    bits_from_string(trim(rest.substr(bar2 + 1)))}};
}

Encoder::Encoder(StreamCodeSpec spec)
    : spec_(std::move(spec)), active_(spec_.nonzero_parity_indices()) {}

Packet Encoder::encode(const BitVector& message) {
  if (message.size() != static_cast<std::size_t>(spec_.k())) {
    throw DimensionError("message has " + std::to_string(message.size()) + " bits, code has k=" +
                         std::to_string(spec_.k()));
  }
  history_.push_front(message);
  if (history_.size() > static_cast<std::size_t>(spec_.horizon()) + 1) history_.pop_back();

  BitVector parity(static_cast<std::size_t>(spec_.w()));
  for (int i : active_) {
    if (static_cast<std::size_t>(i) >= history_.size()) break;
    const auto& s = history_[static_cast<std::size_t>(i)];
    const auto& p = spec_.parity(i);
    for (auto j = s.find_first(); j != BitVector::npos; j = s.find_next(j)) parity ^= p.row(j + 1);
  }
  ++next_;
  return {message, std::move(parity)};
}

Decoder::Decoder(StreamCodeSpec spec) : spec_(std::move(spec)) {
  const auto k = static_cast<std::size_t>(spec_.k());
  const auto w = static_cast<std::size_t>(spec_.w());
  parity_cols_.resize(static_cast<std::size_t>(spec_.horizon()) + 1);
  for (std::size_t i = 0; i < parity_cols_.size(); ++i) {
    const auto& p = spec_.parity(static_cast<std::int64_t>(i));
    parity_cols_[i].assign(w, BitVector(k));
    for (std::size_t j = 1; j <= k; ++j) {
      for (std::size_t c = 1; c <= w; ++c) {
        if (p.get(j, c)) parity_cols_[i][c - 1][j - 1] = true;
      }
    }
  }
}

std::vector<RecoveredSymbol> Decoder::step(const Received& y) {
  const auto k = static_cast<std::size_t>(spec_.k());
  const auto w = static_cast<std::size_t>(spec_.w());
  const Time t = next_++;
  std::vector<RecoveredSymbol> out;

  Slot slot{BitVector(k), BitVector(k), std::vector<std::size_t>(k, 0)};
  if (y) {
    if (y->message.size() != k || y->parity.size() != w) {
      throw DimensionError("received packet does not match code dimensions");
    }
    slot.known.set();
    slot.value = y->message;
    for (std::size_t j = 0; j < k; ++j) {
      out.push_back({t, static_cast<int>(j) + 1, slot.value[j], t});
    }
  } else {
    for (std::size_t j = 0; j < k; ++j) {
      slot.var[j] = solver_.add_variable();
      owner_.emplace_back(t, static_cast<int>(j) + 1);
    }
  }
  window_.push_front(std::move(slot));
  if (window_.size() > parity_cols_.size()) window_.pop_back();

  // Without unknowns the parity carries no new information.
  if (!y || solver_.num_vars() == 0) return out;

  std::vector<std::size_t> pinned_vars;
  for (std::size_t c = 0; c < w; ++c) {
    BitVector coeffs(solver_.num_vars());
    bool rhs = y->parity[c];
    for (std::size_t i = 0; i < window_.size(); ++i) {
      const auto& mask = parity_cols_[i][c];
      if (mask.none()) continue;
      const auto& s = window_[i];
      rhs ^= ((mask & s.known & s.value).count() & 1U) != 0;
      BitVector unknown = mask - s.known;
      for (auto j = unknown.find_first(); j != BitVector::npos; j = unknown.find_next(j)) {
        coeffs.flip(s.var[j]);
      }
    }
    if (coeffs.none()) {
      if (rhs) throw DecodeError("parity at t=" + std::to_string(t) + " contradicts known data");
      continue;
    }
    std::vector<IncrementalSolver::Assignment> pinned;
    try {
      pinned = solver_.add_equation(coeffs, rhs);
    } catch (const InconsistentSystem& e) {
      throw DecodeError("inconsistent equations at t=" + std::to_string(t) + ": " + e.what());
    }
    for (const auto& a : pinned) {
      const auto [when, coord] = owner_[a.var];
      const auto age = static_cast<std::size_t>(t - when);
      if (age < window_.size()) {
        window_[age].known[static_cast<std::size_t>(coord) - 1] = true;
        window_[age].value[static_cast<std::size_t>(coord) - 1] = a.value;
      }
      out.push_back({when, coord, a.value, t});
      pinned_vars.push_back(a.var);
    }
  }

  if (!pinned_vars.empty()) {
    auto remap = solver_.retire(pinned_vars);
    std::vector<std::pair<Time, int>> owners(solver_.num_vars());
    for (std::size_t v = 0; v < remap.size(); ++v) {
      if (remap[v]) owners[*remap[v]] = owner_[v];
    }
    owner_ = std::move(owners);
    for (auto& s : window_) {
      for (std::size_t j = 0; j < k; ++j) {
        if (!s.known[j] && remap[s.var[j]]) s.var[j] = *remap[s.var[j]];
      }
    }
  }
  return out;
}

std::vector<std::pair<Time, int>> Decoder::unresolved() const { return owner_; }

std::vector<RecoveredSymbol> decode_with_schedule(const StreamCodeSpec& spec,
                                                  const ErasureSchedule& sched, Time length,
                                                  std::uint64_t seed,
                                                  std::vector<std::pair<Time, int>>* missing) {
  std::mt19937_64 rng(seed);
  Encoder enc(spec);
  Decoder dec(spec);
  std::vector<BitVector> sent;
  std::vector<RecoveredSymbol> recovered;
  for (Time t = 0; t < length; ++t) {
    sent.push_back(random_bits(static_cast<std::size_t>(spec.k()), rng));
    auto x = enc.encode(sent.back());
    Received y;
    if (!sched.contains(t)) y = std::move(x);
    for (const auto& r : dec.step(y)) {
      const auto coord = static_cast<std::size_t>(r.coord) - 1;
      if (r.value != sent[static_cast<std::size_t>(r.time)][coord]) {
        throw DecodeError("wrong value recovered for S_" + std::to_string(r.coord) + "[" +
                          std::to_string(r.time) + "]");
      }
      if (sched.contains(r.time)) recovered.push_back(r);
    }
  }
  if (missing) *missing = dec.unresolved();
  return recovered;
}

DelayProfile measure_delay_profile(const StreamCodeSpec& spec) {
  const Time start = spec.horizon() + 1;
  const Time length = start + spec.b() + spec.horizon();
  const auto k = static_cast<std::size_t>(spec.k());

  auto profile_for = [&](int burst) {
    auto sched = burst_schedule(start, burst, spec.b(), spec.horizon() + 1);
    std::vector<std::pair<Time, int>> missing;
    auto rec = decode_with_schedule(spec, sched, length, 0x5eed + static_cast<unsigned>(burst),
                                    &missing);
    if (!missing.empty()) {
      throw ConstructionInvalid("S_" + std::to_string(missing.front().second) + "[" +
                                std::to_string(missing.front().first) +
                                "] not recovered within the horizon (burst length " +
                                std::to_string(burst) + ")");
    }
    DelayProfile p{std::vector<int>(k, 0)};
    for (const auto& r : rec) {
      auto& d = p.delays[static_cast<std::size_t>(r.coord) - 1];
      d = std::max(d, r.delay());
    }
    if (p.max() > spec.horizon()) {
      throw ConstructionInvalid("recovery delay " + std::to_string(p.max()) +
                                " exceeds horizon " + std::to_string(spec.horizon()));
    }
    return p;
  };

  DelayProfile full = profile_for(spec.b());
  for (int burst = 1; burst < spec.b(); ++burst) {
    auto shorter = profile_for(burst);
    for (std::size_t j = 0; j < k; ++j) {
      if (shorter.delays[j] > full.delays[j]) {
        throw ConstructionInvalid("burst of length " + std::to_string(burst) +
                                  " delays coordinate " + std::to_string(j + 1) +
                                  " beyond the full-burst profile");
      }
    }
  }
  return full;
}

}  // namespace tbsc
