#include <map>
#include <random>

#include <gtest/gtest.h>

#include "tbsc/constructions.hpp"
#include "tbsc/errors.hpp"
#include "tbsc/oracle.hpp"
#include "tbsc/streaming_code.hpp"

using namespace tbsc;

namespace {

const StreamCodeSpec& sr_code() {
  static const StreamCodeSpec spec = build_tbsc(2, 3, 7).sr();
  return spec;
}

const StreamCodeSpec& rd_code() {
  static const StreamCodeSpec spec = build_tbsc(2, 3, 7).rd();
  return spec;
}

BitVector unit(std::size_t n, std::size_t coord) {
  BitVector v(n);
  v.set(coord - 1);
  return v;
}

std::vector<Packet> encode_stream(const StreamCodeSpec& spec, const std::vector<BitVector>& msgs) {
  Encoder enc(spec);
  std::vector<Packet> out;
  for (const auto& m : msgs) out.push_back(enc.encode(m));
  return out;
}

// (time, coord) -> recovery time
std::map<std::pair<Time, int>, Time> decode_erasing(const StreamCodeSpec& spec,
                                                    const std::vector<BitVector>& msgs,
                                                    const ErasureSchedule& sched) {
  auto packets = encode_stream(spec, msgs);
  Decoder dec(spec);
  std::map<std::pair<Time, int>, Time> at;
  for (Time t = 0; t < static_cast<Time>(packets.size()); ++t) {
    Received y;
    if (!sched.contains(t)) y = packets[t];
    for (const auto& s : dec.step(y)) {
      EXPECT_EQ(s.value, msgs[s.time][s.coord - 1]);
      at[{s.time, s.coord}] = s.recovered_at;
    }
  }
  return at;
}

std::vector<BitVector> random_stream(std::size_t k, std::size_t len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BitVector> msgs;
  for (std::size_t t = 0; t < len; ++t) msgs.push_back(random_bits(k, rng));
  return msgs;
}

}  // namespace

TEST(StreamCodeSpec, ValidatesShapes) {
  EXPECT_THROW(StreamCodeSpec(0, 2, 2, 2, std::vector<BinMatrix>(3, BinMatrix(2, 2))),
               InvalidParameters);
  EXPECT_THROW(StreamCodeSpec(1, 2, 2, 2, std::vector<BinMatrix>(2, BinMatrix(2, 2))),
               DimensionError);
  EXPECT_THROW(StreamCodeSpec(1, 1, 2, 2, {BinMatrix(2, 2), BinMatrix(2, 3)}), DimensionError);
}

TEST(StreamCodeSpec, ParityOutsideHorizonIsZero) {
  const auto& sr = sr_code();
  EXPECT_TRUE(sr.parity(-1).is_zero());
  EXPECT_TRUE(sr.parity(sr.horizon() + 1).is_zero());
  EXPECT_EQ(sr.nonzero_parity_indices(), (std::vector<int>{2, 4}));
  EXPECT_EQ(sr.rate(), Rational(5, 8));
}

TEST(Rational, Format) {
  EXPECT_EQ(format_rational(Rational(10, 16)), "5/8");
  EXPECT_EQ(format_rational(Rational(2)), "2/1");
  EXPECT_EQ(parse_rational("6/9"), Rational(2, 3));
  EXPECT_EQ(parse_rational("5"), Rational(5));
  EXPECT_THROW(parse_rational("x/2"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
}

TEST(Encoder, ZeroStreamHasZeroParity) {
  std::vector<BitVector> msgs(12, BitVector(5));
  for (const auto& p : encode_stream(sr_code(), msgs)) EXPECT_TRUE(p.parity.none());
}

TEST(Encoder, ImpulseOnFirstCoordinate) {
  std::vector<BitVector> msgs(8, BitVector(5));
  msgs[0] = unit(5, 1);
  auto packets = encode_stream(sr_code(), msgs);
  for (Time t = 0; t < 8; ++t) {
    EXPECT_EQ(bits_to_string(packets[t].parity), t == 2 ? "100" : "000") << "t=" << t;
  }
}

TEST(Encoder, ImpulseOnFourthCoordinate) {
  std::vector<BitVector> msgs(8, BitVector(5));
  msgs[0] = unit(5, 4);
  auto packets = encode_stream(sr_code(), msgs);
  for (Time t = 0; t < 8; ++t) {
    EXPECT_EQ(bits_to_string(packets[t].parity), t == 4 ? "100" : "000") << "t=" << t;
  }
}

TEST(Encoder, Linearity) {
  for (const auto* spec : {&sr_code(), &rd_code()}) {
    auto a = random_stream(spec->k(), 30, 1);
    auto b = random_stream(spec->k(), 30, 2);
    std::vector<BitVector> sum;
    for (std::size_t t = 0; t < a.size(); ++t) sum.push_back(a[t] ^ b[t]);
    auto pa = encode_stream(*spec, a);
    auto pb = encode_stream(*spec, b);
    auto ps = encode_stream(*spec, sum);
    for (std::size_t t = 0; t < a.size(); ++t) {
      ASSERT_EQ(ps[t].parity, pa[t].parity ^ pb[t].parity);
    }
  }
}

TEST(Encoder, RejectsWrongLength) {
  Encoder enc(sr_code());
  EXPECT_THROW(enc.encode(BitVector(4)), DimensionError);
}

TEST(Admissible, Examples) {
  EXPECT_TRUE(is_admissible(ErasureSchedule({3, 4}, 2, 5)));
  EXPECT_FALSE(is_admissible(ErasureSchedule({3, 4, 5}, 2, 5)));
  EXPECT_TRUE(is_admissible(ErasureSchedule({0, 1, 6, 7}, 2, 5)));
  EXPECT_FALSE(is_admissible(ErasureSchedule({0, 1, 5, 6}, 2, 5)));
  EXPECT_TRUE(is_admissible(ErasureSchedule({}, 2, 5)));
}

TEST(Admissible, ScheduleNormalizes) {
  ErasureSchedule s({7, 1, 6, 1}, 2, 5);
  EXPECT_EQ(s.erased, (std::vector<Time>{1, 6, 7}));
  auto runs = s.runs();
  ASSERT_EQ(runs.size(), 2U);
  EXPECT_EQ(runs[1], std::make_pair(Time{6}, Time{7}));
  EXPECT_THROW(ErasureSchedule({-1}, 2, 5), InvalidParameters);
}

// Dropping whole runs or trimming runs at either end keeps a schedule
// admissible. Dropping an interior time splits a run into two runs closer
// than the window, which the gap rule rejects.
TEST(Admissible, RunPreservingSubsetsStayAdmissible) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    auto s = sample_schedule(3, 6, 30, rng);
    ASSERT_TRUE(is_admissible(s));
    std::vector<Time> sub;
    for (auto [first, last] : s.runs()) {
      if (rng() % 3 == 0) continue;
      Time lo = first + static_cast<Time>(rng() % 2);
      Time hi = last - static_cast<Time>(rng() % 2);
      for (Time t = lo; t <= hi; ++t) sub.push_back(t);
    }
    ASSERT_TRUE(is_admissible(ErasureSchedule(sub, 3, 6)));
  }
  EXPECT_FALSE(is_admissible(ErasureSchedule({0, 2}, 3, 6)));
}

TEST(TraceFormat, RoundTrip) {
  Packet p{bits_from_string("10110"), bits_from_string("011")};
  EXPECT_EQ(format_trace_line(3, p), "3 | 10110 | 011");
  EXPECT_EQ(format_trace_line(4, std::nullopt), "4 | ERASED");
  auto [t, y] = parse_trace_line("3 | 10110 | 011");
  EXPECT_EQ(t, 3);
  ASSERT_TRUE(y.has_value());
  EXPECT_EQ(*y, p);
  auto [t2, y2] = parse_trace_line("4 | ERASED");
  EXPECT_EQ(t2, 4);
  EXPECT_FALSE(y2.has_value());
  EXPECT_THROW(parse_trace_line("4 |"), std::invalid_argument);
}

TEST(Decoder, NoErasuresMeansZeroDelay) {
  auto msgs = random_stream(5, 20, 9);
  auto at = decode_erasing(sr_code(), msgs, ErasureSchedule({}, 2, 5));
  EXPECT_EQ(at.size(), 100U);
  for (const auto& [key, when] : at) EXPECT_EQ(when, key.first);
}

TEST(Decoder, SrBurstAtStart) {
  auto msgs = random_stream(5, 12, 10);
  auto at = decode_erasing(sr_code(), msgs, ErasureSchedule({0, 1}, 2, 5));
  for (int j = 1; j <= 3; ++j) {
    EXPECT_EQ((at[{0, j}]), 2);
    EXPECT_EQ((at[{1, j}]), 3);
  }
  for (int j = 4; j <= 5; ++j) {
    EXPECT_EQ((at[{0, j}]), 4);
    EXPECT_EQ((at[{1, j}]), 5);
  }
}

TEST(Decoder, RdBurstAtStart) {
  auto msgs = random_stream(5, 14, 11);
  auto at = decode_erasing(rd_code(), msgs, ErasureSchedule({0, 1, 2}, 3, 6));
  const std::vector<int> profile{3, 3, 5, 5, 5};
  for (Time t = 0; t <= 2; ++t) {
    for (int j = 1; j <= 2; ++j) EXPECT_LE((at[{t, j}]), 4) << t << "," << j;
    for (int j = 1; j <= 5; ++j) {
      ASSERT_TRUE(at.count({t, j}));
      EXPECT_LE((at[{t, j}]), t + profile[j - 1]);
    }
  }
}

TEST(Decoder, UnresolvedListsPending) {
  Decoder dec(sr_code());
  dec.step(std::nullopt);
  auto pending = dec.unresolved();
  EXPECT_EQ(pending.size(), 5U);
  EXPECT_EQ(pending.front(), std::make_pair(Time{0}, 1));
}

TEST(Decoder, InconsistentParityThrows) {
  std::vector<BitVector> msgs(6, BitVector(5));
  msgs[0] = unit(5, 1);
  Decoder dec(sr_code());
  Encoder enc(sr_code());
  auto q0 = enc.encode(msgs[0]);
  dec.step(q0);
  enc.encode(msgs[1]);
  dec.step(std::nullopt);
  auto q2 = enc.encode(msgs[2]);
  q2.parity.flip(0);  // P_1 = 0, so the first parity bit of P[2] involves only S[0]
  EXPECT_THROW(dec.step(q2), DecodeError);
}

TEST(DelayProfile, Format) {
  DelayProfile p{{2, 2, 2, 4, 4}};
  EXPECT_EQ(p.to_string(), "2,2,2,4,4");
  EXPECT_EQ(p.max(), 4);
  EXPECT_EQ(p[4], 4);
}

TEST(MeasureDelayProfile, WorkedExampleCodes) {
  EXPECT_EQ(measure_delay_profile(sr_code()).to_string(), "2,2,2,4,4");
  EXPECT_EQ(measure_delay_profile(rd_code()).to_string(), "3,3,5,5,5");
  EXPECT_EQ(measure_delay_profile(build_type_a({1, 2, 3, 2})).to_string(), "1,1,2");
}

TEST(MeasureDelayProfile, BrokenCodeIsRejected) {
  auto broken = sr_code().with_parity(4, BinMatrix(5, 3));
  EXPECT_THROW(measure_delay_profile(broken), ConstructionInvalid);
}

// Every admissible schedule over a short horizon is decoded within the
// single-burst profile, multi-burst patterns included.
TEST(Decoder, ExhaustiveSchedulesMeetProfile) {
  for (const auto* spec : {&sr_code(), &rd_code()}) {
    const auto profile = measure_delay_profile(*spec);
    const int window = spec->horizon() + 1;
    const Time span = 12;
    const Time length = span + spec->horizon() + 1;
    auto msgs = random_stream(spec->k(), length, 77);
    auto packets = encode_stream(*spec, msgs);
    for (const auto& sched : enumerate_schedules(spec->b(), window, span)) {
      Decoder dec(*spec);
      std::size_t recovered = 0;
      for (Time t = 0; t < length; ++t) {
        Received y;
        if (!sched.contains(t)) y = packets[t];
        for (const auto& s : dec.step(y)) {
          ASSERT_EQ(s.value, msgs[s.time][s.coord - 1]);
          if (sched.contains(s.time)) {
            ASSERT_LE(s.delay(), profile[s.coord]);
            ++recovered;
          }
        }
      }
      ASSERT_EQ(recovered, sched.erased.size() * spec->k());
    }
  }
}

TEST(DecodeWithSchedule, ReportsMissingSymbols) {
  std::vector<std::pair<Time, int>> missing;
  auto rec = decode_with_schedule(sr_code(), ErasureSchedule({0, 1}, 2, 5), 3, 1, &missing);
  EXPECT_EQ(rec.size(), 3U);  // S_1..3[0] by t=2
  EXPECT_EQ(missing.size(), 7U);
}

// Erasing a subset of an admissible pattern never delays any recovery, even
// when the subset itself breaks the gap rule.
TEST(Decoder, SubsetErasuresRecoverNoLater) {
  std::mt19937_64 rng(31);
  for (const auto* spec : {&sr_code(), &rd_code()}) {
    const Time length = 40;
    auto msgs = random_stream(spec->k(), length, 5);
    for (int trial = 0; trial < 200; ++trial) {
      auto full = sample_schedule(spec->b(), spec->horizon() + 1, 30, rng);
      std::vector<Time> sub;
      for (Time t : full.erased) {
        if (rng() & 1U) sub.push_back(t);
      }
      auto at_full = decode_erasing(*spec, msgs, full);
      auto at_sub = decode_erasing(*spec, msgs, ErasureSchedule(sub, spec->b(), 2));
      for (const auto& [key, when] : at_sub) {
        if (key.first >= 30) continue;
        ASSERT_TRUE(at_full.count(key));
        ASSERT_LE(when, at_full[key]);
      }
    }
  }
}
