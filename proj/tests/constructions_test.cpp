#include <gtest/gtest.h>

#include "tbsc/constructions.hpp"
#include "tbsc/errors.hpp"
#include "tbsc/oracle.hpp"

using namespace tbsc;

namespace {

std::vector<int> nonzero(const StreamCodeSpec& s) { return s.nonzero_parity_indices(); }

void expect_single_one(const BinMatrix& m, std::size_t r, std::size_t c) {
  EXPECT_EQ(m.count_ones(), 1U);
  EXPECT_TRUE(m.get(r, c));
}

}  // namespace

TEST(Mod1, RangeIsOneToN) {
  EXPECT_EQ(mod1(1, 3), 1);
  EXPECT_EQ(mod1(3, 3), 3);
  EXPECT_EQ(mod1(4, 3), 1);
  EXPECT_EQ(mod1(0, 3), 3);
  EXPECT_EQ(mod1(5, 1), 1);
}

TEST(TypeA, WorkedExampleSr) {
  auto s = build_type_a({2, 3, 5, 4});
  EXPECT_EQ(nonzero(s), (std::vector<int>{2, 4}));
  EXPECT_EQ(s.parity(2), BinMatrix::from_rows({"100", "010", "001", "000", "000"}));
  EXPECT_EQ(s.parity(4), BinMatrix::from_rows({"000", "000", "000", "100", "010"}));
}

TEST(TypeA, SingleGroup) {
  auto s = build_type_a({1, 3, 3, 1});
  EXPECT_EQ(nonzero(s), (std::vector<int>{1}));
  EXPECT_EQ(s.parity(1), BinMatrix::identity(3));
  EXPECT_EQ(predicted_profile_a({1, 3, 3, 1}).to_string(), "1,1,1");
}

TEST(TypeA, SmallCode) {
  auto s = build_type_a({1, 2, 3, 2});
  EXPECT_EQ(s.parity(1), BinMatrix::from_rows({"10", "01", "00"}));
  EXPECT_EQ(s.parity(2), BinMatrix::from_rows({"00", "00", "10"}));
  EXPECT_EQ(predicted_profile_a({1, 2, 3, 2}).to_string(), "1,1,2");
}

TEST(TypeA, HorizonTooShort) {
  EXPECT_THROW(build_type_a({2, 3, 5, 3}), InfeasibleParameters);
}

TEST(TypeB, WorkedExampleRd) {
  auto s = build_type_b({3, 5, 5});
  EXPECT_EQ(nonzero(s), (std::vector<int>{1, 2, 3, 5}));
  expect_single_one(s.parity(1), 1, 3);
  expect_single_one(s.parity(2), 2, 3);
  EXPECT_EQ(s.parity(3), BinMatrix::from_rows({"100", "010", "000", "000", "000"}));
  EXPECT_TRUE(s.parity(4).is_zero());
  EXPECT_EQ(s.parity(5), BinMatrix::from_rows({"000", "000", "100", "010", "001"}));
}

TEST(TypeB, RemainderEqualsBurst) {
  auto s = build_type_b({2, 4, 4});
  EXPECT_TRUE(s.parity(1).is_zero());
  EXPECT_EQ(nonzero(s), (std::vector<int>{2, 4}));
  // Same shape as a Type-A profile.
  EXPECT_EQ(predicted_profile_b({2, 4, 4}).to_string(), "2,2,4,4");
}

TEST(TypeB, SmallCode) {
  auto s = build_type_b({2, 3, 3});
  expect_single_one(s.parity(1), 1, 2);
  EXPECT_EQ(s.parity(2), BinMatrix::from_rows({"10", "00", "00"}));
  EXPECT_EQ(s.parity(3), BinMatrix::from_rows({"00", "10", "01"}));
  EXPECT_EQ(predicted_profile_b({2, 3, 3}).to_string(), "2,3,3");
}

TEST(TypeB, HorizonTooShort) {
  EXPECT_THROW(build_type_b({3, 5, 4}), InfeasibleParameters);
}

TEST(PredictedProfiles, WorkedExample) {
  EXPECT_EQ(predicted_profile_a({2, 3, 5, 4}).to_string(), "2,2,2,4,4");
  EXPECT_EQ(predicted_profile_b({3, 5, 5}).to_string(), "3,3,5,5,5");
}

TEST(ReducedMatrix, Examples) {
  auto m = reduced_p0_matrix(build_type_b({3, 5, 5}), 2);
  EXPECT_EQ(m.rows(), 6U);
  EXPECT_TRUE(is_invertible(m));
  EXPECT_TRUE(is_invertible(reduced_p0_matrix(build_type_b({2, 3, 3}), 1)));
  auto full = reduced_p0_matrix(build_type_b({3, 6, 6}), 3);
  EXPECT_TRUE(is_invertible(full));
  EXPECT_TRUE(is_permutation_matrix(full));
}

TEST(ReducedMatrix, InvertibleWithPermutationBlockUpToEight) {
  for (int b = 1; b <= 8; ++b) {
    for (int q = 1; q <= b; ++q) {
      auto code = build_type_b({b, q, std::max(q, b)});
      ASSERT_TRUE(is_invertible(reduced_p0_matrix(code, q))) << "b=" << b << " q=" << q;
      if (q < b) {
        ASSERT_TRUE(is_permutation_matrix(reduced_permutation_block(code, q)))
            << "b=" << b << " q=" << q;
      }
    }
  }
}

TEST(PermutationMatrix, Detects) {
  EXPECT_TRUE(is_permutation_matrix(BinMatrix::from_rows({"01", "10"})));
  EXPECT_FALSE(is_permutation_matrix(BinMatrix::from_rows({"11", "00"})));
  EXPECT_FALSE(is_permutation_matrix(BinMatrix::from_rows({"10", "10"})));
  EXPECT_FALSE(is_permutation_matrix(BinMatrix::from_rows({"10"})));
}

TEST(RateBound, Examples) {
  EXPECT_EQ(rate_bound(2, 3, 7), Rational(5, 8));
  EXPECT_EQ(rate_bound(3, 2, 8), Rational(2, 3));
  for (int b = 1; b <= 4; ++b) {
    for (int T = 2 * b; T <= 20; ++T) EXPECT_EQ(rate_bound(b, b, T), Rational(T - b, T));
  }
  EXPECT_THROW(rate_bound(2, 3, 4), InvalidParameters);
}

TEST(Feasibility, Examples) {
  EXPECT_TRUE(feasibility(2, 3, 5).feasible);
  EXPECT_FALSE(feasibility(2, 3, 6).feasible);
  auto r = feasibility(3, 2, 8);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.path, ConstructionPath::kSrTypeB);
  EXPECT_EQ(feasibility(2, 3, 7).path, ConstructionPath::kSrTypeA);
  EXPECT_EQ(feasibility(1, 1, 2).path, ConstructionPath::kEqualBurst);
  EXPECT_TRUE(feasibility(1, 1, 2).prior_work);
  EXPECT_EQ(feasibility(2, 3, 6).path, ConstructionPath::kNone);
  EXPECT_NE(feasibility(2, 3, 6).constraint().find("ceil"), std::string::npos);
}

TEST(Feasibility, FeasibleSetForTwoThree) {
  std::vector<int> feasible;
  for (int T = 5; T <= 20; ++T) {
    if (feasibility(2, 3, T).feasible) feasible.push_back(T);
  }
  std::vector<int> want{5};
  for (int T = 7; T <= 20; ++T) want.push_back(T);
  EXPECT_EQ(feasible, want);
}

TEST(Feasibility, EqualBurstsMeanDivisibility) {
  for (int b = 1; b <= 6; ++b) {
    for (int T = 2 * b; T <= 40; ++T) {
      EXPECT_EQ(feasibility(b, b, T).feasible, (T - b) % b == 0);
    }
  }
}

TEST(Feasibility, SufficientAndPriorWorkImplyFeasible) {
  for (int b1 = 1; b1 <= 6; ++b1) {
    for (int b2 = 1; b2 <= 6; ++b2) {
      for (int T = b1 + b2; T <= 40; ++T) {
        auto r = feasibility(b1, b2, T);
        if (r.sufficient) ASSERT_TRUE(r.feasible) << b1 << "," << b2 << "," << T;
        if (r.prior_work) ASSERT_TRUE(r.feasible) << b1 << "," << b2 << "," << T;
      }
    }
  }
}

TEST(ConstructionPath, TextRoundTrip) {
  for (auto p : {ConstructionPath::kSrTypeA, ConstructionPath::kSrTypeB,
                 ConstructionPath::kEqualBurst, ConstructionPath::kNone}) {
    EXPECT_EQ(parse_construction_path(to_string(p)), p);
  }
  EXPECT_THROW(parse_construction_path("sr-type-c"), std::invalid_argument);
}

TEST(BuildTbsc, WorkedExample) {
  auto spec = build_tbsc(2, 3, 7);
  EXPECT_EQ(spec.sr(), build_type_a({2, 3, 5, 4}));
  EXPECT_EQ(spec.rd(), build_type_b({3, 5, 5}));
  EXPECT_EQ(spec.sr().rate(), Rational(5, 8));
  EXPECT_EQ(spec.d_sr().to_string(), "2,2,2,4,4");
  EXPECT_EQ(spec.d_rd().to_string(), "3,3,5,5,5");
}

TEST(BuildTbsc, SwappedRoles) {
  auto spec = build_tbsc(3, 2, 8);
  EXPECT_EQ(spec.sr().rate(), Rational(2, 3));
  EXPECT_EQ(spec.sr(), build_type_b({3, 6, 6}));
  EXPECT_EQ(spec.rd(), build_type_a({2, 3, 6, 5}));
}

TEST(BuildTbsc, InfeasibleNamesConstraint) {
  try {
    build_tbsc(2, 3, 6);
    FAIL() << "expected InfeasibleParameters";
  } catch (const InfeasibleParameters& e) {
    EXPECT_NE(std::string(e.what()).find("ceil"), std::string::npos);
  }
}

// Every feasible instance in the sweep: rate optimal, parity vanishes outside
// the horizon, and predicted == oracle == measured on both hops.
TEST(BuildTbsc, ProfilesAndRatesOverSweep) {
  int instances = 0;
  for (int b1 = 1; b1 <= 5; ++b1) {
    for (int b2 = 1; b2 <= 5; ++b2) {
      for (int T = b1 + b2; T <= 20; ++T) {
        if (!feasibility(b1, b2, T).feasible) continue;
        ++instances;
        auto spec = build_tbsc(b1, b2, T);
        const auto bound = rate_bound(b1, b2, T);
        for (const auto* code : {&spec.sr(), &spec.rd()}) {
          ASSERT_EQ(code->rate(), bound);
          ASSERT_TRUE(code->parity(-1).is_zero());
          ASSERT_TRUE(code->parity(code->horizon() + 1).is_zero());
        }
        ASSERT_EQ(oracle_recovery_times(spec.sr()), spec.d_sr()) << b1 << "," << b2 << "," << T;
        ASSERT_EQ(oracle_recovery_times(spec.rd()), spec.d_rd()) << b1 << "," << b2 << "," << T;
        ASSERT_EQ(measure_delay_profile(spec.sr()), spec.d_sr());
        ASSERT_EQ(measure_delay_profile(spec.rd()), spec.d_rd());
      }
    }
  }
  EXPECT_GT(instances, 100);
}
