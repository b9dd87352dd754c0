#include <gtest/gtest.h>

#include <random>
#include <set>

#include "clq/field_identities.hpp"
#include "clq/field_tower.hpp"
#include "clq/special_set.hpp"
#include "support/oracle.hpp"

using namespace clq;

namespace {

struct Case {
  std::uint32_t p, h;
};

class TowerVsOracle : public ::testing::TestWithParam<Case> {
 protected:
  void SetUp() override {
    tower = std::make_unique<FieldTower>(FieldTower::build(GetParam().p, GetParam().h));
    ref = std::make_unique<oracle::Tower>(GetParam().p, GetParam().h, tower->polynomial());
  }
  std::unique_ptr<FieldTower> tower;
  std::unique_ptr<oracle::Tower> ref;
};

TEST_P(TowerVsOracle, PolynomialIsMonicAndPrimitive) {
  const auto& f = tower->polynomial();
  ASSERT_EQ(f.size(), tower->degree() + 1);
  EXPECT_EQ(f.back(), 1u);
  // x has full order in F_p[x]/(f)
  EXPECT_EQ(ref->E().order(GetParam().p), tower->order());
  EXPECT_EQ(tower->alpha().index, GetParam().p);
}

TEST_P(TowerVsOracle, ProductsAndSumsMatchSchoolbook) {
  const auto& E = ref->E();
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::uint32_t> pick(0, tower->size() - 1);
  const bool all = tower->size() <= 125;
  const std::uint32_t n = all ? tower->size() : 4000;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < (all ? tower->size() : 1); ++j) {
      const std::uint32_t a = all ? i : pick(rng), b = all ? j : pick(rng);
      ASSERT_EQ(tower->mul({a}, {b}).index, E.mul(a, b)) << a << "*" << b;
      ASSERT_EQ(tower->add({a}, {b}).index, E.add(a, b)) << a << "+" << b;
      ASSERT_EQ(tower->sub({a}, {b}).index, E.sub(a, b));
    }
}

TEST_P(TowerVsOracle, InverseFrobeniusPow) {
  const auto& E = ref->E();
  const std::uint32_t q = tower->q();
  for (std::uint32_t a = 1; a < tower->size(); ++a) {
    ASSERT_EQ(tower->mul({a}, tower->inv({a})), tower->one());
    ASSERT_EQ(tower->frobenius({a}).index, E.pow(a, q));
    ASSERT_EQ(tower->frobenius({a}, 2).index, E.pow(a, std::uint64_t{q} * q));
  }
  EXPECT_EQ(tower->pow({GetParam().p}, 12345).index, E.pow(GetParam().p, 12345));
}

TEST_P(TowerVsOracle, TraceAndNormFromFrobenius) {
  for (std::uint32_t a = 0; a < tower->size(); ++a) {
    ASSERT_EQ(tower->trace({a}).index, ref->T(a)) << a;
    ASSERT_EQ(tower->norm({a}).index, ref->N(a)) << a;
  }
}

TEST_P(TowerVsOracle, SubfieldAndOmega) {
  std::set<std::uint32_t> lib;
  for (std::uint32_t a = 0; a < tower->size(); ++a)
    if (tower->in_subfield({a})) lib.insert(a);
  EXPECT_EQ(lib, std::set<std::uint32_t>(ref->F().begin(), ref->F().end()));

  const Element w = tower->omega();
  EXPECT_TRUE(ref->in_F(w.index));
  EXPECT_EQ(ref->E().order(w.index), tower->q() - 1);
  // the default sign is alpha^(-(q^2+q+1))
  const std::uint32_t alpha = GetParam().p;
  EXPECT_EQ(ref->E().mul(w.index, ref->E().pow(alpha, tower->plane_order())), 1u);
  for (std::uint32_t k = 0; k < tower->q() - 1; ++k) EXPECT_EQ(tower->subfield_log(tower->pow(w, k)), k);
}

TEST_P(TowerVsOracle, QuadraticCharacterIsEuler) {
  for (std::uint32_t a = 0; a < tower->size(); ++a) ASSERT_EQ(tower->chi2({a}), ref->chi2(a)) << a;
}

TEST_P(TowerVsOracle, SpecialSetByDefinition) {
  if (!is_admissible_q(tower->q())) {
    EXPECT_THROW(build_special_set(*tower), Error);
    return;
  }
  const auto S = build_special_set(*tower);
  std::set<std::uint32_t> want;
  const auto& E = ref->E();
  for (std::uint32_t a = 1; a < E.size(); ++a)
    if (ref->N(a) == 1 && ref->T(E.mul(a, a)) == 0) want.insert(a);
  std::set<std::uint32_t> got;
  for (auto a : S.elements) got.insert(a.index);
  EXPECT_EQ(got, want);
  EXPECT_EQ(S.size(), tower->q() + 1);
}

TEST_P(TowerVsOracle, IdentitySuitesPass) {
  for (const auto& r : verify_field_identities(*tower)) EXPECT_TRUE(r.pass()) << r.name << ": " << (r.failures.empty() ? "" : r.failures[0]);
  if (is_admissible_q(tower->q())) {
    for (const auto& r : verify_cyclic_plane_model(*tower)) EXPECT_TRUE(r.pass()) << r.name;
  }
}

INSTANTIATE_TEST_SUITE_P(SmallFields, TowerVsOracle, ::testing::Values(Case{5, 1}, Case{3, 2}, Case{7, 1}, Case{3, 1}),
                         [](const auto& info) { return "p" + std::to_string(info.param.p) + "h" + std::to_string(info.param.h); });

TEST(FieldTower, PlusSignGivesInverseOmega) {
  TowerOptions o;
  o.omega_sign = OmegaSign::plus;
  const auto plus = FieldTower::build(5, 1, o);
  const auto minus = FieldTower::build(5, 1);
  EXPECT_EQ(plus.mul(plus.omega(), minus.omega()), plus.one());
}

TEST(FieldTower, RejectsBadInput) {
  try {
    FieldTower::build(9, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPrime);
  }
  TowerOptions tiny;
  tiny.max_table_entries = 1000;
  try {
    FieldTower::build(11, 1, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeTooLarge);
  }
  const auto t7 = FieldTower::build(7, 1);
  try {
    require_admissible(t7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidQ);
  }
}

TEST(FieldTower, AdmissibleResidues) {
  for (std::uint32_t q : {5u, 9u, 17u, 29u, 81u}) EXPECT_TRUE(is_admissible_q(q)) << q;
  for (std::uint32_t q : {3u, 7u, 11u, 13u, 25u, 27u}) EXPECT_FALSE(is_admissible_q(q)) << q;
}

TEST(FieldTower, Q17Tables) {
  const auto t = FieldTower::build(17, 1);
  EXPECT_EQ(t.size(), 4913u);
  const oracle::Tower ref(17, 1, t.polynomial());
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::uint32_t> pick(0, t.size() - 1);
  for (int k = 0; k < 2000; ++k) {
    const std::uint32_t a = pick(rng), b = pick(rng);
    ASSERT_EQ(t.mul({a}, {b}).index, ref.E().mul(a, b));
    ASSERT_EQ(t.trace({a}).index, ref.T(a));
  }
}

}  // namespace
