#include <gtest/gtest.h>

#include <cmath>

#include "pdm/radial_model.hpp"

using namespace pdm;

namespace {

void expect_eta(const EtaSet& e, double e1, double e2, double e3, double e4, double e5, double tol) {
  EXPECT_NEAR(e.eta1, e1, tol);
  EXPECT_NEAR(e.eta2, e2, tol);
  EXPECT_NEAR(e.eta3, e3, tol);
  EXPECT_NEAR(e.eta4, e4, tol);
  EXPECT_NEAR(e.eta5, e5, tol);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::argument;
}

}  // namespace

TEST(EffectiveDelta, Examples) {
  PhysicalConstants k;
  EXPECT_EQ(effective_delta({0, 0}, {0, 0}, k), 0.0);
  EXPECT_EQ(effective_delta({0, 1}, {0, 0}, k), 1.0);
  EXPECT_EQ(effective_delta({0, 1}, {0, 0.5}, k), 1.5);
}

TEST(EtaExponential, FieldAndPotentialFree) {
  const auto e = eta_exponential(1.0, {0, 0, 0, 1.0}, 0.0, {0, 0}, {0, 1}, {});
  expect_eta(e, 2, -1, 0, 0, 0, 0.0);
}

TEST(EtaExponential, GoldenTuple) {
  // V1=1 V2=2 V3=3 lambda=0.5 a=0.1 E=-1 B=1 delta=1
  const auto e = eta_exponential(-1.0, {1, 2, 3, 0.5}, 0.1, {1, 0}, {0, 1}, {});
  expect_eta(e, -9.6, -1, -6, 5.83, -0.76, 1e-13);
}

TEST(EtaExponential, DeltaEntersOnlyEta1AndEta2) {
  const PotentialParams p{0.3, 0.7, 0.2, 0.9};
  const FieldConfig f{1.7, 0.0};
  const auto e1 = eta_exponential(0.4, p, 0.3, f, {0, 1}, {});
  const auto e2 = eta_exponential(0.4, p, 0.3, f, {0, 3}, {});
  EXPECT_NEAR(e2.eta1 - e1.eta1, -1.7 * 2.0, 1e-13);
  EXPECT_EQ(e1.eta2, -1.0);
  EXPECT_EQ(e2.eta2, -9.0);
  EXPECT_EQ(e1.eta3, e2.eta3);
  EXPECT_EQ(e1.eta4, e2.eta4);
  EXPECT_EQ(e1.eta5, e2.eta5);
}

TEST(EtaInverseSquare, TrivialCases) {
  const auto e0 = eta_inverse_square(0.0, {0, 0, 0, 1}, 1.0, {0, 0}, {0, 2}, {});
  expect_eta(e0, 0, -4, 0, 0, 0, 0.0);
  const auto e1 = eta_inverse_square(1.0, {0, 0, 0, 1}, 1.0, {0, 0}, {0, 2}, {});
  expect_eta(e1, 0, -4 + 2, 0, 0, 0, 0.0);
}

TEST(EtaInverseSquare, GoldenTuple) {
  // V1=1 V2=0.5 lambda=1 a=2 E=-3 B=1 delta=2
  const auto e = eta_inverse_square(-3.0, {1, 0.5, 0, 1}, 2.0, {1, 0}, {0, 2}, {});
  expect_eta(e, 4, -4, -8, -10.0 / 3.0, -1.75, 1e-13);
}

TEST(EtaInverseSquare, RejectsV3) {
  EXPECT_EQ(kind_of([] { eta_inverse_square(0, {0, 0, 1, 1}, 1, {}, {}, {}); }),
            ErrorKind::invalid_parameter);
}

TEST(EtaInverseSquare, Eta3NonPositiveForPositiveInputs) {
  for (double V1 : {0.0, 0.5, 2.0}) {
    for (double V2 : {0.0, 0.1, 3.0}) {
      EXPECT_LE(eta_inverse_square(1.0, {V1, V2, 0, 0.7}, 1.3, {1, 0}, {0, 0}, {}).eta3, 0.0);
    }
  }
}

TEST(Reduce, ExponentialZeroEpsIsScalingError) {
  EXPECT_EQ(kind_of([] { reduce({2, -1, 0, 0, 0}, MassCase::exponential(0)); }), ErrorKind::scaling);
}

TEST(Reduce, ExponentialArithmetic) {
  const auto r = reduce({2, -1, 0.5, -0.3, -4}, MassCase::exponential(1.0));
  EXPECT_DOUBLE_EQ(r.xi, 1.75);
  EXPECT_DOUBLE_EQ(r.alpha_sq, 1.0);
  EXPECT_DOUBLE_EQ(r.c1, 0.25);
  EXPECT_DOUBLE_EQ(r.b1, 0.3);
  EXPECT_DOUBLE_EQ(r.eps, 4.0);
}

TEST(Reduce, InverseSquareAlpha) {
  const auto r = reduce({0, -0.25, 0, 0, -1}, MassCase::inverse_square(1.0));
  EXPECT_DOUBLE_EQ(r.alpha_sq, 1.0);
}

TEST(Reduce, ComplexIndex) {
  EXPECT_EQ(kind_of([] { reduce({0, 1.0, 0, 0, -1}, MassCase::inverse_square(1.0)); }),
            ErrorKind::complex_index);
  try {
    reduce({0, 1.0, 0, 0, -1}, MassCase::inverse_square(1.0));
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("-0.25"), std::string::npos);
  }
}

TEST(Reduce, StationaryLimitLeavesXiAndC1) {
  const PotentialParams p{0.4, 0.2, 0.3, 0.5};
  const auto e = eta_exponential(0.7, p, 0.0, {1.5, 0.5}, {0, 1}, {});
  const auto r = reduce(e, MassCase::exponential(0.0));
  EXPECT_EQ(r.xi, e.eta1);
  EXPECT_EQ(r.c1, e.eta3);
}

TEST(Scale, Examples) {
  const auto s0 = scale({4, 0, 0, 0, 4});
  EXPECT_EQ(s0.alpha, 0.0);
  EXPECT_EQ(s0.eta_s, 0.0);
  EXPECT_EQ(s0.b_tilde, 0.0);
  EXPECT_EQ(s0.delta1, 0.5);
  EXPECT_DOUBLE_EQ(s0.delta3, 0.0);
  EXPECT_FALSE(s0.delta2.has_value());

  EXPECT_DOUBLE_EQ(scale({0, 0, 0, 8, 16}).b_tilde, 1.0);

  const auto s = scale({6, 1, 2, 1, 1});
  EXPECT_DOUBLE_EQ(s.delta3, 2.25);
  ASSERT_TRUE(s.delta2.has_value());
  EXPECT_DOUBLE_EQ(*s.delta2, 0.25);
  EXPECT_GE(s.delta1, 0.5);
}

TEST(Scale, RejectsInvalid) {
  EXPECT_EQ(kind_of([] { scale({0, 1, 0, 0, 0}); }), ErrorKind::scaling);
  EXPECT_EQ(kind_of([] { scale({0, -1, 0, 0, 1}); }), ErrorKind::complex_index);
}

TEST(MassCase, Validation) {
  EXPECT_NO_THROW(MassCase::exponential(0.0));
  EXPECT_THROW(MassCase::exponential(-0.1), Error);
  EXPECT_THROW(MassCase::inverse_square(0.0), Error);
  EXPECT_NO_THROW(MassCase::inverse_square(-2.0));
  EXPECT_EQ(parse_mass_kind("inverse-square"), MassKind::inverse_square);
  EXPECT_THROW(parse_mass_kind("cubic"), Error);
}

TEST(SystemParams, FiniteChainInNaturalUnits) {
  SystemParams s;
  s.mass = MassCase::exponential(0.5);
  s.potential = {0.5, 0.5, 0.5, 0.1};
  s.fields = {1, 1};
  s.quantum = {1, 0};
  const auto sc = scaled_at(0.3, s);
  for (double v : {sc.alpha, sc.eta_s, sc.b_tilde, sc.delta1, sc.delta3}) EXPECT_TRUE(std::isfinite(v));
}
