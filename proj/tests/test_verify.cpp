#include <gtest/gtest.h>

#include <cmath>

#include "rank1/verify.hpp"

namespace rank1 {
namespace {

// t_{ijk} = i + j with 1-based indices.
Tensor mixed_fixture() {
  return Tensor::generate({2, 2, 2}, [](const MultiIndex& i) { return double(i[0] + i[1] + 2); });
}

ExperimentSpec spec_of(ExperimentKind kind, std::size_t n, std::size_t d, int samples, std::uint64_t seed) {
  ExperimentSpec s;
  s.kind = kind;
  s.n = n;
  s.d = d;
  s.samples = samples;
  s.seed = seed;
  return s;
}

TEST(VerifySymmetric, RandomBinaryCubics) {
  const VerifyReport r = run_verify_symmetric(spec_of(ExperimentKind::verify_symmetric, 2, 3, 40, 42));
  EXPECT_EQ(r.samples.size(), 40u);
  EXPECT_TRUE(r.all_pass());
  EXPECT_TRUE(r.exhaustive);
  for (const auto& s : r.samples) {
    EXPECT_LE(s.at("general_enum_gap").get<double>(), 1e-6);
    EXPECT_FALSE(s.at("nongeneric").get<bool>());
  }
}

TEST(VerifySymmetric, ThreeVariablesIsNotExhaustive) {
  ExperimentSpec s = spec_of(ExperimentKind::verify_symmetric, 3, 3, 10, 5);
  s.restarts = 64;
  const VerifyReport r = run_verify_symmetric(s);
  EXPECT_TRUE(r.all_pass());
  EXPECT_FALSE(r.exhaustive);
  EXPECT_FALSE(r.samples[0].contains("enumeration_max"));
}

TEST(VerifySymmetric, FamilyIsFlaggedNongeneric) {
  ExperimentSpec s = spec_of(ExperimentKind::verify_symmetric, 2, 3, 1, 0);
  s.theta = 0.0;
  const VerifyReport r = run_verify_symmetric(s);
  ASSERT_EQ(r.samples.size(), 1u);
  const auto& rec = r.samples[0];
  EXPECT_TRUE(rec.at("pass").get<bool>());
  EXPECT_LE(rec.at("value_gap").get<double>(), 1e-10);
  EXPECT_LE(rec.at("uniqueness_gap").get<double>(), 1e-10);
  EXPECT_TRUE(rec.at("nongeneric").get<bool>());
  EXPECT_NEAR(rec.at("enumeration_max").get<double>(), 1.0, 1e-12);
}

TEST(VerifySymmetric, RejectsNonsymmetricInput) {
  ExperimentSpec s = spec_of(ExperimentKind::verify_symmetric, 2, 3, 1, 0);
  s.input = mixed_fixture();
  EXPECT_THROW(run_verify_symmetric(s), DomainError);
}

TEST(VerifyPartial, MixedFixture) {
  ExperimentSpec s = spec_of(ExperimentKind::verify_partial_symmetry, 2, 3, 1, 0);
  s.input = mixed_fixture();
  const VerifyReport r = run_verify_partial_symmetry(s);
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_LE(r.samples[0].at("value_gap").get<double>(), 1e-10);
  EXPECT_EQ(r.samples[0].at("partition").dump(), "[[1,2],[3]]");
  EXPECT_TRUE(r.all_pass());
}

TEST(VerifyPartial, RandomDefaultPartition) {
  const VerifyReport r = run_verify_partial_symmetry(spec_of(ExperimentKind::verify_partial_symmetry, 2, 3, 30, 7));
  EXPECT_TRUE(r.all_pass());
  EXPECT_FALSE(r.exhaustive);
  for (const auto& s : r.samples) EXPECT_EQ(s.at("partition").dump(), "[[1,2],[3]]");
}

TEST(VerifyPartial, WholePartitionMatchesSymmetricRun) {
  ExperimentSpec p = spec_of(ExperimentKind::verify_partial_symmetry, 2, 3, 5, 11);
  p.partition = ModePartition::whole(3);
  const VerifyReport rp = run_verify_partial_symmetry(p);
  const VerifyReport rs = run_verify_symmetric(spec_of(ExperimentKind::verify_symmetric, 2, 3, 5, 11));
  ASSERT_TRUE(rp.all_pass());
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(std::abs(rp.samples[i].at("tied_value").get<double>()),
                std::abs(rs.samples[i].at("symmetric_value").get<double>()), 1e-9);
  }
}

TEST(VerifyPerturbation, FamilyLimit) {
  ExperimentSpec s = spec_of(ExperimentKind::verify_perturbation, 2, 3, 1, 0);
  s.theta = 0.0;
  const VerifyReport r = run_verify_perturbation(s);
  ASSERT_EQ(r.samples.size(), 1u);
  const auto& rec = r.samples[0];
  EXPECT_TRUE(rec.at("traceless").get<bool>());
  EXPECT_NEAR(rec.at("limit_value").get<double>(), 1.0, 1e-6);
  const auto x = rec.at("limit_point").get<Vector>();
  EXPECT_NEAR(x[0], 1.0, 1e-6);
  EXPECT_NEAR(x[1], 0.0, 1e-6);
  EXPECT_TRUE(rec.at("gaps_shrinking").get<bool>());
  EXPECT_TRUE(rec.at("pass").get<bool>());
}

TEST(VerifyPerturbation, RandomTracelessHigherDegree) {
  for (std::size_t d : {3u, 4u, 5u}) {
    const VerifyReport r = run_verify_perturbation(spec_of(ExperimentKind::verify_perturbation, 2, d, 2, 3));
    EXPECT_TRUE(r.all_pass()) << "d=" << d;
    for (const auto& s : r.samples) EXPECT_TRUE(s.at("traceless").get<bool>());
  }
}

TEST(VerifyReport, DeterministicWithoutTiming) {
  const auto spec = spec_of(ExperimentKind::verify_symmetric, 2, 4, 8, 99);
  EXPECT_EQ(run_verify(spec).to_json(false).dump(), run_verify(spec).to_json(false).dump());
  const auto other = spec_of(ExperimentKind::verify_symmetric, 2, 4, 8, 100);
  EXPECT_NE(run_verify(spec).to_json(false).dump(), run_verify(other).to_json(false).dump());
}

TEST(VerifyReport, Schema) {
  const Json j = run_verify(spec_of(ExperimentKind::verify_partial_symmetry, 2, 3, 3, 1)).to_json(false);
  for (const char* key : {"spec", "samples", "aggregate", "wall_ms"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j.at("wall_ms").is_null());
  EXPECT_EQ(j.at("samples").size(), 3u);
  EXPECT_EQ(j.at("aggregate").at("total").get<int>(), 3);
  EXPECT_EQ(j.at("spec").at("seed").get<std::uint64_t>(), 1u);
  for (const auto& s : j.at("samples")) {
    // Flat records: the pass flag is recomputable from the fields beside it.
    for (const auto& [k, v] : s.items()) EXPECT_FALSE(v.is_object()) << k;
    const bool pass = s.at("value_gap").get<double>() <= s.at("tol").get<double>() &&
                      s.at("free_certificate_ok").get<bool>() && s.at("tied_certificate_ok").get<bool>();
    EXPECT_EQ(pass, s.at("pass").get<bool>());
  }
}

TEST(ExperimentSpec, Validation) {
  auto s = spec_of(ExperimentKind::verify_symmetric, 2, 3, 0, 0);
  EXPECT_THROW(s.validate(), DomainError);
  s = spec_of(ExperimentKind::census, 3, 3, 1, 0);
  EXPECT_THROW(s.validate(), DomainError);
  s = spec_of(ExperimentKind::verify_perturbation, 2, 3, 1, 0);
  s.eps_list = {1e-2, -1.0};
  EXPECT_THROW(s.validate(), DomainError);
  s = spec_of(ExperimentKind::verify_symmetric, 2, 3, 1, 0);
  s.tolerances["value"] = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
}

}  // namespace
}  // namespace rank1
