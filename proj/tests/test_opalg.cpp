#include <doctest.h>

#include <cmath>

#include "ncgw/opalg.hpp"

using namespace ncgw;

namespace {

const AlgebraRelation& find_relation(const AlgebraReport& rep,
                                     const std::string& name) {
  for (const auto& r : rep.relations)
    if (r.relation == name) return r;
  REQUIRE(false);
  return rep.relations.front();
}

cplx channel(const AlgebraRelation& rel, const std::string& name, bool oracle) {
  for (const auto& ch : rel.channels)
    if (ch.name == name) return oracle ? ch.oracle : ch.measured;
  REQUIRE(false);
  return {};
}

} // namespace

TEST_SUITE("opalg") {

TEST_CASE("canonical commutators hold on the interior") {
  const OperatorSet ops = build_canonical_ops(12, 1.0, 1.0);
  const auto id = Eigen::MatrixXcd::Identity(144, 144);
  const Eigen::MatrixXcd xpx = ops.x * ops.px - ops.px * ops.x;
  CHECK(interior_block(xpx - I * id, ops).norm() < 1e-12);
  const Eigen::MatrixXcd xy = ops.x * ops.y - ops.y * ops.x;
  CHECK(interior_block(xy, ops).norm() < 1e-13);
  const Eigen::MatrixXcd xpy = ops.x * ops.py - ops.py * ops.x;
  CHECK(interior_block(xpy, ops).norm() < 1e-13);
}

TEST_CASE("operator set validates its input") {
  CHECK_THROWS_AS(build_canonical_ops(6, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_canonical_ops(13, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_canonical_ops(12, 1.0, 0.0), ConfigError);
}

TEST_CASE("commutator table of the well Hamiltonian") {
  const PhysicalParams p;
  const OperatorSet ops = build_canonical_ops(12, p.hbar, 1.0);
  const AlgebraReport rep = verify_quasi_algebra(ops, p, 1e-8);
  CHECK(rep.all_close);

  const auto& hx = find_relation(rep, "[H,x]");
  CHECK(std::abs(channel(hx, "px", true) - cplx(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(channel(hx, "y", true) - cplx(0.0, -0.05)) < 1e-12);
  CHECK(std::abs(channel(hx, "px", false) - cplx(0.0, -1.0)) < 1e-10);

  const auto& hy = find_relation(rep, "[H,y]");
  CHECK(std::abs(channel(hy, "py", true) - cplx(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(channel(hy, "x", true) - cplx(0.0, 0.05)) < 1e-12);
  CHECK(std::abs(channel(hy, "1", true) - cplx(0.0, 0.025)) < 1e-12);

  const auto& hpx = find_relation(rep, "[H,px]");
  CHECK(std::abs(channel(hpx, "py", false) - cplx(0.0, -0.05)) < 1e-10);
  CHECK(std::abs(channel(hpx, "px", false)) < 1e-10);
  CHECK(std::abs(channel(hpx, "x", false) - cplx(0.0, 0.0025)) < 1e-10);
  CHECK(std::abs(channel(hpx, "1", false) - cplx(0.0, 1.0)) < 1e-10);
  CHECK_FALSE(hpx.matches_formula);

  const auto& hpy = find_relation(rep, "[H,py]");
  CHECK(std::abs(channel(hpy, "px", false) - cplx(0.0, 0.05)) < 1e-10);
  CHECK(std::abs(channel(hpy, "y", false) - cplx(0.0, 0.0025)) < 1e-10);
  CHECK(hpy.matches_formula);

  // exactly the two [H, px] channels carry the transcription slip
  CHECK(rep.formula_mismatches == 2);
  for (const auto& r : rep.relations) CHECK(r.fit_residual < 1e-8);
}

TEST_CASE("span fit rejects out-of-span targets") {
  const OperatorSet ops = build_canonical_ops(12, 1.0, 1.0);
  const SpanFit in = fit_in_span(
      interior_block(2.0 * ops.x - 0.3 * I * ops.py, ops), ops);
  CHECK(in.residual < 1e-12);
  CHECK(std::abs(in.coeff[0] - 2.0) < 1e-12);
  CHECK(std::abs(in.coeff[3] + 0.3 * I) < 1e-12);
  const SpanFit out = fit_in_span(interior_block(ops.x * ops.x, ops), ops);
  CHECK(out.residual > 0.1);
}

TEST_CASE("closed-form invariant is invariant") {
  const PhysicalParams p;
  const CoeffSet cs = closed_form_coeffs(p);
  const OperatorSet ops = build_canonical_ops(12, p.hbar, 1.0);
  const InvarianceChecker chk(ops, p);
  for (const double t : {0.0, 7.0, 20.0, 44.0, 61.0})
    CHECK(chk.residual(cs, t) < 1e-10);
}

TEST_CASE("solutions form a complex line in the mode normalization") {
  PhysicalParams p;
  p.m = 2.0;
  p.g = 3.0;
  const OperatorSet ops = build_canonical_ops(12, p.hbar, 1.0);
  const InvarianceChecker chk(ops, p);
  CoeffSet cs = closed_form_coeffs(p);
  CHECK(chk.residual(cs, 3.0) < 1e-10);
  cs.b1 *= 1.7 * std::exp(I * 0.3);
  CHECK(chk.residual(cs, 3.0) < 1e-10);
}

TEST_CASE("ladder algebra at the canonical normalization") {
  const PhysicalParams p;
  const CoeffSet cs = closed_form_coeffs(p);
  const OperatorSet ops = build_canonical_ops(16, p.hbar, 1.0);
  const LadderReport rep = ladder_check(ops, cs, 2.0, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.target == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.cross_dev < 1e-10);
  CHECK(rep.diag_dev[0] < 1e-10);
  CHECK(rep.diag_dev[1] < 1e-10);
  CHECK(rep.recompose_dev < 1e-10);
}

TEST_CASE("ladder target scales with the mode normalization") {
  PhysicalParams p;
  p.m = 2.0;
  p.eta = 0.3;
  const CoeffSet cs = closed_form_coeffs(p);
  const OperatorSet ops = build_canonical_ops(12, p.hbar, 1.0);
  const LadderReport rep = ladder_check(ops, cs, 0.0, 1e-8);
  // |B1| = sqrt(eta)/(m hbar) makes the target exactly one again
  CHECK(rep.target == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.pass);
}

} // TEST_SUITE
