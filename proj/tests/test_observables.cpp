#include <doctest.h>

#include <cmath>

#include "ncgw/observables.hpp"

using namespace ncgw;

namespace {

PhysicalParams scan_params() {
  PhysicalParams p;
  p.tau = 7.853981633974483; // omega tau = pi/4
  p.kappa = 1.0;
  return p;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

} // namespace

TEST_SUITE("observables") {

TEST_CASE("exact product law at frozen times") {
  const CoeffSet cs = closed_form_coeffs(scan_params());
  CHECK(law_product(cs, 0.0)
        == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(law_product(cs, 2.0) == doctest::Approx(0.65390735).epsilon(1e-7));
  CHECK(law_product(cs, 5.0) == doctest::Approx(0.60478891).epsilon(1e-7));
  CHECK(law_product(cs, 7.853981633974483)
        == doctest::Approx(0.5773502691896258).epsilon(1e-12));
  CHECK(law_sigma_x(cs, 2.0) == doctest::Approx(3.27677).epsilon(1e-5));
}

TEST_CASE("grid moments track the law") {
  const CoeffSet cs = closed_form_coeffs(scan_params());
  const auto scan = scan_uncertainty(cs, {2.0, 5.0}, 128, 10.0, 64);
  REQUIRE(scan.size() == 2);
  CHECK(scan[0].product_oracle
        == doctest::Approx(law_product(cs, 2.0)).epsilon(1e-5));
  CHECK(scan[1].product_oracle
        == doctest::Approx(law_product(cs, 5.0)).epsilon(1e-5));
  CHECK(scan[0].flag == kFlagNone);
}

TEST_CASE("closed-form product factor and its breakdown points") {
  const PhysicalParams p = scan_params();
  // at the minima the factor collapses to 2 csc(omega tau)
  CHECK(f_closed_form(p, 7.853981633974483)
        == doctest::Approx(2.8284271247461903).epsilon(1e-9));
  // the denominator vanishes at t = 0 for every offset
  CHECK(std::abs(f_closed_form(p, 1e-9)) > 1e12);
  PhysicalParams q = p;
  q.tau = 3.0;
  CHECK(std::abs(f_closed_form(q, 1e-9)) > 1e12);
}

TEST_CASE("degenerate auxiliary constants are flagged, not propagated") {
  const PhysicalParams p = scan_params();
  CHECK(aux_values(p, 0.0).degenerate);
  CHECK_FALSE(aux_values(p, 2.0).degenerate);
  CHECK(formula_expectations(p, 0.0).degenerate);
  const FormulaExpectations fe = formula_expectations(p, 2.0);
  CHECK_FALSE(fe.degenerate);
  CHECK(std::isnan(formula_expectations(p, 0.0).var_x));
  // frozen-offset identity linking the two normalization families
  const AuxVals v = aux_values(p, 2.0);
  CHECK(v.a0 * v.beta0
        == doctest::Approx(v.b0 * v.beta1).epsilon(1e-12));
  // the stated x-momentum dispersion stays complex
  CHECK(std::abs(fe.var_px.imag()) > 1e-6);
}

TEST_CASE("negative factor regions are marked invalid") {
  PhysicalParams q = scan_params();
  q.tau = 10.471975511965978; // omega tau = pi/3
  const CoeffSet cs = closed_form_coeffs(q);
  const auto scan = scan_uncertainty(cs, linspace(3.0, 40.0, 9), 128, 10.0, 64);
  bool saw_invalid = false;
  for (const auto& s : scan)
    if (s.flag & kFlagFormulaInvalid) {
      saw_invalid = true;
      CHECK(std::isnan(s.product_formula));
    }
  CHECK(saw_invalid);
}

TEST_CASE("minima: spacing, strictness, periodicity") {
  const CoeffSet cs = closed_form_coeffs(scan_params());
  const auto ts = linspace(1.0, 62.0, 41);
  const auto scan = scan_uncertainty(cs, ts, 128, 10.0, 64);
  const auto minima = refine_minima(cs, scan, 128, 10.0, 64, 1e-6);
  REQUIRE(minima.size() == 4);
  const double quarter = 15.707963267948966;
  for (size_t k = 0; k < minima.size(); ++k) {
    CHECK(std::abs(minima[k].t - (7.853981633974483 + quarter * k))
          < 1e-4 * quarter);
    CHECK(minima[k].value == doctest::Approx(0.5773502691896258).epsilon(1e-4));
    CHECK(minima[k].value > 0.5);
  }
  // the law is periodic under a quarter-period shift
  CHECK(law_product(cs, 3.0)
        == doctest::Approx(law_product(cs, 3.0 + quarter)).epsilon(1e-12));
}

TEST_CASE("golden minimizer brackets a parabola") {
  double fmin = 0.0;
  const double t =
      golden_minimize([](double x) { return (x - 2.5) * (x - 2.5) + 1.0; },
                      0.0, 5.0, 1e-9, &fmin);
  CHECK(t == doctest::Approx(2.5).epsilon(1e-7));
  CHECK(fmin == doctest::Approx(1.0).epsilon(1e-12));
}

} // TEST_SUITE
