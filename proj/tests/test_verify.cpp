#include <doctest.h>

#include <cmath>

#include "entspec/verify.hpp"

using namespace entspec;

TEST_CASE("fast suite passes and reports residuals") {
  const auto r = run_verify(VerifyLevel::Fast);
  REQUIRE_FALSE(r.checks.empty());
  for (const auto& c : r.checks) {
    CHECK_MESSAGE(c.passed, c.name << " residual " << c.residual << " tolerance " << c.tolerance << " " << c.detail);
    CHECK(std::isfinite(c.residual));
    CHECK(c.tolerance > 0.0);
  }
  CHECK(r.all_passed());

  bool has_beta = false;
  for (const auto& c : r.checks) has_beta = has_beta || c.name == "phase_solver.beta_at_u_C(1)";
  CHECK(has_beta);
}
