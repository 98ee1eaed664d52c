#include <doctest.h>

#include "symplectic/errors.hpp"
#include "symplectic/verify.hpp"

using namespace symplectic;

TEST_SUITE("verify") {

TEST_CASE("every suite passes on a fresh build") {
  for (const char* suite : {"rkg", "history", "carleman", "bounds"}) {
    const auto checks = run_verify(suite);
    CHECK_MESSAGE(all_passed(checks), format_checks(checks));
  }
}

TEST_CASE("results do not depend on the thread count") {
  VerifyOptions one;
  one.seed = 3;
  VerifyOptions four = one;
  four.threads = 4;
  CHECK(format_checks(run_verify("history", one)) ==
        format_checks(run_verify("history", four)));
  const auto a = symplectic_ensemble(12, 9, 1);
  const auto b = symplectic_ensemble(12, 9, 3);
  CHECK(a.max_defect == b.max_defect);
}

TEST_CASE("corrupted tableau breaks the order check only") {
  VerifyOptions opts;
  opts.corrupt_tableau = true;
  const auto checks = run_verify("rkg", opts);
  for (const auto& c : checks) {
    if (c.name == "step.order") {
      CHECK_FALSE(c.passed);
    } else {
      CHECK(c.passed);
    }
  }
  CHECK_THROWS_AS(run_verify("everything"), ParameterDomainError);
}

TEST_CASE("report format") {
  const std::vector<CheckResult> checks{{"a.b", true, 0.5, 1.0}, {"c", false, 2.0, 1.0}};
  CHECK(format_checks(checks) ==
        "check_name,status,measured,threshold\na.b,pass,0.5,1\nc,fail,2,1\n");
  CHECK_FALSE(all_passed(checks));
}

}  // TEST_SUITE
