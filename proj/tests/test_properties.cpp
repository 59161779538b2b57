#include "doctest.h"
#include "support/properties.hpp"

using properties::SuiteResult;

namespace {

void require_clean(const SuiteResult& result, int expectedCases) {
    CHECK(result.cases >= expectedCases);
    if (result.failures != 0) FAIL_CHECK(result.note);
    CHECK(result.failures == 0);
}

}  // namespace

TEST_CASE("zero-budget solutions scale exactly with the demand") {
    require_clean(properties::homogeneity_suite(200, 101), 200);
}

TEST_CASE("optimal objectives never increase with the interruption budget") {
    require_clean(properties::budget_monotonicity_suite(200, 202), 200);
}

TEST_CASE("emitted big-M rows force the evaluate meter") {
    require_clean(properties::bigm_agreement_suite(200, 303), 200);
}

TEST_CASE("zero-budget closed form agrees with the dense grid") {
    require_clean(properties::zero_budget_oracle_suite(200, 404), 200);
}

TEST_CASE("breakpoint search stays within grid slack of the reference") {
    require_clean(properties::breakpoints_dominance_suite(200, 505), 200);
}

TEST_CASE("raising a future demand never lowers the zero-budget optimum") {
    require_clean(properties::demand_monotonicity_suite(200, 707), 200);
}

TEST_CASE("grounded rows match the symbolic interpretation") {
    require_clean(properties::ground_symbolic_agreement_suite(200, 606), 200);
}
