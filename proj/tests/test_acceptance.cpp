// Acceptance gate: every numbered suite must pass at the tolerances pinned in
// qsep/acceptance.hpp. One line per suite is printed so the run reads as a
// checklist; failures dump the per-item details.

#include "qsep/acceptance.hpp"

#include <gtest/gtest.h>

namespace qsep {
namespace {

void run(const CriterionResult& r) {
  std::printf("[%s] criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.index, r.name.c_str());
  if (!r.pass) {
    for (const std::string& d : r.details) std::printf("    %s\n", d.c_str());
  }
  EXPECT_TRUE(r.pass) << "criterion " << r.index << " (" << r.name << ") failed";
}

TEST(Acceptance, Criterion1_WThresholds) { run(acceptance_w_thresholds()); }
TEST(Acceptance, Criterion2_ArThresholds) { run(acceptance_ar_thresholds()); }
TEST(Acceptance, Criterion3_GhzThresholds) { run(acceptance_ghz_thresholds()); }
TEST(Acceptance, Criterion4_PptAgreement) { run(acceptance_ppt_agreement()); }
TEST(Acceptance, Criterion5_WWbar) { run(acceptance_wwbar()); }
TEST(Acceptance, Criterion6_ClosedFormSpectra) { run(acceptance_closed_form_spectra()); }
TEST(Acceptance, Criterion7_SpecialCases) { run(acceptance_special_cases()); }
TEST(Acceptance, Criterion8_PropertySuites) { run(acceptance_property_suites()); }
TEST(Acceptance, Criterion9_Asymptotics) { run(acceptance_asymptotics()); }

}  // namespace
}  // namespace qsep
