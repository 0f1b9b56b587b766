#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "qdent/harness.hpp"

using namespace qdent;

namespace {

const ThresholdResult& entry(const ThresholdTable& table, const std::string& family,
                             const std::string& criterion) {
  for (const auto& t : table.entries)
    if (t.family == family && t.criterion == criterion) return t;
  throw std::runtime_error("missing table entry " + family + "/" + criterion);
}

const CriterionCount& count_of(const SweepSummary& sweep,
                               const std::string& criterion) {
  for (const auto& c : sweep.criteria)
    if (c.criterion == criterion) return c;
  throw std::runtime_error("missing sweep criterion " + criterion);
}

}  // namespace

TEST_CASE("threshold search refines a certified bracket") {
  StateFamily family = [](double p) {
    return noisy_two_qubit(BellKind::PsiMinus, p);
  };
  Criterion criterion = [](const DensityMatrix& rho) { return ccnr(rho); };

  ThresholdResult t = find_threshold(family, criterion, 1e-5, "psi-");
  CHECK(t.family == "psi-");
  CHECK(t.criterion == "CCNR");
  CHECK_FALSE(t.never_detected);
  CHECK(t.warning.empty());
  CHECK(t.bracket_width <= 1e-5);
  CHECK(std::abs(t.threshold - 0.2917961) < 3e-5);
  CHECK(criterion(family(t.threshold - t.bracket_width)).margin <= 0.0);
  CHECK(criterion(family(t.threshold + t.bracket_width)).margin > 0.0);

  CHECK_THROWS_AS(find_threshold(family, criterion, 0.0), std::invalid_argument);
}

TEST_CASE("threshold search reports no crossing and trivial crossings") {
  NormalizedDesign sic2 = normalize_design(build_sic(2));
  StateFamily family = [](double p) {
    return noisy_two_qubit(BellKind::PsiPlus, p);
  };
  Criterion lsic = [sic2](const DensityMatrix& rho) {
    return nonlinear_design_value(rho, sic2);
  };
  ThresholdResult never = find_threshold(family, lsic, 1e-4, "psi+");
  CHECK(never.never_detected);
  CHECK(never.threshold == 1.0);
  CHECK(never.bracket_width == 0.0);

  StateFamily constant = [](double) { return bell_state(BellKind::PsiMinus); };
  Criterion c = [](const DensityMatrix& rho) { return ccnr(rho); };
  ThresholdResult zero = find_threshold(constant, c, 1e-4, "constant");
  CHECK(zero.threshold == 0.0);
  CHECK_FALSE(zero.never_detected);
  CHECK_FALSE(zero.warning.empty());
}

TEST_CASE("noise threshold table for the maximally entangled families") {
  ThresholdTable table = bell_threshold_table(1e-4, 9);
  CHECK(table.name == "noisy-bell-thresholds");
  REQUIRE(table.entries.size() == 32);  // 4 families x 8 criteria
  REQUIRE(table.designs.size() == 2);
  CHECK(table.designs[0].label == "sic-d2-n4");
  CHECK(table.designs[1].label == "optimized-d2-n9");
  for (const auto& d : table.designs) CHECK(d.moment_residual < 1e-6);

  CHECK(std::abs(entry(table, "psi-", "CCNR").threshold - 0.2917961) < 5e-4);
  CHECK(std::abs(entry(table, "psi+", "CCNR").threshold - 0.2917961) < 5e-4);
  CHECK(std::abs(entry(table, "phi+", "CCNR").threshold - 0.2163884) < 5e-4);
  CHECK(std::abs(entry(table, "phi-", "CCNR").threshold - 0.2163884) < 5e-4);
  CHECK(std::abs(entry(table, "psi-", "ESIC").threshold - 0.2677868) < 5e-4);
  CHECK(std::abs(entry(table, "phi+", "ESIC").threshold - 0.2052668) < 5e-4);
  CHECK(std::abs(entry(table, "psi-", "LUR").threshold - 0.2778344) < 5e-4);
  CHECK(std::abs(entry(table, "psi-", "LUR-pure").threshold - 0.25) < 5e-4);
  CHECK(std::abs(entry(table, "psi-", "LSIC").threshold - 0.25) < 5e-4);
  CHECK(std::abs(entry(table, "phi+", "LUR").threshold - 0.2027819) < 5e-4);

  CHECK(entry(table, "psi+", "LSIC").never_detected);
  CHECK(entry(table, "phi+", "LSIC").never_detected);
  CHECK(entry(table, "phi-", "L2D").never_detected);

  for (const std::string family : {"psi-", "psi+", "phi-", "phi+"}) {
    CHECK(entry(table, family, "PPT").threshold < 1e-3);
    CHECK(std::abs(entry(table, family, "ESIC").threshold -
                   entry(table, family, "E2D").threshold) < 3e-4);
  }
}

TEST_CASE("noise threshold table for the bound entangled state") {
  ThresholdTable table = upb_threshold_table(1e-4);
  REQUIRE(table.entries.size() == 7);
  CHECK(entry(table, "upb-noise", "PPT").never_detected);
  CHECK(entry(table, "upb-noise", "LSIC").never_detected);
  CHECK(entry(table, "upb-noise", "L2D").never_detected);
  CHECK(std::abs(entry(table, "upb-noise", "CCNR").threshold - 0.8896869) <
        5e-4);
  CHECK(std::abs(entry(table, "upb-noise", "ESIC").threshold - 0.8843715) <
        5e-4);
  CHECK(std::abs(entry(table, "upb-noise", "LUR").threshold - 0.8885191) <
        5e-4);
  CHECK(std::abs(entry(table, "upb-noise", "ESIC").threshold -
                 entry(table, "upb-noise", "E2D").threshold) < 3e-4);
  REQUIRE(table.designs.size() == 2);
  CHECK(table.designs[0].label == "sic-d3-n9");
  CHECK(table.designs[1].label == "superimposed-d3-n18");
}

TEST_CASE("random sweeps are deterministic across thread counts") {
  BipartiteDims dims(2, 2);
  SweepSummary serial = random_sweep(dims, 300, 42, {}, 1);
  SweepSummary parallel = random_sweep(dims, 300, 42, {}, 3);
  CHECK(to_csv(serial) == to_csv(parallel));
  CHECK(serial.max_linear_equiv_gap == parallel.max_linear_equiv_gap);
  CHECK(serial.max_nonlinear_equiv_gap == parallel.max_nonlinear_equiv_gap);
  CHECK(serial.generation_attempts == parallel.generation_attempts);

  REQUIRE(serial.criteria.size() == 7);
  CHECK(count_of(serial, "PPT").fraction == 1.0);
  for (const auto& c : serial.criteria) {
    CHECK(c.fraction == static_cast<double>(c.count) / serial.sample_count);
    CHECK(c.count >= 0);
    CHECK(c.count <= serial.sample_count);
  }
  CHECK(serial.max_linear_equiv_gap <= 1e-6);
  CHECK(serial.max_nonlinear_equiv_gap <= 1e-6);
  CHECK(serial.subset_violations == 0);
  CHECK(serial.generation_attempts >= serial.sample_count);
  CHECK(serial.family == "random-npt-2x2");
}

TEST_CASE("sweeps validate their inputs and cover rectangular systems") {
  BipartiteDims rect(2, 3);
  SweepSummary sweep = random_sweep(rect, 40, 7, {}, 2);
  REQUIRE(sweep.criteria.size() == 4);  // nonlinear criteria need dim_a == dim_b
  CHECK(count_of(sweep, "PPT").fraction == 1.0);
  CHECK(sweep.max_linear_equiv_gap <= 1e-6);

  CHECK_THROWS_AS(random_sweep(rect, 10, 7, {"LUR"}, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_sweep(rect, 10, 7, {"XYZ"}, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_sweep(rect, 0, 7, {}, 1), std::invalid_argument);
}

TEST_CASE("bound entangled sweep never trips the partial transpose") {
  SweepSummary a = chessboard_sweep(200, 7, 1);
  SweepSummary b = chessboard_sweep(200, 7, 2);
  CHECK(to_csv(a) == to_csv(b));
  CHECK(count_of(a, "PPT").count == 0);
  CHECK(count_of(a, "LSIC").fraction <= 0.05);
  CHECK(count_of(a, "L2D").fraction <= 0.05);
  CHECK(a.generation_attempts == 200);
  CHECK(a.family == "chessboard");
}

TEST_CASE("detection boundary for the single parameter bound entangled family") {
  std::vector<CurvePoint> curve = horodecki_curves({0.3}, 1e-4);
  REQUIRE(curve.size() == 1);
  CHECK(curve[0].x == 0.3);
  CHECK(curve[0].ppt_margin_full <= 1e-9);
  REQUIRE(curve[0].thresholds.size() == 4);

  double ccnr_th = 0, esic_th = 0, e2d_th = 0, lur_th = 0;
  for (const auto& t : curve[0].thresholds) {
    if (t.criterion == "CCNR") ccnr_th = t.threshold;
    if (t.criterion == "ESIC") esic_th = t.threshold;
    if (t.criterion == "E2D") e2d_th = t.threshold;
    if (t.criterion == "LUR") lur_th = t.threshold;
  }
  CHECK(std::abs(ccnr_th - 0.9955472) < 5e-4);
  CHECK(std::abs(esic_th - 0.9945668) < 5e-4);
  CHECK(std::abs(lur_th - 0.9950389) < 5e-4);
  CHECK(std::abs(esic_th - e2d_th) < 3e-4);
  CHECK(esic_th <= lur_th + 3e-4);
  CHECK(lur_th <= ccnr_th + 3e-4);

  CHECK_THROWS_AS(horodecki_curves({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(horodecki_curves({1.5}), std::invalid_argument);
}

TEST_CASE("self verification passes and is reproducible") {
  VerifyReport first = verify_all(1);
  for (const auto& check : first.checks) {
    INFO(check.name << ": " << check.detail);
    CHECK(check.pass);
  }
  CHECK(first.all_pass);
  CHECK(first.checks.size() == 48);  // 6 designs x 7 checks + 6 global checks

  VerifyReport second = verify_all(1);
  CHECK(to_csv(first) == to_csv(second));
  CHECK(to_json(first) == to_json(second));
}

TEST_CASE("serialization formats carry the headers and metadata") {
  ThresholdTable table;
  table.name = "demo";
  table.tol = 1e-4;
  table.entries.push_back({"fam", "CCNR", 0.25, 1e-5, false, ""});
  table.entries.push_back({"fam", "LSIC", 1.0, 0.0, true, "note"});
  std::string csv = to_csv(table);
  CHECK(csv.rfind("family,criterion,threshold,bracket_width,never_detected,warning\n",
                  0) == 0);
  CHECK(csv.find("fam,CCNR,0.25,1e-05,0,\n") != std::string::npos);
  CHECK(csv.find("fam,LSIC,1,0,1,note\n") != std::string::npos);
  nlohmann::json tj = to_json(table);
  CHECK(tj.contains("thresholds"));
  CHECK(tj.contains("designs"));
  CHECK(tj["tolerance"] == 1e-4);

  SweepSummary sweep;
  sweep.family = "fam";
  sweep.sample_count = 10;
  sweep.master_seed = 3;
  sweep.criteria.push_back({"PPT", 10, 1.0});
  std::string scsv = to_csv(sweep);
  CHECK(scsv.rfind("family,criterion,detected,samples,fraction,master_seed\n", 0) ==
        0);
  CHECK(scsv.find("fam,PPT,10,10,1,3\n") != std::string::npos);
  nlohmann::json sj = to_json(sweep);
  CHECK(sj["diagnostics"].contains("subset_violations"));

  CurvePoint point;
  point.x = 0.5;
  point.thresholds.push_back({"h", "CCNR", 0.9, 1e-5, false, ""});
  std::string ccsv = to_csv(std::vector<CurvePoint>{point});
  CHECK(ccsv.rfind("x,criterion,threshold,bracket_width,never_detected\n", 0) == 0);

  VerifyReport report;
  report.checks.push_back({"demo-check", true, "ok"});
  report.all_pass = true;
  std::string rcsv = to_csv(report);
  CHECK(rcsv.rfind("check,pass,detail\n", 0) == 0);
  CHECK(rcsv.find("demo-check,1,ok\n") != std::string::npos);
  CHECK(to_json(report)["all_pass"] == true);
}
