#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qdent/criteria.hpp"
#include "qdent/designs.hpp"
#include "qdent/states.hpp"

namespace qdent {

/// Mixing-weight threshold for one (state family, criterion) pair.
/// Certificate: margin <= 0 at threshold - bracket_width and > 0 at
/// threshold + bracket_width. never_detected means no crossing in [0,1]
/// (threshold reported as 1.0, bracket_width 0).
struct ThresholdResult {
    std::string family;
    std::string criterion;
    double threshold = 1.0;
    double bracket_width = 0.0;
    bool never_detected = false;
    std::string warning;
};

struct CriterionCount {
    std::string criterion;
    long count = 0;
    double fraction = 0.0;
};

/// A design instantiated for a run, with its certification residual, so
/// emitted numbers are traceable.
struct DesignUsage {
    std::string label;
    int dim = 0;
    int n = 0;
    std::string kind;
    double moment_residual = 0.0;
};

/// Aggregated Monte Carlo sweep. fractions = counts / sample_count exactly.
/// The equivalence gaps are the largest per-state |ESIC - E2D| and
/// |LSIC - L2D| observed; subset_violations counts samples detected by the
/// nonlinear design criterion but missed by some other evaluated criterion.
struct SweepSummary {
    std::string family;
    long sample_count = 0;
    std::uint64_t master_seed = 0;
    std::vector<CriterionCount> criteria;
    std::vector<DesignUsage> designs;
    double max_linear_equiv_gap = 0.0;
    double max_nonlinear_equiv_gap = 0.0;
    long subset_violations = 0;
    long generation_attempts = 0;
};

using StateFamily = std::function<DensityMatrix(double)>;
using Criterion = std::function<CriterionReport(const DensityMatrix&)>;

/// Scans p in [0,1] at step 0.01 for the first margin sign change, then
/// bisects the bracket down to width <= 2*tol. Additional sign changes in
/// the coarse scan are noted in the warning field; the smallest-p crossing
/// is refined.
ThresholdResult find_threshold(const StateFamily& family, const Criterion& criterion,
                               double tol = 1e-5, const std::string& family_name = "");

/// Long-format threshold table: one ThresholdResult per (family, criterion).
struct ThresholdTable {
    std::string name;
    std::vector<ThresholdResult> entries;
    std::vector<DesignUsage> designs;
    double tol = 1e-5;
};

/// Noise thresholds for the four Bell-state families under CCNR, ESIC, E2D,
/// both LUR variants (Schmidt operators of the mixed state itself, and of
/// the pure target state), LSIC, and L2D. The d=2 general design has
/// design_n elements.
ThresholdTable bell_threshold_table(double tol = 1e-5, int design_n = 9);

/// Same columns for the 3x3 bound entangled state built from unextendible
/// product bases, mixed with white noise. d=3 general design: two SIC sets
/// glued by a seeded random rotation (18 elements).
ThresholdTable upb_threshold_table(double tol = 1e-5);

/// Sweep over Hilbert-Schmidt random NPT states of the given shape.
/// criteria may list PPT, CCNR, ESIC, E2D, LUR, LSIC, L2D (the nonlinear
/// ones require dim_a == dim_b); empty selects every criterion valid for
/// the shape. Deterministic per master_seed regardless of thread count.
SweepSummary random_sweep(const BipartiteDims& dims, long sample_count,
                          std::uint64_t master_seed,
                          const std::vector<std::string>& criteria = {},
                          int threads = 0, int design_n = 9);

/// Sweep over randomly parameterized 3x3 bound entangled chessboard states.
SweepSummary chessboard_sweep(long sample_count, std::uint64_t master_seed,
                              int threads = 0);

/// Detection boundary p(x) for the 3x3 bound entangled family
/// p*rho_x + (1-p)*I/9. ppt_margin_full is the PPT margin at p = 1
/// (expected <= 0 for every x: the family is PPT throughout).
struct CurvePoint {
    double x = 0.0;
    std::vector<ThresholdResult> thresholds;
    double ppt_margin_full = 0.0;
};

std::vector<CurvePoint> horodecki_curves(const std::vector<double>& x_grid,
                                         double tol = 1e-5);

/// One named invariant check with a deterministic detail string.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass = false;
};

/// Runs design certifications, the probability/reconstruction identity
/// chain, linear/nonlinear equivalence spot checks, and separable negative
/// controls. Byte-identical output for a fixed seed.
VerifyReport verify_all(std::uint64_t seed = 1);

/// Serialization. CSV is long format with a header row; JSON carries seeds,
/// design residuals, and tolerances alongside the values.
std::string to_csv(const ThresholdTable& table);
std::string to_csv(const SweepSummary& sweep);
std::string to_csv(const std::vector<CurvePoint>& curves);
std::string to_csv(const VerifyReport& report);
nlohmann::json to_json(const ThresholdTable& table);
nlohmann::json to_json(const SweepSummary& sweep);
nlohmann::json to_json(const std::vector<CurvePoint>& curves);
nlohmann::json to_json(const VerifyReport& report);

}  // namespace qdent
