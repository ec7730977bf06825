#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "moblab/arcs.hpp"
#include "moblab/expsum.hpp"
#include "moblab/int_util.hpp"
#include "moblab/phase.hpp"

namespace moblab {

struct AlphaGridSpec {
    i64 uniform_count = 100;
    i64 q_max = 20;
    // symbolic "1/R", "-1/R", "1/(qQ)", "-1/(qQ)" or literal decimals/fractions
    std::vector<std::string> deltas = {"1/R", "-1/R", "1/(qQ)", "-1/(qQ)"};
};

struct SweepSpec {
    i64 x = 1000000;
    std::vector<double> theta_list = {0.85};
    std::vector<int> k_list = {3};
    AlphaGridSpec alpha_grid;
    double c1 = -1.0;  // <= 0 selects 8(k+1)
    u64 seed = 1;
};

SweepSpec default_sweep_spec(i64 x, double theta, int k);
SweepSpec sweep_spec_from_json_file(const std::string& path);
SweepSpec sweep_spec_from_json_text(const std::string& text);
std::string sweep_spec_to_json_text(const SweepSpec& spec);

struct SweepRow {
    std::string alpha_desc;
    double alpha;
    double theta;
    int k;
    i64 y;
    char arc;
    std::string q;  // witness denominator, decimal
    std::string a;
    double lambda;
    double abs_S;
    double abs_S_over_y;
    double major_arc_term;  // NaN when the witness q exceeds the u64 range
    double lemma31_rhs;     // NaN unless the witness q is small
    double weyl_abs;
};

struct SweepSummary {
    double max_ratio_A = 0.0;
    double max_ratio_B = 0.0;
    double max_ratio_C = 0.0;
    double max_weyl_over_y = 0.0;
    i64 rows = 0;
};

struct SweepReport {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    SweepSummary summary;
};

// One row per (theta, k, alpha); deterministic given the spec (seed included).
// Estimated work is checked against the budget before any evaluation.
SweepReport run_sweep(const SweepSpec& spec, i64 budget = kDefaultTermBudget,
                      u64 lemma31_q_limit = 12);

void emit_csv(const SweepReport& report, std::ostream& os);
void emit_json(const SweepReport& report, std::ostream& os);
// format: "csv" or "json"
void emit(const SweepReport& report, const std::string& format, const std::string& path);

// Numerical probe of the short-interval Weyl dichotomy; report-only.
struct Lemma38Record {
    double x, y;
    int k;
    double gamma, rho, sigma_k;
    bool rho_in_range;  // 0 < rho <= sigma_k / gamma
    bool y_in_range;    // y >= x^{gamma/(2 gamma - sigma_k - 1)}
    double weyl_abs;
    double minor_ref;  // y^{1-rho}
    bool has_major_witness;
    std::string witness_q, witness_a;
    double major_term;  // 0 when no witness
    std::string dominant_branch;
    double ratio_minor;  // weyl_abs / minor_ref
    double ratio_major;  // weyl_abs / (minor_ref + major_term), NaN without witness
};
Lemma38Record lemma38_dichotomy_report(double x, double y, int k, const PhaseReal& alpha,
                                       double gamma, double rho,
                                       i64 budget = kDefaultTermBudget);

struct Lemma37Row {
    std::string kind;  // "gcd(q,n^j)" or "gcd(q,R(n,h))"
    u64 N, q;
    double lhs;
    double ref;  // w_k(q) * N
    double ratio;
};
std::vector<Lemma37Row> lemma37_ratio_report(const std::vector<u64>& N_list,
                                             const std::vector<u64>& q_list, unsigned j, int k,
                                             unsigned c, u64 h = 1);

// Oracle scan behind the lemma31 dominance baseline: the largest observed
// |S_k| / lemma31_rhs over the fixed grid (x in {1e3,1e4,1e5}, y = x^0.8,
// k = 3, q <= q_max, all units a, lambda in {0, 1/R, -1/R}).
double lemma31_dominance_scan(u64 q_max = 50);

}  // namespace moblab
