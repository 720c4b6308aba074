#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace tactilemap {

struct RepeatedMeasures {
    std::vector<std::vector<double>> rows;  // n_subjects x k_conditions, no missing cells
    std::vector<std::string> labels;

    void validate() const;
};

struct FriedmanResult {
    double chi2 = 0;
    double p = 1;
};

// Rank-based repeated-measures test across k >= 3 conditions. Average ranks
// for ties, standard tie correction, chi-square reference with k-1 df.
FriedmanResult friedman(const RepeatedMeasures& data);

struct WilcoxonResult {
    double w = 0;       // min(W+, W-)
    double w_plus = 0;  // signed-rank sum of positive differences
    double p = 1;
    bool exact = false;
};

// Paired two-sided signed-rank test. Zero differences are dropped; tied |d|
// get average ranks. For n <= exact_threshold the p-value is exact under the
// tie-free signed-rank null (equivalent to enumerating the 2^n sign
// assignments over ranks 1..n); above it, normal approximation with
// continuity correction.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                    int exact_threshold = 25);

std::vector<double> bonferroni(const std::vector<double>& pvals, int m = 3);

struct Descriptive {
    double mean = 0;
    double sd = 0;  // n denominator
    double median = 0;
    double min = 0;
    double max = 0;
    size_t n = 0;
    bool sd_degenerate = false;  // single observation
};

Descriptive describe(const std::vector<double>& column);

// Chi-square upper tail, k degrees of freedom.
double chi2_sf(double x, int df);

// Per-participant repeated-measure table keyed by column label (CSV with a
// header row; first column is the participant id).
struct MeasureTable {
    std::vector<std::string> columns;
    std::map<std::string, std::vector<double>> by_column;

    static MeasureTable from_csv(const std::string& path);
    const std::vector<double>& column(const std::string& name) const;
};

struct LocationTestReport {
    std::string location;
    double friedman_chi2;
    double friedman_p;
    // Pairs ordered (pre1 vs pre2, pre1 vs post, pre2 vs post).
    std::array<double, 3> wilcoxon_p;
    std::array<double, 3> wilcoxon_bonferroni_p;
};

// Three-timepoint report (Pre1/Pre2/Post) for each named location prefix.
std::vector<LocationTestReport> moisturizer_report(const MeasureTable& table,
                                                   const std::vector<std::string>& locations);

}  // namespace tactilemap
