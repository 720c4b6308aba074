#include "tactilemap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tactilemap/common.hpp"

namespace tactilemap {

namespace {

// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(const std::vector<double>& values) {
    size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double r = (double(i + 1) + double(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

// Regularized incomplete gamma Q(a,x) by series / continued fraction.
double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) return 1.0;
    if (x == 0) return 1.0;
    if (x < a + 1.0) {
        // P(a,x) series, return 1 - P
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        double lng = std::lgamma(a);
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lng);
    }
    // Q(a,x) continued fraction (Lentz)
    double lng = std::lgamma(a);
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - lng) * h;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

double chi2_sf(double x, int df) { return gamma_q(df / 2.0, x / 2.0); }

void RepeatedMeasures::validate() const {
    require(rows.size() >= 2, ErrorCode::InvalidArgument, "need at least 2 subjects");
    size_t k = rows.front().size();
    require(k >= 2, ErrorCode::InvalidArgument, "need at least 2 conditions");
    for (const auto& r : rows)
        require(r.size() == k, ErrorCode::DimensionMismatch, "ragged repeated-measures matrix");
}

FriedmanResult friedman(const RepeatedMeasures& data) {
    data.validate();
    size_t k = data.rows.front().size();
    require(k >= 3, ErrorCode::InvalidArgument, "friedman needs at least 3 conditions");
    size_t n = data.rows.size();

    std::vector<double> rank_sums(k, 0.0);
    double tie_sum = 0.0;  // sum over rows of sum(t^3 - t)
    for (const auto& row : data.rows) {
        std::vector<double> ranks = average_ranks(row);
        for (size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
        std::vector<double> sorted = row;
        std::sort(sorted.begin(), sorted.end());
        size_t i = 0;
        while (i < sorted.size()) {
            size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            double t = double(j - i + 1);
            tie_sum += t * t * t - t;
            i = j + 1;
        }
    }
    double nn = double(n), kk = double(k);
    double chi2 = 12.0 / (nn * kk * (kk + 1.0)) *
                      std::accumulate(rank_sums.begin(), rank_sums.end(), 0.0,
                                      [](double acc, double r) { return acc + r * r; }) -
                  3.0 * nn * (kk + 1.0);
    double correction = 1.0 - tie_sum / (nn * kk * (kk * kk - 1.0));
    FriedmanResult res;
    if (correction <= 0) {
        // All rows fully tied: no information, no effect.
        res.chi2 = 0.0;
        res.p = 1.0;
        return res;
    }
    res.chi2 = chi2 / correction;
    res.p = chi2_sf(res.chi2, int(k) - 1);
    return res;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                    int exact_threshold) {
    require(a.size() == b.size(), ErrorCode::DimensionMismatch, "paired samples must match");
    std::vector<double> diff, absd;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d != 0.0) {
            diff.push_back(d);
            absd.push_back(std::abs(d));
        }
    }
    require(!diff.empty(), ErrorCode::Degenerate, "all paired differences are zero");
    size_t n = diff.size();
    std::vector<double> ranks = average_ranks(absd);

    WilcoxonResult res;
    for (size_t i = 0; i < n; ++i)
        if (diff[i] > 0) res.w_plus += ranks[i];
    double total = double(n) * double(n + 1) / 2.0;
    res.w = std::min(res.w_plus, total - res.w_plus);

    if (int(n) <= exact_threshold) {
        // Distribution of the rank sum over all 2^n sign assignments with
        // tie-free ranks 1..n (counts via subset-sum convolution). Observed
        // sums from tied data land between lattice points; the counts on
        // either side are accumulated with floor/ceil.
        res.exact = true;
        size_t max_sum = n * (n + 1) / 2;
        std::vector<double> count(max_sum + 1, 0.0);
        count[0] = 1.0;
        for (size_t r = 1; r <= n; ++r)
            for (size_t s = max_sum + 1; s-- > r;) count[s] += count[s - r];
        double tot = std::ldexp(1.0, int(n));  // 2^n
        double le = 0, ge = 0;
        auto lo = size_t(std::floor(res.w_plus + 1e-12));
        auto hi = size_t(std::ceil(res.w_plus - 1e-12));
        for (size_t s = 0; s <= std::min(lo, max_sum); ++s) le += count[s];
        for (size_t s = hi; s <= max_sum; ++s) ge += count[s];
        res.p = std::min(1.0, 2.0 * std::min(le, ge) / tot);
    } else {
        // Normal approximation with tie correction and continuity correction.
        double mean = total / 2.0;
        double tie_term = 0.0;
        std::vector<double> sorted = absd;
        std::sort(sorted.begin(), sorted.end());
        size_t i = 0;
        while (i < sorted.size()) {
            size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            double t = double(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
        double var = double(n) * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0;
        require(var > 0, ErrorCode::Degenerate, "zero variance in signed-rank statistic");
        double z = (res.w - mean + 0.5) / std::sqrt(var);  // continuity correction
        res.p = std::min(1.0, 2.0 * normal_sf(-z));
    }
    return res;
}

std::vector<double> bonferroni(const std::vector<double>& pvals, int m) {
    require(m >= 1, ErrorCode::InvalidArgument, "correction factor must be positive");
    std::vector<double> out;
    out.reserve(pvals.size());
    for (double p : pvals) {
        require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument, "p-values must lie in [0,1]");
        out.push_back(std::min(1.0, double(m) * p));
    }
    return out;
}

Descriptive describe(const std::vector<double>& column) {
    require(!column.empty(), ErrorCode::EmptyResult, "describe of empty column");
    Descriptive d;
    d.n = column.size();
    d.mean = std::accumulate(column.begin(), column.end(), 0.0) / double(d.n);
    double ss = 0;
    for (double v : column) ss += (v - d.mean) * (v - d.mean);
    d.sd = std::sqrt(ss / double(d.n));
    d.sd_degenerate = d.n == 1;
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    d.min = sorted.front();
    d.max = sorted.back();
    d.median = d.n % 2 ? sorted[d.n / 2] : 0.5 * (sorted[d.n / 2 - 1] + sorted[d.n / 2]);
    return d;
}

MeasureTable MeasureTable::from_csv(const std::string& path) {
    std::ifstream is(path);
    require(bool(is), ErrorCode::IoFailure, "cannot open: " + path);
    MeasureTable t;
    std::string line;
    require(bool(std::getline(is, line)), ErrorCode::CorruptFile, "empty csv: " + path);
    {
        std::stringstream ss(line);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) {
                first = false;
                continue;  // participant id column
            }
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            t.columns.push_back(cell);
            t.by_column[cell] = {};
        }
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        size_t idx = 0;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) {
                first = false;
                continue;
            }
            require(idx < t.columns.size(), ErrorCode::CorruptFile, "ragged csv row: " + path);
            t.by_column[t.columns[idx++]].push_back(std::stod(cell));
        }
        require(idx == t.columns.size(), ErrorCode::CorruptFile, "short csv row: " + path);
    }
    return t;
}

const std::vector<double>& MeasureTable::column(const std::string& name) const {
    auto it = by_column.find(name);
    require(it != by_column.end(), ErrorCode::InvalidArgument, "no such column: " + name);
    return it->second;
}

std::vector<LocationTestReport> moisturizer_report(const MeasureTable& table,
                                                   const std::vector<std::string>& locations) {
    std::vector<LocationTestReport> reports;
    for (const auto& loc : locations) {
        const auto& pre1 = table.column(loc + " Pre 1");
        const auto& pre2 = table.column(loc + " Pre 2");
        const auto& post = table.column(loc + " Post");

        RepeatedMeasures rm;
        rm.labels = {loc + " Pre 1", loc + " Pre 2", loc + " Post"};
        for (size_t i = 0; i < pre1.size(); ++i) rm.rows.push_back({pre1[i], pre2[i], post[i]});

        LocationTestReport rep;
        rep.location = loc;
        FriedmanResult fr = friedman(rm);
        rep.friedman_chi2 = fr.chi2;
        rep.friedman_p = fr.p;
        rep.wilcoxon_p = {wilcoxon_signed_rank(pre1, pre2).p, wilcoxon_signed_rank(pre1, post).p,
                          wilcoxon_signed_rank(pre2, post).p};
        auto adj = bonferroni({rep.wilcoxon_p[0], rep.wilcoxon_p[1], rep.wilcoxon_p[2]}, 3);
        rep.wilcoxon_bonferroni_p = {adj[0], adj[1], adj[2]};
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace tactilemap
