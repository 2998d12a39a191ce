#include "snplr/error_estimation.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "snplr/numerics.hpp"

namespace snplr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUpper = 0.5;
// exp(x) underflows to 0 below roughly -745; beyond this drop from the peak
// the integrand contributes exactly nothing in double arithmetic.
constexpr double kLogDrop = 746.0;

}  // namespace

std::uint64_t ConfusionTable::total() const noexcept {
    std::uint64_t t = 0;
    for (const auto& row : counts_)
        for (std::uint64_t c : row) t += c;
    return t;
}

ConfusionTable ConfusionTable::transposed() const noexcept {
    ConfusionTable t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) t.counts_[c][r] = counts_[r][c];
    return t;
}

ConfusionTable read_confusion_table(std::istream& in) {
    ConfusionTable table;
    int row = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (row == 3) throw parse_error("confusion table has more than 3 rows", line_no);
        std::istringstream fields(line);
        for (int col = 0; col < 3; ++col) {
            long long v = 0;
            if (!(fields >> v) || v < 0)
                throw parse_error("expected 3 non-negative integers per row", line_no);
            table.cell(row, col) = static_cast<std::uint64_t>(v);
        }
        std::string extra;
        if (fields >> extra) throw parse_error("trailing fields after 3 columns", line_no);
        ++row;
    }
    if (row != 3) throw parse_error("confusion table needs 3 rows, got " + std::to_string(row));
    return table;
}

void write_confusion_table(std::ostream& out, const ConfusionTable& table) {
    for (int r = 0; r < 3; ++r) {
        out << table.at(r, 0) << '\t' << table.at(r, 1) << '\t' << table.at(r, 2) << '\n';
    }
}

CategoryCounts categorize(const ConfusionTable& t) {
    CategoryCounts c;
    c.n_diagonal = t.at(0, 0) + t.at(1, 1) + t.at(2, 2);
    c.n_corner = t.at(0, 2) + t.at(2, 0);
    c.n_offdiagonal = t.at(0, 1) + t.at(1, 0) + t.at(1, 2) + t.at(2, 1);
    return c;
}

double log_likelihood(double w, const CategoryCounts& counts) {
    const CategoryProbs p = category_probs_at(w);
    double ll = 0.0;
    const auto add = [&ll](std::uint64_t n, double prob) {
        if (n == 0) return;  // 0 * log(0) taken as 0
        ll += (prob > 0.0) ? static_cast<double>(n) * std::log(prob) : -kInf;
    };
    add(counts.n_diagonal, p.diagonal);
    add(counts.n_corner, p.corner);
    add(counts.n_offdiagonal, p.offdiagonal);
    return ll;
}

namespace {

struct Peak {
    double w;
    double loglik;
};

// Global maximum of the log-likelihood on [0, 0.5). With no observed
// discrepancies the likelihood is strictly decreasing and the maximum sits
// exactly on the w = 0 boundary; otherwise it is interior and unimodal.
Peak find_peak(const CategoryCounts& c) {
    if (c.n_corner == 0 && c.n_offdiagonal == 0) return {0.0, 0.0};
    const auto neg = [&c](double w) { return -log_likelihood(w, c); };
    const num::Minimum m = num::brent_minimize(neg, 0.0, kUpper, 1e-10);
    return {m.x, -m.fx};
}

// Rightmost w where the log-likelihood is within kLogDrop of the peak.
double right_support_edge(const CategoryCounts& c, const Peak& peak) {
    const double target = peak.loglik - kLogDrop;
    if (log_likelihood(kUpper, c) >= target) return kUpper;
    double lo = peak.w, hi = kUpper;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (log_likelihood(mid, c) >= target ? lo : hi) = mid;
    }
    return hi;
}

// Leftmost such w; bisected in log space because the left tail can span
// hundreds of orders of magnitude.
double left_support_edge(const CategoryCounts& c, const Peak& peak) {
    if (peak.w == 0.0) return 0.0;
    const double target = peak.loglik - kLogDrop;
    const double t_min = std::log(1e-300);
    if (log_likelihood(std::exp(t_min), c) >= target) return 0.0;
    double lo = t_min, hi = std::log(peak.w);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (log_likelihood(std::exp(mid), c) >= target ? hi : lo) = mid;
    }
    return std::exp(lo);
}

struct Moments {
    double mass;        // integral of exp(logL - peak)
    double first;       // integral of w * exp(logL - peak)
};

Moments simpson_moments(const CategoryCounts& c, double peak_ll, double a, double b,
                        std::int64_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double m0 = 0.0, m1 = 0.0;
    for (std::int64_t i = 0; i <= n; ++i) {
        const double w = (i == n) ? b : a + h * static_cast<double>(i);
        const double g = std::exp(log_likelihood(w, c) - peak_ll);
        const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        m0 += weight * g;
        m1 += weight * w * g;
    }
    return {m0 * h / 3.0, m1 * h / 3.0};
}

// Equal-tailed quantile from a panel walk over the converged Simpson grid.
double simpson_quantile(const CategoryCounts& c, double peak_ll, double a, double b,
                        std::int64_t n, double total_mass, double prob) {
    const double h = (b - a) / static_cast<double>(n);
    const double target = prob * total_mass;
    double cum = 0.0;
    double g0 = std::exp(log_likelihood(a, c) - peak_ll);
    for (std::int64_t i = 0; i + 2 <= n; i += 2) {
        const double w1 = a + h * static_cast<double>(i + 1);
        const double w2 = (i + 2 == n) ? b : a + h * static_cast<double>(i + 2);
        const double g1 = std::exp(log_likelihood(w1, c) - peak_ll);
        const double g2 = std::exp(log_likelihood(w2, c) - peak_ll);
        const double panel = h / 3.0 * (g0 + 4.0 * g1 + g2);
        if (cum + panel >= target && panel > 0.0) {
            const double frac = (target - cum) / panel;
            return a + h * static_cast<double>(i) + frac * 2.0 * h;
        }
        cum += panel;
        g0 = g2;
    }
    return b;
}

}  // namespace

WEstimate estimate_mle(const CategoryCounts& counts) {
    if (counts.total() == 0) throw no_data_error("cannot estimate w from an empty table");
    const Peak peak = find_peak(counts);
    return {peak.w, EstimatorMethod::mle, std::nullopt};
}

WEstimate estimate_posterior_mean(const CategoryCounts& counts, bool with_interval,
                                  const QuadratureOptions& opts) {
    if (counts.total() == 0) throw no_data_error("cannot estimate w from an empty table");

    const Peak peak = find_peak(counts);
    const double a = left_support_edge(counts, peak);
    const double b = right_support_edge(counts, peak);

    std::int64_t n = opts.initial_intervals;
    Moments cur = simpson_moments(counts, peak.loglik, a, b, n);
    while (n < opts.max_intervals) {
        const Moments next = simpson_moments(counts, peak.loglik, a, b, 2 * n);
        const double mass_change = std::fabs(next.mass - cur.mass) / next.mass;
        const double mean_change =
            std::fabs(next.first / next.mass - cur.first / cur.mass) /
            (next.first / next.mass);
        n *= 2;
        cur = next;
        if (mass_change < 1e-12 && mean_change < 1e-12) break;
    }

    WEstimate est{cur.first / cur.mass, EstimatorMethod::posterior_mean, std::nullopt};
    if (with_interval) {
        est.interval = CredibleInterval{
            simpson_quantile(counts, peak.loglik, a, b, n, cur.mass, 0.025),
            simpson_quantile(counts, peak.loglik, a, b, n, cur.mass, 0.975),
        };
    }
    return est;
}

ConfusionTable aggregate_tables(std::span<const ConfusionTable> tables) {
    if (tables.empty()) throw std::invalid_argument("aggregate_tables requires at least one table");
    ConfusionTable sum;
    for (const ConfusionTable& t : tables)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) sum.cell(r, c) += t.at(r, c);
    return sum;
}

}  // namespace snplr
