#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "snplr/errors.hpp"
#include "snplr/genotype_model.hpp"

namespace snplr {

/// 3x3 counts of paired genotype calls from replicate samples.
/// Rows are the first sample's call, columns the second's, in order
/// 0/0, 0/1, 1/1.
class ConfusionTable {
public:
    ConfusionTable() = default;
    explicit ConfusionTable(const std::array<std::array<std::uint64_t, 3>, 3>& counts)
        : counts_(counts) {}

    std::uint64_t at(int row, int col) const { return counts_.at(row).at(col); }
    std::uint64_t& cell(int row, int col) { return counts_.at(row).at(col); }

    std::uint64_t total() const noexcept;
    ConfusionTable transposed() const noexcept;

    bool operator==(const ConfusionTable&) const = default;

private:
    std::array<std::array<std::uint64_t, 3>, 3> counts_{};
};

/// Reads 3 lines of 3 tab-separated integers; lines starting with '#' and
/// blank lines are skipped. Throws parse_error on anything else.
ConfusionTable read_confusion_table(std::istream& in);
void write_confusion_table(std::ostream& out, const ConfusionTable& table);

/// Table counts grouped into the three trinomial categories.
struct CategoryCounts {
    std::uint64_t n_diagonal = 0;
    std::uint64_t n_corner = 0;       // the 0/0,1/1 and 1/1,0/0 cells
    std::uint64_t n_offdiagonal = 0;  // the remaining four cells

    std::uint64_t total() const noexcept { return n_diagonal + n_corner + n_offdiagonal; }
};

CategoryCounts categorize(const ConfusionTable& table);

/// Trinomial log-likelihood of the grouped counts, up to the multinomial
/// coefficient (constant in w, irrelevant to both estimators). Valid on
/// [0, 1] and symmetric about w = 0.5. Returns -infinity where a category
/// with a positive count has zero probability (e.g. w = 0 with observed
/// discrepancies).
double log_likelihood(double w, const CategoryCounts& counts);

enum class EstimatorMethod { mle, posterior_mean };

/// Equal-tailed posterior credible interval (2.5% and 97.5% quantiles).
struct CredibleInterval {
    double lower;
    double upper;
};

struct WEstimate {
    double w_hat;
    EstimatorMethod method;
    std::optional<CredibleInterval> interval;
};

/// Maximum-likelihood estimate of w on [0, 0.5), located by Brent
/// minimisation to absolute tolerance 1e-10. Returns exactly 0 when no
/// discrepancies were observed. Throws no_data_error on an empty table.
WEstimate estimate_mle(const CategoryCounts& counts);

/// Quadrature resolution knobs for the posterior-mean integrals. The
/// defaults converge for every realistic table; raising initial_intervals
/// only tightens the first pass.
struct QuadratureOptions {
    std::int64_t initial_intervals = 1 << 14;
    std::int64_t max_intervals = 1 << 21;
};

/// Bayesian posterior mean of w under a uniform prior on (0, 0.5):
/// E[w | counts] by deterministic composite-Simpson quadrature of the
/// max-normalised likelihood over its numerically non-zero support.
/// Reproducible bit-for-bit across runs. Throws no_data_error on an
/// empty table.
WEstimate estimate_posterior_mean(const CategoryCounts& counts, bool with_interval = false,
                                  const QuadratureOptions& opts = {});

/// Cell-wise sum. Throws std::invalid_argument on an empty list.
ConfusionTable aggregate_tables(std::span<const ConfusionTable> tables);

}  // namespace snplr
