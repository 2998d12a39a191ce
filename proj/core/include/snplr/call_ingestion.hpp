#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snplr/error_estimation.hpp"
#include "snplr/genotype_model.hpp"

namespace snplr {

/// One sample's genotype call at one genomic site.
struct SiteCall {
    std::string segment_id;
    std::string chromosome;
    std::int64_t position = 0;  // 1-based
    char ref_allele = '.';
    char alt_allele = '.';      // '.' at homozygous-reference sites with no observed alt
    std::optional<Genotype> genotype;  // nullopt encodes the ./. sentinel
    int depth = 0;              // DP
    int genotype_quality = 0;   // GQ
    int ad_ref = 0;
    int ad_alt = 0;
    /// Callers may report per-allele depths exceeding DP; flagged, not rejected.
    bool ad_exceeds_depth = false;

    bool operator==(const SiteCall&) const = default;
};

/// Quality filter thresholds. Comparisons are inclusive: a call passes when
/// ABD <= max_abd, DP >= min_dp and GQ >= min_gq.
struct FilterSpec {
    double max_abd = 0.5;
    int min_dp = 0;
    int min_gq = 0;
    std::string name = "none";

    static FilterSpec none() { return {0.5, 0, 0, "none"}; }
    static FilterSpec loose() { return {0.3, 6, 10, "loose"}; }
    static FilterSpec strict() { return {0.1, 10, 20, "strict"}; }

    /// Accepts "none", "loose", "strict" or "custom:ABD,DP,GQ".
    static FilterSpec parse(const std::string& text);
};

enum class FilterVerdict {
    pass,
    missing_genotype,
    allele_balance,  // ABD above threshold, or AB undefined (no covering reads)
    depth,
    quality,
};

const char* to_string(FilterVerdict v) noexcept;

/// Proportion of reads supporting the rarer allele, in [0, 0.5].
/// nullopt when no reads cover the site; such calls fail every filter.
std::optional<double> allele_balance(int ad_ref, int ad_alt);

/// Deviation from the ideal balance: 0 for homozygotes, 0.5 for heterozygotes.
double allele_balance_deviation(Genotype g, double ab);

/// First violated criterion, in order: genotype presence, allele balance,
/// depth, genotype quality.
FilterVerdict apply_filter(const SiteCall& call, const FilterSpec& filter);

struct ParsedCalls {
    std::vector<SiteCall> calls;
    std::size_t n_skipped = 0;  // malformed lines skipped in lenient mode
};

/// Parses the tab-separated call format (see write_calls for the exact
/// layout). In strict mode a malformed line throws parse_error with its
/// line number; otherwise it is skipped and counted.
ParsedCalls parse_calls(std::istream& in, bool strict_mode);

/// Serialises calls byte-for-byte reproducibly; parse_calls(write_calls(x))
/// is field-identical to x.
void write_calls(std::ostream& out, std::span<const SiteCall> calls);

inline constexpr const char* call_file_header =
    "segment_id\tchrom\tpos\tref\talt\tgt\tdp\tgq\tad_ref\tad_alt";

struct SharedSite {
    std::string segment_id;
    std::int64_t position;
    Genotype genotype_a;
    Genotype genotype_b;
};

struct PairedSites {
    ConfusionTable confusion;
    std::vector<SharedSite> shared_sites;
    std::uint64_t n_excluded_missing = 0;  // site present in only one sample
    std::uint64_t n_excluded_filter = 0;   // failed the filter in either sample
    std::uint64_t n_excluded_alleles = 0;  // ref/alt disagree between the samples
};

/// Joins two samples on (segment_id, chromosome, position) and tallies the
/// genotype pairs of sites passing the filter in both into a confusion
/// table (rows = sample a). A site's alleles must agree between the
/// samples; an unobserved alt ('.') is compatible with any concrete alt.
/// Throws std::invalid_argument on a duplicated (segment, position) within
/// one sample, naming the site.
PairedSites pair_samples(std::span<const SiteCall> a, std::span<const SiteCall> b,
                         const FilterSpec& filter);

}  // namespace snplr
