#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "snplr/call_ingestion.hpp"
#include "snplr/genotype_model.hpp"

namespace snplr {

/// A diallelic candidate SNP with per-population alternative-allele
/// frequencies, aligned with CandidateSet::populations.
struct CandidateMarker {
    std::string segment_id;
    std::string chromosome;
    std::int64_t position = 0;
    std::string rs_label;
    std::vector<double> alt_freqs;

    bool operator==(const CandidateMarker&) const = default;
};

struct CandidateSet {
    std::vector<std::string> populations;  // from the af_<NAME> header columns
    std::vector<CandidateMarker> markers;
};

/// Parses the candidate TSV. Frequencies are normalised to the alternative
/// allele regardless of the file's declared orientation.
CandidateSet load_candidates(std::istream& in);

struct SegmentSpec {
    std::string segment_id;
    std::string chromosome;
    std::int64_t start = 0;  // 1-based, inclusive
    std::int64_t end = 0;
};

std::vector<SegmentSpec> load_segments(std::istream& in);

/// Keeps markers whose allele frequency is within `threshold` of 0.5 in
/// every population (equivalently, MAF >= 0.5 - threshold everywhere).
CandidateSet filter_by_afd(const CandidateSet& candidates, double threshold);

/// Unweighted sum over populations of |AF - 0.5|; lower is better.
/// Throws std::invalid_argument when the marker carries no frequencies.
double score_marker(const CandidateMarker& marker);

/// Genotype frequencies for one marker in one population, under HWE.
GenotypeFrequencies marker_freqs(const CandidateMarker& marker, std::size_t population_index);

struct SkippedSegment {
    std::string segment_id;
    std::string reason;  // no_candidates | afd | no_call | filter | alleles
};

struct SelectionResult {
    std::map<std::string, CandidateMarker> chosen;  // at most one marker per segment
    std::vector<SkippedSegment> skipped_segments;
    double afd_threshold = 0.5;
    std::string filter_name;
};

/// Chooses one marker per segment using the trace sample only: among
/// AFD-eligible candidates whose position carries a trace call passing the
/// filter (with sane diallelic alleles), the minimum-score candidate wins;
/// ties break by (chromosome, position) ascending. The PoI profile is not
/// an input, by construction.
SelectionResult select_markers(const CandidateSet& candidates,
                               std::span<const SegmentSpec> segments,
                               std::span<const SiteCall> trace_calls,
                               const FilterSpec& filter, double afd_threshold);

/// One candidate with both observed genotypes, ready for LR evaluation.
struct CandidateEvidence {
    CandidateMarker marker;
    Genotype trace_genotype;
    Genotype poi_genotype;
};

/// Minimum combined LR over all cross-segment candidate combinations.
/// Computed as the product of per-segment minimum single-locus LRs, which
/// equals the exhaustive minimum because segments contribute independent
/// factors; the combination space is never enumerated.
LrResult min_lr_profile(const std::map<std::string, std::vector<CandidateEvidence>>& per_segment,
                        ErrorRate w, std::size_t population_index);

}  // namespace snplr
