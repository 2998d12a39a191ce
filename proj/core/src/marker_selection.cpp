#include "snplr/marker_selection.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace snplr {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

double parse_freq(const std::string& text, std::size_t line_no) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !(v >= 0.0 && v <= 1.0))
        throw parse_error("allele frequency must lie in [0, 1], got '" + text + "'", line_no);
    return v;
}

std::int64_t parse_position(const std::string& text, std::size_t line_no) {
    std::int64_t v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || v < 1)
        throw parse_error("position must be a positive integer", line_no);
    return v;
}

}  // namespace

CandidateSet load_candidates(std::istream& in) {
    CandidateSet set;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t n_pops = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tabs(line);

        if (!header_seen) {
            if (fields.size() < 6 || fields[0] != "segment_id" || fields[1] != "chrom" ||
                fields[2] != "pos" || fields[3] != "rs" || fields[4] != "orientation")
                throw parse_error(
                    "candidate header must start segment_id, chrom, pos, rs, orientation",
                    line_no);
            for (std::size_t i = 5; i < fields.size(); ++i) {
                if (fields[i].rfind("af_", 0) != 0)
                    throw parse_error("population columns must be named af_<NAME>", line_no);
                set.populations.push_back(fields[i].substr(3));
            }
            n_pops = set.populations.size();
            header_seen = true;
            continue;
        }

        if (fields.size() != 5 + n_pops)
            throw parse_error("expected " + std::to_string(5 + n_pops) + " fields", line_no);

        CandidateMarker m;
        m.segment_id = fields[0];
        m.chromosome = fields[1];
        m.position = parse_position(fields[2], line_no);
        m.rs_label = fields[3];
        if (m.rs_label.empty()) throw parse_error("rs label must be non-empty", line_no);

        const std::string& orientation = fields[4];
        if (orientation != "ref" && orientation != "alt")
            throw parse_error("orientation must be 'ref' or 'alt'", line_no);

        m.alt_freqs.reserve(n_pops);
        for (std::size_t i = 0; i < n_pops; ++i) {
            const double f = parse_freq(fields[5 + i], line_no);
            m.alt_freqs.push_back(orientation == "alt" ? f : 1.0 - f);
        }
        set.markers.push_back(std::move(m));
    }
    if (!header_seen) throw parse_error("missing candidate-file header");
    return set;
}

std::vector<SegmentSpec> load_segments(std::istream& in) {
    std::vector<SegmentSpec> segments;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tabs(line);
        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "segment_id" || fields[1] != "chrom" ||
                fields[2] != "start" || fields[3] != "end")
                throw parse_error("segment header must be segment_id, chrom, start, end", line_no);
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) throw parse_error("expected 4 fields", line_no);
        SegmentSpec s;
        s.segment_id = fields[0];
        s.chromosome = fields[1];
        s.start = parse_position(fields[2], line_no);
        s.end = parse_position(fields[3], line_no);
        if (s.end < s.start) throw parse_error("segment end before start", line_no);
        segments.push_back(std::move(s));
    }
    if (!header_seen) throw parse_error("missing segment-file header");
    return segments;
}

CandidateSet filter_by_afd(const CandidateSet& candidates, double threshold) {
    if (!(threshold > 0.0 && threshold <= 0.5))
        throw std::domain_error("AFD threshold must lie in (0, 0.5]");
    CandidateSet kept;
    kept.populations = candidates.populations;
    for (const CandidateMarker& m : candidates.markers) {
        const bool ok = std::all_of(m.alt_freqs.begin(), m.alt_freqs.end(), [&](double f) {
            return std::fabs(f - 0.5) <= threshold;
        });
        if (ok) kept.markers.push_back(m);
    }
    return kept;
}

double score_marker(const CandidateMarker& marker) {
    if (marker.alt_freqs.empty())
        throw std::invalid_argument("marker " + marker.rs_label + " carries no frequencies");
    double score = 0.0;
    for (double f : marker.alt_freqs) score += std::fabs(f - 0.5);
    return score;
}

GenotypeFrequencies marker_freqs(const CandidateMarker& marker, std::size_t population_index) {
    if (population_index >= marker.alt_freqs.size())
        throw std::invalid_argument("population index out of range for marker " + marker.rs_label);
    return hwe_genotype_freqs(1.0 - marker.alt_freqs[population_index]);
}

SelectionResult select_markers(const CandidateSet& candidates,
                               std::span<const SegmentSpec> segments,
                               std::span<const SiteCall> trace_calls,
                               const FilterSpec& filter, double afd_threshold) {
    const CandidateSet eligible = filter_by_afd(candidates, afd_threshold);

    std::unordered_map<std::string, std::vector<const CandidateMarker*>> by_segment_all;
    for (const CandidateMarker& m : candidates.markers)
        by_segment_all[m.segment_id].push_back(&m);
    std::unordered_map<std::string, std::vector<const CandidateMarker*>> by_segment;
    for (const CandidateMarker& m : eligible.markers) by_segment[m.segment_id].push_back(&m);

    // trace lookup keyed by site
    std::map<std::tuple<std::string, std::string, std::int64_t>, const SiteCall*> trace;
    for (const SiteCall& c : trace_calls)
        trace[{c.segment_id, c.chromosome, c.position}] = &c;

    SelectionResult result;
    result.afd_threshold = afd_threshold;
    result.filter_name = filter.name;

    for (const SegmentSpec& seg : segments) {
        const auto all_it = by_segment_all.find(seg.segment_id);
        if (all_it == by_segment_all.end()) {
            result.skipped_segments.push_back({seg.segment_id, "no_candidates"});
            continue;
        }
        const auto it = by_segment.find(seg.segment_id);
        if (it == by_segment.end()) {
            result.skipped_segments.push_back({seg.segment_id, "afd"});
            continue;
        }

        const CandidateMarker* best = nullptr;
        double best_score = std::numeric_limits<double>::infinity();
        bool saw_filter_fail = false, saw_allele_fail = false;
        for (const CandidateMarker* m : it->second) {
            const auto call_it = trace.find({m->segment_id, m->chromosome, m->position});
            if (call_it == trace.end()) continue;
            const SiteCall& call = *call_it->second;
            if (apply_filter(call, filter) != FilterVerdict::pass) {
                saw_filter_fail = true;
                continue;
            }
            // variant genotype needs an observed alt to identify the site
            if (call.genotype && *call.genotype != Genotype::hom_ref && call.alt_allele == '.') {
                saw_allele_fail = true;
                continue;
            }
            const double score = score_marker(*m);
            const bool better =
                best == nullptr || score < best_score ||
                (score == best_score &&
                 std::tie(m->chromosome, m->position) < std::tie(best->chromosome, best->position));
            if (better) {
                best = m;
                best_score = score;
            }
        }

        if (best != nullptr) {
            result.chosen.emplace(seg.segment_id, *best);
        } else if (saw_filter_fail) {
            result.skipped_segments.push_back({seg.segment_id, "filter"});
        } else if (saw_allele_fail) {
            result.skipped_segments.push_back({seg.segment_id, "alleles"});
        } else {
            result.skipped_segments.push_back({seg.segment_id, "no_call"});
        }
    }
    return result;
}

LrResult min_lr_profile(const std::map<std::string, std::vector<CandidateEvidence>>& per_segment,
                        ErrorRate w, std::size_t population_index) {
    if (per_segment.empty())
        throw std::invalid_argument("min_lr_profile requires at least one segment");

    LrResult result;
    result.per_locus_lr.reserve(per_segment.size());
    double log10_sum = 0.0;
    for (const auto& [segment_id, evidence] : per_segment) {
        if (evidence.empty())
            throw std::invalid_argument("segment " + segment_id + " has no candidates");
        double seg_min = std::numeric_limits<double>::infinity();
        for (const CandidateEvidence& ev : evidence) {
            const EvidencePair pair{ev.trace_genotype, ev.poi_genotype,
                                    marker_freqs(ev.marker, population_index)};
            double lr;
            try {
                lr = lr_single(pair, w);
            } catch (const undefined_lr_error& err) {
                throw undefined_lr_error("segment " + segment_id + ", marker " +
                                         ev.marker.rs_label + ": " + err.what());
            }
            seg_min = std::min(seg_min, lr);
        }
        result.per_locus_lr.push_back(seg_min);
        log10_sum += std::log10(seg_min);
    }
    result.log10_combined = log10_sum;
    return result;
}

}  // namespace snplr
