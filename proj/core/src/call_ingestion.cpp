#include "snplr/call_ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <tuple>

namespace snplr {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

bool parse_int(std::string_view text, std::int64_t& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool valid_allele(std::string_view text) {
    if (text.size() != 1) return false;
    const char c = text[0];
    return c == 'A' || c == 'C' || c == 'G' || c == 'T' || c == '.';
}

SiteCall parse_line(std::string_view line, std::size_t line_no) {
    const auto fields = split_tabs(line);
    if (fields.size() != 10) throw parse_error("expected 10 tab-separated fields", line_no);

    SiteCall call;
    call.segment_id = std::string(fields[0]);
    call.chromosome = std::string(fields[1]);
    if (call.segment_id.empty() || call.chromosome.empty())
        throw parse_error("empty segment_id or chrom", line_no);

    std::int64_t v = 0;
    if (!parse_int(fields[2], v) || v < 1) throw parse_error("pos must be a positive integer", line_no);
    call.position = v;

    if (!valid_allele(fields[3]) || fields[3][0] == '.')
        throw parse_error("ref must be one of A, C, G, T", line_no);
    call.ref_allele = fields[3][0];
    if (!valid_allele(fields[4])) throw parse_error("alt must be one of A, C, G, T or '.'", line_no);
    call.alt_allele = fields[4][0];

    if (fields[5] == "./.") {
        call.genotype = std::nullopt;
    } else if (fields[5] == "0" || fields[5] == "1" || fields[5] == "2") {
        call.genotype = static_cast<Genotype>(fields[5][0] - '0');
    } else {
        throw parse_error("gt must be 0, 1, 2 or ./.", line_no);
    }

    const auto read_count = [&](std::string_view f, const char* what) {
        std::int64_t n = 0;
        if (!parse_int(f, n) || n < 0)
            throw parse_error(std::string(what) + " must be a non-negative integer", line_no);
        return static_cast<int>(n);
    };
    call.depth = read_count(fields[6], "dp");
    call.genotype_quality = read_count(fields[7], "gq");
    call.ad_ref = read_count(fields[8], "ad_ref");
    call.ad_alt = read_count(fields[9], "ad_alt");
    call.ad_exceeds_depth = call.ad_ref + call.ad_alt > call.depth;
    return call;
}

using SiteKey = std::tuple<std::string_view, std::string_view, std::int64_t>;

SiteKey key_of(const SiteCall& c) {
    return {c.segment_id, c.chromosome, c.position};
}

// Sorted (key -> call) view of one sample; duplicates on (segment, position)
// are rejected.
std::vector<const SiteCall*> sorted_index(std::span<const SiteCall> calls, const char* label) {
    std::vector<const SiteCall*> index;
    index.reserve(calls.size());
    for (const SiteCall& c : calls) index.push_back(&c);
    std::sort(index.begin(), index.end(), [](const SiteCall* x, const SiteCall* y) {
        return key_of(*x) < key_of(*y);
    });
    for (std::size_t i = 1; i < index.size(); ++i) {
        if (index[i - 1]->segment_id == index[i]->segment_id &&
            index[i - 1]->position == index[i]->position) {
            throw std::invalid_argument("duplicate site in sample " + std::string(label) + ": " +
                                        index[i]->segment_id + ":" +
                                        std::to_string(index[i]->position));
        }
    }
    return index;
}

// Alleles are comparable between samples when the refs agree and the alts
// are identical or one side never observed an alt. A variant genotype with
// an unobserved alt is internally inconsistent.
bool alleles_consistent(const SiteCall& a, const SiteCall& b) {
    const auto sane = [](const SiteCall& c) {
        return !(c.genotype && *c.genotype != Genotype::hom_ref && c.alt_allele == '.');
    };
    if (!sane(a) || !sane(b)) return false;
    if (a.ref_allele != b.ref_allele) return false;
    return a.alt_allele == b.alt_allele || a.alt_allele == '.' || b.alt_allele == '.';
}

}  // namespace

FilterSpec FilterSpec::parse(const std::string& text) {
    if (text == "none") return none();
    if (text == "loose") return loose();
    if (text == "strict") return strict();
    constexpr std::string_view prefix = "custom:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string body = text.substr(prefix.size());
        double abd = 0.0;
        int dp = 0, gq = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(body);
        if (in >> abd >> c1 >> dp >> c2 >> gq && c1 == ',' && c2 == ',' && in.eof() &&
            abd >= 0.0 && abd <= 0.5 && dp >= 0 && gq >= 0) {
            return {abd, dp, gq, text};
        }
        throw std::invalid_argument("custom filter must be custom:ABD,DP,GQ with ABD in [0, 0.5]");
    }
    throw std::invalid_argument("unknown filter '" + text + "'");
}

const char* to_string(FilterVerdict v) noexcept {
    switch (v) {
        case FilterVerdict::pass: return "pass";
        case FilterVerdict::missing_genotype: return "missing_genotype";
        case FilterVerdict::allele_balance: return "allele_balance";
        case FilterVerdict::depth: return "depth";
        case FilterVerdict::quality: return "quality";
    }
    return "unknown";
}

std::optional<double> allele_balance(int ad_ref, int ad_alt) {
    if (ad_ref < 0 || ad_alt < 0) throw std::domain_error("negative allele depth");
    const int total = ad_ref + ad_alt;
    if (total == 0) return std::nullopt;
    return static_cast<double>(std::min(ad_ref, ad_alt)) / static_cast<double>(total);
}

double allele_balance_deviation(Genotype g, double ab) {
    if (!(ab >= 0.0 && ab <= 0.5)) throw std::domain_error("allele balance outside [0, 0.5]");
    return g == Genotype::het ? 0.5 - ab : ab;
}

FilterVerdict apply_filter(const SiteCall& call, const FilterSpec& filter) {
    if (!call.genotype) return FilterVerdict::missing_genotype;
    const auto ab = allele_balance(call.ad_ref, call.ad_alt);
    if (!ab) return FilterVerdict::allele_balance;  // uninterpretable evidence
    if (allele_balance_deviation(*call.genotype, *ab) > filter.max_abd)
        return FilterVerdict::allele_balance;
    if (call.depth < filter.min_dp) return FilterVerdict::depth;
    if (call.genotype_quality < filter.min_gq) return FilterVerdict::quality;
    return FilterVerdict::pass;
}

ParsedCalls parse_calls(std::istream& in, bool strict_mode) {
    ParsedCalls result;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != call_file_header)
                throw parse_error("unexpected call-file header", line_no);
            header_seen = true;
            continue;
        }
        try {
            result.calls.push_back(parse_line(line, line_no));
        } catch (const parse_error&) {
            if (strict_mode) throw;
            ++result.n_skipped;
        }
    }
    if (!header_seen) throw parse_error("missing call-file header");
    return result;
}

void write_calls(std::ostream& out, std::span<const SiteCall> calls) {
    out << call_file_header << '\n';
    for (const SiteCall& c : calls) {
        out << c.segment_id << '\t' << c.chromosome << '\t' << c.position << '\t'
            << c.ref_allele << '\t' << c.alt_allele << '\t';
        if (c.genotype)
            out << alt_count(*c.genotype);
        else
            out << "./.";
        out << '\t' << c.depth << '\t' << c.genotype_quality << '\t' << c.ad_ref << '\t'
            << c.ad_alt << '\n';
    }
}

PairedSites pair_samples(std::span<const SiteCall> a, std::span<const SiteCall> b,
                         const FilterSpec& filter) {
    const auto ia = sorted_index(a, "a");
    const auto ib = sorted_index(b, "b");

    PairedSites result;
    std::size_t i = 0, j = 0;
    while (i < ia.size() || j < ib.size()) {
        if (j == ib.size() || (i < ia.size() && key_of(*ia[i]) < key_of(*ib[j]))) {
            ++result.n_excluded_missing;
            ++i;
            continue;
        }
        if (i == ia.size() || key_of(*ib[j]) < key_of(*ia[i])) {
            ++result.n_excluded_missing;
            ++j;
            continue;
        }

        const SiteCall& ca = *ia[i];
        const SiteCall& cb = *ib[j];
        ++i;
        ++j;
        if (!alleles_consistent(ca, cb)) {
            ++result.n_excluded_alleles;
            continue;
        }
        if (apply_filter(ca, filter) != FilterVerdict::pass ||
            apply_filter(cb, filter) != FilterVerdict::pass) {
            ++result.n_excluded_filter;
            continue;
        }
        result.confusion.cell(alt_count(*ca.genotype), alt_count(*cb.genotype)) += 1;
        result.shared_sites.push_back(
            {ca.segment_id, ca.position, *ca.genotype, *cb.genotype});
    }
    return result;
}

}  // namespace snplr
