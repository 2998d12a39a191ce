#include "snplr/case_simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "snplr/numerics.hpp"

namespace snplr {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

Genotype draw_genotype(const GenotypeFrequencies& freqs, CounterRng& rng) {
    const double u = rng.next();
    if (u < freqs.p0()) return Genotype::hom_ref;
    if (u < freqs.p0() + freqs.p1()) return Genotype::het;
    return Genotype::hom_alt;
}

Genotype draw_observed(Genotype latent, const GenotypeChannel& channel, CounterRng& rng) {
    const double u = rng.next();
    const auto& row = channel.p[static_cast<std::size_t>(latent)];
    if (u < row[0]) return Genotype::hom_ref;
    if (u < row[0] + row[1]) return Genotype::het;
    return Genotype::hom_alt;
}

// Linear-interpolation quantile of sorted values (R type 7).
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

const char* to_string(Hypothesis h) noexcept {
    return h == Hypothesis::hp ? "Hp" : "Hd";
}

Hypothesis hypothesis_from_string(const std::string& text) {
    if (text == "Hp" || text == "hp") return Hypothesis::hp;
    if (text == "Hd" || text == "hd") return Hypothesis::hd;
    throw std::invalid_argument("hypothesis must be Hp or Hd, got '" + text + "'");
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t case_index, std::uint64_t locus_index)
    : key_(mix64(mix64(mix64(seed) ^ case_index) ^ locus_index)) {}

double CounterRng::next() {
    const std::uint64_t h = mix64(key_ + kGolden * ++draw_);
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

EvidencePair simulate_genotype_pair(Hypothesis h, ErrorRate w_true,
                                    const GenotypeFrequencies& freqs, CounterRng& rng) {
    const GenotypeChannel channel = genotype_channel(w_true);
    if (h == Hypothesis::hp) {
        const Genotype latent = draw_genotype(freqs, rng);
        const Genotype donor = draw_observed(latent, channel, rng);
        const Genotype poi = draw_observed(latent, channel, rng);
        return {donor, poi, freqs};
    }
    const Genotype latent_donor = draw_genotype(freqs, rng);
    const Genotype latent_poi = draw_genotype(freqs, rng);
    const Genotype donor = draw_observed(latent_donor, channel, rng);
    const Genotype poi = draw_observed(latent_poi, channel, rng);
    return {donor, poi, freqs};
}

CaseResult simulate_case(const SimConfig& config, int case_index, bool keep_pairs) {
    if (config.n_loci < 1) throw std::invalid_argument("n_loci must be at least 1");
    const GenotypeFrequencies freqs = hwe_genotype_freqs(config.q);
    const ErrorRate w_true{config.w_true};

    std::vector<EvidencePair> pairs;
    pairs.reserve(static_cast<std::size_t>(config.n_loci));
    for (int locus = 0; locus < config.n_loci; ++locus) {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(case_index),
                       static_cast<std::uint64_t>(locus));
        pairs.push_back(simulate_genotype_pair(config.hypothesis, w_true, freqs, rng));
    }

    const LrResult lr = lr_profile(pairs, ErrorRate{config.analysis_w()});
    CaseResult result{lr.log10_combined, {}};
    if (keep_pairs) result.pairs = std::move(pairs);
    return result;
}

std::vector<StudyCell> simulate_study(std::span<const SimConfig> grid) {
    std::vector<StudyCell> cells;
    cells.reserve(grid.size());
    for (const SimConfig& config : grid) {
        if (config.n_cases < 1) throw std::invalid_argument("n_cases must be at least 1");
        StudyCell cell;
        cell.config = config;
        std::vector<double> finite;
        finite.reserve(static_cast<std::size_t>(config.n_cases));
        for (int i = 0; i < config.n_cases; ++i) {
            const double v = simulate_case(config, i).log10_lr;
            if (std::isinf(v))
                ++cell.n_neg_infinity;
            else
                finite.push_back(v);
        }
        cell.n_finite = finite.size();
        if (!finite.empty()) {
            std::sort(finite.begin(), finite.end());
            cell.min = finite.front();
            cell.q1 = quantile_sorted(finite, 0.25);
            cell.median = quantile_sorted(finite, 0.5);
            cell.q3 = quantile_sorted(finite, 0.75);
            cell.max = finite.back();
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

void write_study_csv(std::ostream& out, std::span<const StudyCell> cells) {
    out << "hypothesis,w_true,w_analysis,q,n_loci,n_cases,seed,min,q1,median,q3,max,"
           "n_neg_infinity\n";
    for (const StudyCell& c : cells) {
        const SimConfig& cfg = c.config;
        out << to_string(cfg.hypothesis) << ',' << num::to_string_shortest(cfg.w_true) << ','
            << num::to_string_shortest(cfg.analysis_w()) << ','
            << num::to_string_shortest(cfg.q) << ',' << cfg.n_loci << ',' << cfg.n_cases << ','
            << cfg.seed << ',';
        if (c.n_finite > 0) {
            out << num::to_string_shortest(c.min) << ',' << num::to_string_shortest(c.q1) << ','
                << num::to_string_shortest(c.median) << ',' << num::to_string_shortest(c.q3)
                << ',' << num::to_string_shortest(c.max);
        } else {
            out << ",,,,";
        }
        out << ',' << c.n_neg_infinity << '\n';
    }
}

void write_cases_csv(std::ostream& out, const SimConfig& config,
                     std::span<const CaseResult> cases) {
    out << "hypothesis,w_true,w_analysis,q,n_loci,seed,case_index,log10_lr\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
        out << to_string(config.hypothesis) << ',' << num::to_string_shortest(config.w_true)
            << ',' << num::to_string_shortest(config.analysis_w()) << ','
            << num::to_string_shortest(config.q) << ',' << config.n_loci << ',' << config.seed
            << ',' << i << ',' << num::to_string_shortest(cases[i].log10_lr) << '\n';
    }
}

}  // namespace snplr
