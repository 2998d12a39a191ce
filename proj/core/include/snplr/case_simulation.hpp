#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snplr/genotype_model.hpp"

namespace snplr {

enum class Hypothesis { hp, hd };

const char* to_string(Hypothesis h) noexcept;
Hypothesis hypothesis_from_string(const std::string& text);

/// Keyed counter RNG: every (seed, case, locus) triple owns an independent
/// substream of uniforms, so parallel and serial execution order cannot
/// change any draw. Output is identical across platforms.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t case_index, std::uint64_t locus_index);

    /// Uniform in [0, 1).
    double next();

private:
    std::uint64_t key_;
    std::uint64_t draw_ = 0;
};

/// One simulation cell. Cases are generated with w_true and scored with
/// w_analysis (defaults to w_true when unset), allowing misspecification
/// studies.
struct SimConfig {
    Hypothesis hypothesis = Hypothesis::hp;
    double w_true = 0.0;
    std::optional<double> w_analysis;  // nullopt -> w_true
    double q = 0.5;                    // reference allele frequency, HWE
    int n_loci = 1;
    int n_cases = 1;
    std::uint64_t seed = 0;

    double analysis_w() const { return w_analysis.value_or(w_true); }
};

/// Draws one evidence pair: under Hp a single latent genotype observed
/// twice through the channel, under Hd two independent latent genotypes
/// observed once each.
EvidencePair simulate_genotype_pair(Hypothesis h, ErrorRate w_true,
                                    const GenotypeFrequencies& freqs, CounterRng& rng);

struct CaseResult {
    double log10_lr;                  // may be -infinity
    std::vector<EvidencePair> pairs;  // retained only on request
};

/// Deterministic given (config.seed, case_index).
CaseResult simulate_case(const SimConfig& config, int case_index, bool keep_pairs = false);

/// Five-number summary of one cell's log10 LR values. Quartiles cover the
/// finite values only; cases with LR = 0 are tallied in n_neg_infinity.
struct StudyCell {
    SimConfig config;
    std::uint64_t n_finite = 0;
    std::uint64_t n_neg_infinity = 0;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;  // meaningful when n_finite > 0
};

std::vector<StudyCell> simulate_study(std::span<const SimConfig> grid);

/// hypothesis,w_true,w_analysis,q,n_loci,n_cases,seed,min,q1,median,q3,max,n_neg_infinity
/// Numbers use shortest round-trip formatting; summary fields are empty when
/// a cell has no finite values. Byte-identical across reruns.
void write_study_csv(std::ostream& out, std::span<const StudyCell> cells);

/// Per-case values: hypothesis,w_true,w_analysis,q,n_loci,seed,case_index,log10_lr
void write_cases_csv(std::ostream& out, const SimConfig& config,
                     std::span<const CaseResult> cases);

}  // namespace snplr
