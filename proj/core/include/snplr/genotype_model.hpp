#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "snplr/errors.hpp"

namespace snplr {

/// Diploid genotype at a diallelic site, encoded as the number of
/// alternative (non-reference) alleles.
enum class Genotype : std::uint8_t {
    hom_ref = 0,
    het = 1,
    hom_alt = 2,
};

inline constexpr std::array<Genotype, 3> all_genotypes{
    Genotype::hom_ref, Genotype::het, Genotype::hom_alt};

constexpr int alt_count(Genotype g) noexcept { return static_cast<int>(g); }

/// Throws std::domain_error unless value is 0, 1 or 2.
Genotype genotype_from_int(int value);

/// Probability that a single allele is misread through sequencing,
/// alignment and genotype calling. The model is symmetric under
/// w <-> 1-w, so w is restricted to [0, 0.5]; estimators additionally
/// keep away from the upper endpoint.
class ErrorRate {
public:
    explicit ErrorRate(double w);
    double value() const noexcept { return w_; }

private:
    double w_;
};

/// Population probabilities of the three genotypes. Must sum to 1.
class GenotypeFrequencies {
public:
    GenotypeFrequencies(double p0, double p1, double p2);

    double p(Genotype g) const noexcept { return p_[static_cast<std::size_t>(g)]; }
    double p0() const noexcept { return p_[0]; }
    double p1() const noexcept { return p_[1]; }
    double p2() const noexcept { return p_[2]; }

private:
    std::array<double, 3> p_;
};

/// Hardy-Weinberg genotype frequencies from the reference-allele
/// frequency q: (q^2, 2q(1-q), (1-q)^2).
GenotypeFrequencies hwe_genotype_freqs(double ref_allele_freq);

/// Row-stochastic matrix of P(observed = x | latent = z). Both alleles are
/// misread independently with probability w, so e.g. a latent homozygote is
/// observed as the opposite homozygote with probability w^2.
struct GenotypeChannel {
    std::array<std::array<double, 3>, 3> p{};

    double prob(Genotype latent, Genotype observed) const noexcept {
        return p[static_cast<std::size_t>(latent)][static_cast<std::size_t>(observed)];
    }
};

GenotypeChannel genotype_channel(ErrorRate w);

/// Trinomial probabilities of a paired-call confusion table landing on the
/// diagonal, in the two opposite-homozygote corners, or elsewhere. Does not
/// depend on the latent genotype.
struct CategoryProbs {
    double diagonal;
    double corner;
    double offdiagonal;
};

/// Valid for any w in [0, 1]; symmetric about w = 0.5.
CategoryProbs category_probs_at(double w);
CategoryProbs category_probs(ErrorRate w);

/// Observed genotypes of trace donor and person of interest at one locus,
/// with the genotype frequencies of the relevant population.
struct EvidencePair {
    Genotype donor;  // trace sample
    Genotype poi;    // person of interest
    GenotypeFrequencies freqs;
};

/// P(evidence | the PoI is the trace donor): one latent genotype drawn from
/// freqs, observed twice through the error channel. Closed-form polynomial.
double joint_prob_hp(const EvidencePair& e, ErrorRate w);

/// P(evidence | an unrelated person is the donor): two independent latent
/// genotypes, one noisy observation each. Closed-form polynomial.
double joint_prob_hd(const EvidencePair& e, ErrorRate w);

/// Same quantities composed from the channel matrix; kept alongside the
/// closed forms so the two routes can be cross-checked.
double joint_prob_hp_composed(const EvidencePair& e, ErrorRate w);
double joint_prob_hd_composed(const EvidencePair& e, ErrorRate w);

/// P(observed genotype = x) for one noisy observation of one individual.
double genotype_marginal(Genotype x, const GenotypeFrequencies& freqs, ErrorRate w);

/// Single-locus likelihood ratio joint_prob_hp / joint_prob_hd.
///
/// At w = 0 the conventional values are returned in closed form: 1/p_x for a
/// match on genotype x and exactly 0 for a mismatch. Throws
/// undefined_lr_error when the denominator vanishes (e.g. p_x = 0 at w = 0).
double lr_single(const EvidencePair& e, ErrorRate w);

struct LrResult {
    std::vector<double> per_locus_lr;
    /// Sum of log10 per-locus values; -infinity when any locus LR is 0.
    double log10_combined;
};

/// Combined LR over independent loci. Per-locus LRs are evaluated in linear
/// space and combined in log10 space. Throws std::invalid_argument on an
/// empty profile and undefined_lr_error (naming the locus) when any locus is
/// undefined.
LrResult lr_profile(std::span<const EvidencePair> pairs, ErrorRate w);

}  // namespace snplr
