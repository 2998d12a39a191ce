#include "snplr/genotype_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace snplr {

namespace {

constexpr double kFreqSumTol = 1e-12;

int pair_key(Genotype a, Genotype b) noexcept {
    int lo = alt_count(a), hi = alt_count(b);
    if (lo > hi) std::swap(lo, hi);
    return lo * 3 + hi;
}

}  // namespace

Genotype genotype_from_int(int value) {
    if (value < 0 || value > 2)
        throw std::domain_error("genotype must be 0, 1 or 2, got " + std::to_string(value));
    return static_cast<Genotype>(value);
}

ErrorRate::ErrorRate(double w) : w_(w) {
    if (!(w >= 0.0 && w <= 0.5))
        throw std::domain_error("calling error probability must lie in [0, 0.5], got " +
                                std::to_string(w));
}

GenotypeFrequencies::GenotypeFrequencies(double p0, double p1, double p2) : p_{p0, p1, p2} {
    for (double p : p_)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("genotype frequency outside [0, 1]");
    if (std::fabs(p0 + p1 + p2 - 1.0) > kFreqSumTol)
        throw std::domain_error("genotype frequencies must sum to 1");
}

GenotypeFrequencies hwe_genotype_freqs(double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("allele frequency must lie in [0, 1], got " + std::to_string(q));
    return {q * q, 2.0 * q * (1.0 - q), (1.0 - q) * (1.0 - q)};
}

GenotypeChannel genotype_channel(ErrorRate werr) {
    const double w = werr.value();
    const double u = 1.0 - w;
    GenotypeChannel ch;
    ch.p[0] = {u * u, 2.0 * w * u, w * w};
    ch.p[1] = {w * u, w * w + u * u, w * u};
    ch.p[2] = {w * w, 2.0 * w * u, u * u};
    return ch;
}

CategoryProbs category_probs_at(double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw std::domain_error("category probabilities need w in [0, 1]");
    const double u = 1.0 - w;
    const double w2 = w * w, u2 = u * u;
    return {
        w2 * w2 + 4.0 * w2 * u2 + u2 * u2,          // both calls agree
        2.0 * w2 * u2,                              // opposite homozygotes
        4.0 * w2 * w * u + 4.0 * w * u2 * u,        // one-allele discrepancies
    };
}

CategoryProbs category_probs(ErrorRate w) { return category_probs_at(w.value()); }

double joint_prob_hp(const EvidencePair& e, ErrorRate werr) {
    const double w = werr.value();
    const double u = 1.0 - w;
    const double p0 = e.freqs.p0(), p1 = e.freqs.p1(), p2 = e.freqs.p2();
    const double w2 = w * w, u2 = u * u;
    const double w2u2 = w2 * u2, w3u = w2 * w * u, wu3 = w * u2 * u;
    const double w4 = w2 * w2, u4 = u2 * u2;

    switch (pair_key(e.donor, e.poi)) {
        case 0:  // (0,0)
            return p0 * u4 + p1 * w2u2 + p2 * w4;
        case 1:  // (0,1)
            return 2.0 * p0 * wu3 + p1 * w3u + p1 * wu3 + 2.0 * p2 * w3u;
        case 2:  // (0,2)
            return p0 * w2u2 + p1 * w2u2 + p2 * w2u2;
        case 4:  // (1,1)
            return 4.0 * p0 * w2u2 + p1 * w4 + 2.0 * p1 * w2u2 + p1 * u4 + 4.0 * p2 * w2u2;
        case 5:  // (1,2)
            return 2.0 * p0 * w3u + p1 * w3u + p1 * wu3 + 2.0 * p2 * wu3;
        case 8:  // (2,2)
            return p0 * w4 + p1 * w2u2 + p2 * u4;
        default:
            return 0.0;  // unreachable
    }
}

double joint_prob_hd(const EvidencePair& e, ErrorRate werr) {
    const double w = werr.value();
    const double u = 1.0 - w;
    const double p0 = e.freqs.p0(), p1 = e.freqs.p1(), p2 = e.freqs.p2();
    const double w2 = w * w, u2 = u * u;
    const double w2u2 = w2 * u2, w3u = w2 * w * u, wu3 = w * u2 * u;
    const double w4 = w2 * w2, u4 = u2 * u2;
    const double p00 = p0 * p0, p01 = p0 * p1, p02 = p0 * p2;
    const double p11 = p1 * p1, p12 = p1 * p2, p22 = p2 * p2;

    switch (pair_key(e.donor, e.poi)) {
        case 0:  // (0,0)
            return p00 * u4 + 2.0 * p01 * wu3 + 2.0 * p02 * w2u2 + p11 * w2u2 +
                   2.0 * p12 * w3u + p22 * w4;
        case 1:  // (0,1)
            return 2.0 * p00 * wu3 + 3.0 * p01 * w2u2 + p01 * u4 + 2.0 * p02 * w3u +
                   2.0 * p02 * wu3 + p11 * w3u + p11 * wu3 + p12 * w4 + 3.0 * p12 * w2u2 +
                   2.0 * p22 * w3u;
        case 2:  // (0,2)
            return p00 * w2u2 + p01 * w3u + p01 * wu3 + p02 * w4 + p02 * u4 + p11 * w2u2 +
                   p12 * w3u + p12 * wu3 + p22 * w2u2;
        case 4:  // (1,1)
            return 4.0 * p00 * w2u2 + 4.0 * p01 * w3u + 4.0 * p01 * wu3 + 8.0 * p02 * w2u2 +
                   p11 * w4 + 2.0 * p11 * w2u2 + p11 * u4 + 4.0 * p12 * w3u + 4.0 * p12 * wu3 +
                   4.0 * p22 * w2u2;
        case 5:  // (1,2)
            return 2.0 * p00 * w3u + p01 * w4 + 3.0 * p01 * w2u2 + 2.0 * p02 * w3u +
                   2.0 * p02 * wu3 + p11 * w3u + p11 * wu3 + 3.0 * p12 * w2u2 + p12 * u4 +
                   2.0 * p22 * wu3;
        case 8:  // (2,2)
            return p00 * w4 + 2.0 * p01 * w3u + 2.0 * p02 * w2u2 + p11 * w2u2 +
                   2.0 * p12 * wu3 + p22 * u4;
        default:
            return 0.0;  // unreachable
    }
}

double genotype_marginal(Genotype x, const GenotypeFrequencies& freqs, ErrorRate w) {
    const GenotypeChannel ch = genotype_channel(w);
    double total = 0.0;
    for (Genotype z : all_genotypes) total += freqs.p(z) * ch.prob(z, x);
    return total;
}

double joint_prob_hp_composed(const EvidencePair& e, ErrorRate w) {
    const GenotypeChannel ch = genotype_channel(w);
    double total = 0.0;
    for (Genotype z : all_genotypes)
        total += e.freqs.p(z) * ch.prob(z, e.donor) * ch.prob(z, e.poi);
    return total;
}

double joint_prob_hd_composed(const EvidencePair& e, ErrorRate w) {
    return genotype_marginal(e.donor, e.freqs, w) * genotype_marginal(e.poi, e.freqs, w);
}

double lr_single(const EvidencePair& e, ErrorRate werr) {
    if (werr.value() == 0.0) {
        // Error-free limit in closed form: 1/p_x for a match, 0 for a
        // mismatch, exact rather than a ratio of rounded polynomials.
        if (e.donor == e.poi) {
            const double px = e.freqs.p(e.donor);
            if (px == 0.0)
                throw undefined_lr_error(
                    "LR undefined: matching genotype has zero population frequency at w = 0");
            return 1.0 / px;
        }
        const double denom = e.freqs.p(e.donor) * e.freqs.p(e.poi);
        if (denom == 0.0)
            throw undefined_lr_error(
                "LR undefined: evidence has zero probability under Hd at w = 0");
        return 0.0;
    }

    const double denom = joint_prob_hd(e, werr);
    if (denom == 0.0)
        throw undefined_lr_error("LR undefined: evidence probability under Hd vanished");
    return joint_prob_hp(e, werr) / denom;
}

LrResult lr_profile(std::span<const EvidencePair> pairs, ErrorRate w) {
    if (pairs.empty()) throw std::invalid_argument("lr_profile requires at least one locus");

    LrResult result;
    result.per_locus_lr.reserve(pairs.size());
    double log10_sum = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        double lr;
        try {
            lr = lr_single(pairs[i], w);
        } catch (const undefined_lr_error& err) {
            throw undefined_lr_error("locus " + std::to_string(i) + ": " + err.what());
        }
        result.per_locus_lr.push_back(lr);
        log10_sum += std::log10(lr);  // log10(0) == -inf propagates the zero
    }
    result.log10_combined = log10_sum;
    return result;
}

}  // namespace snplr
