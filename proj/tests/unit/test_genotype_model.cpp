#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "snplr/genotype_model.hpp"
#include "support/random_gen.hpp"

using namespace snplr;
using test::random_freqs;
using test::uniform;

namespace {

const GenotypeFrequencies half = hwe_genotype_freqs(0.5);

double sum9(double (*joint)(const EvidencePair&, ErrorRate), const GenotypeFrequencies& f,
            ErrorRate w) {
    double s = 0.0;
    for (Genotype a : all_genotypes)
        for (Genotype b : all_genotypes) s += joint({a, b, f}, w);
    return s;
}

}  // namespace

TEST_CASE("hwe genotype frequencies") {
    const auto f = hwe_genotype_freqs(0.5);
    CHECK(f.p0() == 0.25);
    CHECK(f.p1() == 0.5);
    CHECK(f.p2() == 0.25);

    const auto g = hwe_genotype_freqs(0.25);
    CHECK(g.p0() == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(g.p1() == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(g.p2() == doctest::Approx(0.5625).epsilon(1e-12));

    const auto h = hwe_genotype_freqs(1.0);
    CHECK(h.p0() == 1.0);
    CHECK(h.p1() == 0.0);
    CHECK(h.p2() == 0.0);

    CHECK_THROWS_AS(hwe_genotype_freqs(-0.1), std::domain_error);
    CHECK_THROWS_AS(hwe_genotype_freqs(1.1), std::domain_error);
}

TEST_CASE("genotype frequency invariants enforced") {
    CHECK_THROWS_AS(GenotypeFrequencies(0.5, 0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(GenotypeFrequencies(-0.1, 0.6, 0.5), std::domain_error);
    CHECK_NOTHROW(GenotypeFrequencies(0.2, 0.3, 0.5));
}

TEST_CASE("error rate domain") {
    CHECK_NOTHROW(ErrorRate{0.0});
    CHECK_NOTHROW(ErrorRate{0.5});
    CHECK_THROWS_AS(ErrorRate{-1e-9}, std::domain_error);
    CHECK_THROWS_AS(ErrorRate{0.6}, std::domain_error);
}

TEST_CASE("genotype channel rows") {
    const auto id = genotype_channel(ErrorRate{0.0});
    for (int z = 0; z < 3; ++z)
        for (int x = 0; x < 3; ++x) CHECK(id.p[z][x] == (z == x ? 1.0 : 0.0));

    const auto ch = genotype_channel(ErrorRate{0.01});
    CHECK(ch.p[0][0] == doctest::Approx(0.9801).epsilon(1e-12));
    CHECK(ch.p[0][1] == doctest::Approx(0.0198).epsilon(1e-12));
    CHECK(ch.p[0][2] == doctest::Approx(0.0001).epsilon(1e-12));
    CHECK(ch.p[1][0] == doctest::Approx(0.0099).epsilon(1e-12));
    CHECK(ch.p[1][1] == doctest::Approx(0.9802).epsilon(1e-12));
    CHECK(ch.p[1][2] == doctest::Approx(0.0099).epsilon(1e-12));
}

TEST_CASE("channel row-stochastic for 1000 random w") {
    std::mt19937_64 gen(20240601);
    for (int i = 0; i < 1000; ++i) {
        const auto ch = genotype_channel(ErrorRate{uniform(gen, 0.0, 0.5)});
        for (int z = 0; z < 3; ++z) {
            const double row = ch.p[z][0] + ch.p[z][1] + ch.p[z][2];
            CHECK(std::fabs(row - 1.0) < 1e-12);
            for (int x = 0; x < 3; ++x) {
                CHECK(ch.p[z][x] >= 0.0);
                CHECK(ch.p[z][x] <= 1.0);
                // relabeling reference/alternative mirrors the matrix
                CHECK(ch.p[z][x] == ch.p[2 - z][2 - x]);
            }
        }
    }
}

TEST_CASE("category probabilities") {
    const auto zero = category_probs(ErrorRate{0.0});
    CHECK(zero.diagonal == 1.0);
    CHECK(zero.corner == 0.0);
    CHECK(zero.offdiagonal == 0.0);

    const auto mid = category_probs(ErrorRate{0.5});
    CHECK(mid.diagonal == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(mid.corner == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(mid.offdiagonal == doctest::Approx(0.5).epsilon(1e-12));

    const auto c = category_probs(ErrorRate{0.01});
    CHECK(c.diagonal == doctest::Approx(0.96098806).epsilon(1e-8));
    CHECK(c.corner == doctest::Approx(0.00019602).epsilon(1e-8));
    CHECK(c.offdiagonal == doctest::Approx(0.03881592).epsilon(1e-8));
    CHECK(c.diagonal + c.corner + c.offdiagonal == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("category probabilities sum to 1 and match Hp cell sums") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 1000; ++i) {
        const ErrorRate w{uniform(gen, 0.0, 0.5)};
        const auto freqs = random_freqs(gen);
        const auto c = category_probs(w);
        CHECK(std::fabs(c.diagonal + c.corner + c.offdiagonal - 1.0) < 1e-12);

        // the category law does not depend on the genotype distribution
        double diag = 0.0, corner = 0.0, off = 0.0;
        for (Genotype a : all_genotypes)
            for (Genotype b : all_genotypes) {
                const double p = joint_prob_hp({a, b, freqs}, w);
                if (a == b)
                    diag += p;
                else if (alt_count(a) + alt_count(b) == 2)
                    corner += p;
                else
                    off += p;
            }
        CHECK(std::fabs(diag - c.diagonal) < 1e-12);
        CHECK(std::fabs(corner - c.corner) < 1e-12);
        CHECK(std::fabs(off - c.offdiagonal) < 1e-12);
    }
}

TEST_CASE("joint evidence probabilities: pinned values") {
    const ErrorRate w{0.01};

    CHECK(joint_prob_hp({Genotype::hom_ref, Genotype::hom_ref, half}, ErrorRate{0.0}) == 0.25);
    CHECK(joint_prob_hp({Genotype::hom_ref, Genotype::hom_ref, half}, w) ==
          doctest::Approx(0.24019801).epsilon(1e-8));
    CHECK(joint_prob_hd({Genotype::hom_ref, Genotype::hom_ref, half}, ErrorRate{0.0}) ==
          doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(joint_prob_hd({Genotype::hom_ref, Genotype::hom_ref, half}, w) ==
          doctest::Approx(0.0625).epsilon(1e-8));
    CHECK(joint_prob_hd({Genotype::hom_ref, Genotype::het, half}, w) ==
          doctest::Approx(0.125).epsilon(1e-8));
}

TEST_CASE("Hp opposite-homozygote probability is w^2(1-w)^2 for any freqs") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 200; ++i) {
        const double w = uniform(gen, 0.0, 0.5);
        const auto freqs = random_freqs(gen);
        const double u = 1.0 - w;
        CHECK(joint_prob_hp({Genotype::hom_ref, Genotype::hom_alt, freqs}, ErrorRate{w}) ==
              doctest::Approx(w * w * u * u).epsilon(1e-12));
    }
}

TEST_CASE("closed forms match channel composition (1000 random draws)") {
    std::mt19937_64 gen(42);
    for (int i = 0; i < 1000; ++i) {
        const ErrorRate w{uniform(gen, 0.0, 0.5)};
        const auto freqs = random_freqs(gen);
        for (Genotype a : all_genotypes)
            for (Genotype b : all_genotypes) {
                const EvidencePair e{a, b, freqs};
                CHECK(std::fabs(joint_prob_hp(e, w) - joint_prob_hp_composed(e, w)) < 1e-12);
                CHECK(std::fabs(joint_prob_hd(e, w) - joint_prob_hd_composed(e, w)) < 1e-12);
            }
    }
}

TEST_CASE("both joints are normalised over the 9 evidence pairs") {
    std::mt19937_64 gen(43);
    for (int i = 0; i < 1000; ++i) {
        const ErrorRate w{uniform(gen, 0.0, 0.5)};
        const auto freqs = random_freqs(gen);
        CHECK(std::fabs(sum9(joint_prob_hp, freqs, w) - 1.0) < 1e-12);
        CHECK(std::fabs(sum9(joint_prob_hd, freqs, w) - 1.0) < 1e-12);
    }
}

TEST_CASE("Hd factorises into the observed-genotype marginals") {
    std::mt19937_64 gen(44);
    for (int i = 0; i < 500; ++i) {
        const ErrorRate w{uniform(gen, 0.0, 0.5)};
        const auto freqs = random_freqs(gen);
        for (Genotype a : all_genotypes)
            for (Genotype b : all_genotypes) {
                const double expected =
                    genotype_marginal(a, freqs, w) * genotype_marginal(b, freqs, w);
                CHECK(std::fabs(joint_prob_hd({a, b, freqs}, w) - expected) < 1e-12);
            }
    }
}

TEST_CASE("single-locus LR: pinned values") {
    CHECK(lr_single({Genotype::het, Genotype::het, half}, ErrorRate{0.0}) == 2.0);
    CHECK(lr_single({Genotype::hom_ref, Genotype::hom_ref, half}, ErrorRate{0.01}) ==
          doctest::Approx(3.84316816).epsilon(1e-8));
    CHECK(lr_single({Genotype::hom_ref, Genotype::het, half}, ErrorRate{0.01}) ==
          doctest::Approx(0.07763184).epsilon(1e-8));
}

TEST_CASE("conventional limit at w = 0 is exact") {
    std::mt19937_64 gen(45);
    for (int i = 0; i < 100; ++i) {
        const auto freqs = random_freqs(gen);
        for (Genotype a : all_genotypes) {
            if (freqs.p(a) == 0.0) continue;
            CHECK(lr_single({a, a, freqs}, ErrorRate{0.0}) == 1.0 / freqs.p(a));
            for (Genotype b : all_genotypes) {
                if (a == b || freqs.p(b) == 0.0) continue;
                CHECK(lr_single({a, b, freqs}, ErrorRate{0.0}) == 0.0);
            }
        }
    }
}

TEST_CASE("mismatch LR is strictly positive once w > 0") {
    std::mt19937_64 gen(46);
    for (int i = 0; i < 200; ++i) {
        const ErrorRate w{uniform(gen, 1e-9, 0.5)};
        const auto freqs = random_freqs(gen);
        for (Genotype a : all_genotypes)
            for (Genotype b : all_genotypes) {
                if (a == b) continue;
                CHECK(lr_single({a, b, freqs}, w) > 0.0);
            }
    }
}

TEST_CASE("LR is symmetric in the two observed genotypes") {
    std::mt19937_64 gen(47);
    for (int i = 0; i < 200; ++i) {
        const ErrorRate w{uniform(gen, 1e-9, 0.5)};
        const auto freqs = random_freqs(gen);
        for (Genotype a : all_genotypes)
            for (Genotype b : all_genotypes)
                CHECK(lr_single({a, b, freqs}, w) == lr_single({b, a, freqs}, w));
    }
}

TEST_CASE("expected LR under Hd is 1 by exact enumeration") {
    std::mt19937_64 gen(48);
    for (int i = 0; i < 1000; ++i) {
        const ErrorRate w{uniform(gen, 1e-9, 0.5)};
        const auto freqs = random_freqs(gen);
        double expectation = 0.0;
        for (Genotype a : all_genotypes)
            for (Genotype b : all_genotypes) {
                const EvidencePair e{a, b, freqs};
                expectation += joint_prob_hd(e, w) * lr_single(e, w);
            }
        CHECK(std::fabs(expectation - 1.0) < 1e-12);
    }
}

TEST_CASE("LR undefined when the evidence is impossible under Hd") {
    const GenotypeFrequencies degenerate{0.0, 0.5, 0.5};
    CHECK_THROWS_AS(lr_single({Genotype::hom_ref, Genotype::hom_ref, degenerate}, ErrorRate{0.0}),
                    undefined_lr_error);
    CHECK_THROWS_AS(lr_single({Genotype::hom_ref, Genotype::het, degenerate}, ErrorRate{0.0}),
                    undefined_lr_error);
}

TEST_CASE("LR = 0 is a value, not an error") {
    const double lr = lr_single({Genotype::hom_ref, Genotype::hom_alt, half}, ErrorRate{0.0});
    CHECK(lr == 0.0);
}

TEST_CASE("profile LR combines in log10 space") {
    const ErrorRate w0{0.0};

    const std::vector<EvidencePair> one{{Genotype::het, Genotype::het, half}};
    const auto single = lr_profile(one, w0);
    CHECK(single.per_locus_lr.size() == 1);
    CHECK(single.log10_combined == doctest::Approx(std::log10(2.0)).epsilon(1e-12));

    const std::vector<EvidencePair> many(43, EvidencePair{Genotype::het, Genotype::het, half});
    CHECK(lr_profile(many, w0).log10_combined ==
          doctest::Approx(12.944289813551191).epsilon(1e-12));

    const std::vector<EvidencePair> two{{Genotype::hom_ref, Genotype::hom_ref, half},
                                        {Genotype::hom_ref, Genotype::het, half}};
    CHECK(lr_profile(two, ErrorRate{0.01}).log10_combined ==
          doctest::Approx(-0.5252707325527116).epsilon(1e-8));
}

TEST_CASE("profile LR edge cases") {
    CHECK_THROWS_AS(lr_profile({}, ErrorRate{0.0}), std::invalid_argument);

    // one mismatching locus at w = 0 drives the combined log10 to -infinity
    const std::vector<EvidencePair> pairs{{Genotype::het, Genotype::het, half},
                                          {Genotype::hom_ref, Genotype::hom_alt, half}};
    const auto r = lr_profile(pairs, ErrorRate{0.0});
    CHECK(r.per_locus_lr[1] == 0.0);
    CHECK(std::isinf(r.log10_combined));
    CHECK(r.log10_combined < 0.0);

    // an undefined locus is reported with its index
    const GenotypeFrequencies degenerate{0.0, 0.5, 0.5};
    const std::vector<EvidencePair> bad{{Genotype::het, Genotype::het, half},
                                        {Genotype::hom_ref, Genotype::hom_ref, degenerate}};
    CHECK_THROWS_WITH_AS(lr_profile(bad, ErrorRate{0.0}),
                         doctest::Contains("locus 1"), undefined_lr_error);
}

TEST_CASE("genotype_from_int validates") {
    CHECK(genotype_from_int(0) == Genotype::hom_ref);
    CHECK(genotype_from_int(2) == Genotype::hom_alt);
    CHECK_THROWS_AS(genotype_from_int(3), std::domain_error);
    CHECK_THROWS_AS(genotype_from_int(-1), std::domain_error);
}
