#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fcrec/similarity.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace fcrec;

TEST_CASE("proximity hand values") {
    CHECK(proximity(4, 4) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(proximity(1, 5) == doctest::Approx(1.0 - 1.0 / (1.0 + std::exp(-4.0))).epsilon(1e-12));
    CHECK(proximity(1, 5) == doctest::Approx(0.01798621).epsilon(1e-6));
    CHECK(proximity(2, 3) == doctest::Approx(0.26894142).epsilon(1e-6));
    CHECK(proximity(5, 1) == proximity(1, 5));
}

TEST_CASE("significance hand values") {
    CHECK(significance(3, 5, 3) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(significance(5, 3, 3) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(significance(5, 1, 3) == doctest::Approx(0.98201379).epsilon(1e-6));
    CHECK(significance(4, 2, 3) == doctest::Approx(0.73105858).epsilon(1e-6));
}

TEST_CASE("singularity hand values use the pair mean") {
    CHECK(singularity(4, 4, 4.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(singularity(2, 4, 3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(singularity(5, 5, 1.0) == doctest::Approx(0.01798621).epsilon(1e-6));
}

TEST_CASE("user rating preference kernel") {
    CHECK(urpKernel(3.5, 1.0, 3.5, 0.2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(urpKernel(4.0, 1.0, 2.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(urpKernel(4.0, 1.5, 2.0, 0.5) ==
          doctest::Approx(1.0 - 1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-12));
    CHECK(urpKernel(4.0, 1.5, 2.0, 0.5) == doctest::Approx(0.11920292).epsilon(1e-6));
    const UserStats a{1, 4.0, 1.5, 10};
    const UserStats b{2, 2.0, 0.5, 10};
    CHECK(urpSim(a, b) == urpKernel(4.0, 1.5, 2.0, 0.5));
}

TEST_CASE("jaccard prime") {
    // user 1 rates {1,2,3}; user 2 rates {2,3,10,11}; user 3 rates {50}
    const auto m = RatingsMatrix::fromEntries({
        {1, 1, 3}, {1, 2, 3}, {1, 3, 3},
        {2, 2, 4}, {2, 3, 4}, {2, 10, 4}, {2, 11, 4},
        {3, 50, 5},
    });
    CHECK(jaccardPrime(m, 1, 2) == doctest::Approx(2.0 / 12.0).epsilon(1e-12));
    CHECK(jaccardPrime(m, 1, 3) == 0.0);
    CHECK_THROWS_AS(jaccardPrime(m, 1, 99), LookupError);

    const auto single = RatingsMatrix::fromEntries({{1, 7, 2}, {2, 7, 5}});
    CHECK(jaccardPrime(single, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pss sums per-item products") {
    // Only users 1 and 2 rate item 5, both with 3, so the item mean is 3 and
    // each factor of the single term is exactly 0.5.
    const auto one = RatingsMatrix::fromEntries({{1, 5, 3}, {2, 5, 3}});
    CHECK(pssSim(one, 1, 2) == doctest::Approx(0.125).epsilon(1e-12));

    const auto two = RatingsMatrix::fromEntries({{1, 5, 3}, {2, 5, 3}, {1, 6, 3}, {2, 6, 3}});
    CHECK(pssSim(two, 1, 2) == doctest::Approx(0.25).epsilon(1e-12));

    const auto disjoint = RatingsMatrix::fromEntries({{1, 1, 4}, {2, 2, 4}});
    CHECK(pssSim(disjoint, 1, 2) == 0.0);
}

TEST_CASE("nhsm combines pss, jaccard and urp") {
    const auto m = RatingsMatrix::fromEntries({{1, 5, 3}, {2, 5, 3}});
    // pss 0.125, jaccard 1, equal user stats so urp 0.5
    CHECK(nhsmSim(m, 1, 2) == doctest::Approx(0.0625).epsilon(1e-12));

    const auto disjoint = RatingsMatrix::fromEntries({{1, 1, 4}, {2, 2, 4}});
    CHECK(nhsmSim(disjoint, 1, 2) == 0.0);

    // self-similarity is positive and finite
    CHECK(nhsmSim(m, 1, 1) > 0.0);
    CHECK(std::isfinite(nhsmSim(m, 1, 1)));
}

TEST_CASE("pearson and cosine hand values") {
    const SimilarityMeasure pearson{MeasureName::Pearson, 50};
    const SimilarityMeasure cosine{MeasureName::Cosine, 50};

    const auto identical = RatingsMatrix::fromEntries({
        {1, 1, 1}, {1, 2, 3}, {1, 3, 5}, {2, 1, 1}, {2, 2, 3}, {2, 3, 5},
    });
    CHECK(baselineSim(pearson, identical, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(baselineSim(cosine, identical, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));

    const auto opposite = RatingsMatrix::fromEntries({
        {1, 1, 1}, {1, 2, 2}, {1, 3, 3}, {2, 1, 3}, {2, 2, 2}, {2, 3, 1},
    });
    CHECK(baselineSim(pearson, opposite, 1, 2) == doctest::Approx(-1.0).epsilon(1e-12));

    const auto flat = RatingsMatrix::fromEntries({
        {1, 1, 3}, {1, 2, 3}, {2, 1, 1}, {2, 2, 5},
    });
    CHECK(baselineSim(pearson, flat, 1, 2) == 0.0); // zero variance side

    const auto thin = RatingsMatrix::fromEntries({{1, 1, 4}, {2, 1, 4}});
    CHECK(baselineSim(pearson, thin, 1, 2) == 0.0); // below two co-rated
    CHECK(baselineSim(cosine, thin, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));

    const auto disjoint = RatingsMatrix::fromEntries({{1, 1, 4}, {2, 2, 4}});
    CHECK(baselineSim(cosine, disjoint, 1, 2) == 0.0);
}

TEST_CASE("co-rated-count weightings") {
    CHECK(weightedPearson(0.8, 25, MeasureName::HerlockerW, 50) ==
          doctest::Approx(0.4).epsilon(1e-12));
    CHECK(weightedPearson(0.8, 25, MeasureName::McLaughlinW, 50) ==
          doctest::Approx(0.4).epsilon(1e-12));
    CHECK(weightedPearson(0.8, 60, MeasureName::HerlockerW, 50) ==
          doctest::Approx(0.8).epsilon(1e-12));
    CHECK(weightedPearson(0.8, 60, MeasureName::McLaughlinW, 50) ==
          doctest::Approx(0.8).epsilon(1e-12));
    CHECK_THROWS_AS(weightedPearson(0.8, 25, MeasureName::Pearson, 50), ParamError);
}

TEST_CASE("measure names parse and print") {
    for (auto name : {MeasureName::Nhsm, MeasureName::Pearson, MeasureName::Cosine,
                      MeasureName::HerlockerW, MeasureName::McLaughlinW})
        CHECK((parseMeasureName(toString(name)) == name));
    CHECK_THROWS_AS(parseMeasureName("SPEARMAN"), ParamError);
}

TEST_CASE("dispatch and measure guards") {
    const auto m = RatingsMatrix::fromEntries({{1, 5, 3}, {2, 5, 3}});
    CHECK_THROWS_AS(baselineSim({MeasureName::Nhsm, 50}, m, 1, 2), ParamError);
    CHECK(pairScore({MeasureName::Nhsm, 50}, m, 1, 2) == nhsmSim(m, 1, 2));
    CHECK(pairScore({MeasureName::Cosine, 50}, m, 1, 2) ==
          baselineSim({MeasureName::Cosine, 50}, m, 1, 2));
}

TEST_CASE("every measure matches its brute-force oracle") {
    std::mt19937_64 rng(4242);
    const int median = 3;
    for (int trial = 0; trial < 250; ++trial) {
        const auto m = oracle::randomMatrix(rng, 12, 12);
        const auto table = oracle::fromMatrix(m);
        const auto& users = m.userIds();
        for (std::size_t a = 0; a < users.size(); ++a) {
            for (std::size_t b = a + 1; b < users.size(); ++b) {
                const UserId u = users[a];
                const UserId v = users[b];
                CHECK(nhsmSim(m, u, v) ==
                      doctest::Approx(oracle::nhsm(table, u, v, median)).epsilon(1e-12));
                CHECK(baselineSim({MeasureName::Pearson, 50}, m, u, v) ==
                      doctest::Approx(oracle::pearson(table, u, v)).epsilon(1e-12));
                CHECK(baselineSim({MeasureName::Cosine, 50}, m, u, v) ==
                      doctest::Approx(oracle::cosine(table, u, v)).epsilon(1e-12));
                CHECK(baselineSim({MeasureName::HerlockerW, 50}, m, u, v) ==
                      doctest::Approx(oracle::herlocker(table, u, v, 50)).epsilon(1e-12));
                CHECK(baselineSim({MeasureName::McLaughlinW, 50}, m, u, v) ==
                      doctest::Approx(oracle::mclaughlin(table, u, v, 50)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("bounds, symmetry and finiteness over random pairs") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 60; ++trial) {
        const auto m = oracle::randomMatrix(rng, 12, 12);
        const auto& users = m.userIds();
        for (std::size_t a = 0; a < users.size(); ++a) {
            for (std::size_t b = a; b < users.size(); ++b) {
                const UserId u = users[a];
                const UserId v = users[b];
                const double nh = nhsmSim(m, u, v);
                CHECK(nh >= 0.0);
                CHECK(std::isfinite(nh));
                CHECK(nh == nhsmSim(m, v, u));
                for (auto name : {MeasureName::Pearson, MeasureName::Cosine,
                                  MeasureName::HerlockerW, MeasureName::McLaughlinW}) {
                    const double s = baselineSim({name, 50}, m, u, v);
                    CHECK(std::isfinite(s));
                    CHECK(s == baselineSim({name, 50}, m, v, u));
                    CHECK(s >= -1.0 - 1e-12);
                    CHECK(s <= 1.0 + 1e-12);
                }
                CHECK(baselineSim({MeasureName::Cosine, 50}, m, u, v) >= 0.0);
            }
        }
    }

    // kernel bounds over the whole rating grid
    for (int ru = 1; ru <= 5; ++ru) {
        for (int rv = 1; rv <= 5; ++rv) {
            CHECK(proximity(ru, rv) > 0.0);
            CHECK(proximity(ru, rv) <= 0.5);
            CHECK(significance(ru, rv, 3) >= 0.5);
            CHECK(significance(ru, rv, 3) < 1.0);
            for (double mu = 1.0; mu <= 5.0; mu += 0.25) {
                CHECK(singularity(ru, rv, mu) > 0.0);
                CHECK(singularity(ru, rv, mu) <= 0.5);
            }
        }
    }
}
