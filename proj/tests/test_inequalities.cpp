#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "critwave/inequalities.hpp"

using namespace critwave;

namespace {

const TestFunctionCorpus& corpus1() {
    static TestFunctionCorpus c = make_corpus(1, 100, 12345);
    return c;
}

}  // namespace

TEST_CASE("gn ratio collapses at p = 1 and is scale invariant") {
    for (const CorpusEntry& e : {corpus1().entries[0], corpus1().entries[5]}) {
        CHECK(gn_ratio(e, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
        const double base = gn_ratio(e, 3.0);
        CHECK(gn_ratio(scale(e, 7.25), 3.0) == doctest::Approx(base).epsilon(1e-10));
    }
    CorpusEntry e3 = make_corpus(3, 3, 9).entries[0];
    CHECK_THROWS_AS(gn_ratio(e3, 6.0), std::invalid_argument);  // above (N+2)/(N-2)
    CHECK_THROWS_AS(gn_ratio(e3, 0.5), std::invalid_argument);
}

TEST_CASE("one-dimensional gn corpus supremum stays below the sharp level") {
    double sup = 0.0;
    for (const CorpusEntry& e : corpus1().entries) sup = std::max(sup, gn_ratio(e, 3.0));
    CHECK(sup > 0.0);
    CHECK(sup <= 1.05);
}

TEST_CASE("truncated gaussian hits the analytic k = 1 value") {
    const CorpusEntry g = make_truncated_gaussian(1);
    const double ratio = ckn_ratio(g, 1);
    CHECK(ratio * ratio == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(gamma_step_ratio(g, 0.0) == doctest::Approx(2.0).epsilon(1e-3));
    // gamma = 2 against gaussian moments: int x^2 e^{-x^2} = sqrt(pi)/2,
    // int x^6 e^{-x^2} = 15 sqrt(pi)/8, int (d/dx e^{-x^2/2})^2 = sqrt(pi)/2
    const double sp = std::sqrt(M_PI);
    const double expected = (sp / 2.0) / std::sqrt((sp / 2.0) * (15.0 * sp / 8.0));
    CHECK(gamma_step_ratio(g, 2.0) == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("ratios are invariant under dilation and scaling") {
    const CorpusEntry& e = corpus1().entries[7];
    for (double lambda : {0.31, 2.0, 11.4}) {
        const CorpusEntry d = dilate(e, lambda);
        for (int k : {1, 2, 3})
            CHECK(ckn_ratio(d, k) == doctest::Approx(ckn_ratio(e, k)).epsilon(1e-10));
        CHECK(gamma_step_ratio(d, 2.0) ==
              doctest::Approx(gamma_step_ratio(e, 2.0)).epsilon(1e-10));
    }
    const CorpusEntry s = scale(e, 0.03);
    for (int k : {1, 2, 3}) CHECK(ckn_ratio(s, k) == doctest::Approx(ckn_ratio(e, k)).epsilon(1e-10));
}

TEST_CASE("gamma step at zero reproduces the squared k = 1 ratio") {
    for (const CorpusEntry& e : corpus1().entries) {
        const double k1 = ckn_ratio(e, 1);
        CHECK(gamma_step_ratio(e, 0.0) == doctest::Approx(k1 * k1).epsilon(1e-12));
    }
}

TEST_CASE("divergence identity residual is at quadrature accuracy") {
    for (int dim : {1, 2, 3}) {
        const TestFunctionCorpus corpus = make_corpus(dim, 100, 12345);
        for (const CorpusEntry& e : corpus.entries) {
            for (double gamma : {0.0, 2.0, 6.0})
                CHECK(gamma_step_identity_residual(e, gamma) < 1e-7);
        }
    }
}

TEST_CASE("recursive chain: composed lower levels dominate the k-level ratio") {
    for (int dim : {1, 3}) {
        const TestFunctionCorpus corpus = make_corpus(dim, 60, 99);
        for (int k : {2, 3}) {
            const double gamma = std::exp2(k) - 2.0;
            double sup_k = 0.0, sup_km1 = 0.0, sup_step = 0.0;
            for (const CorpusEntry& e : corpus.entries) {
                const double bound = ckn_ratio(e, k - 1) *
                                     std::pow(gamma_step_ratio(e, gamma), std::exp2(-k));
                CHECK(ckn_ratio(e, k) <= bound * (1.0 + 1e-12));
                sup_k = std::max(sup_k, ckn_ratio(e, k));
                sup_km1 = std::max(sup_km1, ckn_ratio(e, k - 1));
                sup_step = std::max(sup_step, gamma_step_ratio(e, gamma));
            }
            CHECK(sup_k <= sup_km1 * std::pow(sup_step, std::exp2(-k)) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("corpus suprema are finite and stable under doubling") {
    for (int dim : {1, 2, 3}) {
        const TestFunctionCorpus small = make_corpus(dim, 100, 2024);
        const TestFunctionCorpus big = make_corpus(dim, 200, 2024);
        for (int k : {1, 2, 3}) {
            double sup_small = 0.0, sup_big = 0.0;
            for (const CorpusEntry& e : small.entries) {
                const double r = ckn_ratio(e, k);
                CHECK(std::isfinite(r));
                sup_small = std::max(sup_small, r);
            }
            for (const CorpusEntry& e : big.entries) sup_big = std::max(sup_big, ckn_ratio(e, k));
            CHECK(sup_big >= sup_small);  // extension of the same draw
            CHECK(sup_big <= 1.10 * sup_small);
        }
    }
}

TEST_CASE("zero-norm entries are rejected") {
    CorpusEntry zero;
    zero.dim = 1;
    zero.support = 1.0;
    zero.h = 1.0 / 63.0;
    zero.u.assign(64, 0.0);
    zero.du.assign(64, 0.0);
    CHECK_THROWS_AS(ckn_ratio(zero, 1), std::invalid_argument);
    CHECK_THROWS_AS(gn_ratio(zero, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(gamma_step_ratio(zero, 0.0), std::invalid_argument);
    CHECK(gamma_step_identity_residual(zero, 2.0) == 0.0);
}

namespace {

const WeightFunction& unit_weight() {
    static WeightFunction w =
        calibrate_weight(DampingSpec{1.0, -1.0, 0.0}, 1, 0.25, CalibrationGrid::standard()).weight;
    return w;
}

}  // namespace

TEST_CASE("weighted interpolation: zero entry gives a zero pair") {
    CorpusEntry zero;
    zero.dim = 1;
    zero.support = 1.0;
    zero.h = 1.0 / 63.0;
    zero.u.assign(64, 0.0);
    zero.du.assign(64, 0.0);
    const WeightedInterpolationResult res =
        weighted_interpolation_check(zero, unit_weight(), 1.0, 2.0, 1);
    CHECK(res.lhs == 0.0);
    CHECK(res.rhs_shape == 0.0);
}

TEST_CASE("weighted interpolation ratio is stable across times") {
    const CorpusEntry& e = corpus1().entries[2];
    double base = 0.0;
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
        const WeightedInterpolationResult res =
            weighted_interpolation_check(e, unit_weight(), t, 2.0, 1);
        CHECK(res.rhs_shape > 0.0);
        const double ratio = res.lhs / res.rhs_shape;
        if (t == 0.0) {
            base = ratio;
        } else {
            CHECK(ratio <= 1.5 * base);
            CHECK(ratio >= base / 1.5);
        }
    }
}

TEST_CASE("weighted interpolation rejects too-small k") {
    // alpha = -8 demands 2^k - 1 >= 4
    DampingSpec spec{1.0, -8.0, 0.0};
    const WeightParams params = make_weight_params(spec, 1, 0.25, 2.0, 1.0);
    const CorrectionTable table = newton_correction(1, -8.0, 2.0, 5.5);
    const WeightFunction w(spec, params, table);
    CHECK_THROWS_AS(weighted_interpolation_check(corpus1().entries[0], w, 1.0, 2.0, 1),
                    std::invalid_argument);
    CHECK_NOTHROW(weighted_interpolation_check(corpus1().entries[0], w, 1.0, 2.0, 3));
}

TEST_CASE("pointwise gradient-weight bound is finite on a grid") {
    std::vector<double> radii;
    for (int i = 0; i <= 500; ++i) radii.push_back(40.0 * i / 500.0);
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
        const double sup = pointwise_gradient_weight_bound(unit_weight(), t, 2.0, radii);
        CHECK(std::isfinite(sup));
        CHECK(sup > 0.0);
        CHECK(sup < 10.0);
    }
}
