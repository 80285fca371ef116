#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pas/channel.hpp"
#include "pas/errors.hpp"
#include "pas/infomeasures.hpp"

using namespace pas;

namespace {

oracle::Table table_of(const Dmc& d) {
    oracle::Table t(d.nin());
    for (std::size_t x = 0; x < d.nin(); ++x) t[x].assign(d.row(x).begin(), d.row(x).end());
    return t;
}

std::vector<double> vec(const Pmf& p) { return {p.probs().begin(), p.probs().end()}; }

std::vector<std::vector<int>> level_bits(const LabelMap& labels, std::size_t n) {
    std::vector<std::vector<int>> bits(labels.num_levels(), std::vector<int>(n));
    for (std::size_t l = 0; l < labels.num_levels(); ++l)
        for (std::size_t x = 0; x < n; ++x) bits[l][x] = labels.level_bit(x, l);
    return bits;
}

Dmc useless(std::size_t nin, std::size_t nout) {
    std::vector<double> w;
    for (std::size_t x = 0; x < nin; ++x)
        for (std::size_t y = 0; y < nout; ++y) w.push_back(1.0 / nout);
    std::vector<double> pts;
    for (std::size_t x = 0; x < nin; ++x) pts.push_back(2.0 * x - (nin - 1.0));
    return Dmc(StochasticMatrix(nin, nout, w), pts);
}

Dmc random_dmc(std::mt19937_64& rng, std::size_t nin, std::size_t nout) {
    std::gamma_distribution<double> g(0.7, 1.0);
    std::vector<double> w;
    for (std::size_t x = 0; x < nin; ++x) {
        std::vector<double> row(nout);
        double s = 0.0;
        for (auto& v : row) s += (v = g(rng) + 1e-3);
        for (auto v : row) w.push_back(v / s);
    }
    std::vector<double> pts;
    for (std::size_t x = 0; x < nin; ++x) pts.push_back(2.0 * x - (nin - 1.0));
    return Dmc(StochasticMatrix(nin, nout, w), pts);
}

Pmf random_pmf(std::mt19937_64& rng, std::size_t n) {
    std::gamma_distribution<double> g(0.8, 1.0);
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& v : p) s += (v = g(rng) + 1e-4);
    for (auto& v : p) v /= s;
    return Pmf(p);
}

}  // namespace

TEST_SUITE("infomeasures") {

TEST_CASE("entropy examples") {
    CHECK(entropy(Pmf({0.5, 0.5})) == doctest::Approx(1.0));
    CHECK(entropy(Pmf({1.0})) == 0.0);
    CHECK(entropy(Pmf({0.25, 0.75})) == doctest::Approx(0.8112781244591328).epsilon(1e-13));
    CHECK(entropy(Pmf({0.0, 1.0})) == 0.0);
}

TEST_CASE("mutual information examples") {
    auto id = noiseless_dmc(make_ask(1));
    CHECK(mutual_information(Pmf::uniform(4), id) == doctest::Approx(2.0));
    CHECK(std::fabs(mutual_information(Pmf::uniform(4), useless(4, 5))) < 1e-12);
    Dmc bsc(StochasticMatrix(2, 2, {0.89, 0.11, 0.11, 0.89}), {-1, 1});
    double mi = mutual_information(Pmf::uniform(2), bsc);
    CHECK(mi == doctest::Approx(1.0 - oracle::h2(0.11)).epsilon(1e-12));
    CHECK(mi == doctest::Approx(0.500072).epsilon(1e-5));
    CHECK_THROWS_AS(mutual_information(Pmf::uniform(3), bsc), ShapeError);
}

TEST_CASE("conditional level entropy") {
    auto c = make_ask(1);
    auto labels = brgc_label(c);
    auto u = Pmf::uniform(4);
    for (std::size_t l = 0; l < 2; ++l) {
        CHECK(std::fabs(conditional_level_entropy(u, noiseless_dmc(c), labels, l)) < 1e-12);
        CHECK(conditional_level_entropy(u, useless(4, 3), labels, l) == doctest::Approx(1.0));
    }
    auto d = quantize_awgn(c, {5.0, 400, 6.0}, u);
    auto bits = level_bits(labels, 4);
    for (std::size_t l = 0; l < 2; ++l)
        CHECK(conditional_level_entropy(u, d, labels, l) ==
              doctest::Approx(oracle::conditional_bit_entropy(vec(u), table_of(d), bits[l])).epsilon(1e-12));
    CHECK_THROWS_AS(conditional_level_entropy(u, d, labels, 2), DomainError);
}

TEST_CASE("R_BMD examples") {
    auto c0 = make_ask(0);
    auto d0 = quantize_awgn(c0, {2.0, 50, 6.0}, Pmf::uniform(2));
    CHECK(r_bmd(Pmf({0.3, 0.7}), d0, brgc_label(c0)) ==
          doctest::Approx(mutual_information(Pmf({0.3, 0.7}), d0)).epsilon(1e-12));

    auto c2 = make_ask(2);
    Pmf p({0.05, 0.1, 0.15, 0.2, 0.2, 0.15, 0.1, 0.05});
    CHECK(r_bmd(p, noiseless_dmc(c2), brgc_label(c2)) == doctest::Approx(entropy(p)).epsilon(1e-12));

    // Perfectly dependent sign and amplitude bits on a useless channel.
    auto c1 = make_ask(1);
    auto labels = brgc_label(c1);
    Pmf dep({0.0, 0.5, 0.0, 0.5});
    auto uz = useless(4, 3);
    double unclipped = oracle::bmd_rate_unclipped(vec(dep), table_of(uz), level_bits(labels, 4));
    CHECK(unclipped == doctest::Approx(-1.0));
    CHECK(r_bmd_unclipped(dep, uz, labels) == doctest::Approx(unclipped));
    CHECK(r_bmd(dep, uz, labels) == 0.0);
}

TEST_CASE("GMI examples") {
    auto c = make_ask(1);
    auto labels = brgc_label(c);
    auto u = Pmf::uniform(4);
    auto d = quantize_awgn(c, {4.0, 300, 6.0}, u);
    auto g = gmi(u, d, matched_metric(d));
    CHECK(std::fabs(g.value - mutual_information(u, d)) < 1e-6);
    CHECK(std::fabs(g.s_star - 1.0) < 1e-3);
    CHECK(gmi(u, d, constant_metric(4, d.nout())).value == doctest::Approx(0.0));

    // Independent levels: sign uniform, amplitude bit biased.
    auto px = mirror_amplitudes(c, Pmf({0.7, 0.3}));
    auto gb = gmi(px, d, bit_metric(px, d, labels));
    double sum = level_mutual_information(px, d, labels, 0) + level_mutual_information(px, d, labels, 1);
    CHECK(std::fabs(gb.value - sum) < 1e-6);

    auto q = constant_metric(4, d.nout());
    q.q[0] = 0.0;
    CHECK_THROWS_AS(gmi(u, d, q), DomainError);
}

TEST_CASE("LM rate evaluation") {
    auto c = make_ask(1);
    auto labels = brgc_label(c);
    auto d = quantize_awgn(c, {6.0, 200, 6.0}, Pmf::uniform(4));
    Pmf px({0.1, 0.35, 0.4, 0.15});
    auto m = bit_metric(px, d, labels);
    auto g = gmi(px, d, m);
    CHECK(lm_rate_eval(px, d, m, g.s_star, unit_cost(4)) == doctest::Approx(g.unclipped).epsilon(1e-12));
    CHECK(lm_rate_eval(px, d, m, 1.0, bmd_cost(px, labels)) ==
          doctest::Approx(r_bmd_unclipped(px, d, labels)).epsilon(1e-12));
    CHECK(lm_rate_eval(px, d, matched_metric(d), 1.0, unit_cost(4)) ==
          doctest::Approx(mutual_information(px, d)).epsilon(1e-12));
    CHECK_THROWS_AS(lm_rate_eval(px, d, m, -1.0, unit_cost(4)), DomainError);
}

TEST_CASE("sign/amplitude MI chain") {
    auto c = make_ask(1);
    auto u = Pmf::uniform(4);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        auto d = random_dmc(rng, 4, 5);
        auto ch = mi_inequality_chain(u, d);
        CHECK(ch.holds);
        CHECK(ch.mi_xy - ch.h_a <= ch.i_s_ay + 1e-9);
    }
    auto z = mi_inequality_chain(u, useless(4, 2));
    CHECK(std::fabs(z.mi_xy) < 1e-12);
    CHECK(z.holds);
    auto id = mi_inequality_chain(u, noiseless_dmc(c));
    CHECK(id.mi_xy - id.h_a == doctest::Approx(1.0));
    CHECK(id.i_s_ay == doctest::Approx(1.0));
    Dmc odd(StochasticMatrix::identity(3), {-1, 0, 1});
    CHECK_THROWS_AS(mi_inequality_chain(Pmf::uniform(3), odd), DomainError);
}

TEST_CASE("order relations and symmetric-input identity on random instances") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        int m = 1 + i % 2;
        auto c = make_ask(m);
        auto labels = brgc_label(c);
        auto d = random_dmc(rng, c.size(), 3 + i % 5);
        auto p = random_pmf(rng, c.size());
        double mi = mutual_information(p, d);
        double rb = r_bmd(p, d, labels);
        CHECK(rb >= 0.0);
        CHECK(rb <= mi + 1e-12);
        auto pa = random_pmf(rng, c.num_amplitudes());
        auto ps = mirror_amplitudes(c, pa);
        CHECK(std::fabs(mutual_information(ps, d) - (entropy(pa) + 1.0 - equivocation(ps, d))) < 1e-9);
    }
}

TEST_CASE("measures are invariant under output permutation") {
    std::mt19937_64 rng(9);
    auto c = make_ask(1);
    auto labels = brgc_label(c);
    auto d = random_dmc(rng, 4, 6);
    std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    std::vector<double> w;
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t y = 0; y < 6; ++y) w.push_back(d(x, perm[y]));
    Dmc dp(StochasticMatrix(4, 6, w), d.input_points());
    auto p = random_pmf(rng, 4);
    CHECK(mutual_information(p, dp) == doctest::Approx(mutual_information(p, d)).epsilon(1e-12));
    CHECK(r_bmd(p, dp, labels) == doctest::Approx(r_bmd(p, d, labels)).epsilon(1e-12));
    CHECK(equivocation(p, dp) == doctest::Approx(equivocation(p, d)).epsilon(1e-12));
    CHECK(gmi(p, dp, matched_metric(dp)).value == doctest::Approx(gmi(p, d, matched_metric(d)).value).epsilon(1e-9));
}

}
