#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "oracles.hpp"
#include "pas/errors.hpp"
#include "pas/rng.hpp"
#include "pas/signcode.hpp"

using namespace pas;

namespace {

TypConfig tcfg(int n, double eps) {
    TypConfig c;
    c.n = n;
    c.eps = eps;
    return c;
}

Dmc awgn4(double snr_db, int bins, double clip, const Pmf& pa) {
    auto c = make_ask(1);
    return quantize_awgn(c, AwgnSpec{snr_db, bins, clip}, mirror_amplitudes(c, pa));
}

ExperimentConfig base_config() {
    ExperimentConfig cfg;
    cfg.m = 1;
    cfg.amplitude_pmf = Pmf({5.0 / 6.0, 1.0 / 6.0});
    cfg.dmc = awgn4(14.0, 4, 1.0, cfg.amplitude_pmf);
    cfg.eps = 0.2;
    cfg.n = 8;
    cfg.gamma = 0.0;
    cfg.trials = 300;
    cfg.seed = 11;
    return cfg;
}

std::vector<Sequence> sorted(std::vector<Sequence> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_SUITE("signcode") {

TEST_CASE("shaping layer is the B-typical set of the sign-output model") {
    auto c = make_ask(1);
    Pmf pa({5.0 / 6.0, 1.0 / 6.0});
    Dmc dmc = awgn4(14.0, 4, 1.0, pa);
    auto layer = build_shaping_layer_smd(c, pa, dmc, tcfg(8, 0.2));
    auto bs = enumerate_b_typical(smd_model(c, pa, dmc), tcfg(8, 0.2));
    CHECK(layer.sequences == bs.members);
    CHECK(layer.amplitudes == layer.sequences);
    CHECK(layer.b_mass == doctest::Approx(bs.b_mass));
    CHECK(layer.h_u == doctest::Approx(oracle::entropy({5.0 / 6.0, 1.0 / 6.0})));
    CHECK(layer.large_n == (layer.b_mass >= 0.8 && 0.8 >= std::exp2(-8 * 0.2)));
}

TEST_CASE("bit-metric layer with one amplitude bit matches the symbol-metric layer") {
    auto c = make_ask(1);
    auto labels = brgc_label(c);
    Pmf pa({5.0 / 6.0, 1.0 / 6.0});
    Dmc dmc = awgn4(14.0, 4, 1.0, pa);
    auto smd = build_shaping_layer_smd(c, pa, dmc, tcfg(8, 0.2));
    auto bmd = build_shaping_layer_bmd(c, bit_pmf_from_amplitudes(labels, pa), labels, dmc, tcfg(8, 0.2));
    CHECK(sorted(smd.amplitudes) == sorted(bmd.amplitudes));
    CHECK(bmd.b_mass == doctest::Approx(smd.b_mass));
}

TEST_CASE("amplitude bit strings follow the 8-ASK labels") {
    auto c = make_ask(2);
    auto labels = brgc_label(c);
    auto t = oracle::brgc8_table();
    for (std::size_t k = 0; k < 4; ++k) {
        auto b = amplitude_bits(labels, Sequence{static_cast<std::uint32_t>(k)});
        CHECK(b.length == 2);
        CHECK(b.get(0) == t.b1[4 + k]);
        CHECK(b.get(1) == t.b2[4 + k]);
    }
    auto seq = amplitude_bits(labels, Sequence{3, 0, 2});
    CHECK(seq.length == 6);
    CHECK(seq.get(0) == 0);
    CHECK(seq.get(1) == 0);
    CHECK(seq.get(2) == 1);
    CHECK(seq.get(3) == 0);
    CHECK(seq.get(4) == 0);
    CHECK(seq.get(5) == 1);
}

TEST_CASE("information signs are the binary expansion of m_s") {
    auto book = draw_sign_codebook(1, 3, 2, CoderMode::Iid, 5);
    CHECK(book.information(4) == 0b001);
    CHECK(book.information(1) == 0b100);
    CHECK(book.information(6) == 0b011);
    CHECK(book.ms() == 8);
    for (std::uint64_t s = 0; s < 8; ++s) {
        CHECK((book.signs(0, s) & 0b111) == book.information(s));
        CHECK((book.signs(0, s) >> 3) == book.redundant(0, s));
    }
}

TEST_CASE("iid codebooks are deterministic and unbiased") {
    auto a = draw_sign_codebook(50, 4, 20, CoderMode::Iid, 77);
    auto b = draw_sign_codebook(50, 4, 20, CoderMode::Iid, 77);
    auto d = draw_sign_codebook(50, 4, 20, CoderMode::Iid, 78);
    bool differs = false;
    double ones = 0.0, total = 0.0;
    for (std::size_t m = 0; m < 50; ++m)
        for (std::uint64_t s = 0; s < 16; ++s) {
            CHECK(a.redundant(m, s) == b.redundant(m, s));
            CHECK(a.redundant(m, s) < (1u << 20));
            differs |= a.redundant(m, s) != d.redundant(m, s);
            ones += std::popcount(a.redundant(m, s));
            total += 20;
        }
    CHECK(differs);
    CHECK(std::fabs(ones / total - 0.5) <= 3.0 * std::sqrt(0.25 / total));
}

TEST_CASE("linear codebooks are affine in the amplitude and information bits") {
    auto c = make_ask(1);
    auto labels = brgc_label(c);
    std::vector<BitString> keys;
    for (std::uint32_t v = 0; v < 32; ++v) {
        Sequence a(5);
        for (int t = 0; t < 5; ++t) a[t] = (v >> t) & 1u;
        keys.push_back(amplitude_bits(labels, a));
    }
    auto book = draw_sign_codebook(keys.size(), 3, 6, CoderMode::Linear, 9, keys);
    CHECK(book.linear_input(0, 0).length == 8);
    for (std::size_t a1 = 0; a1 < keys.size(); a1 += 3)
        for (std::size_t a2 = 0; a2 < keys.size(); a2 += 5)
            for (std::uint64_t s1 = 0; s1 < 8; ++s1)
                for (std::uint64_t s2 = 0; s2 < 8; s2 += 3) {
                    auto x = book.linear_input(a1, s1) ^ book.linear_input(a2, s2);
                    CHECK((book.redundant(a1, s1) ^ book.redundant(a2, s2)) == book.apply(x));
                }
    CHECK_THROWS_AS(draw_sign_codebook(2, 1, 1, CoderMode::Linear, 1, {}), ConfigError);
    CHECK_THROWS_AS(draw_sign_codebook(1, 30, 2, CoderMode::Iid, 1), BudgetError);
    CHECK_THROWS_AS(draw_sign_codebook(1, 0, 65, CoderMode::Iid, 1), SizeError);
}

TEST_CASE("decoder agrees with a brute-force scan in any candidate order") {
    for (auto kind : {DecoderKind::Smd, DecoderKind::Bmd}) {
        ExperimentConfig cfg = base_config();
        cfg.decoder = kind;
        cfg.gamma = 0.25;
        cfg.eps = 0.3;
        SignCodeExperiment exp(cfg);
        const auto& layer = exp.layer();
        const auto& dec = exp.decoder();
        auto book = exp.codebook_for_trial(3);
        DmcSampler sampler(cfg.dmc);
        Rng rng(123);
        std::uint64_t total_accepted = 0;
        for (int trial = 0; trial < 40; ++trial) {
            // Odd trials observe a transmitted codeword, even trials a random output.
            Sequence y(cfg.n);
            std::size_t a0 = rng.below(layer.size());
            std::uint64_t w0 = book.signs(a0, rng.below(book.ms()));
            for (int t = 0; t < cfg.n; ++t) {
                std::size_t x = exp.constellation().point_index(bit_to_sign((w0 >> t) & 1u), layer.amplitudes[a0][t]);
                y[t] = trial % 2 ? sampler.sample(x, rng.uniform())
                                 : static_cast<std::uint32_t>(rng.below(cfg.dmc.nout()));
            }
            auto r = dec.decode(y, layer, book, cfg.eps);
            std::uint64_t accepted = 0, pairwise = 0;
            std::vector<std::pair<std::size_t, std::uint64_t>> hits;
            for (std::size_t a = layer.size(); a-- > 0;)
                for (std::uint64_t s = book.ms(); s-- > 0;)
                    if (dec.accepts(layer.sequences[a], book.signs(a, s), y, cfg.eps)) {
                        ++accepted;
                        hits.emplace_back(a, s);
                        if (!dec.model().joint().typical(dec.joint_sequence(layer.sequences[a], book.signs(a, s), y),
                                                         cfg.eps))
                            ++pairwise;
                    }
            CHECK(r.accepted == accepted);
            total_accepted += accepted;
            if (kind == DecoderKind::Bmd) CHECK(r.pairwise_only == pairwise);
            else CHECK(r.pairwise_only == 0);
            if (accepted == 1) {
                CHECK(r.status == DecodeResult::Status::Unique);
                CHECK(r.m_a == hits[0].first);
                CHECK(r.m_s == hits[0].second);
            } else {
                CHECK(r.status == (accepted == 0 ? DecodeResult::Status::None : DecodeResult::Status::Multiple));
            }
        }
        CHECK(total_accepted > 0);
    }
}

TEST_CASE("bit-metric decoder tests single bits and the sign against the output") {
    auto c = make_ask(2);
    auto labels = brgc_label(c);
    Pmf pb = bit_pmf_from_amplitudes(labels, Pmf({0.4, 0.3, 0.2, 0.1}));
    Dmc dmc = quantize_awgn(c, AwgnSpec{8.0, 8, 1.0}, Pmf::uniform(8));
    TypicalityDecoder dec(DecoderKind::Bmd, bmd_model(c, pb, labels, dmc), 2);
    // Components: B1 = bit 0, B2 = bit 1, S = bit 2, Y = bit 3.
    std::vector<unsigned> expect{0b1100, 0b1001, 0b1010, 0b0100, 0b0001, 0b0010, 0b1000};
    CHECK(dec.masks() == expect);
    TypicalityDecoder smd(DecoderKind::Smd, smd_model(c, Pmf({0.4, 0.3, 0.2, 0.1}), dmc), 2);
    CHECK(smd.masks().size() == 7);
}

TEST_CASE("noiseless channels decode without errors") {
    for (auto kind : {DecoderKind::Smd, DecoderKind::Bmd})
        for (auto mode : {CoderMode::Iid, CoderMode::Linear})
            for (int m : {1, 2}) {
                ExperimentConfig cfg;
                cfg.m = m;
                cfg.amplitude_pmf = m == 1 ? Pmf({0.75, 0.25}) : Pmf({0.4, 0.3, 0.2, 0.1});
                cfg.dmc = noiseless_dmc(make_ask(m));
                cfg.eps = 0.3;
                cfg.n = m == 1 ? 8 : 5;
                cfg.gamma = 0.2;
                cfg.decoder = kind;
                cfg.mode = mode;
                cfg.trials = 200;
                cfg.seed = 3;
                auto st = run_experiment(cfg);
                CHECK(st.errors_total == 0);
                CHECK(st.errors_kind1 == 0);
                CHECK(st.errors_kind2 == 0);
                CHECK(st.accepted_candidates == st.trials);
            }
}

TEST_CASE("error taxonomy and the union bound") {
    for (auto kind : {DecoderKind::Smd, DecoderKind::Bmd})
        for (int point = 0; point < 2; ++point) {
            ExperimentConfig cfg = base_config();
            cfg.decoder = kind;
            cfg.dmc = point ? awgn4(8.0, 2, 1.0, cfg.amplitude_pmf) : cfg.dmc;
            cfg.eps = point ? 0.3 : 0.2;
            cfg.gamma = 0.25;
            auto st = run_experiment(cfg);
            CHECK(st.trials == cfg.trials);
            CHECK(st.errors_total <= st.errors_kind1 + st.errors_kind2);
            CHECK(st.none_failures + st.multiple_failures + st.wrong_unique == st.errors_total);
            CHECK(st.both <= std::min(st.errors_kind1, st.errors_kind2));
            CHECK(st.pairwise_only <= st.accepted_candidates);
            if (kind == DecoderKind::Smd) CHECK(st.pairwise_only == 0);
        }
}

TEST_CASE("results do not depend on the thread count") {
    ExperimentConfig cfg = base_config();
    cfg.dmc = awgn4(14.0, 2, 1.0, cfg.amplitude_pmf);
    cfg.trials = 257;
    SignCodeExperiment exp(cfg);
    auto a = exp.run(1);
    for (int threads : {2, 3, 8}) {
        auto b = exp.run(threads);
        CHECK(a.errors_total == b.errors_total);
        CHECK(a.errors_kind1 == b.errors_kind1);
        CHECK(a.errors_kind2 == b.errors_kind2);
        CHECK(a.accepted_candidates == b.accepted_candidates);
        CHECK(a.none_failures == b.none_failures);
    }
    auto again = SignCodeExperiment(cfg).run(1);
    CHECK(again.errors_total == a.errors_total);
    cfg.redraw_codebook = false;
    auto fixed = SignCodeExperiment(cfg);
    CHECK(fixed.codebook_for_trial(0).redundant(0, 0) == fixed.codebook_for_trial(9).redundant(0, 0));
    CHECK(fixed.run(1).errors_total == fixed.run(4).errors_total);
}

TEST_CASE("rate bookkeeping") {
    ExperimentConfig cfg = base_config();
    cfg.gamma = 0.25;
    cfg.n = 12;
    SignCodeExperiment exp(cfg);
    auto st = exp.run(1);
    CHECK(st.n1 == 3);
    CHECK(st.n2 == 9);
    CHECK(st.ms == 8);
    CHECK(st.ma == exp.layer().size());
    CHECK(st.gamma_realized == doctest::Approx(0.25));
    CHECK(st.rate_achieved == doctest::Approx((std::log2(static_cast<double>(st.ma)) + 3) / 12));
    CHECK(st.h_a == doctest::Approx(oracle::entropy({5.0 / 6.0, 1.0 / 6.0})));
}

TEST_CASE("invalid experiments are rejected") {
    ExperimentConfig cfg = base_config();
    cfg.eps = 1e-4;
    CHECK_THROWS_AS(SignCodeExperiment{cfg}, ConfigError);
    cfg = base_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.gamma = 1.0;
    CHECK_THROWS_AS(cfg.validate(), RangeError);
    cfg = base_config();
    cfg.dmc = noiseless_dmc(make_ask(2));
    CHECK_THROWS_AS(cfg.validate(), ShapeError);
    cfg = base_config();
    cfg.n = 40;
    cfg.eps = 0.5;
    cfg.budget = 1e3;
    CHECK_THROWS_AS(SignCodeExperiment{cfg}, BudgetError);
}

}
