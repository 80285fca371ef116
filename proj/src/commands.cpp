#include "pas/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <set>
#include <thread>

#include "pas/airsolver.hpp"
#include "pas/alphabets.hpp"
#include "pas/channel.hpp"
#include "pas/errors.hpp"
#include "pas/io.hpp"
#include "pas/signcode.hpp"
#include "pas/typicality.hpp"

namespace pas {

namespace {

/// Typed access to a flat JSON object that remembers which keys were read.
class Reader {
public:
    explicit Reader(const Json& j) : j_(j) {
        if (!j_.is_object()) throw ConfigError("config must be a JSON object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key) {
        used_.insert(key);
        if (!j_.contains(key)) throw ConfigError("missing required key '" + key + "'");
        return j_.at(key);
    }

    template <class T>
    T req(const std::string& key) {
        return convert<T>(key, raw(key));
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        used_.insert(key);
        if (!j_.contains(key)) return fallback;
        return convert<T>(key, j_.at(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
    }

private:
    template <class T>
    static T convert(const std::string& key, const Json& v) {
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
            } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                if (!v.is_number_integer()) throw ConfigError("key '" + key + "' must be an integer");
                if constexpr (std::is_unsigned_v<T>)
                    if (v.is_number_integer() && v.get<std::int64_t>() < 0 && !v.is_number_unsigned())
                        throw ConfigError("key '" + key + "' must be nonnegative");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw ConfigError("key '" + key + "' must be a boolean");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string");
            }
            return v.get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("key '" + key + "': " + e.what());
        }
    }

    const Json& j_;
    std::set<std::string> used_;
};

int amplitude_bits_for_order(int order) {
    for (int m = 0; m <= kMaxAmplitudeBits; ++m)
        if ((2 << m) == order) return m;
    throw ConfigError("order must be a power of two in [2, " + std::to_string(2 << kMaxAmplitudeBits) + "]");
}

Quantizer read_quantizer(Reader& r) {
    Quantizer q;
    q.num_bins = r.get<int>("num_bins", q.num_bins);
    q.clip_sigmas = r.get<double>("clip_sigmas", q.clip_sigmas);
    q.validate();
    return q;
}

SolverOptions read_solver(Reader& r) {
    SolverOptions o;
    o.tolerance = r.get<double>("tolerance", o.tolerance);
    o.max_iterations = r.get<int>("max_iterations", o.max_iterations);
    if (!(o.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (o.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
    return o;
}

Json pmf_json(const Pmf& p) { return std::vector<double>(p.probs().begin(), p.probs().end()); }

Json air_json(const AirPoint& p) {
    Json j;
    j["snr_db"] = p.snr_db;
    j["capacity"] = p.capacity;
    j["h_a"] = p.h_a;
    j["gamma"] = p.gamma;
    j["mi_uniform"] = p.mi_uniform;
    j["r_bmd_star"] = p.r_bmd_star;
    j["p_a_star"] = pmf_json(p.p_a_star);
    j["power"] = p.power;
    j["scale"] = p.scale;
    j["sigma"] = p.sigma;
    j["iterations"] = p.iterations;
    return j;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string format_sequence(const Sequence& s, std::size_t alphabet) {
    std::string out;
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (alphabet > 10 && t) out += ',';
        out += std::to_string(s[t]);
    }
    return out;
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
    std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    for (auto& t : pool) t.join();
}

Pmf read_pmf(Reader& r, const std::string& key) {
    return Pmf(r.req<std::vector<double>>(key));
}

StochasticMatrix read_matrix(Reader& r, const std::string& key) {
    auto rows = r.req<std::vector<std::vector<double>>>(key);
    if (rows.empty() || rows.front().empty()) throw ShapeError("'" + key + "' must be a nonempty matrix");
    std::vector<double> flat;
    for (const auto& row : rows) {
        if (row.size() != rows.front().size()) throw ShapeError("'" + key + "' rows differ in length");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return StochasticMatrix(rows.size(), rows.front().size(), std::move(flat));
}

TypConfig read_typ(Reader& r) {
    TypConfig tc;
    tc.n = r.req<int>("n");
    tc.eps = r.req<double>("eps");
    tc.budget = r.get<double>("budget", tc.budget);
    tc.mc_samples = r.get<std::uint64_t>("mc_samples", tc.mc_samples);
    tc.seed = r.get<std::uint64_t>("seed", tc.seed);
    tc.validate();
    return tc;
}

Json lemma1_json(const Lemma1Report& l) {
    Json j;
    j["p1_ok"] = l.p1_ok;
    j["p2_mass"] = l.p2_mass;
    j["p2_within_eps"] = l.p2_within_eps;
    j["large_n"] = l.large_n;
    j["p3_upper_ok"] = l.p3_upper_ok;
    j["p3_lower_ok"] = l.p3_lower_ok;
    j["conditional_bound_ok"] = l.conditional_bound_ok;
    j["joint_mass"] = l.joint_mass;
    j["b_count"] = l.b_count;
    j["a_count"] = l.a_count;
    j["h_u"] = l.h_u;
    j["exact"] = l.exact;
    return j;
}

std::string cmd_air_sweep(const Json& config, int threads) {
    Reader r(config);
    auto c = make_ask(amplitude_bits_for_order(r.get<int>("order", 4)));
    auto grid = r.req<std::vector<double>>("snr_db");
    auto q = read_quantizer(r);
    auto opts = read_solver(r);
    r.finish();
    if (grid.empty()) throw ConfigError("snr_db grid is empty");

    std::vector<std::string> rows(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        std::string row = format_double(grid[i]);
        try {
            auto p = optimize_capacity(c, grid[i], q, opts);
            std::string pa;
            for (std::size_t k = 0; k < p.p_a_star.size(); ++k) pa += (k ? ";" : "") + format_double(p.p_a_star[k]);
            row += "," + format_double(p.capacity) + "," + format_double(p.h_a) + "," + format_double(p.gamma) + "," +
                   format_double(p.mi_uniform) + "," + format_double(p.r_bmd_star) + "," + pa + ",ok,";
        } catch (const Error& e) {
            row += ",,,,,,," + std::string(to_string(e.kind())) + "," + csv_quote(e.what());
        }
        rows[i] = std::move(row);
    });

    std::string out = "# config: " + config.dump() + "\n";
    out += "snr_db,capacity,h_a,gamma,mi_uniform,r_bmd_star,p_a_star,status,message\n";
    for (const auto& row : rows) out += row + "\n";
    return out;
}

std::string cmd_basic_point(const Json& config) {
    Reader r(config);
    auto c = make_ask(amplitude_bits_for_order(r.get<int>("order", 4)));
    double lo = r.get<double>("snr_lo", -2.0);
    double hi = r.get<double>("snr_hi", 4.0);
    auto q = read_quantizer(r);
    auto opts = read_solver(r);
    r.finish();
    auto b = find_basic_point(c, q, lo, hi, opts);
    Json j;
    j["command"] = "basic-point";
    j["config"] = config;
    j["snr_db"] = b.snr_db;
    j["rate"] = b.rate;
    j["h_a"] = b.h_a;
    j["point"] = air_json(b.point);
    return j.dump(2) + "\n";
}

std::string cmd_gamma_split(const Json& config) {
    Reader r(config);
    auto c = make_ask(amplitude_bits_for_order(r.get<int>("order", 4)));
    double snr = r.req<double>("snr_db");
    auto q = read_quantizer(r);
    auto opts = read_solver(r);
    r.finish();
    auto g = gamma_split(c, snr, q, opts);
    Json j;
    j["command"] = "gamma-split";
    j["config"] = config;
    j["h_a"] = g.h_a;
    j["gamma"] = g.gamma;
    j["capacity"] = g.capacity;
    j["below_basic_point"] = g.below_basic_point;
    j["point"] = air_json(g.point);
    return j.dump(2) + "\n";
}

std::string cmd_shaping_gap(const Json& config) {
    Reader r(config);
    auto c = make_ask(amplitude_bits_for_order(r.get<int>("order", 4)));
    double rate = r.req<double>("rate");
    auto q = read_quantizer(r);
    auto opts = read_solver(r);
    r.finish();
    auto g = shaping_gap(c, rate, q, opts);
    Json j;
    j["command"] = "shaping-gap";
    j["config"] = config;
    j["rate"] = rate;
    j["gap_db"] = g.gap_db;
    j["snr_uniform_db"] = g.snr_uniform_db;
    j["snr_capacity_db"] = g.snr_capacity_db;
    return j.dump(2) + "\n";
}

std::string cmd_typ_dump(const Json& config) {
    Reader r(config);
    auto pmf = read_pmf(r, "pmf");
    auto tc = read_typ(r);
    StochasticMatrix w = r.has("transition") ? read_matrix(r, "transition") : StochasticMatrix::identity(pmf.size());
    r.finish();
    if (w.rows() != pmf.size()) throw ShapeError("transition rows must match the pmf size");

    auto set = enumerate_typical(pmf, tc);
    auto lemma = lemma1_report(UvModel(pmf, w), tc);
    double n = tc.n;
    Json h;
    h["command"] = "typ-dump";
    h["config"] = config;
    h["alphabet"] = pmf.size();
    h["n"] = tc.n;
    h["eps"] = tc.eps;
    h["entropy"] = set.h;
    h["count"] = set.members.size();
    h["mass"] = set.mass;
    h["upper_bound"] = std::exp2(n * (set.h + tc.eps));
    h["lower_bound"] = (1.0 - tc.eps) * std::exp2(n * (set.h - tc.eps));
    h["upper_ok"] = set.upper_ok;
    h["large_n"] = set.large_n;
    h["lower_ok"] = set.lower_ok;
    h["member_bounds_ok"] = set.member_bounds_ok;
    h["lemma1"] = lemma1_json(lemma);

    std::string out = h.dump() + "\n";
    for (const auto& s : set.members) out += format_sequence(s, pmf.size()) + "\n";
    return out;
}

std::string cmd_b_typ(const Json& config) {
    Reader r(config);
    auto pmf = read_pmf(r, "pmf");
    auto w = read_matrix(r, "transition");
    auto tc = read_typ(r);
    CompositeShape shape{{pmf.size()}, {w.cols()}};
    if (r.has("u_dims")) shape.u_dims = r.req<std::vector<std::size_t>>("u_dims");
    if (r.has("v_dims")) shape.v_dims = r.req<std::vector<std::size_t>>("v_dims");
    r.finish();
    if (w.rows() != pmf.size()) throw ShapeError("transition rows must match the pmf size");

    UvModel model(pmf, w, shape);
    auto b = enumerate_b_typical(model, tc);
    auto lemma = lemma1_report(model, tc);
    Json h;
    h["command"] = "b-typ";
    h["config"] = config;
    h["n"] = tc.n;
    h["eps"] = tc.eps;
    h["h_u"] = b.h_u;
    h["count"] = b.members.size();
    h["typical_count"] = b.typical_count;
    h["typical_mass"] = b.typical_mass;
    h["b_mass"] = b.b_mass;
    h["joint_mass"] = b.joint_mass;
    h["exact"] = b.exact;
    h["lemma1"] = lemma1_json(lemma);
    try {
        auto js = joint_set_bounds(model, tc);
        Json k;
        k["count"] = js.count;
        k["mass"] = js.mass;
        k["h_uv"] = js.h_uv;
        k["h_v_given_u"] = js.h_v_given_u;
        k["joint_upper_ok"] = js.joint_upper_ok;
        k["member_bounds_ok"] = js.member_bounds_ok;
        k["conditional_ok"] = js.conditional_ok;
        k["max_conditional_count"] = js.max_conditional_count;
        h["joint_set"] = k;
    } catch (const BudgetError&) {
        h["joint_set"] = nullptr;
    }

    std::string out = h.dump() + "\n";
    for (std::size_t i = 0; i < b.members.size(); ++i)
        out += format_sequence(b.members[i], pmf.size()) + " " + format_double(b.cond_prob[i]) + " " +
               format_double(b.std_error[i]) + "\n";
    return out;
}

std::string cmd_sim(const Json& config, int threads) {
    Reader r(config);
    ExperimentConfig cfg;
    cfg.m = amplitude_bits_for_order(r.get<int>("order", 4));
    auto c = make_ask(cfg.m);
    if (r.has("amplitude_pmf")) cfg.amplitude_pmf = read_pmf(r, "amplitude_pmf");
    Pmf power_pmf = mirror_amplitudes(
        c, cfg.amplitude_pmf.size() ? cfg.amplitude_pmf : Pmf::uniform(c.num_amplitudes()));
    if (r.has("dmc")) {
        if (r.has("snr_db") || r.has("num_bins") || r.has("clip_sigmas"))
            throw ConfigError("give either 'dmc' or the AWGN keys, not both");
        cfg.dmc = dmc_from_json(r.raw("dmc").dump());
    } else {
        AwgnSpec spec;
        spec.snr_db = r.req<double>("snr_db");
        auto q = read_quantizer(r);
        spec.num_bins = q.num_bins;
        spec.clip_sigmas = q.clip_sigmas;
        if (cfg.amplitude_pmf.size() && cfg.amplitude_pmf.size() != c.num_amplitudes())
            throw ShapeError("amplitude pmf size does not match the order");
        cfg.dmc = quantize_awgn(c, spec, power_pmf);
    }
    cfg.eps = r.get<double>("eps", cfg.eps);
    cfg.n = r.get<int>("n", cfg.n);
    cfg.gamma = r.get<double>("gamma", cfg.gamma);
    auto decoder = r.get<std::string>("decoder", "smd");
    if (decoder == "smd") cfg.decoder = DecoderKind::Smd;
    else if (decoder == "bmd") cfg.decoder = DecoderKind::Bmd;
    else throw ConfigError("decoder must be 'smd' or 'bmd'");
    auto mode = r.get<std::string>("mode", "iid");
    if (mode == "iid") cfg.mode = CoderMode::Iid;
    else if (mode == "linear") cfg.mode = CoderMode::Linear;
    else throw ConfigError("mode must be 'iid' or 'linear'");
    auto trials = r.get<std::int64_t>("trials", 1000);
    if (trials < 1) throw ConfigError("trials must be at least 1");
    cfg.trials = static_cast<std::uint64_t>(trials);
    cfg.seed = r.get<std::uint64_t>("seed", cfg.seed);
    cfg.redraw_codebook = r.get<bool>("redraw_codebook", cfg.redraw_codebook);
    cfg.budget = r.get<double>("budget", cfg.budget);
    cfg.mc_samples = r.get<std::uint64_t>("mc_samples", cfg.mc_samples);
    r.finish();

    auto s = run_experiment(cfg, threads);
    Json st;
    st["trials"] = s.trials;
    st["errors_total"] = s.errors_total;
    st["kind1"] = s.errors_kind1;
    st["kind2"] = s.errors_kind2;
    st["both"] = s.both;
    st["none_failures"] = s.none_failures;
    st["multiple_failures"] = s.multiple_failures;
    st["wrong_unique"] = s.wrong_unique;
    st["accepted_candidates"] = s.accepted_candidates;
    st["pairwise_only"] = s.pairwise_only;
    st["error_rate"] = s.error_rate();
    st["n"] = s.n;
    st["n1"] = s.n1;
    st["n2"] = s.n2;
    st["gamma"] = s.gamma_realized;
    st["eps"] = s.eps;
    st["ma"] = s.ma;
    st["ms"] = s.ms;
    st["rate_achieved"] = s.rate_achieved;
    st["h_a"] = s.h_a;
    st["large_n"] = s.large_n;
    st["layer_exact"] = s.layer_exact;
    st["seed"] = s.seed;
    Json j;
    j["command"] = "sim";
    j["config"] = config;
    j["decoder"] = to_string(cfg.decoder);
    j["mode"] = to_string(cfg.mode);
    j["stats"] = st;
    return j.dump(2) + "\n";
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"air-sweep", "typ-dump",  "b-typ",      "sim",
                                                "basic-point", "gamma-split", "shaping-gap"};
    return names;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string run_command(const std::string& command, const Json& config, int threads) {
    if (command == "air-sweep") return cmd_air_sweep(config, threads);
    if (command == "typ-dump") return cmd_typ_dump(config);
    if (command == "b-typ") return cmd_b_typ(config);
    if (command == "sim") return cmd_sim(config, threads);
    if (command == "basic-point") return cmd_basic_point(config);
    if (command == "gamma-split") return cmd_gamma_split(config);
    if (command == "shaping-gap") return cmd_shaping_gap(config);
    throw ConfigError("unknown command '" + command + "'");
}

std::string sim_csv_header() { return "n,gamma,eps,trials,errors_total,kind1,kind2,rate_achieved,seed"; }

std::string sim_csv_row(const Json& stats) {
    try {
        return std::to_string(stats.at("n").get<int>()) + "," + format_double(stats.at("gamma").get<double>()) + "," +
               format_double(stats.at("eps").get<double>()) + "," +
               std::to_string(stats.at("trials").get<std::uint64_t>()) + "," +
               std::to_string(stats.at("errors_total").get<std::uint64_t>()) + "," +
               std::to_string(stats.at("kind1").get<std::uint64_t>()) + "," +
               std::to_string(stats.at("kind2").get<std::uint64_t>()) + "," +
               format_double(stats.at("rate_achieved").get<double>()) + "," +
               std::to_string(stats.at("seed").get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed stats document: ") + e.what());
    }
}

}  // namespace pas
