#include "pas/pas.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "pas/airsolver.hpp"
#include "pas/alphabets.hpp"
#include "pas/channel.hpp"
#include "pas/commands.hpp"
#include "pas/errors.hpp"
#include "pas/infomeasures.hpp"
#include "pas/io.hpp"

struct pas_constellation {
    pas::AskConstellation c;
    pas::LabelMap labels;
};

struct pas_dmc {
    pas::Dmc dmc;
};

struct pas_experiment {
    pas::Json config;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_kind;

pas_status status_of(pas::ErrorKind k) {
    switch (k) {
        case pas::ErrorKind::Budget: return PAS_ERR_BUDGET;
        case pas::ErrorKind::Convergence: return PAS_ERR_CONVERGENCE;
        default: return PAS_ERR_CONFIG;
    }
}

template <class F>
pas_status guarded(F&& body) {
    g_last_error.clear();
    g_last_kind.clear();
    try {
        body();
        return PAS_OK;
    } catch (const pas::Error& e) {
        g_last_error = e.what();
        g_last_kind = pas::to_string(e.kind());
        return status_of(e.kind());
    } catch (const pas::Json::exception& e) {
        g_last_error = std::string("invalid JSON: ") + e.what();
        g_last_kind = "config";
        return PAS_ERR_CONFIG;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        g_last_kind = "internal";
        return PAS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        g_last_kind = "internal";
        return PAS_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (!p) throw pas::ConfigError(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

pas::Pmf pmf_from(const double* p, std::size_t len) {
    require(p, "pmf");
    return pas::Pmf(std::vector<double>(p, p + len));
}

}  // namespace

extern "C" {

const char* pas_last_error(void) { return g_last_error.c_str(); }
const char* pas_last_error_kind(void) { return g_last_kind.c_str(); }
const char* pas_version(void) { return "1.0.0"; }
void pas_string_free(char* s) { std::free(s); }

pas_status pas_constellation_create(int order, pas_constellation** out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        int m = -1;
        for (int k = 0; k <= pas::kMaxAmplitudeBits; ++k)
            if ((2 << k) == order) m = k;
        if (m < 0) throw pas::SizeError("order must be a power of two in [2, 128]");
        auto c = pas::make_ask(m);
        auto labels = pas::brgc_label(c);
        *out = new pas_constellation{std::move(c), std::move(labels)};
    });
}

void pas_constellation_free(pas_constellation* c) { delete c; }

size_t pas_constellation_size(const pas_constellation* c) { return c ? c->c.size() : 0; }

pas_status pas_constellation_points(const pas_constellation* c, int* points, size_t capacity) {
    return guarded([&] {
        require(c, "constellation");
        require(points, "points");
        if (capacity < c->c.size()) throw pas::SizeError("points buffer too small");
        for (std::size_t i = 0; i < c->c.size(); ++i) points[i] = c->c.points[i];
    });
}

pas_status pas_brgc_label(const pas_constellation* c, int x, int* sign_bit, unsigned* amplitude_bits) {
    return guarded([&] {
        require(c, "constellation");
        require(sign_bit, "sign_bit");
        require(amplitude_bits, "amplitude_bits");
        auto lab = c->labels.forward(x);
        *sign_bit = lab.sign_bit;
        *amplitude_bits = lab.amp_bits;
    });
}

pas_status pas_dmc_awgn(const pas_constellation* c, double snr_db, int num_bins, double clip_sigmas,
                        const double* power_pmf, size_t pmf_len, pas_dmc** out) {
    return guarded([&] {
        require(c, "constellation");
        require(out, "out");
        *out = nullptr;
        pas::Pmf p = power_pmf ? pmf_from(power_pmf, pmf_len) : pas::Pmf::uniform(c->c.size());
        auto dmc = pas::quantize_awgn(c->c, pas::AwgnSpec{snr_db, num_bins, clip_sigmas}, p);
        *out = new pas_dmc{std::move(dmc)};
    });
}

pas_status pas_dmc_create(size_t nin, size_t nout, const double* w, const double* input_points, pas_dmc** out) {
    return guarded([&] {
        require(w, "w");
        require(out, "out");
        *out = nullptr;
        std::vector<double> pts;
        for (std::size_t i = 0; i < nin; ++i) pts.push_back(input_points ? input_points[i] : static_cast<double>(i));
        pas::Dmc dmc(pas::StochasticMatrix(nin, nout, std::vector<double>(w, w + nin * nout)), std::move(pts));
        *out = new pas_dmc{std::move(dmc)};
    });
}

pas_status pas_dmc_from_json(const char* json, pas_dmc** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = nullptr;
        *out = new pas_dmc{pas::dmc_from_json(json)};
    });
}

pas_status pas_dmc_to_json(const pas_dmc* dmc, char** out) {
    return guarded([&] {
        require(dmc, "dmc");
        require(out, "out");
        *out = dup_string(pas::dmc_to_json(dmc->dmc));
    });
}

void pas_dmc_free(pas_dmc* dmc) { delete dmc; }
size_t pas_dmc_nin(const pas_dmc* dmc) { return dmc ? dmc->dmc.nin() : 0; }
size_t pas_dmc_nout(const pas_dmc* dmc) { return dmc ? dmc->dmc.nout() : 0; }

double pas_dmc_prob(const pas_dmc* dmc, size_t x, size_t y) {
    if (!dmc || x >= dmc->dmc.nin() || y >= dmc->dmc.nout()) return 0.0;
    return dmc->dmc(x, y);
}

pas_status pas_mutual_information(const double* pmf, size_t len, const pas_dmc* dmc, double* out) {
    return guarded([&] {
        require(dmc, "dmc");
        require(out, "out");
        *out = pas::mutual_information(pmf_from(pmf, len), dmc->dmc);
    });
}

pas_status pas_r_bmd(const pas_constellation* c, const double* pmf, size_t len, const pas_dmc* dmc, double* out) {
    return guarded([&] {
        require(c, "constellation");
        require(dmc, "dmc");
        require(out, "out");
        if (dmc->dmc.nin() != c->c.size()) throw pas::ShapeError("channel inputs do not match the constellation");
        *out = pas::r_bmd(pmf_from(pmf, len), dmc->dmc, c->labels);
    });
}

pas_status pas_optimize_capacity(const pas_constellation* c, double snr_db, int num_bins, double clip_sigmas,
                                 pas_air_point* out) {
    return guarded([&] {
        require(c, "constellation");
        require(out, "out");
        auto p = pas::optimize_capacity(c->c, snr_db, pas::Quantizer{num_bins, clip_sigmas});
        pas_air_point r{};
        r.snr_db = p.snr_db;
        r.capacity = p.capacity;
        r.h_a = p.h_a;
        r.gamma = p.gamma;
        r.mi_uniform = p.mi_uniform;
        r.r_bmd_star = p.r_bmd_star;
        r.power = p.power;
        r.scale = p.scale;
        r.sigma = p.sigma;
        r.iterations = p.iterations;
        r.num_amplitudes = p.p_a_star.size();
        for (std::size_t k = 0; k < p.p_a_star.size() && k < PAS_MAX_AMPLITUDES; ++k) r.p_a_star[k] = p.p_a_star[k];
        *out = r;
    });
}

pas_status pas_experiment_create(const char* config_json, pas_experiment** out) {
    return guarded([&] {
        require(config_json, "config");
        require(out, "out");
        *out = nullptr;
        auto cfg = pas::Json::parse(config_json);
        // Validate eagerly with a single trial so errors surface at creation.
        auto probe = cfg;
        if (probe.is_object()) probe["trials"] = 1;
        (void)pas::run_command("sim", probe, 1);
        *out = new pas_experiment{std::move(cfg)};
    });
}

pas_status pas_experiment_run(const pas_experiment* e, int threads, char** stats_json) {
    return guarded([&] {
        require(e, "experiment");
        require(stats_json, "stats_json");
        auto doc = pas::Json::parse(pas::run_command("sim", e->config, threads));
        *stats_json = dup_string(doc.at("stats").dump());
    });
}

void pas_experiment_free(pas_experiment* e) { delete e; }

pas_status pas_command_run(const char* command, const char* config_json, int threads, char** out) {
    return guarded([&] {
        require(command, "command");
        require(config_json, "config");
        require(out, "out");
        *out = nullptr;
        *out = dup_string(pas::run_command(command, pas::Json::parse(config_json), threads));
    });
}

pas_status pas_sim_csv_header(char** out) {
    return guarded([&] {
        require(out, "out");
        *out = dup_string(pas::sim_csv_header());
    });
}

pas_status pas_sim_csv_row(const char* stats_json, char** out) {
    return guarded([&] {
        require(stats_json, "stats");
        require(out, "out");
        *out = dup_string(pas::sim_csv_row(pas::Json::parse(stats_json)));
    });
}

}  // extern "C"
