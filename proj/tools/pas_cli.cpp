#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pas/pas.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitConfig = PAS_ERR_CONFIG;

int fail(int code, const std::string& msg) {
    std::cerr << "pas: " << msg << "\n";
    return code;
}

// Applies key=value with a dotted key path; the value is parsed as JSON when
// possible and taken as a string otherwise.
void apply_override(Json& config, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--set expects key=value, got '" + assignment + "'");
    std::string path = assignment.substr(0, eq);
    std::string text = assignment.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    Json* node = &config;
    std::size_t start = 0;
    while (true) {
        auto dot = path.find('.', start);
        std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw std::invalid_argument("empty key in '" + path + "'");
        if (!node->is_object()) throw std::invalid_argument("'" + path + "' does not address an object");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = Json::object();
        start = dot + 1;
    }
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    pas_string_free(s);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Achievable rates, typical sets and sign-coding simulation for probabilistic amplitude shaping"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(pas_version()));

    struct Options {
        std::string config_path;
        std::vector<std::string> sets;
        std::int64_t seed = -1;
        int threads = 1;
        std::string out_path;
        std::string csv_path;
    } opt;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"air-sweep", "capacity, shaped split and R_BMD over an SNR grid (CSV)"},
        {"typ-dump", "enumerate a typical set with bound checks"},
        {"b-typ", "enumerate a B-typical set with its membership report"},
        {"sim", "simulate random sign-coding with typicality decoding"},
        {"basic-point", "locate the SNR where H(A*) equals capacity"},
        {"gamma-split", "split capacity into H(A*) and gamma"},
        {"shaping-gap", "SNR penalty of uniform inputs at a rate"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", opt.config_path, "JSON config file ('-' for stdin)");
        sub->add_option("--set", opt.sets, "override a config key (key=value, dotted paths allowed)");
        sub->add_option("--seed", opt.seed, "override the config seed");
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("-o,--out", opt.out_path, "write output to this path instead of stdout");
        if (name == "sim") sub->add_option("--csv", opt.csv_path, "append a result row to this CSV file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    std::string command = app.get_subcommands().front()->get_name();

    Json config = Json::object();
    try {
        if (!opt.config_path.empty()) {
            std::stringstream buf;
            if (opt.config_path == "-") buf << std::cin.rdbuf();
            else {
                std::ifstream in(opt.config_path);
                if (!in) return fail(kExitConfig, "cannot read config '" + opt.config_path + "'");
                buf << in.rdbuf();
            }
            config = Json::parse(buf.str());
            if (!config.is_object()) return fail(kExitConfig, "config must be a JSON object");
        }
        for (const auto& s : opt.sets) apply_override(config, s);
        if (opt.seed >= 0) config["seed"] = static_cast<std::uint64_t>(opt.seed);
    } catch (const std::exception& e) {
        return fail(kExitConfig, e.what());
    }

    char* raw = nullptr;
    auto status = pas_command_run(command.c_str(), config.dump().c_str(), opt.threads, &raw);
    if (status != PAS_OK) return fail(status, std::string(pas_last_error_kind()) + " error: " + pas_last_error());
    std::string output = take_string(raw);

    if (opt.out_path.empty()) std::cout << output;
    else {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out || !(out << output)) return fail(kExitConfig, "cannot write '" + opt.out_path + "'");
    }

    if (!opt.csv_path.empty()) {
        std::string stats = Json::parse(output).at("stats").dump();
        char* row = nullptr;
        if (pas_sim_csv_row(stats.c_str(), &row) != PAS_OK) return fail(PAS_ERR_INTERNAL, pas_last_error());
        std::string line = take_string(row);
        bool fresh = true;
        {
            std::ifstream probe(opt.csv_path);
            fresh = !probe || probe.peek() == std::ifstream::traits_type::eof();
        }
        std::ofstream csv(opt.csv_path, std::ios::app | std::ios::binary);
        if (!csv) return fail(kExitConfig, "cannot append to '" + opt.csv_path + "'");
        if (fresh) {
            char* header = nullptr;
            pas_sim_csv_header(&header);
            csv << "# config: " << config.dump() << "\n" << take_string(header) << "\n";
        }
        csv << line << "\n";
    }
    return 0;
}
