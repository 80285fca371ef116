#include "pas/io.hpp"

#include <json.hpp>

#include "pas/errors.hpp"

namespace pas {

std::string dmc_to_json(const Dmc& dmc) {
    nlohmann::ordered_json j;
    j["nin"] = dmc.nin();
    j["nout"] = dmc.nout();
    auto w = dmc.law().values();
    j["w"] = std::vector<double>(w.begin(), w.end());
    j["input_points"] = dmc.input_points();
    return j.dump();
}

Dmc dmc_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key() != "nin" && it.key() != "nout" && it.key() != "w" && it.key() != "input_points")
                throw ConfigError("unknown dmc key '" + it.key() + "'");
        auto nin = j.at("nin").get<std::size_t>();
        auto nout = j.at("nout").get<std::size_t>();
        auto w = j.at("w").get<std::vector<double>>();
        std::vector<double> pts;
        if (j.contains("input_points")) pts = j.at("input_points").get<std::vector<double>>();
        else
            for (std::size_t i = 0; i < nin; ++i) pts.push_back(static_cast<double>(i));
        return Dmc(StochasticMatrix(nin, nout, std::move(w)), std::move(pts));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid dmc document: ") + e.what());
    }
}

}  // namespace pas
