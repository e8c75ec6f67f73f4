#include "zpa/config.hpp"

#include <sstream>

#include "zpa/errors.hpp"

namespace zpa {

using nlohmann::json;

json RunConfig::to_json() const {
    return json{{"p", p}, {"expr", expr}, {"machine", machine_file}, {"word", word},
                {"x", x}, {"k", k}, {"m", m}, {"n", n}, {"lmax", lmax},
                {"xlen", xlen}, {"depth", depth}, {"bound", bound}, {"max_n", max_n},
                {"ks", ks}, {"out", out}, {"csv", csv}, {"json", as_json},
                {"seed", seed}, {"jobs", jobs}, {"const", consts}};
}

void RunConfig::load(const json& j) {
    if (j.contains("p")) p = j.at("p").get<unsigned>();
    if (j.contains("expr")) expr = j.at("expr").get<std::string>();
    if (j.contains("machine")) machine_file = j.at("machine").get<std::string>();
    if (j.contains("word")) word = j.at("word").get<std::string>();
    if (j.contains("x")) x = j.at("x").get<std::string>();
    if (j.contains("k")) k = j.at("k").get<unsigned>();
    if (j.contains("m")) m = j.at("m").get<unsigned>();
    if (j.contains("n")) n = j.at("n").get<unsigned>();
    if (j.contains("lmax")) lmax = j.at("lmax").get<unsigned>();
    if (j.contains("xlen")) xlen = j.at("xlen").get<unsigned>();
    if (j.contains("depth")) depth = j.at("depth").get<unsigned>();
    if (j.contains("bound")) bound = j.at("bound").get<long>();
    if (j.contains("max_n")) max_n = j.at("max_n").get<unsigned>();
    if (j.contains("ks")) ks = j.at("ks").get<std::string>();
    if (j.contains("out")) out = j.at("out").get<std::string>();
    if (j.contains("csv")) csv = j.at("csv").get<std::string>();
    if (j.contains("json")) as_json = j.at("json").get<bool>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("jobs")) jobs = j.at("jobs").get<unsigned>();
    if (j.contains("const")) consts = j.at("const").get<std::vector<std::string>>();
}

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig cfg;
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        try {
            cfg.load(json::parse(text));
        } catch (const json::exception& err) {
            throw input_error(std::string("malformed config JSON: ") + err.what());
        }
        return cfg;
    }
    json j;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
        };
        trim(key);
        trim(value);
        try {
            if (key == "p" || key == "k" || key == "m" || key == "n" || key == "lmax" ||
                key == "xlen" || key == "depth" || key == "max_n" || key == "jobs")
                j[key] = static_cast<unsigned>(std::stoul(value));
            else if (key == "bound") j[key] = std::stol(value);
            else if (key == "seed") j[key] = std::stoull(value);
            else if (key == "json") j[key] = value == "true" || value == "1";
            else if (key == "const") {
                if (!j.contains("const")) j["const"] = json::array();
                j["const"].push_back(value);
            } else j[key] = value;
        } catch (const std::exception&) {
            throw input_error("malformed config value for key '" + key + "'");
        }
    }
    cfg.load(j);
    return cfg;
}

} // namespace zpa
