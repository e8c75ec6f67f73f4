#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace zpa {

// One bag of knobs for a CLI invocation. Round-trips losslessly through its
// JSON form; a key=value file maps onto the same fields.
struct RunConfig {
    unsigned p = 2;
    std::string expr;
    std::string machine_file;
    std::string word;
    std::string x;
    unsigned k = 24;
    unsigned m = 8;
    unsigned n = 2;
    unsigned lmax = 16;
    unsigned xlen = 2;
    unsigned depth = 3;
    long bound = 4096;
    unsigned max_n = 12;
    std::string ks = "12,16,20";
    std::string out;
    std::string csv;
    bool as_json = false;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::vector<std::string> consts;

    bool operator==(const RunConfig&) const = default;

    nlohmann::json to_json() const;
    void load(const nlohmann::json& j);

    // JSON object or key=value lines (with # comments).
    static RunConfig from_text(const std::string& text);
};

} // namespace zpa
