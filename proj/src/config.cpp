#include "slcd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>

#include "slcd/error.hpp"
#include "slcd/fsio.hpp"

namespace slcd {

namespace {

std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg;
    const std::map<std::string, std::function<void(double)>> setters = {
        {"k", [&](double v) { cfg.k = int(v); }},
        {"n_rho", [&](double v) { cfg.n_rho = int(v); }},
        {"n_theta", [&](double v) { cfg.n_theta = int(v); }},
        {"nms_threshold", [&](double v) { cfg.nms_threshold = v; }},
        {"match_threshold", [&](double v) { cfg.match_threshold = v; }},
        {"retrieval_threshold", [&](double v) { cfg.retrieval_threshold = v; }},
        {"grid_h", [&](double v) { cfg.grid_h = int(v); }},
        {"grid_w", [&](double v) { cfg.grid_w = int(v); }},
        {"pool", [&](double v) { cfg.pool = int(v); }},
        {"w_edge", [&](double v) { cfg.w_edge = v; }},
        {"w_region", [&](double v) { cfg.w_region = v; }},
        {"w_penalty", [&](double v) { cfg.w_penalty = v; }},
        {"rank_margin", [&](double v) { cfg.rank_margin = v; }},
    };

    const std::string text = read_text_file(path);
    size_t lineno = 0, start = 0;
    while (start <= text.size()) {
        const size_t pos = std::min(text.find('\n', start), text.size());
        std::string line = trim(text.substr(start, pos - start));
        start = pos + 1;
        ++lineno;
        if (line.empty() || line[0] == '#') continue;

        const size_t eq = line.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw ParseError(where + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ParseError(where + ": unknown key '" + key + "'");
        }
        double v = 0.0;
        const auto [ptr, ec] =
            std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw ParseError(where + ": bad value '" + value + "'");
        }
        it->second(v);
    }
    return cfg;
}

}  // namespace slcd
