#include "coopgame/game_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace coopgame {

namespace {

using nlohmann::json;

std::vector<double> number_array(const json& j, const char* field, std::size_t expected) {
    if (!j.contains(field) || !j[field].is_array())
        throw parse_error(std::string("game file: missing array field \"") + field + "\"");
    const auto& arr = j[field];
    if (arr.size() != expected)
        throw parse_error(std::string("game file: field \"") + field + "\" has length " +
                          std::to_string(arr.size()) + ", expected " + std::to_string(expected));
    std::vector<double> out;
    out.reserve(expected);
    for (const auto& v : arr) {
        if (!v.is_number()) throw parse_error(std::string("game file: non-numeric entry in \"") + field + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

std::shared_ptr<const GameOracle> parse_game(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("game file: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw parse_error("game file: expected an object with integer \"n\"");
    const int n = j["n"].get<int>();
    if (n < 1) throw parse_error("game file: n must be at least 1");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw parse_error("game file: missing string field \"kind\"");
    const std::string kind = j["kind"].get<std::string>();

    try {
        if (kind == "tabulated") {
            require_exact_capacity(n, "tabulated game file");
            return std::make_shared<TabulatedGame>(
                n, number_array(j, "values", std::size_t{1} << n));
        }
        if (kind == "voting") {
            if (!j.contains("quota") || !j["quota"].is_number())
                throw parse_error("game file: voting games need a numeric \"quota\"");
            return std::make_shared<VotingGame>(number_array(j, "weights", n),
                                                j["quota"].get<double>());
        }
        if (kind == "flid") {
            if (!j.contains("W") || !j["W"].is_array() || j["W"].size() != static_cast<std::size_t>(n))
                throw parse_error("game file: FLID games need an n-row \"W\" matrix");
            std::vector<std::vector<double>> w;
            w.reserve(n);
            const std::size_t d = j["W"].empty() || !j["W"][0].is_array() ? 0 : j["W"][0].size();
            for (const auto& row : j["W"]) {
                if (!row.is_array() || row.size() != d)
                    throw parse_error("game file: FLID \"W\" must be a rectangular matrix");
                std::vector<double> r;
                r.reserve(d);
                for (const auto& v : row) {
                    if (!v.is_number()) throw parse_error("game file: non-numeric entry in \"W\"");
                    r.push_back(v.get<double>());
                }
                w.push_back(std::move(r));
            }
            return std::make_shared<FlidGame>(std::move(w), number_array(j, "u", n));
        }
        if (kind == "additive")
            return std::make_shared<AdditiveGame>(number_array(j, "c", n));
    } catch (const input_error& e) {
        throw parse_error(std::string("game file: ") + e.what());
    }
    throw parse_error("game file: unknown kind \"" + kind + "\"");
}

std::shared_ptr<const GameOracle> load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open game file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_game(buf.str());
}

void write_flid_json(std::ostream& out, const FlidGame& game) {
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    const int n = game.num_players();
    out << "{\"n\": " << n << ", \"kind\": \"flid\", \"W\": [";
    for (int i = 0; i < n; ++i) {
        out << (i ? ", [" : "[");
        for (int d = 0; d < game.latent_dims(); ++d) {
            if (d) out << ", ";
            put(game.weights()[i][d]);
        }
        out << ']';
    }
    out << "], \"u\": [";
    for (int i = 0; i < n; ++i) {
        if (i) out << ", ";
        put(game.utilities()[i]);
    }
    out << "]}\n";
}

}  // namespace coopgame
