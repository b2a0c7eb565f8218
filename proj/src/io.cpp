#include "zerone/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace zerone::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("cannot open '" + path + "' for writing");
    out << data;
    if (!out) throw validation_error("failed while writing '" + path + "'");
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

namespace {

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw validation_error(std::string(what) + ": not valid JSON");
    return j;
}

info::Alphabet alphabet_from(const json& j, const char* what) {
    if (!j.is_array()) throw validation_error(std::string(what) + ": alphabet must be an array");
    info::Alphabet a;
    for (const auto& s : j) {
        if (!s.is_string())
            throw validation_error(std::string(what) + ": alphabet symbols must be strings");
        a.symbols.push_back(s.get<std::string>());
    }
    info::validate(a);
    return a;
}

std::string alphabet_json(const info::Alphabet& a) {
    std::string out = "[";
    for (std::size_t i = 0; i < a.symbols.size(); ++i) {
        if (i) out += ",";
        out += "\"" + json_escape(a.symbols[i]) + "\"";
    }
    return out + "]";
}

}  // namespace

info::Dist parse_dist(const std::string& text) {
    const json j = parse_json(text, "distribution");
    if (!j.contains("alphabet") || !j.contains("probs"))
        throw validation_error("distribution needs 'alphabet' and 'probs'");
    info::Dist d;
    d.alphabet = alphabet_from(j["alphabet"], "distribution");
    if (!j["probs"].is_array())
        throw validation_error("distribution probs must be an array");
    for (const auto& p : j["probs"]) {
        if (!p.is_number()) throw validation_error("distribution probs must be numbers");
        d.probs.push_back(p.get<double>());
    }
    info::validate(d);
    return d;
}

info::Dist load_dist(const std::string& path) { return parse_dist(read_file(path)); }

std::string dump_dist(const info::Dist& d) {
    std::string out = "{\"alphabet\":" + alphabet_json(d.alphabet) + ",\"probs\":[";
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        if (i) out += ",";
        out += format_double(d.probs[i]);
    }
    return out + "]}";
}

info::JointDist parse_joint(const std::string& text) {
    const json j = parse_json(text, "joint distribution");
    if (!j.contains("coords") || !j.contains("probs"))
        throw validation_error("joint distribution needs 'coords' and 'probs'");
    info::JointDist out;
    if (!j["coords"].is_array() || j["coords"].empty())
        throw validation_error("joint coords must be a non-empty array of alphabets");
    for (const auto& c : j["coords"]) out.coords.push_back(alphabet_from(c, "joint"));

    const RadixCodec codec = out.codec();
    check_budget(codec.total(), "joint distribution table");
    out.probs.assign(codec.total(), 0.0);
    std::vector<bool> seen(codec.total(), false);
    if (!j["probs"].is_array()) throw validation_error("joint probs must be an array");
    std::vector<int> key(out.coords.size());
    for (const auto& entry : j["probs"]) {
        if (!entry.contains("key") || !entry.contains("p"))
            throw validation_error("joint prob entries need 'key' and 'p'");
        const auto& k = entry["key"];
        if (!k.is_array() || k.size() != out.coords.size())
            throw validation_error("joint prob key arity mismatch");
        for (std::size_t c = 0; c < key.size(); ++c) {
            const auto v = k[c].get<std::int64_t>();
            if (v < 0 || static_cast<std::size_t>(v) >= out.coords[c].size())
                throw validation_error("joint prob key index out of range");
            key[c] = static_cast<int>(v);
        }
        const std::uint64_t idx = codec.encode(key);
        if (seen[idx]) throw validation_error("joint prob key repeats");
        seen[idx] = true;
        out.probs[idx] = entry["p"].get<double>();
    }
    info::validate(out);
    return out;
}

info::JointDist load_joint(const std::string& path) { return parse_joint(read_file(path)); }

std::string dump_joint(const info::JointDist& j) {
    const RadixCodec codec = j.codec();
    std::string out = "{\"coords\":[";
    for (std::size_t c = 0; c < j.coords.size(); ++c) {
        if (c) out += ",";
        out += alphabet_json(j.coords[c]);
    }
    out += "],\"probs\":[";
    std::vector<int> key(j.coords.size());
    bool first = true;
    for (std::uint64_t idx = 0; idx < codec.total(); ++idx) {
        if (j.probs[idx] == 0.0) continue;
        codec.decode(idx, key);
        if (!first) out += ",";
        first = false;
        out += "{\"key\":[";
        for (std::size_t c = 0; c < key.size(); ++c) {
            if (c) out += ",";
            out += std::to_string(key[c]);
        }
        out += "],\"p\":" + format_double(j.probs[idx]) + "}";
    }
    return out + "]}";
}

namespace {

sym::PositionalMap map_from(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw validation_error("positional map needs a 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "shift") {
        if (!j.contains("k")) throw validation_error("shift map needs 'k'");
        return sym::PositionalMap::shift(j["k"].get<std::int64_t>());
    }
    if (kind == "finitary") {
        if (!j.contains("table") || !j["table"].is_object())
            throw validation_error("finitary map needs a 'table' object");
        std::map<sym::Index, sym::Index> table;
        for (const auto& [k, v] : j["table"].items()) {
            std::size_t pos = 0;
            std::int64_t src = 0;
            try {
                src = std::stoll(k, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != k.size())
                throw validation_error("finitary table key '" + k + "' is not an integer");
            table[src] = v.get<std::int64_t>();
        }
        return sym::PositionalMap::finitary(std::move(table));
    }
    if (kind == "composition") {
        if (!j.contains("maps") || !j["maps"].is_array() || j["maps"].empty())
            throw validation_error("composition needs a non-empty 'maps' array");
        sym::PositionalMap result;
        bool first = true;
        for (const auto& part : j["maps"]) {
            if (first) {
                result = map_from(part);
                first = false;
            } else {
                result = sym::compose(result, map_from(part));
            }
        }
        return result;
    }
    throw validation_error("unknown map kind '" + kind + "'");
}

}  // namespace

sym::PositionalMap parse_map(const std::string& text) {
    return map_from(parse_json(text, "positional map"));
}

sym::PositionalMap load_map(const std::string& path) { return parse_map(read_file(path)); }

std::string dump_map(const sym::PositionalMap& m) {
    using Kind = sym::PositionalMap::Kind;
    switch (m.kind) {
        case Kind::shift:
            return "{\"kind\":\"shift\",\"k\":" + std::to_string(m.shift_by) + "}";
        case Kind::finitary: {
            std::string out = "{\"kind\":\"finitary\",\"table\":{";
            bool first = true;
            for (const auto& [k, v] : m.table) {
                if (!first) out += ",";
                first = false;
                out += "\"" + std::to_string(k) + "\":" + std::to_string(v);
            }
            return out + "}}";
        }
        case Kind::composition: {
            std::string out = "{\"kind\":\"composition\",\"maps\":[";
            for (std::size_t i = 0; i < m.parts.size(); ++i) {
                if (i) out += ",";
                out += dump_map(m.parts[i]);
            }
            return out + "]}";
        }
    }
    throw std::logic_error("unreachable map kind");
}

sym::CylinderEvent parse_event(const std::string& text) {
    const json j = parse_json(text, "cylinder event");
    if (!j.contains("window") || !j.contains("alphabet") || !j.contains("bits"))
        throw validation_error("event needs 'window', 'alphabet' and 'bits'");
    sym::CylinderEvent e;
    for (const auto& idx : j["window"]) e.window.push_back(idx.get<std::int64_t>());
    e.alphabet = alphabet_from(j["alphabet"], "event");
    const std::uint64_t n = [&] {
        RadixCodec c{std::vector<std::size_t>(e.window.size(), e.alphabet.size())};
        check_budget(c.total(), "cylinder event table");
        return c.total();
    }();
    const std::string hex = j["bits"].get<std::string>();
    if (hex.size() != (n + 3) / 4)
        throw validation_error("event bits hold " + std::to_string(hex.size() * 4) +
                               " slots for a table of size " + std::to_string(n));
    e.bits.assign((n + 63) / 64, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        const char c = hex[i / 4];
        int digit;
        if (c >= '0' && c <= '9')
            digit = c - '0';
        else if (c >= 'a' && c <= 'f')
            digit = 10 + c - 'a';
        else if (c >= 'A' && c <= 'F')
            digit = 10 + c - 'A';
        else
            throw validation_error("event bits contain a non-hex character");
        if ((digit >> (i % 4)) & 1) e.set(i, true);
    }
    sym::validate(e);
    return e;
}

sym::CylinderEvent load_event(const std::string& path) { return parse_event(read_file(path)); }

std::string dump_event(const sym::CylinderEvent& e) {
    std::string out = "{\"window\":[";
    for (std::size_t i = 0; i < e.window.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(e.window[i]);
    }
    out += "],\"alphabet\":" + alphabet_json(e.alphabet) + ",\"bits\":\"";
    const std::uint64_t n = e.table_size();
    for (std::uint64_t d = 0; d < (n + 3) / 4; ++d) {
        int digit = 0;
        for (std::uint64_t b = 0; b < 4; ++b) {
            const std::uint64_t i = 4 * d + b;
            if (i < n && e.test(i)) digit |= 1 << b;
        }
        out += "0123456789abcdef"[digit];
    }
    return out + "\"}";
}

renorm::LocalRule parse_rule(const std::string& text) {
    const json j = parse_json(text, "local rule");
    for (const char* field : {"alphabet", "ell", "range", "table"})
        if (!j.contains(field))
            throw validation_error(std::string("rule needs '") + field + "'");
    renorm::LocalRule rule;
    rule.alphabet = alphabet_from(j["alphabet"], "rule");
    rule.ell = j["ell"].get<int>();
    rule.range = j["range"].get<int>();
    if (rule.ell < 0 || rule.range < 0)
        throw validation_error("rule parameters ell and range must be >= 0");

    std::map<char, int> symbol_of;
    for (std::size_t i = 0; i < rule.alphabet.size(); ++i) {
        const std::string& s = rule.alphabet.symbols[i];
        if (s.size() != 1)
            throw validation_error("rule files need single-character symbols; got '" + s + "'");
        symbol_of[s[0]] = static_cast<int>(i);
    }

    const RadixCodec codec = rule.codec();
    check_budget(codec.total(), "rule table");
    rule.table.assign(codec.total(), -1);
    if (!j["table"].is_object()) throw validation_error("rule table must be an object");
    std::vector<int> digits(static_cast<std::size_t>(rule.width()));
    for (const auto& [key, value] : j["table"].items()) {
        if (key.size() != static_cast<std::size_t>(rule.width()))
            throw validation_error("rule table key '" + key + "' has " +
                                   std::to_string(key.size()) + " symbols, expected " +
                                   std::to_string(rule.width()));
        for (std::size_t i = 0; i < key.size(); ++i) {
            auto it = symbol_of.find(key[i]);
            if (it == symbol_of.end())
                throw validation_error("rule table key '" + key + "' uses an unknown symbol");
            digits[i] = it->second;
        }
        if (!value.is_string() || value.get<std::string>().size() != 1)
            throw validation_error("rule table values must be single symbols");
        auto it = symbol_of.find(value.get<std::string>()[0]);
        if (it == symbol_of.end())
            throw validation_error("rule table value for '" + key + "' uses an unknown symbol");
        const std::uint64_t idx = codec.encode(digits);
        if (rule.table[idx] != -1)
            throw validation_error("rule table key '" + key + "' repeats");
        rule.table[idx] = it->second;
    }
    // Partial tables are rejected: no default output value exists.
    std::uint64_t missing = 0;
    for (std::uint64_t idx = 0; idx < codec.total(); ++idx)
        if (rule.table[idx] == -1) ++missing;
    if (missing > 0)
        throw validation_error("rule table is partial: " + std::to_string(missing) + " of " +
                               std::to_string(codec.total()) + " argument tuples are missing");
    renorm::validate(rule);
    return rule;
}

renorm::LocalRule load_rule(const std::string& path) { return parse_rule(read_file(path)); }

std::string dump_rule(const renorm::LocalRule& rule) {
    renorm::validate(rule);
    const RadixCodec codec = rule.codec();
    std::string out = "{\"alphabet\":" + alphabet_json(rule.alphabet) +
                      ",\"ell\":" + std::to_string(rule.ell) +
                      ",\"range\":" + std::to_string(rule.range) + ",\"table\":{";
    std::vector<int> digits(static_cast<std::size_t>(rule.width()));
    for (std::uint64_t idx = 0; idx < codec.total(); ++idx) {
        codec.decode(idx, digits);
        if (idx) out += ",";
        out += "\"";
        for (int d : digits) out += rule.alphabet.symbols[static_cast<std::size_t>(d)];
        out += "\":\"" + rule.alphabet.symbols[static_cast<std::size_t>(rule.table[idx])] + "\"";
    }
    return out + "}}";
}

namespace {

graph::SmallGraph small_graph_from(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("n"))
        throw validation_error(std::string(what) + " needs an 'n' vertex count");
    graph::SmallGraph g;
    g.n = j["n"].get<int>();
    if (j.contains("edges")) {
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2)
                throw validation_error(std::string(what) + " edges must be [u,v] pairs");
            g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
    }
    graph::validate(g);
    return g;
}

graph::ClassRef class_ref_from(const json& j) {
    if (!j.is_object() || !j.contains("level") || !j.contains("local"))
        throw validation_error("cross pair vertex refs need 'level' and 'local'");
    return {j["level"].get<int>(), j["local"].get<int>()};
}

}  // namespace

graph::ConstructionSpec parse_construction(const std::string& text) {
    const json j = parse_json(text, "construction spec");
    if (!j.contains("g0")) throw validation_error("construction spec needs 'g0'");
    graph::ConstructionSpec spec;
    spec.g0 = small_graph_from(j["g0"], "g0");
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("levels")) {
        for (const auto& lvl : j["levels"]) {
            graph::LevelSpec ls;
            if (lvl.contains("l")) ls.l_graph = small_graph_from(lvl["l"], "level graph");
            if (lvl.contains("attach"))
                for (const auto& a : lvl["attach"]) ls.attach.push_back(a.get<bool>());
            if (lvl.contains("cross"))
                for (const auto& pair : lvl["cross"]) {
                    if (!pair.is_array() || pair.size() != 2)
                        throw validation_error("cross pairs must be [u,v] arrays");
                    ls.cross_pairs.emplace_back(class_ref_from(pair[0]),
                                                class_ref_from(pair[1]));
                }
            if (lvl.contains("random_cross")) ls.random_cross = lvl["random_cross"].get<int>();
            spec.levels.push_back(std::move(ls));
        }
    }
    graph::validate(spec);
    return spec;
}

graph::ConstructionSpec load_construction(const std::string& path) {
    return parse_construction(read_file(path));
}

std::string dump_manifest(const RunManifest& m) {
    std::string out = "{\n";
    out += "  \"command\": \"" + json_escape(m.command_line) + "\",\n";
    out += "  \"seed\": " + std::to_string(m.seed) + ",\n";
    out += "  \"inputs\": {";
    bool first = true;
    for (const auto& [path, hash] : m.input_hashes) {
        if (!first) out += ",";
        first = false;
        out += "\n    \"" + json_escape(path) + "\": \"" + hash + "\"";
    }
    out += first ? "},\n" : "\n  },\n";
    out += "  \"version\": \"" + std::string(kToolVersion) + "\",\n";
    out += "  \"timestamp\": \"" + m.timestamp + "\",\n";
    out += "  \"output_hash\": \"" + m.output_hash + "\"\n";
    out += "}\n";
    return out;
}

std::string utc_timestamp_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace zerone::io
