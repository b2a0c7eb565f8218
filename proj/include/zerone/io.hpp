// File formats: JSON schemas for distributions, maps, events, rules, and
// construction specs; deterministic number formatting; run manifests.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zerone/graph.hpp"
#include "zerone/info.hpp"
#include "zerone/renorm.hpp"
#include "zerone/sym.hpp"

namespace zerone::io {

inline constexpr const char* kToolVersion = "zerone 0.1.0";

// Floating values are printed with 12 significant digits everywhere, so
// byte-level reproducibility does not depend on the platform's default
// formatting.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

std::string fnv1a64_hex(std::string_view bytes);

std::string json_escape(std::string_view s);

// Dist {"alphabet":[...], "probs":[...]}
info::Dist parse_dist(const std::string& text);
info::Dist load_dist(const std::string& path);
std::string dump_dist(const info::Dist& d);

// JointDist {"coords":[[...],...], "probs":[{"key":[i,...],"p":x},...]}
info::JointDist parse_joint(const std::string& text);
info::JointDist load_joint(const std::string& path);
std::string dump_joint(const info::JointDist& j);

// {"kind":"shift","k":4} | {"kind":"finitary","table":{"0":1,...}} |
// {"kind":"composition","maps":[...]}
sym::PositionalMap parse_map(const std::string& text);
sym::PositionalMap load_map(const std::string& path);
std::string dump_map(const sym::PositionalMap& m);

// {"window":[...], "alphabet":[...], "bits":"hex"}; hex digit j holds table
// bits 4j..4j+3 with bit 4j in the digit's least significant position.
sym::CylinderEvent parse_event(const std::string& text);
sym::CylinderEvent load_event(const std::string& path);
std::string dump_event(const sym::CylinderEvent& e);

// {"alphabet":[...], "ell":1, "range":0, "table":{"011":"1",...}} with keys
// as concatenated symbol strings, leftmost argument first. Requires
// single-character symbols (otherwise keys would be ambiguous) and a total
// table.
renorm::LocalRule parse_rule(const std::string& text);
renorm::LocalRule load_rule(const std::string& path);
std::string dump_rule(const renorm::LocalRule& rule);

// Construction spec; see README for the schema.
graph::ConstructionSpec parse_construction(const std::string& text);
graph::ConstructionSpec load_construction(const std::string& path);

struct RunManifest {
    std::string command_line;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> input_hashes;  // path -> fnv1a64
    std::string output_hash;
    std::string timestamp;  // excluded from any hash
};

std::string dump_manifest(const RunManifest& m);
std::string utc_timestamp_now();

}  // namespace zerone::io
