// zerone: one entry point over the information kernel, the symmetry engine,
// the renormalization simulator, the graph lab, and the zero-one probes.
// File-based I/O, deterministic seeding, machine-readable output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zerone/common.hpp"
#include "zerone/graph.hpp"
#include "zerone/info.hpp"
#include "zerone/io.hpp"
#include "zerone/mc.hpp"
#include "zerone/probe.hpp"
#include "zerone/renorm.hpp"
#include "zerone/sym.hpp"

namespace {

using namespace zerone;

struct Common {
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 0;
    int workers = 1;
    std::vector<std::string> inputs;  // files read, for the manifest
    std::string command_line;

    void check() const {
        if (format != "json" && format != "csv")
            throw validation_error("--format must be csv or json, got '" + format + "'");
        if (workers < 1) throw validation_error("--workers must be >= 1");
    }
};

void add_output_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format: csv or json")
        ->capture_default_str();
    cmd->add_option("--out", c.out,
                    "Write output to this file (a .manifest.json rides along)");
}

void add_seeded_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "RNG seed (all randomness flows from it)")
        ->capture_default_str();
    cmd->add_option("--workers", c.workers, "Worker threads for Monte Carlo kernels")
        ->capture_default_str();
}

// Data is assembled fully before any file is opened, so a failure never
// leaves a partial output behind.
void emit(const Common& c, const std::string& data) {
    if (c.out.empty()) {
        std::cout << data;
        return;
    }
    io::RunManifest m;
    m.command_line = c.command_line;
    m.seed = c.seed;
    for (const auto& path : c.inputs) m.input_hashes[path] = io::fnv1a64_hex(io::read_file(path));
    m.output_hash = io::fnv1a64_hex(data);
    m.timestamp = io::utc_timestamp_now();
    io::write_file(c.out, data);
    io::write_file(c.out + ".manifest.json", io::dump_manifest(m));
}

std::string scalar_output(const Common& c, const std::string& name, double value) {
    if (c.format == "csv") return name + "\n" + io::format_double(value) + "\n";
    return "{\"" + name + "\":" + io::format_double(value) + "}\n";
}

std::vector<sym::Index> parse_indices(const std::string& arg) {
    std::vector<sym::Index> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size())
            throw validation_error("bad index '" + tok + "' in list '" + arg + "'");
        out.push_back(v);
    }
    if (out.empty()) throw validation_error("empty index list '" + arg + "'");
    return out;
}

renorm::LocalRule rule_from_arg(const std::string& arg, Common& c) {
    if (arg == "majority") return renorm::majority_rule();
    c.inputs.push_back(arg);
    return io::load_rule(arg);
}

info::Dist bernoulli_dist(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw validation_error("--p must lie in [0,1]");
    return info::Dist{info::Alphabet{{"0", "1"}}, {1.0 - p, p}};
}

std::string report_csv_row(const mc::McReport& r) {
    return io::format_double(r.estimate) + "," + io::format_double(r.ci_low) + "," +
           io::format_double(r.ci_high);
}

std::string report_json_fields(const mc::McReport& r) {
    return "\"estimate\":" + io::format_double(r.estimate) +
           ",\"ci_low\":" + io::format_double(r.ci_low) +
           ",\"ci_high\":" + io::format_double(r.ci_high) +
           ",\"samples\":" + std::to_string(r.samples) + ",\"seed\":" + std::to_string(r.seed);
}

// ---------------------------------------------------------------- info ----

void setup_info(CLI::App& app, Common& c) {
    auto* cmd = app.add_subcommand("info", "Exact discrete information measures");
    cmd->require_subcommand(1);

    {
        auto* sub = cmd->add_subcommand("entropy", "Shannon entropy of a distribution");
        auto dist = std::make_shared<std::string>();
        auto base = std::make_shared<double>(2.0);
        sub->add_option("--dist", *dist, "Distribution JSON file")->required();
        sub->add_option("--base", *base, "Logarithm base")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, dist, base] {
            c.check();
            c.inputs.push_back(*dist);
            emit(c, scalar_output(c, "value", info::entropy(io::load_dist(*dist), *base)));
        });
    }
    {
        auto* sub = cmd->add_subcommand("mi", "Mutual information of a 2-coordinate joint");
        auto joint = std::make_shared<std::string>();
        auto base = std::make_shared<double>(2.0);
        sub->add_option("--joint", *joint, "Joint distribution JSON file")->required();
        sub->add_option("--base", *base, "Logarithm base")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, joint, base] {
            c.check();
            c.inputs.push_back(*joint);
            emit(c, scalar_output(c, "value",
                                  info::mutual_information(io::load_joint(*joint), *base)));
        });
    }
    {
        auto* sub = cmd->add_subcommand("tv", "Total variation distance");
        auto p = std::make_shared<std::string>();
        auto q = std::make_shared<std::string>();
        sub->add_option("--p", *p, "First distribution JSON file")->required();
        sub->add_option("--q", *q, "Second distribution JSON file")->required();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, p, q] {
            c.check();
            c.inputs.push_back(*p);
            c.inputs.push_back(*q);
            emit(c, scalar_output(c, "value",
                                  info::tv_distance(io::load_dist(*p), io::load_dist(*q))));
        });
    }
    {
        auto* sub = cmd->add_subcommand("supdep", "Dependence coefficient over subset pairs");
        auto joint = std::make_shared<std::string>();
        sub->add_option("--joint", *joint, "Joint distribution JSON file")->required();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, joint] {
            c.check();
            c.inputs.push_back(*joint);
            emit(c, scalar_output(c, "value",
                                  info::sup_dependence(io::load_joint(*joint), c.workers)));
        });
    }
    {
        auto* sub = cmd->add_subcommand("oconnell", "O'Connell inequality report");
        auto joint = std::make_shared<std::string>();
        auto v = std::make_shared<std::size_t>(0);
        auto base = std::make_shared<double>(2.0);
        sub->add_option("--joint", *joint, "Joint distribution JSON file")->required();
        sub->add_option("--v", *v, "Index of the V coordinate")->capture_default_str();
        sub->add_option("--base", *base, "Logarithm base")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, joint, v, base] {
            c.check();
            c.inputs.push_back(*joint);
            const info::InfoReport r = info::oconnell_report(io::load_joint(*joint), *v, *base);
            std::string out;
            if (c.format == "csv") {
                out = "field,value\nentropy," + io::format_double(r.entropy) + "\n";
                for (std::size_t i = 0; i < r.mi_terms.size(); ++i)
                    out += "mi_" + std::to_string(i + 1) + "," +
                           io::format_double(r.mi_terms[i]) + "\n";
                out += "gap," + io::format_double(r.gap) + "\n";
                out += "gamma_star," + io::format_double(r.gamma_star) + "\n";
            } else {
                out = "{\"entropy\":" + io::format_double(r.entropy) + ",\"mi_terms\":[";
                for (std::size_t i = 0; i < r.mi_terms.size(); ++i) {
                    if (i) out += ",";
                    out += io::format_double(r.mi_terms[i]);
                }
                out += "],\"gap\":" + io::format_double(r.gap) +
                       ",\"gamma_star\":" + io::format_double(r.gamma_star) + "}\n";
            }
            emit(c, out);
        });
    }
    {
        auto* sub = cmd->add_subcommand(
            "product-tv", "Check TV(prod p_k, prod q_k) <= sum TV(p_k, q_k)");
        auto ps = std::make_shared<std::vector<std::string>>();
        auto qs = std::make_shared<std::vector<std::string>>();
        sub->add_option("--p-dists", *ps, "Factor distributions of the first product")
            ->required()
            ->expected(-1);
        sub->add_option("--q-dists", *qs, "Factor distributions of the second product")
            ->required()
            ->expected(-1);
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, ps, qs] {
            c.check();
            if (ps->size() != qs->size())
                throw validation_error("--p-dists and --q-dists need the same length");
            std::vector<info::Dist> p_factors, q_factors;
            for (const auto& path : *ps) {
                c.inputs.push_back(path);
                p_factors.push_back(io::load_dist(path));
            }
            for (const auto& path : *qs) {
                c.inputs.push_back(path);
                q_factors.push_back(io::load_dist(path));
            }
            double factor_sum = 0.0;
            for (std::size_t i = 0; i < p_factors.size(); ++i)
                factor_sum += info::tv_distance(p_factors[i], q_factors[i]);
            const info::JointDist pp = info::product_dist(p_factors);
            const info::JointDist qq = info::product_dist(q_factors);
            double l1 = 0.0;
            for (std::size_t i = 0; i < pp.probs.size(); ++i)
                l1 += std::abs(pp.probs[i] - qq.probs[i]);
            const double tv = 0.5 * l1;
            const bool holds = tv <= factor_sum + 1e-12;
            std::string out;
            if (c.format == "csv") {
                out = "field,value\ntv_product," + io::format_double(tv) + "\ntv_factor_sum," +
                      io::format_double(factor_sum) + "\nbound_holds," +
                      (holds ? "true" : "false") + "\n";
            } else {
                out = "{\"tv_product\":" + io::format_double(tv) +
                      ",\"tv_factor_sum\":" + io::format_double(factor_sum) +
                      ",\"bound_holds\":" + (holds ? "true" : "false") + "}\n";
            }
            emit(c, out);
        });
    }
}

// ----------------------------------------------------------------- sym ----

void setup_sym(CLI::App& app, Common& c) {
    auto* cmd = app.add_subcommand("sym", "Positional symmetry engine");
    cmd->require_subcommand(1);

    {
        auto* sub = cmd->add_subcommand("check", "Is the map a symmetry of the event?");
        auto event = std::make_shared<std::string>();
        auto map = std::make_shared<std::string>();
        sub->add_option("--event", *event, "Cylinder event JSON file")->required();
        sub->add_option("--map", *map, "Positional map JSON file")->required();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, event, map] {
            c.check();
            c.inputs.push_back(*event);
            c.inputs.push_back(*map);
            const bool ok = sym::is_positional_symmetry(io::load_event(*event),
                                                        io::load_map(*map), c.workers);
            if (c.format == "csv")
                emit(c, std::string("is_symmetry\n") + (ok ? "true" : "false") + "\n");
            else
                emit(c, std::string("{\"is_symmetry\":") + (ok ? "true" : "false") + "}\n");
        });
    }
    {
        auto* sub = cmd->add_subcommand("find-disjoint",
                                        "Search semigroup words for pi with pi(J) disjoint from J");
        auto maps = std::make_shared<std::vector<std::string>>();
        auto indices = std::make_shared<std::string>();
        auto depth = std::make_shared<int>(8);
        sub->add_option("--maps", *maps, "Generator map JSON files, in search order")
            ->required()
            ->expected(-1);
        sub->add_option("--indices", *indices, "Comma-separated finite index set J")->required();
        sub->add_option("--max-depth", *depth, "Maximum word length")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, maps, indices, depth] {
            c.check();
            std::vector<sym::PositionalMap> generators;
            for (const auto& path : *maps) {
                c.inputs.push_back(path);
                generators.push_back(io::load_map(path));
            }
            const std::vector<sym::Index> J = parse_indices(*indices);
            const auto found = sym::find_disjoint_map(generators, J, *depth);
            std::string out;
            if (c.format == "csv") {
                if (found) {
                    out = "index,image\n";
                    for (sym::Index k : J)
                        out += std::to_string(k) + "," + std::to_string((*found)(k)) + "\n";
                } else {
                    out = "found\nfalse\n";
                }
            } else {
                out = found ? "{\"found\":true,\"map\":" + io::dump_map(*found) + "}\n"
                            : "{\"found\":false}\n";
            }
            emit(c, out);
        });
    }
}

// -------------------------------------------------------------- renorm ----

void setup_renorm(CLI::App& app, Common& c) {
    auto* cmd = app.add_subcommand("renorm", "Renormalization-map simulator");
    cmd->require_subcommand(1);

    auto rule_arg = std::make_shared<std::string>("majority");
    const auto add_rule = [rule_arg](CLI::App* sub) {
        sub->add_option("--rule", *rule_arg, "'majority' or a rule JSON file")
            ->capture_default_str();
    };

    {
        auto* sub = cmd->add_subcommand("trace", "Trace of a seeded random window");
        auto p = std::make_shared<double>(0.5);
        auto depth = std::make_shared<int>(3);
        auto sample = std::make_shared<std::uint64_t>(0);
        add_rule(sub);
        sub->add_option("--p", *p, "Bernoulli site parameter")->capture_default_str();
        sub->add_option("--depth", *depth, "Trace depth n")->capture_default_str();
        sub->add_option("--sample", *sample, "Sample index within the seed's stream")
            ->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, rule_arg, p, depth, sample] {
            c.check();
            const renorm::LocalRule rule = rule_from_arg(*rule_arg, c);
            if (rule.alphabet.size() != 2)
                throw validation_error("trace sampling needs a binary rule");
            if (!(*p >= 0.0 && *p <= 1.0)) throw validation_error("--p must lie in [0,1]");
            const std::int64_t radius = renorm::required_radius(rule, *depth);
            check_budget(static_cast<std::uint64_t>(2 * radius + 1), "trace window");
            renorm::LevelConfig window;
            window.radius = radius;
            window.values.resize(static_cast<std::size_t>(2 * radius + 1));
            for (std::int64_t i = -radius; i <= radius; ++i)
                window.values[static_cast<std::size_t>(i + radius)] =
                    rng::bernoulli(*p, c.seed, *sample, static_cast<std::uint64_t>(i)) ? 1 : 0;
            const renorm::TraceResult t = renorm::trace_at_zero(window, rule, *depth);
            std::string out;
            if (c.format == "csv") {
                out = "n,value\n";
                for (std::size_t n = 0; n < t.values.size(); ++n)
                    out += std::to_string(n) + "," + std::to_string(t.values[n]) + "\n";
            } else {
                out = "{\"radius\":" + std::to_string(t.window_radius_used) + ",\"trace\":[";
                for (std::size_t n = 0; n < t.values.size(); ++n) {
                    if (n) out += ",";
                    out += std::to_string(t.values[n]);
                }
                out += "]}\n";
            }
            emit(c, out);
        });
    }
    {
        auto* sub = cmd->add_subcommand("mc", "Monte Carlo stabilization probe");
        auto p = std::make_shared<double>(0.5);
        auto depth = std::make_shared<int>(5);
        auto from = std::make_shared<int>(3);
        auto samples = std::make_shared<std::uint64_t>(10000);
        add_rule(sub);
        sub->add_option("--p", *p, "Bernoulli site parameter")->capture_default_str();
        sub->add_option("--depth", *depth, "Deepest level checked")->capture_default_str();
        sub->add_option("--from", *from, "First level that must already be stable")
            ->capture_default_str();
        sub->add_option("--samples", *samples, "Sample count")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, rule_arg, p, depth, from, samples] {
            c.check();
            const renorm::LocalRule rule = rule_from_arg(*rule_arg, c);
            mc::McConfig cfg;
            cfg.p = *p;
            cfg.depth = *depth;
            cfg.stabilize_from = *from;
            cfg.samples = *samples;
            cfg.seed = c.seed;
            cfg.workers = c.workers;
            const renorm::StabilizationReport rep = renorm::stabilization_probe(rule, cfg);
            std::string out;
            if (c.format == "csv") {
                out = "symbol,estimate,ci_low,ci_high,union_lower,product_ref\n";
                out += "1," + report_csv_row(rep.ones) + "," +
                       io::format_double(rep.union_lower_one) + "," +
                       io::format_double(rep.product_ref_one) + "\n";
                out += "0," + report_csv_row(rep.zeros) + "," +
                       io::format_double(rep.union_lower_zero) + "," +
                       io::format_double(rep.product_ref_zero) + "\n";
            } else {
                out = "{\"p\":" + io::format_double(cfg.p) +
                      ",\"depth\":" + std::to_string(cfg.depth) +
                      ",\"from\":" + std::to_string(cfg.stabilize_from) + ",\"ones\":{" +
                      report_json_fields(rep.ones) +
                      ",\"union_lower\":" + io::format_double(rep.union_lower_one) +
                      ",\"product_ref\":" + io::format_double(rep.product_ref_one) +
                      "},\"zeros\":{" + report_json_fields(rep.zeros) +
                      ",\"union_lower\":" + io::format_double(rep.union_lower_zero) +
                      ",\"product_ref\":" + io::format_double(rep.product_ref_zero) + "}}\n";
            }
            emit(c, out);
        });
    }
    {
        auto* sub = cmd->add_subcommand("dynamics", "Orbit of the induced parameter map");
        auto p0 = std::make_shared<double>(0.6);
        auto n = std::make_shared<int>(6);
        add_rule(sub);
        sub->add_option("--p0", *p0, "Starting parameter")->capture_default_str();
        sub->add_option("--n", *n, "Iteration count")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, rule_arg, p0, n] {
            c.check();
            const renorm::LocalRule rule = rule_from_arg(*rule_arg, c);
            const std::vector<double> orbit = renorm::iterate_dynamics(rule, *p0, *n);
            std::string out;
            if (c.format == "csv") {
                out = "n,value\n";
                for (std::size_t i = 0; i < orbit.size(); ++i)
                    out += std::to_string(i) + "," + io::format_double(orbit[i]) + "\n";
            } else {
                out = "{\"orbit\":[";
                for (std::size_t i = 0; i < orbit.size(); ++i) {
                    if (i) out += ",";
                    out += io::format_double(orbit[i]);
                }
                out += "]}\n";
            }
            emit(c, out);
        });
    }
    {
        auto* sub = cmd->add_subcommand("fixed-points", "Fixed points of the parameter map");
        add_rule(sub);
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, rule_arg] {
            c.check();
            const renorm::LocalRule rule = rule_from_arg(*rule_arg, c);
            const renorm::FixedPointScan scan = renorm::fixed_points(rule);
            const auto stability_name = [](renorm::Stability s) {
                switch (s) {
                    case renorm::Stability::attracting: return "attracting";
                    case renorm::Stability::repelling: return "repelling";
                    case renorm::Stability::marginal: return "marginal";
                }
                return "marginal";
            };
            std::string out;
            if (c.format == "csv") {
                out = "p,stability,derivative\n";
                if (scan.degenerate) {
                    out += "degenerate,,\n";
                } else {
                    for (const auto& fp : scan.points)
                        out += io::format_double(fp.p) + "," + stability_name(fp.stability) +
                               "," + io::format_double(fp.derivative) + "\n";
                }
            } else {
                out = std::string("{\"degenerate\":") + (scan.degenerate ? "true" : "false") +
                      ",\"points\":[";
                for (std::size_t i = 0; i < scan.points.size(); ++i) {
                    if (i) out += ",";
                    out += "{\"p\":" + io::format_double(scan.points[i].p) + ",\"stability\":\"" +
                           stability_name(scan.points[i].stability) +
                           "\",\"derivative\":" + io::format_double(scan.points[i].derivative) +
                           "}";
                }
                out += "]}\n";
            }
            emit(c, out);
        });
    }
    {
        auto* sub = cmd->add_subcommand("symmetry",
                                        "Argument permutation fixing the rule, moving the centre");
        add_rule(sub);
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, rule_arg] {
            c.check();
            const renorm::LocalRule rule = rule_from_arg(*rule_arg, c);
            const auto sigma = renorm::central_moving_symmetry(rule);
            std::string out;
            if (c.format == "csv") {
                if (sigma) {
                    out = "position,image\n";
                    for (std::size_t i = 0; i < sigma->size(); ++i)
                        out += std::to_string(i) + "," + std::to_string((*sigma)[i]) + "\n";
                } else {
                    out = "found\nfalse\n";
                }
            } else {
                if (sigma) {
                    out = "{\"found\":true,\"permutation\":[";
                    for (std::size_t i = 0; i < sigma->size(); ++i) {
                        if (i) out += ",";
                        out += std::to_string((*sigma)[i]);
                    }
                    out += "]}\n";
                } else {
                    out = "{\"found\":false}\n";
                }
            }
            emit(c, out);
        });
    }
}

// --------------------------------------------------------------- graph ----

std::string edges_csv(const graph::FiniteGraph& g, const std::vector<bool>* keep) {
    std::string out = "u,v\n";
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (keep && !(*keep)[e]) continue;
        out += graph::to_string(g.vertices[g.edges[e].first]) + "," +
               graph::to_string(g.vertices[g.edges[e].second]) + "\n";
    }
    return out;
}

std::string adjacency_json(const graph::FiniteGraph& g, const std::vector<bool>* keep) {
    std::string out = "{\"vertices\":[";
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        if (i) out += ",";
        out += "\"" + io::json_escape(graph::to_string(g.vertices[i])) + "\"";
    }
    out += "],\"edges\":[";
    bool first = true;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (keep && !(*keep)[e]) continue;
        if (!first) out += ",";
        first = false;
        out += "[" + std::to_string(g.edges[e].first) + "," +
               std::to_string(g.edges[e].second) + "]";
    }
    return out + "]}\n";
}

void setup_graph(CLI::App& app, Common& c) {
    auto* cmd = app.add_subcommand("graph", "Recursive symmetric graph lab");
    cmd->require_subcommand(1);

    auto spec_path = std::make_shared<std::string>();
    auto level = std::make_shared<int>(0);
    const auto add_spec = [spec_path, level](CLI::App* sub) {
        sub->add_option("--spec", *spec_path, "Construction spec JSON file")->required();
        sub->add_option("--level", *level, "Build level n")->capture_default_str();
    };

    {
        auto* sub = cmd->add_subcommand("build", "Build G_n and export it");
        add_spec(sub);
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, spec_path, level] {
            c.check();
            c.inputs.push_back(*spec_path);
            const graph::FiniteGraph g =
                graph::build(io::load_construction(*spec_path), *level);
            emit(c, c.format == "csv" ? edges_csv(g, nullptr) : adjacency_json(g, nullptr));
        });
    }
    {
        auto* sub = cmd->add_subcommand("sample", "Sample one random subgraph");
        auto p = std::make_shared<double>(0.5);
        auto sample = std::make_shared<std::uint64_t>(0);
        add_spec(sub);
        sub->add_option("--p", *p, "Edge keep probability")->capture_default_str();
        sub->add_option("--sample", *sample, "Sample index within the seed's stream")
            ->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, spec_path, level, p, sample] {
            c.check();
            c.inputs.push_back(*spec_path);
            const graph::FiniteGraph g =
                graph::build(io::load_construction(*spec_path), *level);
            const std::vector<bool> keep = graph::sample_subgraph(g, *p, c.seed, *sample);
            emit(c, c.format == "csv" ? edges_csv(g, &keep) : adjacency_json(g, &keep));
        });
    }
    {
        auto* sub = cmd->add_subcommand("estimate", "Property probability of random subgraphs");
        auto p = std::make_shared<double>(0.5);
        auto property = std::make_shared<std::string>("has-triangle");
        auto samples = std::make_shared<std::uint64_t>(10000);
        add_spec(sub);
        sub->add_option("--p", *p, "Edge keep probability")->capture_default_str();
        sub->add_option("--property", *property, "Named graph property")->capture_default_str();
        sub->add_option("--samples", *samples, "Sample count")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, spec_path, level, p, property, samples] {
            c.check();
            c.inputs.push_back(*spec_path);
            const graph::FiniteGraph g =
                graph::build(io::load_construction(*spec_path), *level);
            mc::McConfig cfg;
            cfg.p = *p;
            cfg.samples = *samples;
            cfg.seed = c.seed;
            cfg.workers = c.workers;
            const mc::McReport rep =
                graph::estimate_property(g, *p, graph::named_property(*property), cfg);
            std::string out;
            if (c.format == "csv") {
                out = "property,estimate,ci_low,ci_high,samples,level\n";
                out += *property + "," + report_csv_row(rep) + "," +
                       std::to_string(rep.samples) + "," + rep.meta.at("level") + "\n";
            } else {
                out = "{\"property\":\"" + io::json_escape(*property) + "\"," +
                      report_json_fields(rep) + ",\"level\":" + rep.meta.at("level") + "}\n";
            }
            emit(c, out);
        });
    }
}

// --------------------------------------------------------------- probe ----

void setup_probe(CLI::App& app, Common& c) {
    auto* cmd = app.add_subcommand("probe", "Zero-one diagnostics");
    cmd->require_subcommand(1);

    {
        auto* sub = cmd->add_subcommand("curve", "Event probability across levels");
        auto family = std::make_shared<std::string>("stabilized-by");
        auto rule_arg = std::make_shared<std::string>("majority");
        auto depth = std::make_shared<int>(5);
        auto symbol = std::make_shared<int>(1);
        auto site = std::make_shared<std::int64_t>(0);
        auto p = std::make_shared<double>(0.5);
        auto levels = std::make_shared<int>(5);
        auto samples = std::make_shared<std::uint64_t>(10000);
        sub->add_option("--family", *family, "stabilized-by | site-is | full")
            ->capture_default_str();
        sub->add_option("--rule", *rule_arg, "'majority' or a rule JSON file (stabilized-by)")
            ->capture_default_str();
        sub->add_option("--depth", *depth, "Stabilization depth (stabilized-by)")
            ->capture_default_str();
        sub->add_option("--symbol", *symbol, "Stabilization symbol index")->capture_default_str();
        sub->add_option("--site", *site, "Site index (site-is family)")->capture_default_str();
        sub->add_option("--p", *p, "Bernoulli site parameter of the i.i.d. sampler")
            ->capture_default_str();
        sub->add_option("--levels", *levels, "Last level of the curve")->capture_default_str();
        sub->add_option("--samples", *samples, "Samples per level")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, family, rule_arg, depth, symbol, site, p, levels, samples] {
            c.check();
            probe::Sampler sampler;
            sampler.kind = probe::Sampler::Kind::iid;
            sampler.site_dist = bernoulli_dist(*p);

            probe::EventFamily fam;
            if (*family == "stabilized-by") {
                const renorm::LocalRule rule = rule_from_arg(*rule_arg, c);
                fam = probe::stabilized_by_family(rule, *depth, *symbol);
                if (*levels > *depth)
                    throw validation_error("--levels cannot exceed --depth for stabilized-by");
            } else if (*family == "site-is") {
                fam = probe::constant_site_family(*site, *symbol, sampler.site_dist.alphabet);
            } else if (*family == "full") {
                fam = probe::full_family(sampler.site_dist.alphabet);
            } else {
                throw validation_error("unknown family '" + *family +
                                       "'; use stabilized-by, site-is or full");
            }
            const std::vector<mc::McReport> reports = probe::event_probability_curve(
                fam, sampler, c.seed, *levels, *samples, c.workers);
            std::string out;
            if (c.format == "csv") {
                out = "level,estimate,ci_low,ci_high,d_n\n";
                for (const auto& r : reports)
                    out += r.meta.at("level") + "," + report_csv_row(r) + "," +
                           io::format_double(std::min(r.estimate, 1.0 - r.estimate)) + "\n";
            } else {
                out = "{\"description\":\"" + io::json_escape(fam.description) +
                      "\",\"levels\":[";
                for (std::size_t i = 0; i < reports.size(); ++i) {
                    if (i) out += ",";
                    out += "{\"level\":" + reports[i].meta.at("level") + "," +
                           report_json_fields(reports[i]) + ",\"d_n\":" +
                           io::format_double(
                               std::min(reports[i].estimate, 1.0 - reports[i].estimate)) +
                           "}";
                }
                out += "]}\n";
            }
            emit(c, out);
        });
    }
    {
        auto* sub = cmd->add_subcommand("mi", "Plug-in MI of sampled indicator pairs");
        auto pairs_path = std::make_shared<std::string>();
        sub->add_option("--pairs", *pairs_path, "CSV file with columns y,z of bits")->required();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, pairs_path] {
            c.check();
            c.inputs.push_back(*pairs_path);
            const std::string text = io::read_file(*pairs_path);
            std::vector<std::pair<int, int>> pairs;
            std::stringstream ss(text);
            std::string line;
            while (std::getline(ss, line)) {
                if (line.empty()) continue;
                const auto comma = line.find(',');
                if (comma == std::string::npos)
                    throw validation_error("pairs file line '" + line + "' has no comma");
                const std::string a = line.substr(0, comma);
                const std::string b = line.substr(comma + 1);
                if (a == "y" && b == "z") continue;  // header
                if ((a != "0" && a != "1") || (b != "0" && b != "1"))
                    throw validation_error("pairs file line '" + line + "' is not a bit pair");
                pairs.emplace_back(a == "1" ? 1 : 0, b == "1" ? 1 : 0);
            }
            emit(c, scalar_output(c, "mi_bits", probe::empirical_mi(pairs)));
        });
    }
    {
        auto* sub = cmd->add_subcommand("mixing", "Finite-window Kolmogorov mixing probe");
        auto sampler_kind = std::make_shared<std::string>("iid");
        auto p = std::make_shared<double>(0.5);
        auto v_path = std::make_shared<std::string>();
        auto k_arg = std::make_shared<std::string>();
        auto w_paths = std::make_shared<std::vector<std::string>>();
        auto samples = std::make_shared<std::uint64_t>(10000);
        sub->add_option("--sampler", *sampler_kind, "iid | copy")->capture_default_str();
        sub->add_option("--p", *p, "Bernoulli site parameter")->capture_default_str();
        sub->add_option("--v", *v_path, "Cylinder event V JSON file")->required();
        sub->add_option("--k", *k_arg, "Comma-separated K window indices")->required();
        sub->add_option("--w", *w_paths, "Cylinder events W outside K")->expected(-1);
        sub->add_option("--samples", *samples, "Sample count")->capture_default_str();
        add_output_flags(sub, c);
        add_seeded_flags(sub, c);
        sub->callback([&c, sampler_kind, p, v_path, k_arg, w_paths, samples] {
            c.check();
            probe::Sampler sampler;
            if (*sampler_kind == "iid")
                sampler.kind = probe::Sampler::Kind::iid;
            else if (*sampler_kind == "copy")
                sampler.kind = probe::Sampler::Kind::copy;
            else
                throw validation_error("unknown sampler '" + *sampler_kind + "'");
            sampler.site_dist = bernoulli_dist(*p);
            c.inputs.push_back(*v_path);
            const sym::CylinderEvent v = io::load_event(*v_path);
            std::vector<sym::CylinderEvent> w_family;
            for (const auto& path : *w_paths) {
                c.inputs.push_back(path);
                w_family.push_back(io::load_event(path));
            }
            const double value = probe::mixing_probe(sampler, v, parse_indices(*k_arg),
                                                     w_family, *samples, c.seed, c.workers);
            std::string out;
            if (c.format == "csv") {
                out = "probe,w_events,bound\n" + io::format_double(value) + "," +
                      std::to_string(w_family.size()) + ",lower\n";
            } else {
                out = "{\"probe\":" + io::format_double(value) +
                      ",\"w_events\":" + std::to_string(w_family.size()) +
                      ",\"bound\":\"lower\"}\n";
            }
            emit(c, out);
        });
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zerone: desk-scale laboratory for symmetry-driven zero-one laws"};
    app.require_subcommand(1);

    Common common;
    {
        std::string cmdline;
        for (int i = 0; i < argc; ++i) {
            if (i) cmdline += ' ';
            cmdline += argv[i];
        }
        common.command_line = cmdline;
    }

    setup_info(app, common);
    setup_sym(app, common);
    setup_renorm(app, common);
    setup_graph(app, common);
    setup_probe(app, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 64;
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
