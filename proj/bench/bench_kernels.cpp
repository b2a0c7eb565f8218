// Compares each OpenMP kernel against its serial reference on a sizable
// workload: wall time, speedup, and (most importantly) identical results.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "zerone/graph.hpp"
#include "zerone/info.hpp"
#include "zerone/mc.hpp"
#include "zerone/probe.hpp"
#include "zerone/renorm.hpp"
#include "zerone/sym.hpp"

using namespace zerone;

namespace {

int hardware_workers() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
double time_ms(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-28s %10.1f ms %12.1f ms %8.2fx   %s\n", name.c_str(), serial_ms,
                parallel_ms, serial_ms / parallel_ms, equal ? "identical" : "MISMATCH");
}

info::JointDist big_joint(std::size_t nx, std::size_t ny, std::uint64_t seed) {
    info::JointDist j;
    info::Alphabet ax, ay;
    for (std::size_t i = 0; i < nx; ++i) ax.symbols.push_back(std::to_string(i));
    for (std::size_t i = 0; i < ny; ++i) ay.symbols.push_back(std::to_string(i));
    j.coords = {ax, ay};
    j.probs.resize(nx * ny);
    double sum = 0.0;
    for (std::size_t i = 0; i < j.probs.size(); ++i) {
        j.probs[i] = rng::unit(seed, 0, i) + 1e-6;
        sum += j.probs[i];
    }
    for (auto& p : j.probs) p /= sum;
    return j;
}

}  // namespace

int main() {
    const int workers = hardware_workers();
    std::printf("workers for parallel runs: %d\n\n", workers);
    std::printf("%-28s %13s %15s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
                "results");

    {
        const renorm::LocalRule maj = renorm::majority_rule();
        mc::McConfig cfg;
        cfg.p = 0.7;
        cfg.depth = 5;
        cfg.stabilize_from = 3;
        cfg.samples = 20000;
        cfg.seed = 1;
        cfg.workers = workers;
        renorm::StabilizationReport ser, par;
        const double t_ser =
            time_ms([&] { ser = renorm::stabilization_probe_serial(maj, cfg); });
        const double t_par = time_ms([&] { par = renorm::stabilization_probe(maj, cfg); });
        report("stabilization_probe", t_ser, t_par,
               ser.ones.estimate == par.ones.estimate &&
                   ser.zeros.estimate == par.zeros.estimate);
    }

    {
        const info::JointDist j = big_joint(16, 16, 77);
        double ser = 0.0, par = 0.0;
        const double t_ser = time_ms([&] { ser = info::sup_dependence_serial(j); });
        const double t_par = time_ms([&] { par = info::sup_dependence(j, workers); });
        report("sup_dependence 16x16", t_ser, t_par, ser == par);
    }

    {
        // 11-site full-space event swept against shift(11): a 2^22 domain
        std::vector<sym::Index> window;
        for (sym::Index i = 0; i < 11; ++i) window.push_back(i);
        sym::CylinderEvent full;
        full.window = window;
        full.alphabet = info::Alphabet{{"0", "1"}};
        full.bits.assign((2048 + 63) / 64, ~std::uint64_t{0});
        const sym::PositionalMap far_shift = sym::PositionalMap::shift(11);
        bool ser = false, par = false;
        const double t_ser =
            time_ms([&] { ser = sym::is_positional_symmetry_serial(full, far_shift); });
        const double t_par =
            time_ms([&] { par = sym::is_positional_symmetry(full, far_shift, workers); });
        report("symmetry sweep 2^22", t_ser, t_par, ser == par);
    }

    {
        graph::ConstructionSpec spec;
        spec.g0.n = 3;
        spec.g0.edges = {{0, 1}, {1, 2}, {0, 2}};
        graph::LevelSpec l1;
        l1.l_graph.n = 1;
        l1.attach = {true};
        graph::LevelSpec l2;
        l2.l_graph.n = 2;
        l2.l_graph.edges = {{0, 1}};
        l2.attach = {true, false};
        l2.cross_pairs = {{{0, 0}, {0, 1}}};
        graph::LevelSpec l3;
        l3.l_graph.n = 1;
        l3.attach = {true};
        spec.levels = {l1, l2, l3};
        const graph::FiniteGraph g = graph::build(spec, 3);

        mc::McConfig cfg;
        cfg.samples = 20000;
        cfg.seed = 5;
        cfg.workers = workers;
        const graph::Property prop = graph::named_property("connected");
        mc::McReport ser, par;
        const double t_ser =
            time_ms([&] { ser = graph::estimate_property_serial(g, 0.5, prop, cfg); });
        const double t_par = time_ms([&] { par = graph::estimate_property(g, 0.5, prop, cfg); });
        report("estimate_property level 3", t_ser, t_par, ser.estimate == par.estimate);
    }

    {
        const renorm::LocalRule maj = renorm::majority_rule();
        const probe::EventFamily family = probe::stabilized_by_family(maj, 5, 1);
        probe::Sampler sampler;
        sampler.kind = probe::Sampler::Kind::iid;
        sampler.site_dist = info::Dist{info::Alphabet{{"0", "1"}}, {0.3, 0.7}};
        std::vector<mc::McReport> ser, par;
        const double t_ser = time_ms(
            [&] { ser = probe::event_probability_curve_serial(family, sampler, 2, 5, 4000); });
        const double t_par = time_ms([&] {
            par = probe::event_probability_curve(family, sampler, 2, 5, 4000, workers);
        });
        bool equal = ser.size() == par.size();
        for (std::size_t i = 0; equal && i < ser.size(); ++i)
            equal = ser[i].estimate == par[i].estimate;
        report("event_probability_curve", t_ser, t_par, equal);
    }

    return 0;
}
