/**
 * Classical mechanisms that produce coincidence statistics.
 *
 * Connected spheres: two point particles joined by a rigid rod inside unit
 * spheres, each measured by a breakable elastic along a chosen direction.
 * Uniform break points reproduce the singlet correlation E = -cos(gamma).
 *
 * Vessels of water: 20 liters split across two connected vessels. Siphoning
 * alone collects everything (> 10 liters); siphoning on both sides splits
 * the volume with strict anticorrelation around 10 liters. A spoon checks
 * transparency. Deterministic variant: always-transparent water. Box
 * variant: water prepared transparent or opaque with a fair coin, outcome
 * +1 for (> 10 and transparent) or (< 10 and opaque).
 *
 * Cats gedanken: two cats either both belled or both unbelled (fair coin);
 * contexts pair "which cat comes to mind" against "does the cat wear a
 * bell", giving the same tables as the vessels box variant.
 *
 * Determinism: per-context substreams (order AB, AB', A'B, A'B') seeded via
 * substream_seed(); within a trial, draws happen in the documented order.
 * Same seed and config means an identical SimulationResult.
 */

#ifndef BELLKIT_SIMULATORS_HPP
#define BELLKIT_SIMULATORS_HPP

#include "prng.hpp"
#include "statistics.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

namespace bellkit {

struct SphereExperimentConfig {
    double angle_a = 0.0, angle_a_prime = 0.0;  // radians
    double angle_b = 0.0, angle_b_prime = 0.0;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;

    std::pair<double, double> context_angles(Context c) const {
        switch (c) {
            case Context::AB: return {angle_a, angle_b};
            case Context::ABp: return {angle_a, angle_b_prime};
            case Context::ApB: return {angle_a_prime, angle_b};
            case Context::ApBp: return {angle_a_prime, angle_b_prime};
        }
        throw std::invalid_argument("bad context");
    }
};

struct ContextCounts {
    std::array<std::array<std::uint64_t, 2>, 2> n{};
};

struct SimulationResult {
    BellData empirical;
    std::array<ContextCounts, 4> counts;
    std::optional<BellData> analytic;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

/// Joint table of the spheres mechanism at angle gamma between the two
/// elastics: ( sin^2(gamma/2)/2, cos^2(gamma/2)/2, cos^2(gamma/2)/2,
/// sin^2(gamma/2)/2 ), expectation -cos(gamma).
inline JointTable spheres_analytic(double gamma) {
    double s = 0.5 * std::sin(gamma / 2.0) * std::sin(gamma / 2.0);
    double c = 0.5 * std::cos(gamma / 2.0) * std::cos(gamma / 2.0);
    return make_table(s, c, c, s);
}

inline BellData spheres_analytic_bell_data(const SphereExperimentConfig& cfg) {
    BellData d;
    d.label = "spheres-analytic";
    for (int c = 0; c < 4; ++c) {
        auto [x, y] = cfg.context_angles(static_cast<Context>(c));
        d.tables[c] = spheres_analytic(x - y);
    }
    return d;
}

/**
 * Monte Carlo run of the spheres mechanism. Per trial: the first elastic
 * breaks uniformly on [-1, 1) and the centered particle goes to +a when the
 * break falls below it; the rod puts the partner at the antipode, which
 * projects onto the second elastic at -cos(gamma) * (first outcome); the
 * second break is uniform on [-1, 1) and the partner goes to +b when the
 * break falls below its coordinate. Draw order: first break, second break.
 */
inline SimulationResult spheres_simulate(const SphereExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("spheres_simulate: trials must be >= 1");
    SimulationResult result;
    result.trials = cfg.trials;
    result.seed = cfg.seed;
    result.empirical.label = "spheres-empirical";
    for (int c = 0; c < 4; ++c) {
        auto [x, y] = cfg.context_angles(static_cast<Context>(c));
        double projection = -std::cos(x - y);
        SplitMix64 rng(substream_seed(cfg.seed, c));
        ContextCounts& counts = result.counts[c];
        for (std::uint64_t t = 0; t < cfg.trials; ++t) {
            double break1 = rng.uniform(-1.0, 1.0);
            int i = break1 < 0.0 ? 0 : 1;  // 0 = outcome +1
            double coordinate = (i == 0) ? projection : -projection;
            double break2 = rng.uniform(-1.0, 1.0);
            int j = break2 < coordinate ? 0 : 1;
            ++counts.n[i][j];
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                result.empirical.tables[c].p[i][j] =
                    static_cast<double>(counts.n[i][j]) / static_cast<double>(cfg.trials);
    }
    result.analytic = spheres_analytic_bell_data(cfg);
    result.analytic->label = "spheres-analytic";
    return result;
}

/// Always-transparent vessels: joint siphoning anticorrelates around 10
/// liters, a lone siphon collects all 20, spoons always read transparent.
/// AB = (0, 1/2, 1/2, 0); the other three contexts are certain (1, 0, 0, 0).
inline BellData vessels_deterministic() {
    BellData d;
    d.label = "vessels";
    d[Context::AB] = make_table(0.0, 0.5, 0.5, 0.0);
    d[Context::ABp] = make_table(1.0, 0.0, 0.0, 0.0);
    d[Context::ApB] = make_table(1.0, 0.0, 0.0, 0.0);
    d[Context::ApBp] = make_table(1.0, 0.0, 0.0, 0.0);
    return d;
}

/// Tables of the box variants (vessels with coin-prepared transparency; the
/// cats gedanken experiment): anticorrelated AB, correlated elsewhere.
inline BellData nonlocal_box_tables(std::string label) {
    BellData d;
    d.label = std::move(label);
    d[Context::AB] = make_table(0.0, 0.5, 0.5, 0.0);
    d[Context::ABp] = make_table(0.5, 0.0, 0.0, 0.5);
    d[Context::ApB] = make_table(0.5, 0.0, 0.0, 0.5);
    d[Context::ApBp] = make_table(0.5, 0.0, 0.0, 0.5);
    return d;
}

inline BellData cats_gedanken() { return nonlocal_box_tables("cats"); }

/**
 * Monte Carlo run of the vessels box variant. Per trial: transparency coin
 * (the mixture), then, only when both sides siphon, the volume split
 * uniform on (0, 20) with the B side receiving the complement. The
 * siphon-and-check measurement reads +1 for (> 10 liters and transparent)
 * or (< 10 and opaque); the spoon reads +1 exactly for transparent. A lone
 * siphon collects the full 20 liters. Draw order: coin, then volume.
 */
inline SimulationResult vessels_nonlocal_box(std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("vessels_nonlocal_box: trials must be >= 1");
    SimulationResult result;
    result.trials = trials;
    result.seed = seed;
    result.empirical.label = "vessels-box-empirical";
    auto siphon_check = [](double liters, bool transparent) {
        return (liters > 10.0) == transparent ? 0 : 1;  // 0 = outcome +1
    };
    for (int c = 0; c < 4; ++c) {
        Context context = static_cast<Context>(c);
        SplitMix64 rng(substream_seed(seed, c));
        ContextCounts& counts = result.counts[c];
        for (std::uint64_t t = 0; t < trials; ++t) {
            bool transparent = rng.coin();
            int i = 0, j = 0;
            if (context == Context::AB) {
                double volume = rng.uniform(0.0, 20.0);
                i = siphon_check(volume, transparent);
                j = siphon_check(20.0 - volume, transparent);
            } else if (context == Context::ABp) {
                i = siphon_check(20.0, transparent);
                j = transparent ? 0 : 1;
            } else if (context == Context::ApB) {
                i = transparent ? 0 : 1;
                j = siphon_check(20.0, transparent);
            } else {
                i = transparent ? 0 : 1;
                j = i;
            }
            ++counts.n[i][j];
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                result.empirical.tables[c].p[i][j] =
                    static_cast<double>(counts.n[i][j]) / static_cast<double>(trials);
    }
    result.analytic = nonlocal_box_tables("vessels-box-analytic");
    return result;
}

} // namespace bellkit

#endif // BELLKIT_SIMULATORS_HPP
