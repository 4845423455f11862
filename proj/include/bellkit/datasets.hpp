/**
 * Bundled demonstration datasets.
 *
 * The cognitive coincidence experiment ("The Animal Acts", 81 participants)
 * ships as exact count fractions n/81; their 3-decimal roundings are the
 * usually quoted table entries, but the fractions keep the derived
 * statistics (expectations, CHSH, marginal sums) consistent to full
 * precision instead of inheriting rounding error.
 */

#ifndef BELLKIT_DATASETS_HPP
#define BELLKIT_DATASETS_HPP

#include "statistics.hpp"

namespace bellkit::datasets {

/// Per-context answer counts of the 81-participant experiment, grid order
/// 11, 12, 21, 22 for contexts AB, AB', A'B, A'B'.
inline constexpr std::array<std::array<int, 4>, 4> kAnimalActsCounts{{
    {4, 51, 21, 5},
    {48, 2, 24, 7},
    {63, 7, 7, 4},
    {12, 7, 8, 54},
}};

inline BellData animal_acts() {
    BellData d;
    d.label = "animal-acts";
    for (int c = 0; c < 4; ++c) {
        const auto& n = kAnimalActsCounts[c];
        d.tables[c] = make_table(n[0] / 81.0, n[1] / 81.0, n[2] / 81.0, n[3] / 81.0);
    }
    return d;
}

/// Four uniform tables; CHSH = 0, no structure at all.
inline BellData uniform() {
    BellData d;
    d.label = "uniform";
    for (int c = 0; c < 4; ++c) d.tables[c] = make_table(0.25, 0.25, 0.25, 0.25);
    return d;
}

} // namespace bellkit::datasets

#endif // BELLKIT_DATASETS_HPP
