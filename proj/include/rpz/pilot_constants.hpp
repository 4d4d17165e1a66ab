#pragma once

// Regression thresholds for the circle-convergence experiment. They were fixed
// by a pilot run and guard against regressions; they are not theoretical bounds.
//
// Pilot: circle_convergence_experiment{n = 256, trials = 100, seed = 20240601,
// delta = 0.25, sectors = 16, compare_n = 16, reference_k = 1024} gave mean annulus
// mass 0.98512, worst mean sector deviation 0.00645, mean distance 0.01762 at
// n = 256 and 0.12594 at n = 16. Ldp-stats at n = 64, 500 trials gave max Y_n 0.281.

namespace rpz::pilot {

inline constexpr int kVersion = 1;
inline constexpr double kAnnulusMassMin = 0.95;
inline constexpr double kSectorTolerance = 0.03;
inline constexpr double kCircleDistanceMax = 0.05;
inline constexpr double kYnSlack = 0.1;

}  // namespace rpz::pilot
