#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tweetflow/weights.hpp"

namespace tweetflow {

// z-scores with the population (n) denominator. Throws config_error on a
// constant variable: the index is undefined then.
std::vector<double> standardize(std::span<const double> values);

// Row-standardized weighted average of zy over each unit's neighbors;
// islands get 0.
std::vector<double> spatial_lag(const WeightsMatrix& w, std::span<const double> zy);

// I = (1/n) * sum_i zx_i * lag_i over non-island units; n excludes islands.
// Throws config_error when every unit is an island.
double global_bivariate_moran(std::span<const double> zx, std::span<const double> zy,
                              const WeightsMatrix& w);

// I_i = zx_i * lag_i; islands get 0.
std::vector<double> local_bivariate_moran(std::span<const double> zx,
                                          std::span<const double> zy,
                                          const WeightsMatrix& w);

// How replicates are counted against the observed local statistic.
//  Symmetric: |replicate| >= |observed| regardless of sign. Rejects at the
//    nominal rate under a null of no association.
//  Directed: replicate has the observed sign and |replicate| >= |observed|
//    (one-sided in the data-chosen direction; roughly doubles the nominal
//    rejection rate).
enum class PermutationTail { Symmetric, Directed };

// Conditional permutation: per unit i, zx_i stays fixed and zy is permuted
// over the other n-1 units; pseudo_p = (R+1)/(P+1). Per-unit substreams are
// derived from (seed, unit index), so results do not depend on evaluation
// order. Islands get pseudo_p = 1.
std::vector<double> permutation_pseudo_p(std::span<const double> zx,
                                         std::span<const double> zy,
                                         const WeightsMatrix& w, int permutations,
                                         std::uint64_t seed,
                                         PermutationTail tail = PermutationTail::Symmetric);

enum class LisaLabel { HH, LL, LH, HL, NotSignificant, Island };

const char* to_string(LisaLabel label);

// Sign rules on (zx, lag) gated by pseudo_p <= alpha; zero zx or zero lag at
// significance falls back to NotSignificant. Islands are labeled by the
// caller.
std::vector<LisaLabel> classify_clusters(std::span<const double> zx,
                                         std::span<const double> spatial_lag_zy,
                                         std::span<const double> pseudo_p, double alpha);

struct MoranResult {
  double global_I = 0.0;
  std::vector<double> zx;
  std::vector<double> zy;
  std::vector<double> lag;
  std::vector<double> local_I;
  std::vector<double> pseudo_p;
  std::vector<LisaLabel> labels;
  int n_units = 0;   // non-island units entering the global mean
  int n_permutations = 0;
  std::uint64_t seed = 0;
  double alpha = 0.05;
};

// Full bivariate analysis from raw (unstandardized) variables.
MoranResult bivariate_moran_analysis(std::span<const double> x, std::span<const double> y,
                                     const WeightsMatrix& w, int permutations,
                                     std::uint64_t seed, double alpha,
                                     PermutationTail tail = PermutationTail::Symmetric);

std::string moran_csv(const MoranResult& r, const WeightsMatrix& w,
                      std::span<const double> x, std::span<const double> y);

std::string moran_global_text(const MoranResult& r);

}  // namespace tweetflow
