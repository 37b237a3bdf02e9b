#include "tweetflow/moran.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "tweetflow/csv.hpp"
#include "tweetflow/errors.hpp"
#include "tweetflow/rng.hpp"

namespace tweetflow {

std::vector<double> standardize(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw config_error("standardize: need at least 2 values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var == 0.0) throw config_error("standardize: constant variable");
  const double sd = std::sqrt(var);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = (values[i] - mean) / sd;
  return z;
}

std::vector<double> spatial_lag(const WeightsMatrix& w, std::span<const double> zy) {
  std::vector<double> lag(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    double acc = 0.0;
    const auto& nbrs = w.neighbors[i];
    const auto& wts = w.weights[i];
    for (std::size_t t = 0; t < nbrs.size(); ++t) acc += wts[t] * zy[nbrs[t]];
    lag[i] = acc;
  }
  return lag;
}

double global_bivariate_moran(std::span<const double> zx, std::span<const double> zy,
                              const WeightsMatrix& w) {
  const std::vector<double> lag = spatial_lag(w, zy);
  double acc = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.is_island(i)) continue;
    acc += zx[i] * lag[i];
    ++n;
  }
  if (n == 0) throw config_error("moran: all units are islands");
  return acc / static_cast<double>(n);
}

std::vector<double> local_bivariate_moran(std::span<const double> zx,
                                          std::span<const double> zy,
                                          const WeightsMatrix& w) {
  const std::vector<double> lag = spatial_lag(w, zy);
  std::vector<double> local(w.size(), 0.0);
  bool any = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.is_island(i)) continue;
    local[i] = zx[i] * lag[i];
    any = true;
  }
  if (!any) throw config_error("moran: all units are islands");
  return local;
}

std::vector<double> permutation_pseudo_p(std::span<const double> zx,
                                         std::span<const double> zy,
                                         const WeightsMatrix& w, int permutations,
                                         std::uint64_t seed, PermutationTail tail) {
  if (permutations < 99) throw config_error("permutation test: need at least 99 permutations");
  const int n = static_cast<int>(w.size());
  std::vector<double> pseudo_p(n, 1.0);

  for (int i = 0; i < n; ++i) {
    const auto& nbrs = w.neighbors[i];
    const auto& wts = w.weights[i];
    const std::size_t k = nbrs.size();
    if (k == 0) continue;  // island

    double observed_lag = 0.0;
    for (std::size_t t = 0; t < k; ++t) observed_lag += wts[t] * zy[nbrs[t]];
    const double observed = zx[i] * observed_lag;
    const double observed_abs = std::abs(observed);

    // Pool of the other n-1 unit indices; a partial Fisher-Yates pass per
    // replicate assigns the first k slots.
    std::vector<int> pool;
    pool.reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) pool.push_back(j);

    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    int extreme = 0;
    for (int r = 0; r < permutations; ++r) {
      for (std::size_t t = 0; t < k; ++t) {
        const std::size_t j =
            t + static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(pool.size() - t)));
        std::swap(pool[t], pool[j]);
      }
      double lag = 0.0;
      for (std::size_t t = 0; t < k; ++t) lag += wts[t] * zy[pool[t]];
      const double replicate = zx[i] * lag;
      if (tail == PermutationTail::Symmetric) {
        if (std::abs(replicate) >= observed_abs) ++extreme;
      } else {
        const bool same_sign = (replicate > 0.0 && observed > 0.0) ||
                               (replicate < 0.0 && observed < 0.0) ||
                               (replicate == 0.0 && observed == 0.0);
        if (same_sign && std::abs(replicate) >= observed_abs) ++extreme;
      }
    }
    pseudo_p[i] = static_cast<double>(extreme + 1) / static_cast<double>(permutations + 1);
  }
  return pseudo_p;
}

const char* to_string(LisaLabel label) {
  switch (label) {
    case LisaLabel::HH: return "HH";
    case LisaLabel::LL: return "LL";
    case LisaLabel::LH: return "LH";
    case LisaLabel::HL: return "HL";
    case LisaLabel::NotSignificant: return "NotSignificant";
    case LisaLabel::Island: return "Island";
  }
  return "?";
}

std::vector<LisaLabel> classify_clusters(std::span<const double> zx,
                                         std::span<const double> spatial_lag_zy,
                                         std::span<const double> pseudo_p, double alpha) {
  std::vector<LisaLabel> labels(zx.size(), LisaLabel::NotSignificant);
  for (std::size_t i = 0; i < zx.size(); ++i) {
    if (pseudo_p[i] > alpha) continue;
    const double x = zx[i];
    const double lag = spatial_lag_zy[i];
    if (x > 0.0 && lag > 0.0)
      labels[i] = LisaLabel::HH;
    else if (x < 0.0 && lag < 0.0)
      labels[i] = LisaLabel::LL;
    else if (x < 0.0 && lag > 0.0)
      labels[i] = LisaLabel::LH;
    else if (x > 0.0 && lag < 0.0)
      labels[i] = LisaLabel::HL;
    // zero zx or zero lag: stays NotSignificant
  }
  return labels;
}

MoranResult bivariate_moran_analysis(std::span<const double> x, std::span<const double> y,
                                     const WeightsMatrix& w, int permutations,
                                     std::uint64_t seed, double alpha,
                                     PermutationTail tail) {
  MoranResult r;
  r.zx = standardize(x);
  r.zy = standardize(y);
  r.lag = spatial_lag(w, r.zy);
  r.local_I = local_bivariate_moran(r.zx, r.zy, w);
  r.global_I = global_bivariate_moran(r.zx, r.zy, w);
  r.pseudo_p = permutation_pseudo_p(r.zx, r.zy, w, permutations, seed, tail);
  r.labels = classify_clusters(r.zx, r.lag, r.pseudo_p, alpha);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.is_island(i))
      r.labels[i] = LisaLabel::Island;
    else
      ++r.n_units;
  }
  r.n_permutations = permutations;
  r.seed = seed;
  r.alpha = alpha;
  return r;
}

std::string moran_csv(const MoranResult& r, const WeightsMatrix& w,
                      std::span<const double> x, std::span<const double> y) {
  std::ostringstream out;
  out << "district_id,x,y,zx,lag_zy,local_I,pseudo_p,label\n";
  for (std::size_t i = 0; i < w.size(); ++i) {
    out << csv_escape(w.ids[i]) << ',' << format_double(x[i]) << ','
        << format_double(y[i]) << ',' << format_double(r.zx[i]) << ','
        << format_double(r.lag[i]) << ',' << format_double(r.local_I[i]) << ','
        << format_double(r.pseudo_p[i]) << ',' << to_string(r.labels[i]) << '\n';
  }
  return out.str();
}

std::string moran_global_text(const MoranResult& r) {
  std::ostringstream out;
  out << "I " << format_double(r.global_I) << '\n'
      << "n " << r.n_units << '\n'
      << "permutations " << r.n_permutations << '\n'
      << "seed " << r.seed << '\n'
      << "alpha " << format_double(r.alpha) << '\n';
  return out.str();
}

}  // namespace tweetflow
