#include "rjmcmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "rjmcmc/models/mixture.hpp"
#include "rjmcmc/stats.hpp"

namespace rjmcmc::diagnostics {

namespace st = rjmcmc::stats;

std::vector<std::size_t> checkpoint_grid(std::size_t length, int count) {
  if (count < 1) throw std::invalid_argument("checkpoint_grid: count < 1");
  std::vector<std::size_t> grid;
  for (int i = 1; i <= count; ++i) {
    const auto cut = static_cast<std::size_t>(
        std::llround(static_cast<double>(length) * i / count));
    if (cut == 0) continue;
    if (grid.empty() || cut != grid.back()) grid.push_back(cut);
  }
  if (grid.empty() && length > 0) grid.push_back(length);
  return grid;
}

namespace {

std::vector<int> lag_thin(std::span<const int> seq, int lag,
                          std::size_t prefix) {
  std::vector<int> out;
  for (std::size_t i = 0; i < prefix && i < seq.size();
       i += static_cast<std::size_t>(lag))
    out.push_back(seq[i]);
  return out;
}

// Two-sample KS distance between integer samples.
double ks_statistic(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::set<int> values(a.begin(), a.end());
  values.insert(b.begin(), b.end());
  double d = 0.0;
  for (int v : values) {
    const double fa =
        static_cast<double>(std::upper_bound(a.begin(), a.end(), v) -
                            a.begin()) /
        static_cast<double>(a.size());
    const double fb =
        static_cast<double>(std::upper_bound(b.begin(), b.end(), v) -
                            b.begin()) /
        static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace

KsResult model_indicator_ks(const std::vector<std::vector<int>>& indicators,
                            int lag, int checkpoints) {
  if (indicators.size() < 2)
    throw std::invalid_argument("model_indicator_ks: need at least 2 chains");
  if (lag < 1) throw std::invalid_argument("model_indicator_ks: lag < 1");
  std::size_t shortest = indicators[0].size();
  for (const auto& chain : indicators)
    shortest = std::min(shortest, chain.size());

  KsResult result;
  result.lag = lag;
  result.checkpoints = checkpoint_grid(shortest, checkpoints);
  for (std::size_t a = 0; a < indicators.size(); ++a) {
    for (std::size_t b = a + 1; b < indicators.size(); ++b) {
      KsPairSeries series;
      series.chain_a = static_cast<int>(a);
      series.chain_b = static_cast<int>(b);
      for (std::size_t cut : result.checkpoints) {
        const auto xa = lag_thin(indicators[a], lag, cut);
        const auto xb = lag_thin(indicators[b], lag, cut);
        if (xa.size() < 2 || xb.size() < 2) {
          series.statistic.push_back(kSkippedCheckpoint);
          series.p_value.push_back(kSkippedCheckpoint);
          continue;
        }
        const double d = ks_statistic(xa, xb);
        series.statistic.push_back(d);
        series.p_value.push_back(
            st::ks_two_sample_pvalue(d, xa.size(), xb.size()));
      }
      result.pairs.push_back(std::move(series));
    }
  }
  return result;
}

ChiSqResult model_indicator_chisq(
    const std::vector<std::vector<int>>& indicators, int lag, int checkpoints,
    double min_expected) {
  if (indicators.size() < 2)
    throw std::invalid_argument(
        "model_indicator_chisq: need at least 2 chains");
  if (lag < 1) throw std::invalid_argument("model_indicator_chisq: lag < 1");
  std::size_t shortest = indicators[0].size();
  for (const auto& chain : indicators)
    shortest = std::min(shortest, chain.size());

  ChiSqResult result;
  result.lag = lag;
  result.checkpoints = checkpoint_grid(shortest, checkpoints);
  const std::size_t n_chains = indicators.size();

  for (std::size_t cut : result.checkpoints) {
    // Contingency counts chain x model label.
    std::map<int, std::vector<long>> columns;
    std::vector<long> row_totals(n_chains, 0);
    for (std::size_t c = 0; c < n_chains; ++c) {
      for (int v : lag_thin(indicators[c], lag, cut)) {
        auto& col = columns[v];
        col.resize(n_chains, 0);
        col[c] += 1;
        row_totals[c] += 1;
      }
    }
    long grand = 0;
    for (long r : row_totals) grand += r;
    if (grand == 0) {
      result.statistic.push_back(kSkippedCheckpoint);
      result.df.push_back(0.0);
      result.p_value.push_back(kSkippedCheckpoint);
      continue;
    }

    // Pool model columns whose total expected count per chain would drop
    // below the threshold (pooling is column-wise, identical for every
    // chain).
    std::vector<std::vector<long>> pooled;
    std::vector<long> small_total(n_chains, 0);
    bool have_small = false;
    for (auto& [label, col] : columns) {
      col.resize(n_chains, 0);
      long col_total = 0;
      for (long v : col) col_total += v;
      const double min_chain_expected =
          static_cast<double>(col_total) *
          static_cast<double>(
              *std::min_element(row_totals.begin(), row_totals.end())) /
          static_cast<double>(grand);
      if (min_chain_expected < min_expected) {
        for (std::size_t c = 0; c < n_chains; ++c) small_total[c] += col[c];
        have_small = true;
      } else {
        pooled.push_back(col);
      }
    }
    if (have_small) pooled.push_back(small_total);

    if (pooled.size() < 2) {
      result.statistic.push_back(kSkippedCheckpoint);
      result.df.push_back(0.0);
      result.p_value.push_back(kSkippedCheckpoint);
      continue;
    }

    double statistic = 0.0;
    for (const auto& col : pooled) {
      long col_total = 0;
      for (long v : col) col_total += v;
      for (std::size_t c = 0; c < n_chains; ++c) {
        const double expected = static_cast<double>(col_total) *
                                static_cast<double>(row_totals[c]) /
                                static_cast<double>(grand);
        if (expected <= 0.0) continue;
        const double diff = static_cast<double>(col[c]) - expected;
        statistic += diff * diff / expected;
      }
    }
    const double df = static_cast<double>(n_chains - 1) *
                      static_cast<double>(pooled.size() - 1);
    result.statistic.push_back(statistic);
    result.df.push_back(df);
    result.p_value.push_back(st::chi_squared_sf(statistic, df));
  }
  return result;
}

namespace {

struct RunningCells {
  // values grouped by (chain, model) up to the current prefix
  std::map<std::pair<std::size_t, int>, std::vector<double>> cells;
};

double population_variance(const std::vector<double>& v) {
  if (v.size() < 1) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

}  // namespace

MpsrfResult mpsrf(const std::vector<std::vector<double>>& functional,
                  const std::vector<std::vector<int>>& indicators,
                  int checkpoints) {
  if (functional.size() < 2)
    throw std::invalid_argument("mpsrf: need at least 2 chains");
  if (functional.size() != indicators.size())
    throw std::invalid_argument("mpsrf: functional/indicator chain mismatch");
  std::size_t shortest = functional[0].size();
  for (std::size_t c = 0; c < functional.size(); ++c) {
    if (functional[c].size() != indicators[c].size())
      throw std::invalid_argument("mpsrf: length mismatch in chain");
    shortest = std::min(shortest, functional[c].size());
  }

  MpsrfResult result;
  result.checkpoints = checkpoint_grid(shortest, checkpoints);
  const std::size_t n_chains = functional.size();

  for (std::size_t cut : result.checkpoints) {
    std::vector<double> pooled;
    std::vector<std::vector<double>> per_chain(n_chains);
    std::map<int, std::vector<double>> per_model;
    std::map<std::pair<std::size_t, int>, std::vector<double>> cells;
    std::map<int, long> visits;
    long total_visits = 0;

    for (std::size_t c = 0; c < n_chains; ++c) {
      for (std::size_t i = 0; i < cut; ++i) {
        const double value = functional[c][i];
        if (!std::isfinite(value)) {
          ++result.excluded_values;
          continue;
        }
        const int m = indicators[c][i];
        pooled.push_back(value);
        per_chain[c].push_back(value);
        per_model[m].push_back(value);
        cells[{c, m}].push_back(value);
        visits[m] += 1;
        ++total_visits;
      }
    }
    if (pooled.empty() || total_visits == 0) {
      result.psrf_v.push_back(1.0);
      result.psrf_w.push_back(1.0);
      continue;
    }

    const double v_hat = population_variance(pooled);
    double w_c = 0.0;
    for (const auto& chain : per_chain)
      w_c += population_variance(chain);
    w_c /= static_cast<double>(n_chains);

    double w_m = 0.0;
    double w_mc = 0.0;
    for (const auto& [m, values] : per_model) {
      const double weight = static_cast<double>(visits[m]) /
                            static_cast<double>(total_visits);
      w_m += weight * population_variance(values);
      double cell_acc = 0.0;
      long cell_n = 0;
      for (std::size_t c = 0; c < n_chains; ++c) {
        auto it = cells.find({c, m});
        if (it == cells.end()) continue;
        cell_acc += static_cast<double>(it->second.size()) *
                    population_variance(it->second);
        cell_n += static_cast<long>(it->second.size());
      }
      if (cell_n > 0) w_mc += weight * cell_acc / static_cast<double>(cell_n);
    }

    result.psrf_v.push_back(w_c > 0.0 ? v_hat / w_c : 1.0);
    result.psrf_w.push_back(w_mc > 0.0 ? w_m / w_mc : 1.0);
  }
  return result;
}

DistancePsrfResult distance_psrf(
    const std::vector<std::vector<EventSet>>& chains, int n_points, Rng& rng,
    int checkpoints) {
  if (chains.size() < 2)
    throw std::invalid_argument("distance_psrf: need at least 2 chains");
  if (n_points < 1)
    throw std::invalid_argument("distance_psrf: need at least one point");

  std::size_t shortest = chains[0].size();
  for (const auto& chain : chains) shortest = std::min(shortest, chain.size());

  // Pooled per-coordinate standardisation and bounding box.
  std::size_t dim = 0;
  for (const auto& chain : chains)
    for (const auto& events : chain)
      for (const auto& e : events) dim = std::max(dim, e.size());
  if (dim == 0)
    throw std::invalid_argument("distance_psrf: no events in any state");

  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  std::vector<double> sum(dim, 0.0), sum2(dim, 0.0);
  long count = 0;
  for (const auto& chain : chains)
    for (const auto& events : chain)
      for (const auto& e : events) {
        ++count;
        for (std::size_t d = 0; d < dim; ++d) {
          lo[d] = std::min(lo[d], e[d]);
          hi[d] = std::max(hi[d], e[d]);
          sum[d] += e[d];
          sum2[d] += e[d] * e[d];
        }
      }
  std::vector<double> scale(dim, 1.0);
  for (std::size_t d = 0; d < dim; ++d) {
    const double mean = sum[d] / static_cast<double>(count);
    const double var = sum2[d] / static_cast<double>(count) - mean * mean;
    if (var > 0.0) scale[d] = std::sqrt(var);
  }

  DistancePsrfResult result;
  result.checkpoints = checkpoint_grid(shortest, checkpoints);
  for (int p = 0; p < n_points; ++p) {
    std::vector<double> point(dim);
    for (std::size_t d = 0; d < dim; ++d) point[d] = rng.uniform(lo[d], hi[d]);
    result.reference_points.push_back(std::move(point));
  }

  // Distance sequences per (point, chain).
  std::vector<std::vector<std::vector<double>>> y(
      static_cast<std::size_t>(n_points));
  for (auto& per_chain : y)
    per_chain.resize(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i = 0; i < shortest; ++i) {
      const auto& events = chains[c][i];
      if (events.empty()) ++result.empty_event_states;
      for (int p = 0; p < n_points; ++p) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& e : events) {
          double acc = 0.0;
          for (std::size_t d = 0; d < dim; ++d) {
            const double z =
                (result.reference_points[static_cast<std::size_t>(p)][d] -
                 (d < e.size() ? e[d] : 0.0)) /
                scale[d];
            acc += z * z;
          }
          best = std::min(best, std::sqrt(acc));
        }
        y[static_cast<std::size_t>(p)][c].push_back(best);
      }
    }
  }

  for (int p = 0; p < n_points; ++p) {
    std::vector<double> curve;
    for (std::size_t cut : result.checkpoints) {
      std::vector<double> pooled;
      double w = 0.0;
      std::size_t used_chains = 0;
      for (std::size_t c = 0; c < chains.size(); ++c) {
        std::vector<double> finite;
        for (std::size_t i = 0; i < cut; ++i) {
          const double v = y[static_cast<std::size_t>(p)][c][i];
          if (std::isfinite(v)) finite.push_back(v);
        }
        if (finite.empty()) continue;
        ++used_chains;
        w += population_variance(finite);
        pooled.insert(pooled.end(), finite.begin(), finite.end());
      }
      if (pooled.empty() || used_chains == 0) {
        curve.push_back(1.0);
        continue;
      }
      w /= static_cast<double>(used_chains);
      const double v_hat = population_variance(pooled);
      curve.push_back(w > 0.0 ? std::sqrt(v_hat / w) : 1.0);
    }
    result.psrf.push_back(std::move(curve));
  }
  return result;
}

std::vector<double> relabel_by_constraint(std::span<const double> params) {
  auto comps = models::unpack_components(params);
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
    if (a.mean != b.mean) return a.mean < b.mean;
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.variance < b.variance;
  });
  return models::pack_components(comps);
}

double deviance(const ModelDefinition& model, std::span<const double> params) {
  return -2.0 * model.log_likelihood(params);
}

}  // namespace rjmcmc::diagnostics
