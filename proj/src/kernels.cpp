#include "raterel/kernels.hpp"

#include <algorithm>
#include <exception>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "raterel/error.hpp"

namespace raterel::kernels {

bool openmp_enabled() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::size_t TallyTable::pair_count() const noexcept {
  std::size_t n = 0;
  for (std::uint32_t m : unit_sizes) n += static_cast<std::size_t>(m) * (m - 1) / 2;
  return n;
}

TallyTable TallyTable::from_matrix(const RatingMatrix& matrix) {
  TallyTable t;
  const Scale& scale = matrix.scale();
  t.kind = scale.kind();
  if (scale.categorical()) {
    t.values.resize(scale.category_count());
    for (std::size_t i = 0; i < t.values.size(); ++i) t.values[i] = static_cast<double>(i);
  } else {
    for (std::size_t u = 0; u < matrix.unit_count(); ++u) {
      if (matrix.present_in_unit(u) < 2) continue;
      for (std::size_t r = 0; r < matrix.rater_count(); ++r) {
        if (auto v = matrix.cell(u, r)) t.values.push_back(*v);
      }
    }
    std::sort(t.values.begin(), t.values.end());
    t.values.erase(std::unique(t.values.begin(), t.values.end()), t.values.end());
  }

  std::vector<std::uint32_t> row;
  for (std::size_t u = 0; u < matrix.unit_count(); ++u) {
    row.clear();
    for (std::size_t r = 0; r < matrix.rater_count(); ++r) {
      auto v = matrix.cell(u, r);
      if (!v) continue;
      const auto pos = scale.categorical()
                           ? static_cast<std::size_t>(*v)
                           : static_cast<std::size_t>(
                                 std::lower_bound(t.values.begin(), t.values.end(), *v) -
                                 t.values.begin());
      row.push_back(static_cast<std::uint32_t>(pos));
    }
    if (row.size() < 2) continue;
    std::sort(row.begin(), row.end());
    for (std::size_t i = 0; i < row.size();) {
      std::size_t j = i;
      while (j < row.size() && row[j] == row[i]) ++j;
      t.value_index.push_back(row[i]);
      t.counts.push_back(static_cast<std::uint32_t>(j - i));
      i = j;
    }
    t.offsets.push_back(t.value_index.size());
    t.unit_sizes.push_back(static_cast<std::uint32_t>(row.size()));
  }
  return t;
}

double pairwise_sum(std::span<const double> xs) noexcept {
  constexpr std::size_t kBlock = 8;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

namespace {

double unit_sum(const TallyTable& t, std::size_t u, const DistanceFunction& distance) {
  double s = 0.0;
  for (std::size_t a = t.offsets[u]; a < t.offsets[u + 1]; ++a) {
    const double va = t.values[t.value_index[a]];
    const double ca = t.counts[a];
    for (std::size_t b = a + 1; b < t.offsets[u + 1]; ++b) {
      s += ca * t.counts[b] * distance(va, t.values[t.value_index[b]]);
    }
  }
  return s;
}

// Runs body(i) for i in [0, n), rethrowing the first exception on the
// calling thread.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(raterel_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::mt19937_64 replicate_stream(std::uint64_t seed, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

void unit_disagreements(const TallyTable& table, const DistanceFunction& distance,
                        std::span<double> out, Execution exec) {
  if (out.size() != table.unit_count()) throw InputError("output span does not match unit count");
  for_each_index(table.unit_count(), exec,
                 [&](std::size_t u) { out[u] = unit_sum(table, u, distance); });
}

std::vector<double> pooled_counts(const TallyTable& table, std::span<const std::uint32_t> weights) {
  std::vector<double> counts(table.values.size(), 0.0);
  for (std::size_t u = 0; u < table.unit_count(); ++u) {
    const double w = weights.empty() ? 1.0 : static_cast<double>(weights[u]);
    if (w == 0.0) continue;
    for (std::size_t a = table.offsets[u]; a < table.offsets[u + 1]; ++a) {
      counts[table.value_index[a]] += w * table.counts[a];
    }
  }
  return counts;
}

double expected_from_counts(const TallyTable& table, std::span<const double> counts,
                            const DistanceFunction& distance, ExpectedMode mode) {
  const double total = pairwise_sum(counts);
  if (total < 2.0) throw InputError("expected disagreement needs at least two pooled values");
  double mass = 0.0;  // sum over ordered value pairs of n_v n_v' delta(v, v')
  switch (table.kind) {
    case ScaleKind::nominal: {
      double same = 0.0;
      for (double n : counts) same += n * n;
      mass = distance.factor() * (total * total - same);
      break;
    }
    case ScaleKind::interval: {
      double weighted = 0.0;
      for (std::size_t i = 0; i < counts.size(); ++i) weighted += counts[i] * table.values[i];
      const double mean = weighted / total;
      double spread = 0.0;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const double d = table.values[i] - mean;
        spread += counts[i] * d * d;
      }
      mass = distance.factor() * 2.0 * total * spread;
      break;
    }
    case ScaleKind::ordinal: {
      for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a] == 0.0) continue;
        for (std::size_t b = a + 1; b < counts.size(); ++b) {
          if (counts[b] == 0.0) continue;
          mass += 2.0 * counts[a] * counts[b] * distance(table.values[a], table.values[b]);
        }
      }
      break;
    }
  }
  const double denom =
      mode == ExpectedMode::with_replacement ? total * total : total * (total - 1.0);
  return mass / denom;
}

std::vector<std::optional<double>> bootstrap_alphas(const TallyTable& table, const Scale& scale,
                                                    ExpectedMode mode, std::size_t replicates,
                                                    std::uint64_t seed, Execution exec) {
  const std::size_t units = table.unit_count();
  std::vector<std::optional<double>> out(replicates);
  if (units == 0) return out;

  // Nominal and interval distances do not depend on the pooled counts, so
  // per-unit sums are shared across replicates.
  const bool fixed_distance = table.kind != ScaleKind::ordinal;
  std::vector<double> base_sums(units, 0.0);
  if (fixed_distance) {
    const auto d = DistanceFunction::for_scale(scale, std::span<const double>{});
    unit_disagreements(table, d, base_sums, Execution::serial);
  }
  std::vector<double> pairs_per_unit(units);
  for (std::size_t u = 0; u < units; ++u) {
    const double m = table.unit_sizes[u];
    pairs_per_unit[u] = m * (m - 1.0) / 2.0;
  }

  for_each_index(replicates, exec, [&](std::size_t r) {
    auto rng = replicate_stream(seed, r);
    std::uniform_int_distribution<std::size_t> pick(0, units - 1);
    std::vector<std::uint32_t> weights(units, 0);
    for (std::size_t i = 0; i < units; ++i) ++weights[pick(rng)];

    const std::vector<double> counts = pooled_counts(table, weights);
    std::size_t distinct = 0;
    for (double c : counts) distinct += c > 0.0 ? 1 : 0;
    if (distinct < 2) return;

    const auto distance = DistanceFunction::for_scale(scale, counts);
    const double expected = expected_from_counts(table, counts, distance, mode);
    if (!(expected > 0.0)) return;

    std::vector<double> weighted_sums(units, 0.0);
    std::vector<double> weighted_pairs(units, 0.0);
    for (std::size_t u = 0; u < units; ++u) {
      if (weights[u] == 0) continue;
      const double s = fixed_distance ? base_sums[u] : unit_sum(table, u, distance);
      weighted_sums[u] = weights[u] * s;
      weighted_pairs[u] = weights[u] * pairs_per_unit[u];
    }
    const double observed = pairwise_sum(weighted_sums) / pairwise_sum(weighted_pairs);
    out[r] = 1.0 - observed / expected;
  });
  return out;
}

}  // namespace raterel::kernels
