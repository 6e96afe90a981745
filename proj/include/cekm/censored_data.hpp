#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cekm/distributions.hpp"
#include "cekm/random.hpp"

namespace cekm {

// Randomly right-censored sample: z[i] = min(event, censoring) and
// delta[i] = 1 when the event was observed.
struct CensoredSample {
  std::vector<double> z;
  std::vector<std::uint8_t> delta;

  std::size_t size() const { return z.size(); }
};

// Sample sorted by z ascending with censoring indicators carried along as
// concomitants. `order[i]` is the index of z_sorted[i] in the source sample.
struct SortedCensoredSample {
  std::vector<double> z;
  std::vector<std::uint8_t> delta;
  std::vector<std::size_t> order;

  std::size_t size() const { return z.size(); }
};

// Top-k of a sorted sample, normalized by the (n-k)-th order statistic.
// ratios[i] = Z_{n-i,n} / Z_{n-k,n} for i = 0 (largest) .. k-1, so ratios are
// nonincreasing and >= 1; delta_top holds the matching concomitants. The
// threshold observation's own indicator is not part of the view.
struct TailView {
  std::size_t k = 0;
  std::size_t n = 0;  // size of the originating sample
  double threshold = 0.0;
  std::vector<double> ratios;
  std::vector<std::uint8_t> delta_top;
};

// Z_i = min(X_i, Y_i), delta_i = I(X_i <= Y_i), with X ~ f and Y ~ g drawn
// from independent substreams of `rng`.
CensoredSample generate_censored(const Distribution& f, const Distribution& g, std::size_t n,
                                 RandomStream& rng);

// Stable sort by value; exact ties put censored observations first.
SortedCensoredSample sort_with_concomitants(const CensoredSample& sample);

// Requires 1 <= k <= n-1 and a strictly positive threshold.
TailView top_k_view(const SortedCensoredSample& sorted, std::size_t k);

// Mean of delta over the view.
double uncensored_fraction(const TailView& view);

// Two-column CSV with header `time,status`; status 1 = event observed,
// 0 = censored. Extra columns are ignored; blank lines skipped; nonpositive
// times, nonnumeric fields and status values outside {0,1} are rejected with
// the offending line number.
CensoredSample read_survival_csv(const std::filesystem::path& path);
void write_survival_csv(const std::filesystem::path& path, const CensoredSample& sample);

}  // namespace cekm
