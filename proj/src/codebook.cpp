#include "softcover/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "softcover/rng.hpp"

namespace softcover {

namespace {

// Returns the first symbol whose mass is distorted by >= 0.5/n, or -1.
int distorted_symbol(const Distribution& p, int n, std::vector<int>& counts) {
  const std::size_t k = p.size();
  counts.assign(k, 0);
  std::vector<double> remainder(k);
  int used = 0;
  for (std::size_t x = 0; x < k; ++x) {
    const double target = n * p[x];
    counts[x] = static_cast<int>(std::floor(target));
    remainder[x] = target - counts[x];
    used += counts[x];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; used < n; ++i, ++used) ++counts[order[i % k]];
  for (std::size_t x = 0; x < k; ++x)
    if (std::abs(counts[x] - n * p[x]) >= 0.5 - 1e-12) return static_cast<int>(x);
  return -1;
}

}  // namespace

std::vector<int> quantize_composition(const Distribution& p_in, int n) {
  if (n < 1) throw std::invalid_argument("blocklength must be >= 1");
  std::vector<int> counts;
  const int bad = distorted_symbol(p_in, n, counts);
  if (bad < 0) return counts;

  std::vector<int> scratch;
  std::string valid;
  int found = 0;
  for (int m = std::max(1, n - 50); m <= n + 200 && found < 4; ++m) {
    if (m == n || distorted_symbol(p_in, m, scratch) >= 0) continue;
    valid += (found ? ", " : "") + std::to_string(m);
    ++found;
  }
  throw std::invalid_argument("blocklength n=" + std::to_string(n) + " has no type class for P_X: symbol " +
                              std::to_string(bad) + " needs n*P_X = " + std::to_string(n * p_in[static_cast<std::size_t>(bad)]) +
                              (found ? "; nearby valid n: " + valid : std::string("; no valid n nearby")));
}

std::size_t codebook_size(int n, double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument("rate must be finite and >= 0");
  const double m = std::round(std::exp(n * rate));
  if (m > 1e7) throw std::invalid_argument("codebook size e^{nR} exceeds 10^7");
  return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

double Codebook::realized_rate() const { return std::log(static_cast<double>(size())) / n; }

Sequence representative_codeword(const std::vector<int>& composition) {
  Sequence s;
  for (std::size_t x = 0; x < composition.size(); ++x) s.insert(s.end(), static_cast<std::size_t>(composition[x]), static_cast<int>(x));
  return s;
}

Codebook sample_codebook(int n, double rate, const std::vector<int>& composition, std::mt19937_64& rng) {
  Codebook cb;
  cb.n = n;
  cb.rate_nominal = rate;
  cb.composition = composition;
  const std::size_t m = codebook_size(n, rate);
  const Sequence base = representative_codeword(composition);
  if (static_cast<int>(base.size()) != n) throw std::invalid_argument("composition does not sum to n");
  cb.codewords.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Sequence s = base;
    for (std::size_t j = s.size(); j > 1; --j) std::swap(s[j - 1], s[uniform_below(rng, j)]);
    cb.codewords.push_back(std::move(s));
  }
  return cb;
}

Codebook sample_codebook(int n, double rate, const Distribution& p_in, std::uint64_t seed) {
  auto rng = trial_stream(seed, 0);
  return sample_codebook(n, rate, quantize_composition(p_in, n), rng);
}

}  // namespace softcover
