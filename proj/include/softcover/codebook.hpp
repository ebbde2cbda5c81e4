#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "softcover/distribution.hpp"

namespace softcover {

using Sequence = std::vector<int>;

// Symbol counts of the n-quantized input type: floor(n P_X) plus
// largest-remainder top-up (lower symbol first on equal remainders). Throws
// std::invalid_argument naming the offending symbol, with the nearest valid
// blocklengths, when some |count/n - P_X(x)| >= 0.5/n.
std::vector<int> quantize_composition(const Distribution& p_in, int n);

// max(1, round(e^{nR})); throws when that exceeds 10^7.
std::size_t codebook_size(int n, double rate);

struct Codebook {
  std::vector<Sequence> codewords;
  int n = 0;
  double rate_nominal = 0.0;
  std::vector<int> composition;

  std::size_t size() const { return codewords.size(); }
  // (1/n) ln M, the rate the codebook actually realizes.
  double realized_rate() const;
};

// Codewords i.i.d. uniform on the type class: each one is a Fisher-Yates
// shuffle of the sorted composition.
Codebook sample_codebook(int n, double rate, const Distribution& p_in, std::uint64_t seed);
Codebook sample_codebook(int n, double rate, const std::vector<int>& composition, std::mt19937_64& rng);

// Sorted member of the type class (all 0s, then 1s, ...).
Sequence representative_codeword(const std::vector<int>& composition);

}  // namespace softcover
