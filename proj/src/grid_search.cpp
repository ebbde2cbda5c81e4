#include "softcover/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "softcover/parallel.hpp"

namespace softcover {

namespace {

// Lexicographic enumeration of k-tuples of non-negative integers summing to
// at most top, scaled by 1/top.
std::vector<double> simplex_lattice(std::size_t k, int top) {
  std::vector<double> out;
  if (k == 0) return out;
  std::vector<int> idx(k, 0);
  const double scale = 1.0 / top;
  while (true) {
    for (int v : idx) out.push_back(v * scale);
    // Odometer step constrained to sum <= top.
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      int sum = 0;
      for (std::size_t j = 0; j < pos; ++j) sum += idx[j];
      if (sum + idx[pos] + 1 <= top) {
        ++idx[pos];
        for (std::size_t j = pos + 1; j < k; ++j) idx[j] = 0;
        break;
      }
      if (pos == 0) return out;
    }
  }
}

int refine_half_points(int dimension) {
  if (dimension <= 2) return 10;
  if (dimension == 3) return 5;
  if (dimension == 4) return 3;
  return 2;
}

double linf(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

struct Candidate {
  double score;
  std::size_t order;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  return a.score < b.score || (a.score == b.score && a.order < b.order);
}

}  // namespace

TypeGrid::TypeGrid(const TypeSpace& space, int points_per_dim, int workers)
    : space_(&space), spacing_(1.0 / (points_per_dim - 1)) {
  if (points_per_dim < 2) throw std::invalid_argument("TypeGrid: need at least 2 points per dimension");
  std::size_t total = 1;
  for (const auto& b : space.blocks()) {
    row_lattices_.push_back(simplex_lattice(b.free(), points_per_dim - 1));
    const std::size_t count = b.free() == 0 ? 1 : row_lattices_.back().size() / b.free();
    row_counts_.push_back(count);
    total *= count;
  }
  measures_.resize(total);
  parallel_for(total, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> p(static_cast<std::size_t>(space.dimension()));
    std::vector<double> cond(space.matrix_size());
    for (std::size_t i = begin; i < end; ++i) {
      params(i, p);
      space.decode(p, cond);
      measures_[i] = space.evaluate(cond);
    }
  });
}

void TypeGrid::params(std::size_t i, std::span<double> out) const {
  const auto& blocks = space_->blocks();
  for (std::size_t b = blocks.size(); b-- > 0;) {
    const std::size_t count = row_counts_[b];
    const std::size_t local = i % count;
    i /= count;
    const std::size_t k = blocks[b].free();
    for (std::size_t j = 0; j < k; ++j) out[blocks[b].offset + j] = row_lattices_[b][local * k + j];
  }
}

SearchOptions search_options(const SolverConfig& cfg) {
  SearchOptions o;
  o.refinement_rounds = cfg.refinement_rounds;
  o.refinement_shrink = cfg.refinement_shrink;
  return o;
}

namespace {

class Refiner {
 public:
  Refiner(const TypeGrid& grid, const PointScore& score, const PointFilter& filter, const SearchOptions& opts)
      : grid_(grid), space_(grid.space()), score_(score), filter_(filter), opts_(opts) {}

  void polish(SearchHit& hit) const {
    const int d = space_.dimension();
    if (d == 0 || opts_.refinement_rounds == 0) return;
    const int m = refine_half_points(d);
    const double shrink = std::max(opts_.refinement_shrink, 1.0 / m);
    int rounds = opts_.refinement_rounds;
    if (shrink > opts_.refinement_shrink)
      rounds = static_cast<int>(std::ceil(rounds * std::log(opts_.refinement_shrink) / std::log(shrink)));

    const auto ud = static_cast<std::size_t>(d);
    std::vector<int> offset(ud);
    std::vector<double> p(ud);
    std::vector<double> cond(space_.matrix_size());
    std::vector<Candidate> improving;
    std::vector<double> improving_params;
    double half = grid_.spacing();

    for (int r = 0; r < rounds; ++r) {
      improving.clear();
      improving_params.clear();
      std::fill(offset.begin(), offset.end(), -m);
      std::size_t order = 0;
      while (true) {
        bool centre = true;
        for (std::size_t j = 0; j < ud; ++j) {
          p[j] = hit.params[j] + half * offset[j] / m;
          centre = centre && offset[j] == 0;
        }
        if (!centre && space_.decode(p, cond)) {
          const double s = score_(space_.evaluate(cond));
          if (s < hit.score) {
            improving.push_back({s, order});
            improving_params.insert(improving_params.end(), p.begin(), p.end());
          }
        }
        ++order;
        std::size_t j = ud;
        while (j > 0 && offset[j - 1] == m) offset[--j] = -m;
        if (j == 0) break;
        ++offset[j - 1];
      }

      std::vector<std::size_t> rank(improving.size());
      for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
      std::sort(rank.begin(), rank.end(),
                [&](std::size_t a, std::size_t b) { return candidate_less(improving[a], improving[b]); });
      for (std::size_t i : rank) {
        std::copy_n(improving_params.begin() + static_cast<std::ptrdiff_t>(i * ud), ud, p.begin());
        space_.decode(p, cond);
        if (filter_ && !filter_(cond)) continue;
        hit.params = p;
        hit.cond = cond;
        hit.measures = space_.evaluate(cond);
        hit.score = improving[i].score;
        break;
      }
      half *= shrink;
    }
  }

 private:
  const TypeGrid& grid_;
  const TypeSpace& space_;
  const PointScore& score_;
  const PointFilter& filter_;
  SearchOptions opts_;
};

}  // namespace

std::vector<SearchHit> minimize_all(const TypeGrid& grid, const PointScore& score, const PointFilter& filter,
                                    std::span<const SeedPoint> seeds, const SearchOptions& opts) {
  const TypeSpace& space = grid.space();
  const auto ud = static_cast<std::size_t>(space.dimension());

  std::vector<Candidate> cands;
  std::vector<TypeMeasures> seed_measures;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    seed_measures.push_back(space.evaluate(seeds[s].cond));
    const double v = score(seed_measures.back());
    if (v < std::numeric_limits<double>::infinity()) cands.push_back({v, s});
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = score(grid.measures(i));
    if (v < std::numeric_limits<double>::infinity()) cands.push_back({v, seeds.size() + i});
  }
  if (cands.empty()) return {};

  constexpr std::size_t kHead = 512;
  std::size_t sorted_upto = std::min(kHead, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(sorted_upto), cands.end(),
                    candidate_less);

  std::vector<SearchHit> chosen;
  std::vector<double> p(ud);
  std::vector<double> cond(space.matrix_size());
  const double separation = 2.0 * grid.spacing();

  for (std::size_t k = 0; k < cands.size() && chosen.size() < opts.max_seeds; ++k) {
    if (k == sorted_upto) {
      if (!chosen.empty()) break;
      std::sort(cands.begin() + static_cast<std::ptrdiff_t>(k), cands.end(), candidate_less);
      sorted_upto = cands.size();
    }
    const Candidate& c = cands[k];
    TypeMeasures m;
    if (c.order < seeds.size()) {
      p = seeds[c.order].params;
      cond = seeds[c.order].cond;
      m = seed_measures[c.order];
    } else {
      grid.params(c.order - seeds.size(), p);
      space.decode(p, cond);
      m = grid.measures(c.order - seeds.size());
    }
    bool separated = true;
    for (const auto& h : chosen) separated = separated && linf(h.params, p) > separation;
    if (!separated) continue;
    if (filter && !filter(cond)) continue;
    chosen.push_back(SearchHit{true, c.score, p, cond, m});
  }

  Refiner refiner(grid, score, filter, opts);
  for (auto& h : chosen) refiner.polish(h);
  std::stable_sort(chosen.begin(), chosen.end(),
                   [](const SearchHit& a, const SearchHit& b) { return a.score < b.score; });
  return chosen;
}

SearchHit minimize(const TypeGrid& grid, const PointScore& score, const PointFilter& filter,
                   std::span<const SeedPoint> seeds, const SearchOptions& opts) {
  auto hits = minimize_all(grid, score, filter, seeds, opts);
  if (hits.empty()) return {};
  return hits.front();
}

}  // namespace softcover
