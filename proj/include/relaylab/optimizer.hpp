// Deterministic derivative-free maximizer over products of simplices and
// boxes, with a streaming exhaustive grid scan as the brute-force oracle.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "relaylab/model.hpp"

namespace relaylab::opt {

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Objective value or infeasible (treated as -inf during search).
using Objective = std::function<std::optional<double>(std::span<const double>)>;

struct Block {
  enum class Kind { Simplex, Box };
  Kind kind;
  int dim = 0;
  double mass = 0.0;               // Simplex: coordinates >= 0 summing to mass
  std::vector<double> lo, hi;      // Box bounds per coordinate

  static Block simplex(int d, double m) {
    if (d < 1) throw ValidationError("simplex dimension must be >= 1");
    if (!(m >= 0.0)) throw ValidationError("simplex mass must be >= 0");
    Block b;
    b.kind = Kind::Simplex;
    b.dim = d;
    b.mass = m;
    return b;
  }
  static Block box(std::vector<double> lo_, std::vector<double> hi_) {
    if (lo_.empty() || lo_.size() != hi_.size())
      throw ValidationError("box bounds must be non-empty and match");
    for (size_t i = 0; i < lo_.size(); ++i)
      if (!(lo_[i] <= hi_[i])) throw ValidationError("box needs lo <= hi");
    Block b;
    b.kind = Kind::Box;
    b.dim = static_cast<int>(lo_.size());
    b.lo = std::move(lo_);
    b.hi = std::move(hi_);
    return b;
  }
  static Block unit_box(int d) {
    return box(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0));
  }
};

struct SearchSpace {
  std::vector<Block> blocks;

  int dim() const {
    int d = 0;
    for (const auto& b : blocks) d += b.dim;
    return d;
  }
};

namespace detail {

inline unsigned worker_count() {
  static const unsigned n = [] {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RELAYLAB_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
  }();
  return n;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Lattice sizes per block at a given resolution.
inline std::uint64_t block_count(const Block& b, int points) {
  const std::uint64_t k = static_cast<std::uint64_t>(points - 1);
  if (b.kind == Block::Kind::Box) {
    std::uint64_t c = 1;
    for (int i = 0; i < b.dim; ++i) c *= static_cast<std::uint64_t>(points);
    return c;
  }
  // Compositions of k into dim non-negative parts.
  return binomial(k + b.dim - 1, b.dim - 1);
}

// Writes the idx-th lattice point of the block into out. Composition
// enumeration is lexicographic in the leading coordinate, so the order is
// fixed and reproducible.
inline void block_decode(const Block& b, int points, std::uint64_t idx, double* out) {
  const std::uint64_t k = static_cast<std::uint64_t>(points - 1);
  if (b.kind == Block::Kind::Box) {
    for (int i = b.dim - 1; i >= 0; --i) {
      const std::uint64_t q = idx % points;
      idx /= points;
      out[i] = b.lo[i] + (b.hi[i] - b.lo[i]) * static_cast<double>(q) / static_cast<double>(k);
    }
    return;
  }
  std::uint64_t rem = k;
  for (int i = 0; i < b.dim - 1; ++i) {
    std::uint64_t c = 0;
    for (;; ++c) {
      const std::uint64_t tail = binomial(rem - c + b.dim - i - 2, b.dim - i - 2);
      if (idx < tail) break;
      idx -= tail;
    }
    out[i] = b.mass * static_cast<double>(c) / static_cast<double>(k);
    rem -= c;
  }
  out[b.dim - 1] = b.mass * static_cast<double>(rem) / static_cast<double>(k);
}

// Euclidean projection onto {x >= 0, sum x = mass}.
inline void project_simplex(double* x, int d, double mass) {
  if (mass <= 0.0) {
    std::fill(x, x + d, 0.0);
    return;
  }
  thread_local std::vector<double> sorted;
  sorted.assign(x, x + d);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int support = d;
  for (int i = 0; i < d; ++i) {
    cum += sorted[i];
    const double t = (cum - mass) / static_cast<double>(i + 1);
    if (i + 1 < d && sorted[i + 1] > t) continue;
    tau = t;
    support = i + 1;
    break;
  }
  (void)support;
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    x[i] = std::max(0.0, x[i] - tau);
    sum += x[i];
  }
  // Renormalize residual rounding so the mass equality is tight.
  if (sum > 0.0) {
    const double scale = mass / sum;
    for (int i = 0; i < d; ++i) x[i] *= scale;
  } else {
    std::fill(x, x + d, mass / static_cast<double>(d));
  }
}

inline void project_point(const SearchSpace& space, std::vector<double>& x) {
  size_t off = 0;
  for (const auto& b : space.blocks) {
    if (b.kind == Block::Kind::Simplex) {
      project_simplex(x.data() + off, b.dim, b.mass);
    } else {
      for (int i = 0; i < b.dim; ++i) {
        x[off + i] = std::clamp(x[off + i], b.lo[i], b.hi[i]);
      }
    }
    off += b.dim;
  }
}

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t index = 0;
  bool feasible = false;

  bool better_than(const Candidate& o) const {
    if (!feasible) return false;
    if (!o.feasible) return true;
    if (value != o.value) return value > o.value;
    return index < o.index;
  }
};

}  // namespace detail

struct Maximum {
  std::vector<double> point;
  double value = 0.0;
};

inline std::uint64_t grid_size(const SearchSpace& space, int points_per_dim) {
  std::uint64_t total = 1;
  for (const auto& b : space.blocks) {
    const std::uint64_t c = detail::block_count(b, points_per_dim);
    if (c != 0 && total > std::numeric_limits<std::uint64_t>::max() / c) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= c;
  }
  return total;
}

inline void decode_grid_point(const SearchSpace& space, int points_per_dim,
                              std::uint64_t index, std::vector<double>& out) {
  out.resize(space.dim());
  size_t off = space.dim();
  for (auto it = space.blocks.rbegin(); it != space.blocks.rend(); ++it) {
    const std::uint64_t c = detail::block_count(*it, points_per_dim);
    const std::uint64_t sub = index % c;
    index /= c;
    off -= it->dim;
    detail::block_decode(*it, points_per_dim, sub, out.data() + off);
  }
}

namespace detail {

// Incremental lattice cursor: advances through the same order as
// decode_grid_point at O(1) amortized cost per step. Box blocks are plain
// odometers; simplex blocks step through compositions of k in lexicographic
// order. The last block spins fastest.
class LatticeWalker {
 public:
  LatticeWalker(const SearchSpace& space, int points, std::uint64_t start)
      : space_(&space), points_(points) {
    point_.resize(space.dim());
    digits_.resize(space.blocks.size());
    offsets_.resize(space.blocks.size());
    size_t off = 0;
    for (size_t b = 0; b < space.blocks.size(); ++b) {
      digits_[b].assign(space.blocks[b].dim, 0);
      offsets_[b] = off;
      off += space.blocks[b].dim;
    }
    seek(start);
  }

  const std::vector<double>& point() const { return point_; }

  void advance() {
    for (size_t b = space_->blocks.size(); b-- > 0;) {
      if (advance_block(b)) return;
      reset_block(b);  // wrapped; carry into the previous block
    }
  }

 private:
  void seek(std::uint64_t index) {
    for (size_t b = space_->blocks.size(); b-- > 0;) {
      const Block& blk = space_->blocks[b];
      const std::uint64_t c = block_count(blk, points_);
      const std::uint64_t sub = index % c;
      index /= c;
      decode_digits(blk, sub, digits_[b]);
      write_block(b);
    }
  }

  void decode_digits(const Block& b, std::uint64_t idx, std::vector<int>& d) const {
    const std::uint64_t k = static_cast<std::uint64_t>(points_ - 1);
    if (b.kind == Block::Kind::Box) {
      for (int i = b.dim - 1; i >= 0; --i) {
        d[i] = static_cast<int>(idx % points_);
        idx /= points_;
      }
      return;
    }
    std::uint64_t rem = k;
    for (int i = 0; i < b.dim - 1; ++i) {
      std::uint64_t c = 0;
      for (;; ++c) {
        const std::uint64_t tail = binomial(rem - c + b.dim - i - 2, b.dim - i - 2);
        if (idx < tail) break;
        idx -= tail;
      }
      d[i] = static_cast<int>(c);
      rem -= c;
    }
    d[b.dim - 1] = static_cast<int>(rem);
  }

  void write_block(size_t b) {
    const Block& blk = space_->blocks[b];
    const double k = static_cast<double>(points_ - 1);
    double* out = point_.data() + offsets_[b];
    for (int i = 0; i < blk.dim; ++i) {
      out[i] = blk.kind == Block::Kind::Box
                   ? blk.lo[i] + (blk.hi[i] - blk.lo[i]) * digits_[b][i] / k
                   : blk.mass * digits_[b][i] / k;
    }
  }

  bool advance_block(size_t b) {
    const Block& blk = space_->blocks[b];
    auto& d = digits_[b];
    const int k = points_ - 1;
    if (blk.kind == Block::Kind::Box) {
      for (int i = blk.dim - 1; i >= 0; --i) {
        if (d[i] < k) {
          ++d[i];
          write_block(b);
          return true;
        }
        d[i] = 0;
      }
      return false;
    }
    // Lexicographic successor among compositions of k into dim parts.
    int prefix = 0;
    for (int i = 0; i < blk.dim - 1; ++i) prefix += d[i];
    for (int j = blk.dim - 2; j >= 0; --j) {
      if (prefix < k) {
        ++d[j];
        for (int i = j + 1; i < blk.dim - 1; ++i) d[i] = 0;
        int s = 0;
        for (int i = 0; i < blk.dim - 1; ++i) s += d[i];
        d[blk.dim - 1] = k - s;
        write_block(b);
        return true;
      }
      prefix -= d[j];
    }
    return false;
  }

  void reset_block(size_t b) {
    auto& d = digits_[b];
    std::fill(d.begin(), d.end(), 0);
    if (space_->blocks[b].kind == Block::Kind::Simplex) {
      d[space_->blocks[b].dim - 1] = points_ - 1;
    }
    write_block(b);
  }

  const SearchSpace* space_;
  int points_;
  std::vector<double> point_;
  std::vector<std::vector<int>> digits_;
  std::vector<size_t> offsets_;
};

}  // namespace detail

/// Exhaustive deterministic lattice scan, streaming each (point, value) into
/// `sink`. Throws BudgetError above 1e8 evaluations.
template <typename F, typename Sink>
void grid_scan_stream(F&& objective, const SearchSpace& space, int points_per_dim,
                      Sink&& sink) {
  if (points_per_dim < 2) throw ValidationError("points_per_dim must be >= 2");
  const std::uint64_t total = grid_size(space, points_per_dim);
  if (total > 100'000'000ull) {
    throw BudgetError("grid scan budget exceeded: " + std::to_string(total) +
                      " evaluations requested, limit 100000000");
  }
  detail::LatticeWalker walker(space, points_per_dim, 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    sink(walker.point(), objective(std::span<const double>(walker.point())));
    walker.advance();
  }
}

/// List-returning scan for small lattices; the brute-force oracle in tests.
inline std::vector<std::pair<std::vector<double>, std::optional<double>>> grid_scan(
    const Objective& objective, const SearchSpace& space, int points_per_dim) {
  std::vector<std::pair<std::vector<double>, std::optional<double>>> rows;
  grid_scan_stream(objective, space, points_per_dim,
                   [&rows](const std::vector<double>& p, std::optional<double> v) {
                     rows.emplace_back(p, v);
                   });
  return rows;
}

/// Best feasible value of a lattice scan, or nullopt if none is feasible.
template <typename F>
std::optional<Maximum> grid_scan_best(F&& objective, const SearchSpace& space,
                                      int points_per_dim) {
  std::optional<Maximum> best;
  grid_scan_stream(objective, space, points_per_dim,
                   [&](const std::vector<double>& p, std::optional<double> v) {
                     if (v && (!best || *v > best->value)) best = Maximum{p, *v};
                   });
  return best;
}

namespace detail {

// Parallel coarse scan keeping the top-k feasible candidates. The winners are
// a deterministic function of the lattice alone: chunks keep local top-k
// lists that merge by (value desc, index asc), independent of scheduling.
template <typename F>
std::vector<Candidate> scan_top_k(const F& objective, const SearchSpace& space,
                                  int points, std::uint64_t total, size_t k) {
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(
      worker_count(), std::max<std::uint64_t>(1, total / 1024)));
  std::vector<std::vector<Candidate>> local(std::max(1u, workers));

  auto run_range = [&](std::uint64_t lo, std::uint64_t hi, std::vector<Candidate>& out) {
    out.reserve(k + 1);
    LatticeWalker walker(space, points, lo);
    for (std::uint64_t i = lo; i < hi; ++i, walker.advance()) {
      const auto v = objective(std::span<const double>(walker.point()));
      if (!v) continue;
      if (out.size() == k && !(Candidate{*v, i, true}.better_than(out.back()))) continue;
      out.push_back(Candidate{*v, i, true});
      std::sort(out.begin(), out.end(),
                [](const Candidate& a, const Candidate& b) { return a.better_than(b); });
      if (out.size() > k) out.pop_back();
    }
  };

  if (workers <= 1) {
    run_range(0, total, local[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = w * chunk;
      const std::uint64_t hi = std::min(total, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi, w] { run_range(lo, hi, local[w]); });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<Candidate> merged;
  for (const auto& l : local) merged.insert(merged.end(), l.begin(), l.end());
  std::sort(merged.begin(), merged.end(),
            [](const Candidate& a, const Candidate& b) { return a.better_than(b); });
  if (merged.size() > k) merged.resize(k);
  return merged;
}

}  // namespace detail

/// Maximizes `objective` over `space`: stratified coarse lattice, then
/// compass pattern search from the best grid cells (plus caller-provided
/// seed points), with step halving and projection onto each block. Returns
/// nullopt when no probed point is feasible. Deterministic given cfg.seed,
/// regardless of worker count.
template <typename F>
std::optional<Maximum> maximize(const F& objective, const SearchSpace& space,
                                const OptimizerConfig& cfg,
                                const std::vector<std::vector<double>>& seeds = {}) {
  cfg.validate();
  const int points = cfg.grid_points_per_dim;
  const std::uint64_t total = grid_size(space, points);
  if (total > 100'000'000ull) {
    throw BudgetError("maximize grid budget exceeded: " + std::to_string(total));
  }

  const size_t k = static_cast<size_t>(cfg.multistarts);
  std::vector<detail::Candidate> top = detail::scan_top_k(objective, space, points, total, k);

  // Start list: top grid cells, then seeds, then (only if the lattice could
  // not fill the multistart quota) seeded random space samples.
  std::vector<std::vector<double>> starts;
  std::vector<double> x;
  for (const auto& c : top) {
    decode_grid_point(space, points, c.index, x);
    starts.push_back(x);
  }
  for (const auto& s : seeds) {
    if (static_cast<int>(s.size()) != space.dim()) {
      throw ValidationError("seed point dimension mismatch");
    }
    std::vector<double> p = s;
    detail::project_point(space, p);
    starts.push_back(std::move(p));
  }
  if (starts.size() < k) {
    std::mt19937_64 rng(cfg.seed);
    auto unit = [&rng]() {
      return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    while (starts.size() < k) {
      std::vector<double> p(space.dim());
      size_t off = 0;
      for (const auto& b : space.blocks) {
        for (int i = 0; i < b.dim; ++i) {
          p[off + i] = b.kind == Block::Kind::Box
                           ? b.lo[i] + (b.hi[i] - b.lo[i]) * unit()
                           : b.mass * unit();
        }
        if (b.kind == Block::Kind::Simplex) {
          detail::project_simplex(p.data() + off, b.dim, b.mass);
        }
        off += b.dim;
      }
      starts.push_back(std::move(p));
    }
  }

  std::optional<Maximum> best;
  auto consider = [&](const std::vector<double>& p, double v) {
    if (!best || v > best->value) best = Maximum{p, v};
  };

  // Per-coordinate step scale: block mass or box extent.
  std::vector<double> scale(space.dim(), 1.0);
  {
    size_t off = 0;
    for (const auto& b : space.blocks) {
      for (int i = 0; i < b.dim; ++i) {
        scale[off + i] = b.kind == Block::Kind::Box ? (b.hi[i] - b.lo[i]) : b.mass;
      }
      off += b.dim;
    }
  }

  const double step0 = 1.0 / static_cast<double>(points - 1);
  for (const auto& start : starts) {
    std::vector<double> cur = start;
    auto curv = objective(cur);
    if (curv) consider(cur, *curv);
    double cur_value = curv ? *curv : -std::numeric_limits<double>::infinity();

    double step = step0;
    std::vector<double> probe;
    int sweeps = 0;
    while (step >= cfg.refine_tol_step && sweeps < 4000) {
      ++sweeps;
      double gain = 0.0;
      for (int i = 0; i < space.dim(); ++i) {
        for (double sgn : {+1.0, -1.0}) {
          if (scale[i] == 0.0) continue;
          probe = cur;
          probe[i] += sgn * step * scale[i];
          detail::project_point(space, probe);
          const auto v = objective(probe);
          if (v && *v > cur_value) {
            gain += std::isfinite(cur_value) ? *v - cur_value : 1.0;
            cur = probe;
            cur_value = *v;
            consider(cur, cur_value);
          }
        }
      }
      // Re-sweep while the step still pays; otherwise halve it.
      if (gain < cfg.refine_tol_rate) step *= 0.5;
    }
  }
  return best;
}

}  // namespace relaylab::opt
