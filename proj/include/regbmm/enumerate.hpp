#pragma once

// Constant-delay triangle enumeration. The parts are split into about
// sqrt(n) groups; light subgraphs and the heaviest one are listed up front,
// and every later heavy subgraph is listed a few steps at a time while the
// previous one is being emitted.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bitmatrix.hpp"
#include "random.hpp"
#include "triangle.hpp"

namespace regbmm {

enum class CountingBackend { Exact, Sampled };

struct EnumConfig {
  ListingParams listing;
  CountingBackend counting = CountingBackend::Exact;
  /// Elementary steps allowed per next() call; at least 4.
  std::size_t budget = 8;
  std::size_t groups = 0;  // 0: ceil(sqrt(max part))
  std::uint64_t seed = 1;
  std::size_t sample_pairs = 64;
};

struct EnumStats {
  std::size_t subgraphs = 0;
  std::size_t heavy = 0;
  std::size_t light_triangles = 0;
  std::size_t calls = 0;
  std::size_t max_steps = 0;
  std::size_t budget_overruns = 0;
  std::uint64_t heavy_threshold = 0;
};

namespace detail {

/// Lists the triangles of one subgraph, one elementary step at a time.
class StepLister {
 public:
  StepLister(const TripartiteGraph& g, const BoolMatrix& bt, IndexSet xs, IndexSet ys, IndexSet zs)
      : g_(&g), bt_(&bt), xs_(std::move(xs)), zs_(std::move(zs)) {
    mask_.assign(g.a.words_per_row(), 0);
    for (Index y : ys) mask_[y / kWordBits] |= Word{1} << (y % kWordBits);
    hits_.assign(mask_.size(), 0);
  }

  bool done() const { return pair_ >= xs_.size() * zs_.size() && pending_ == 0; }

  /// One step: either open the next (x, z) pair or emit one triangle of the open pair.
  void step(std::vector<Triangle>& out) {
    if (pending_ != 0) {
      while (hits_[word_] == 0) ++word_;
      const Word w = hits_[word_];
      const auto y = static_cast<Index>(word_ * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
      hits_[word_] = w & (w - 1);
      --pending_;
      out.push_back({cur_x_, y, cur_z_});
      return;
    }
    if (pair_ >= xs_.size() * zs_.size()) return;
    cur_x_ = xs_[pair_ / zs_.size()];
    cur_z_ = zs_[pair_ % zs_.size()];
    ++pair_;
    word_ = 0;
    if (!g_->c.get(cur_x_, cur_z_)) return;
    auto ax = g_->a.row(cur_x_);
    auto bz = bt_->row(cur_z_);
    for (std::size_t i = 0; i < mask_.size(); ++i) {
      hits_[i] = ax[i] & bz[i] & mask_[i];
      pending_ += static_cast<std::size_t>(std::popcount(hits_[i]));
    }
  }

 private:
  const TripartiteGraph* g_;
  const BoolMatrix* bt_;
  IndexSet xs_;
  IndexSet zs_;
  std::vector<Word> mask_;
  std::vector<Word> hits_;
  std::size_t pair_ = 0;
  std::size_t word_ = 0;
  std::size_t pending_ = 0;
  Index cur_x_ = 0;
  Index cur_z_ = 0;
};

inline std::vector<IndexSet> split_groups(std::size_t n, std::size_t g) {
  std::vector<IndexSet> out;
  if (n == 0) return out;
  g = std::min(g, n);
  for (std::size_t i = 0; i < g; ++i) {
    std::vector<Index> m;
    for (std::size_t v = i * n / g; v < (i + 1) * n / g; ++v) m.push_back(static_cast<Index>(v));
    out.emplace_back(std::move(m));
  }
  return out;
}

}  // namespace detail

class Enumerator {
 public:
  Enumerator(TripartiteGraph g, EnumConfig cfg) : g_(std::move(g)), cfg_(std::move(cfg)) {
    g_.validate();
    if (cfg_.budget < 4) throw std::invalid_argument("enumeration budget must be at least 4");
    bt_ = transpose(g_.b);
    preprocess();
  }

  Enumerator(const Enumerator&) = delete;
  Enumerator& operator=(const Enumerator&) = delete;
  Enumerator(Enumerator&&) = delete;

  std::optional<Triangle> next() {
    if (active_pos_ >= active_.size()) return std::nullopt;
    ++stats_.calls;
    std::size_t steps = 1;
    const Triangle t = active_[active_pos_++];
    const std::size_t lister_steps = cfg_.budget - 2;
    for (std::size_t i = 0; i < lister_steps && lister_ && !lister_->done(); ++i) {
      lister_->step(prepared_);
      ++steps;
    }
    if (active_pos_ >= active_.size() && lister_) {
      if (!lister_->done()) {
        if (cfg_.counting == CountingBackend::Exact) {
          throw std::logic_error("enumeration: next heavy subgraph not ready when the active one ran out");
        }
        ++stats_.budget_overruns;
        while (!lister_->done()) {
          lister_->step(prepared_);
          ++steps;
        }
      }
      switch_active();
      ++steps;
    }
    stats_.max_steps = std::max(stats_.max_steps, steps);
    return t;
  }

  const EnumStats& stats() const { return stats_; }
  std::size_t budget() const { return cfg_.budget; }

 private:
  struct Sub {
    IndexSet xs;
    IndexSet ys;
    IndexSet zs;
    std::uint64_t count = 0;
  };

  std::uint64_t count_sub(const Sub& s, Rng& rng) const {
    if (cfg_.counting == CountingBackend::Exact) {
      std::uint64_t n = 0;
      std::vector<Word> mask(g_.a.words_per_row(), 0);
      for (Index y : s.ys) mask[y / kWordBits] |= Word{1} << (y % kWordBits);
      for (Index x : s.xs) {
        auto ax = g_.a.row(x);
        for (Index z : s.zs) {
          if (!g_.c.get(x, z)) continue;
          auto bz = bt_.row(z);
          for (std::size_t i = 0; i < mask.size(); ++i) n += std::popcount(ax[i] & bz[i] & mask[i]);
        }
      }
      return n;
    }
    // Sampled: average triangle count over random (x, z) pairs, scaled up.
    const std::uint64_t pairs = static_cast<std::uint64_t>(s.xs.size()) * s.zs.size();
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < cfg_.sample_pairs; ++i) {
      const Index x = s.xs[rng.below(s.xs.size())];
      const Index z = s.zs[rng.below(s.zs.size())];
      if (!g_.c.get(x, z)) continue;
      for (Index y : s.ys) hits += (g_.a.get(x, y) && g_.b.get(y, z)) ? 1 : 0;
    }
    return (hits * pairs + cfg_.sample_pairs / 2) / cfg_.sample_pairs;
  }

  std::vector<Triangle> list_sub(const Sub& s) const {
    TripartiteGraph sg(unlabeled(submatrix(g_.a, s.xs, s.ys)), unlabeled(submatrix(g_.b, s.ys, s.zs)),
                       unlabeled(submatrix(g_.c, s.xs, s.zs)));
    std::vector<Triangle> out = list_triangles(sg, cfg_.listing);
    for (auto& t : out) t = {s.xs[t.x], s.ys[t.y], s.zs[t.z]};
    return out;
  }

  void preprocess() {
    if (g_.nx() == 0 || g_.ny() == 0 || g_.nz() == 0) return;
    const std::size_t n = std::max({g_.nx(), g_.ny(), g_.nz()});
    std::size_t groups = cfg_.groups;
    if (groups == 0) {
      while (groups * groups < n) ++groups;
    }
    const auto gx = detail::split_groups(g_.nx(), groups);
    const auto gy = detail::split_groups(g_.ny(), groups);
    const auto gz = detail::split_groups(g_.nz(), groups);
    std::size_t sx = 0;
    std::size_t sz = 0;
    for (const auto& s : gx) sx = std::max(sx, s.size());
    for (const auto& s : gz) sz = std::max(sz, s.size());
    // A heavy subgraph emits long enough to pay for listing the next one.
    const std::uint64_t threshold = (sx * sz + cfg_.budget - 4) / (cfg_.budget - 3);
    stats_.heavy_threshold = std::max<std::uint64_t>(threshold, 1);

    Rng rng(cfg_.seed);
    std::vector<Sub> heavy;
    for (const auto& xs : gx) {
      for (const auto& ys : gy) {
        for (const auto& zs : gz) {
          Sub s{xs, ys, zs, 0};
          s.count = count_sub(s, rng);
          ++stats_.subgraphs;
          if (s.count >= stats_.heavy_threshold) {
            heavy.push_back(std::move(s));
          } else {
            auto part = list_sub(s);
            stats_.light_triangles += part.size();
            active_.insert(active_.end(), part.begin(), part.end());
          }
        }
      }
    }
    std::stable_sort(heavy.begin(), heavy.end(), [](const Sub& l, const Sub& r) { return l.count > r.count; });
    stats_.heavy = heavy.size();
    heavy_.assign(std::make_move_iterator(heavy.begin()), std::make_move_iterator(heavy.end()));
    if (!heavy_.empty()) {
      auto first = list_sub(heavy_.front());
      heavy_.pop_front();
      active_.insert(active_.end(), first.begin(), first.end());
    }
    start_lister();
    if (active_.empty() && lister_) {
      while (!lister_->done()) lister_->step(prepared_);
      switch_active();
    }
  }

  void start_lister() {
    lister_.reset();
    prepared_.clear();
    if (heavy_.empty()) return;
    const Sub& s = heavy_.front();
    lister_.emplace(g_, bt_, s.xs, s.ys, s.zs);
    heavy_.pop_front();
  }

  void switch_active() {
    active_ = std::move(prepared_);
    active_pos_ = 0;
    start_lister();
    // A sampled count may call a graph heavy that has no triangles.
    while (active_.empty() && lister_) {
      ++stats_.budget_overruns;
      while (!lister_->done()) lister_->step(prepared_);
      active_ = std::move(prepared_);
      start_lister();
    }
  }

  TripartiteGraph g_;
  EnumConfig cfg_;
  BoolMatrix bt_;
  std::vector<Triangle> active_;
  std::size_t active_pos_ = 0;
  std::deque<Sub> heavy_;
  std::optional<detail::StepLister> lister_;
  std::vector<Triangle> prepared_;
  EnumStats stats_;
};

/// Drains an enumerator into a vector, in emission order.
inline std::vector<Triangle> enumerate_all(Enumerator& e) {
  std::vector<Triangle> out;
  while (auto t = e.next()) out.push_back(*t);
  return out;
}

}  // namespace regbmm
