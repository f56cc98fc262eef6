#ifndef CHAINGEO_SEARCH_HPP
#define CHAINGEO_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "chaingeo/incidence.hpp"

namespace chaingeo {

struct search_options {
  /// Sizes below this are not tried; must be a valid lower bound.
  std::size_t lower_bound = 0;
  std::optional<std::size_t> max_size;
  bool all_minima = false;
  unsigned jobs = 1;
};

struct search_result {
  bool found = false;
  std::size_t size = 0;
  /// Lexicographically least minimum hitting set.
  std::vector<point_id> witness;
  /// Every minimum hitting set, lexicographic order (only with all_minima).
  std::vector<std::vector<point_id>> minima;
  std::uint64_t nodes = 0;
};

namespace detail {

class hitting_set_search {
 public:
  explicit hitting_set_search(const incidence& s) : s_(s), words_((s.blocks.size() + 63) / 64) {
    masks_.assign(s.v, std::vector<std::uint64_t>(words_, 0));
    for (std::size_t b = 0; b < s.blocks.size(); ++b)
      for (auto p : s.blocks[b]) masks_[p][b / 64] |= std::uint64_t(1) << (b % 64);
    std::size_t best = 0;
    suffix_degree_.assign(s.v + 1, 0);
    for (std::size_t p = s.v; p-- > 0;) {
      std::size_t deg = 0;
      for (auto w : masks_[p]) deg += std::popcount(w);
      best = std::max(best, deg);
      suffix_degree_[p] = best;
    }
  }

  /// Hitting sets of exactly `k` points whose least element is `first`.
  /// Stops after the first one unless `collect_all`.
  void run(std::size_t k, point_id first, bool collect_all, std::vector<std::vector<point_id>>& out,
           std::uint64_t& nodes) const {
    std::vector<std::uint64_t> covered(words_, 0);
    std::vector<point_id> chosen;
    chosen.reserve(k);
    const std::size_t cap = cap_for(covered, -1);
    if (first > cap) return;
    chosen.push_back(first);
    add(covered, first);
    dfs(k, covered, chosen, collect_all, out, nodes);
  }

  /// Largest admissible next point with nothing chosen yet.
  std::size_t first_cap() const {
    std::vector<std::uint64_t> covered(words_, 0);
    return cap_for(covered, -1);
  }

 private:
  void add(std::vector<std::uint64_t>& covered, point_id p) const {
    for (std::size_t w = 0; w < words_; ++w) covered[w] |= masks_[p][w];
  }

  // Least maximum id over uncovered blocks, or -1 if a block is out of reach.
  // v when everything is covered.
  long long cap_for(const std::vector<std::uint64_t>& covered, long long last) const {
    long long cap = static_cast<long long>(s_.v);
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t open = ~covered[w];
      if (w + 1 == words_ && s_.blocks.size() % 64) open &= (std::uint64_t(1) << (s_.blocks.size() % 64)) - 1;
      while (open) {
        const std::size_t b = w * 64 + std::countr_zero(open);
        open &= open - 1;
        const long long top = s_.blocks[b].back();
        if (top <= last) return -1;
        cap = std::min(cap, top);
      }
    }
    return cap;
  }

  std::size_t uncovered(const std::vector<std::uint64_t>& covered) const {
    std::size_t n = 0;
    for (auto w : covered) n += std::popcount(w);
    return s_.blocks.size() - n;
  }

  bool dfs(std::size_t k, std::vector<std::uint64_t>& covered, std::vector<point_id>& chosen, bool collect_all,
           std::vector<std::vector<point_id>>& out, std::uint64_t& nodes) const {
    ++nodes;
    const long long last = chosen.back();
    const long long cap = cap_for(covered, last);
    if (cap < 0) return false;
    if (cap == static_cast<long long>(s_.v)) {
      out.push_back(chosen);
      return !collect_all;
    }
    const std::size_t left = k - chosen.size();
    if (left == 0) return false;
    const std::size_t open = uncovered(covered);
    const std::size_t reach = suffix_degree_[last + 1];
    if (reach == 0 || (open + reach - 1) / reach > left) return false;
    const auto saved = covered;
    for (long long c = last + 1; c <= cap; ++c) {
      chosen.push_back(static_cast<point_id>(c));
      add(covered, static_cast<point_id>(c));
      const bool stop = dfs(k, covered, chosen, collect_all, out, nodes);
      covered = saved;
      chosen.pop_back();
      if (stop) return true;
    }
    return false;
  }

  const incidence& s_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> masks_;
  std::vector<std::size_t> suffix_degree_;
};

}  // namespace detail

/// Exact minimum hitting set of the blocks.
///
/// Iterative deepening from `lower_bound`. Each depth enumerates sorted
/// point sequences in lexicographic order; the next point never exceeds the
/// least maximum id among still-uncovered blocks. The first set found at
/// the first feasible depth is therefore the lexicographically least
/// minimum. With jobs > 1 the candidates for the least element are shared
/// out and the smallest successful one wins, so output does not depend on
/// the worker count.
inline search_result min_hitting_set(const incidence& s, const search_options& opt = {}) {
  search_result res;
  if (s.blocks.empty()) {
    res.found = true;
    return res;
  }
  const detail::hitting_set_search engine(s);
  const std::size_t top = engine.first_cap();
  const unsigned jobs = std::max(1u, opt.jobs);
  for (std::size_t k = std::max<std::size_t>(1, opt.lower_bound); k <= s.v; ++k) {
    if (opt.max_size && k > *opt.max_size) break;
    std::vector<std::vector<std::vector<point_id>>> per_first(top + 1);
    std::vector<std::uint64_t> per_nodes(top + 1, 0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{top + 1};
    auto work = [&] {
      for (std::size_t f; (f = next.fetch_add(1)) <= top;) {
        if (!opt.all_minima && f > best.load()) continue;
        engine.run(k, static_cast<point_id>(f), opt.all_minima, per_first[f], per_nodes[f]);
        if (!per_first[f].empty()) {
          std::size_t cur = best.load();
          while (f < cur && !best.compare_exchange_weak(cur, f)) {
          }
        }
      }
    };
    if (jobs == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (auto n : per_nodes) res.nodes += n;
    for (std::size_t f = 0; f <= top; ++f) {
      if (per_first[f].empty()) continue;
      if (!res.found) {
        res.found = true;
        res.size = per_first[f].front().size();
        res.witness = per_first[f].front();
      }
      if (opt.all_minima)
        for (auto& m : per_first[f]) res.minima.push_back(std::move(m));
      else
        break;
    }
    if (res.found) break;
  }
  return res;
}

/// True iff every block meets the set.
inline bool hits_all(const incidence& s, const std::vector<point_id>& set) {
  std::vector<bool> in(s.v, false);
  for (auto p : set) in[p] = true;
  return std::all_of(s.blocks.begin(), s.blocks.end(), [&](const auto& b) {
    return std::any_of(b.begin(), b.end(), [&](point_id p) { return in[p]; });
  });
}

}  // namespace chaingeo

#endif  // CHAINGEO_SEARCH_HPP
