#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gensub/errors.hpp"

namespace gensub {

namespace detail {

/// Fixed-width bit row used for the order matrix of a finite poset.
class bitrow {
 public:
  bitrow() = default;
  explicit bitrow(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const {
    return (w_[i >> 6] >> (i & 63)) & std::uint64_t{1};
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::size_t count_and(const bitrow& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(w_[i] & o.w_[i]));
    return c;
  }

  bool subset_of(const bitrow& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  /// First index set in *this but not in `o`, if any.
  std::optional<std::size_t> first_not_in(const bitrow& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (std::uint64_t d = w_[i] & ~o.w_[i]) {
        return i * 64 + static_cast<std::size_t>(std::countr_zero(d));
      }
    }
    return std::nullopt;
  }

  bitrow& operator|=(const bitrow& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t w = w_[i];
      while (w) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  bool operator==(const bitrow&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace detail

struct LawViolation {
  enum class Kind { Reflexivity, Antisymmetry, Transitivity };
  Kind kind;
  std::size_t a = 0, b = 0, c = 0;  // c meaningful for transitivity only
  std::string message;
};

struct LawReport {
  std::size_t elements_checked = 0;
  std::vector<LawViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// A finite partial order. Immutable once constructed; the full reflexive-
/// transitive order is materialized as a bit matrix, and the Hasse diagram
/// (transitive reduction) is kept canonical regardless of the edges supplied.
class Poset {
 public:
  Poset() = default;

  /// Build from cover edges (lower, upper). Edges may contain redundancies;
  /// they are reduced. Throws poset_error on cycles, element_not_found on
  /// out-of-range ids, and poset_error on duplicate labels.
  static Poset from_covers(std::vector<std::string> labels,
                           const std::vector<std::pair<std::size_t, std::size_t>>& covers) {
    Poset p;
    p.init_labels(std::move(labels));
    const std::size_t n = p.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indeg(n, 0);
    for (auto [lo, hi] : covers) {
      p.require_elem(lo);
      p.require_elem(hi);
      if (lo == hi) throw poset_error("self-loop cover on '" + p.labels_[lo] + "'");
      succ[lo].push_back(hi);
      ++indeg[hi];
    }
    // Kahn topological order; leftovers mean a cycle.
    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < n; ++v)
      if (indeg[v] == 0) stack.push_back(v);
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (std::size_t w : succ[v])
        if (--indeg[w] == 0) stack.push_back(w);
    }
    if (order.size() != n) throw poset_error("cover graph has a cycle");
    // Reflexive-transitive closure, processed from maximal elements down.
    p.up_.assign(n, detail::bitrow(n));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      std::size_t v = *it;
      p.up_[v].set(v);
      for (std::size_t w : succ[v]) p.up_[v] |= p.up_[w];
    }
    p.finish_from_up();
    return p;
  }

  /// Build from an arbitrary relation given as a predicate over element ids.
  /// Validates the poset laws and throws poset_error naming the first
  /// offending pair/triple.
  static Poset from_relation(std::vector<std::string> labels,
                             const std::function<bool(std::size_t, std::size_t)>& leq) {
    Poset p = from_relation_unchecked(std::move(labels), leq);
    LawReport r = p.check_laws();
    if (!r.ok()) throw poset_error("relation is not a partial order: " + r.violations.front().message);
    return p;
  }

  /// Build without validating the laws. Intended for diagnostics and test
  /// fixtures; check_laws() reports on whatever relation was stored.
  static Poset from_relation_unchecked(std::vector<std::string> labels,
                                       const std::function<bool(std::size_t, std::size_t)>& leq) {
    Poset p;
    p.init_labels(std::move(labels));
    const std::size_t n = p.size();
    p.up_.assign(n, detail::bitrow(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (leq(a, b)) p.up_[a].set(b);
    p.finish_from_up();
    return p;
  }

  std::size_t size() const { return labels_.size(); }

  bool leq(std::size_t a, std::size_t b) const {
    require_elem(a);
    require_elem(b);
    return up_[a].test(b);
  }

  const std::string& label(std::size_t e) const {
    require_elem(e);
    return labels_[e];
  }

  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Like find(), but throws element_not_found.
  std::size_t at(std::string_view label) const {
    if (auto e = find(label)) return *e;
    throw element_not_found("no element labeled '" + std::string(label) + "'");
  }

  /// Elements above `e`, including `e` itself.
  const detail::bitrow& above(std::size_t e) const {
    require_elem(e);
    return up_[e];
  }

  /// Elements below `e`, including `e` itself.
  const detail::bitrow& below(std::size_t e) const {
    require_elem(e);
    return down_[e];
  }

  std::size_t count_above(std::size_t e) const { return above(e).count(); }
  std::size_t count_below(std::size_t e) const { return below(e).count(); }

  /// The Hasse diagram: cover pairs (lower, upper), transitively reduced.
  const std::vector<std::pair<std::size_t, std::size_t>>& covers() const { return covers_; }

  /// All ordered pairs (a, b) with a <= b, reflexive pairs included.
  std::vector<std::pair<std::size_t, std::size_t>> comparable_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a)
      up_[a].for_each_set([&](std::size_t b) { out.emplace_back(a, b); });
    return out;
  }

  std::optional<std::size_t> unique_top() const { return unique_extreme(up_); }
  std::optional<std::size_t> unique_bottom() const { return unique_extreme(down_); }

  /// Exhaustive law check over the stored relation.
  LawReport check_laws() const {
    LawReport r;
    r.elements_checked = size();
    for (std::size_t a = 0; a < size(); ++a) {
      if (!up_[a].test(a)) {
        r.violations.push_back({LawViolation::Kind::Reflexivity, a, a, 0,
                                "not reflexive at '" + labels_[a] + "'"});
      }
    }
    for (std::size_t a = 0; a < size(); ++a) {
      up_[a].for_each_set([&](std::size_t b) {
        if (b != a && up_[b].test(a)) {
          if (a < b) {  // report each 2-cycle once
            r.violations.push_back({LawViolation::Kind::Antisymmetry, a, b, 0,
                                    "antisymmetry violated: '" + labels_[a] + "' <= '" +
                                        labels_[b] + "' and conversely"});
          }
        }
      });
    }
    for (std::size_t a = 0; a < size(); ++a) {
      up_[a].for_each_set([&](std::size_t b) {
        if (!up_[b].subset_of(up_[a])) {
          std::size_t c = *up_[b].first_not_in(up_[a]);
          r.violations.push_back({LawViolation::Kind::Transitivity, a, b, c,
                                  "transitivity violated on ('" + labels_[a] + "', '" +
                                      labels_[b] + "', '" + labels_[c] + "')"});
        }
      });
    }
    return r;
  }

  /// Reflexivity and antisymmetry exhaustively, transitivity on `samples`
  /// random triples. For posets too large for the cubic exhaustive check.
  LawReport check_laws_sampled(std::size_t samples, std::uint64_t seed) const {
    LawReport r;
    r.elements_checked = size();
    for (std::size_t a = 0; a < size(); ++a)
      if (!up_[a].test(a))
        r.violations.push_back({LawViolation::Kind::Reflexivity, a, a, 0,
                                "not reflexive at '" + labels_[a] + "'"});
    for (std::size_t a = 0; a < size(); ++a)
      up_[a].for_each_set([&](std::size_t b) {
        if (a < b && up_[b].test(a))
          r.violations.push_back({LawViolation::Kind::Antisymmetry, a, b, 0,
                                  "antisymmetry violated: '" + labels_[a] + "' <= '" +
                                      labels_[b] + "' and conversely"});
      });
    if (size() == 0) return r;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, size() - 1);
    for (std::size_t i = 0; i < samples; ++i) {
      std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
      if (up_[a].test(b) && up_[b].test(c) && !up_[a].test(c)) {
        r.violations.push_back({LawViolation::Kind::Transitivity, a, b, c,
                                "transitivity violated on ('" + labels_[a] + "', '" +
                                    labels_[b] + "', '" + labels_[c] + "')"});
      }
    }
    return r;
  }

  /// Hasse diagram in DOT form: one node per element, one edge per cover
  /// pair, pointing from subtype to supertype.
  void write_dot(std::ostream& os, const std::string& graph_name = "hasse") const {
    os << "digraph " << graph_name << " {\n";
    os << "  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t e = 0; e < size(); ++e)
      os << "  n" << e << " [label=\"" << dot_escape(labels_[e]) << "\"];\n";
    for (auto [lo, hi] : covers_) os << "  n" << lo << " -> n" << hi << ";\n";
    os << "}\n";
  }

 private:
  void init_labels(std::vector<std::string> labels) {
    labels_ = std::move(labels);
    for (std::size_t e = 0; e < labels_.size(); ++e) {
      if (!index_.emplace(labels_[e], e).second)
        throw poset_error("duplicate element label '" + labels_[e] + "'");
    }
  }

  void require_elem(std::size_t e) const {
    if (e >= labels_.size())
      throw element_not_found("element id " + std::to_string(e) + " out of range");
  }

  void finish_from_up() {
    const std::size_t n = size();
    down_.assign(n, detail::bitrow(n));
    for (std::size_t a = 0; a < n; ++a)
      up_[a].for_each_set([&](std::size_t b) { down_[b].set(a); });
    // Transitive reduction: (a, b) is a cover iff the closed interval
    // between them contains exactly a and b.
    covers_.clear();
    for (std::size_t a = 0; a < n; ++a)
      up_[a].for_each_set([&](std::size_t b) {
        if (a != b && up_[a].count_and(down_[b]) == 2) covers_.emplace_back(a, b);
      });
  }

  std::optional<std::size_t> unique_extreme(const std::vector<detail::bitrow>& rows) const {
    // x is the unique top iff every element's up-row contains x; dually for bottom.
    std::optional<std::size_t> found;
    for (std::size_t x = 0; x < size(); ++x) {
      if (rows[x].count() == 1) {
        bool all = true;
        for (std::size_t a = 0; a < size(); ++a)
          if (!rows[a].test(x)) {
            all = false;
            break;
          }
        if (all) {
          if (found) return std::nullopt;
          found = x;
        }
      }
    }
    return found;
  }

  static std::string dot_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out;
  }

  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<detail::bitrow> up_;    // up_[a].test(b)  iff  a <= b
  std::vector<detail::bitrow> down_;  // transpose
  std::vector<std::pair<std::size_t, std::size_t>> covers_;
};

inline LawReport check_poset_laws(const Poset& p) { return p.check_laws(); }

inline std::vector<std::pair<std::size_t, std::size_t>> comparable_pairs(const Poset& p) {
  return p.comparable_pairs();
}

/// A poset together with its (verified) top and bottom elements.
struct BoundedPoset {
  Poset poset;
  std::size_t top = 0;
  std::size_t bottom = 0;

  /// Wraps `p`, locating its unique top and bottom. Throws precondition_error
  /// if either is missing.
  static BoundedPoset ensure(Poset p) {
    auto t = p.unique_top();
    auto b = p.unique_bottom();
    if (!t || !b) throw precondition_error("poset is not bounded (no unique top/bottom)");
    return BoundedPoset{std::move(p), *t, *b};
  }
};

/// Backtracking order-isomorphism test. Elements are first partitioned by
/// (down-set size, up-set size) signatures; assignment proceeds most-
/// constrained first. Feasible for the small posets this library handles.
inline bool order_isomorphic(const Poset& p, const Poset& q) {
  const std::size_t n = p.size();
  if (q.size() != n) return false;
  if (n == 0) return true;

  using Sig = std::pair<std::size_t, std::size_t>;
  auto sig_of = [](const Poset& r, std::size_t e) -> Sig {
    return {r.count_below(e), r.count_above(e)};
  };
  std::map<Sig, std::vector<std::size_t>> q_by_sig;
  for (std::size_t e = 0; e < n; ++e) q_by_sig[sig_of(q, e)].push_back(e);

  std::vector<std::vector<std::size_t>> cand(n);
  for (std::size_t e = 0; e < n; ++e) {
    auto it = q_by_sig.find(sig_of(p, e));
    if (it == q_by_sig.end()) return false;
    cand[e] = it->second;
  }
  // Sanity: signature multisets must match exactly.
  {
    std::map<Sig, std::size_t> pc;
    for (std::size_t e = 0; e < n; ++e) ++pc[sig_of(p, e)];
    for (auto& [sig, elems] : q_by_sig)
      if (pc[sig] != elems.size()) return false;
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cand[a].size() < cand[b].size();
  });

  std::vector<std::size_t> assign(n, SIZE_MAX);
  std::vector<bool> used(n, false);

  std::function<bool(std::size_t)> search = [&](std::size_t idx) -> bool {
    if (idx == n) return true;
    std::size_t x = order[idx];
    for (std::size_t y : cand[x]) {
      if (used[y]) continue;
      bool consistent = true;
      for (std::size_t j = 0; j < idx; ++j) {
        std::size_t x2 = order[j], y2 = assign[x2];
        if (p.leq(x, x2) != q.leq(y, y2) || p.leq(x2, x) != q.leq(y2, y)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      used[y] = true;
      assign[x] = y;
      if (search(idx + 1)) return true;
      used[y] = false;
      assign[x] = SIZE_MAX;
    }
    return false;
  };
  return search(0);
}

}  // namespace gensub
