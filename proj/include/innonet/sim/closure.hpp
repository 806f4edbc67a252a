#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "innonet/core/errors.hpp"
#include "innonet/core/idea_set.hpp"
#include "innonet/sim/network.hpp"

namespace innonet {

/// Strongly connected components of the indirect-learning graph (edge
/// learner -> source for every indirect arc) with the knowledge shared by each
/// component: every idea learned directly by a member or by any component it
/// reaches. Buffers are reused across build() calls.
class Condensation {
 public:
  void build(const RealizedNetwork& net) {
    n_ = net.n;
    words_ = (net.idea_count() + 63) / 64;
    scc_of_.assign(n_, kUnset);
    index_.assign(n_, kUnset);
    low_.assign(n_, 0);
    on_stack_.assign(n_, 0);
    stack_.clear();
    members_.clear();
    member_start_.assign(1, 0);
    bits_.clear();
    scc_count_ = 0;
    std::uint32_t counter = 0;

    struct Frame {
      std::uint32_t v;
      std::uint32_t pos;
    };
    std::vector<Frame> calls;
    for (std::uint32_t root = 0; root < n_; ++root) {
      if (index_[root] != kUnset) continue;
      calls.push_back({root, 0});
      index_[root] = low_[root] = counter++;
      stack_.push_back(root);
      on_stack_[root] = 1;
      while (!calls.empty()) {
        auto& fr = calls.back();
        const auto& arcs = net.in[fr.v];
        if (fr.pos < arcs.size()) {
          const InArc a = arcs[fr.pos++];
          if (!a.indirect) continue;
          const auto w = a.source;
          if (index_[w] == kUnset) {
            index_[w] = low_[w] = counter++;
            stack_.push_back(w);
            on_stack_[w] = 1;
            calls.push_back({w, 0});
          } else if (on_stack_[w]) {
            low_[fr.v] = std::min(low_[fr.v], index_[w]);
          }
          continue;
        }
        const auto v = fr.v;
        calls.pop_back();
        if (!calls.empty()) low_[calls.back().v] = std::min(low_[calls.back().v], low_[v]);
        if (low_[v] == index_[v]) emit(net, v);
      }
    }
  }

  std::size_t firm_count() const noexcept { return n_; }
  std::size_t word_count() const noexcept { return words_; }
  std::size_t scc_count() const noexcept { return scc_count_; }
  std::uint32_t scc_of(std::size_t firm) const noexcept { return scc_of_[firm]; }
  std::span<const std::uint32_t> members(std::size_t scc) const noexcept {
    return {members_.data() + member_start_[scc], member_start_[scc + 1] - member_start_[scc]};
  }
  /// Knowledge shared by the component (may include members' own ideas).
  std::span<const std::uint64_t> shared(std::size_t scc) const noexcept {
    return {bits_.data() + scc * words_, words_};
  }

  /// Full knowledge of a firm: shared set plus its own discovered ideas.
  void knowledge_of(const RealizedNetwork& net, std::size_t firm, IdeaSet& out) const {
    auto dst = out.words();
    auto src = shared(scc_of_[firm]);
    std::copy(src.begin(), src.end(), dst.begin());
    net.add_own_discovered(firm, out);
  }

  bool knows(const RealizedNetwork& net, std::size_t firm, std::size_t idea) const noexcept {
    if (net.idea_owner[idea] == firm) return net.discovered.test(idea);
    return (shared(scc_of_[firm])[idea >> 6] >> (idea & 63)) & 1u;
  }

 private:
  static constexpr std::uint32_t kUnset = 0xffffffffu;

  void emit(const RealizedNetwork& net, std::uint32_t root) {
    const auto id = static_cast<std::uint32_t>(scc_count_++);
    const std::size_t first = members_.size();
    for (;;) {
      const auto w = stack_.back();
      stack_.pop_back();
      on_stack_[w] = 0;
      scc_of_[w] = id;
      members_.push_back(w);
      if (w == root) break;
    }
    std::sort(members_.begin() + static_cast<std::ptrdiff_t>(first), members_.end());
    member_start_.push_back(static_cast<std::uint32_t>(members_.size()));
    bits_.resize(bits_.size() + words_, 0);
    std::uint64_t* row = bits_.data() + static_cast<std::size_t>(id) * words_;
    for (std::size_t m = first; m < members_.size(); ++m) {
      for (const auto& a : net.in[members_[m]]) {
        for (auto x = net.idea_offset[a.source]; x < net.idea_offset[a.source + 1]; ++x)
          if (net.discovered.test(x)) row[x >> 6] |= std::uint64_t{1} << (x & 63);
        if (a.indirect) {
          const auto s = scc_of_[a.source];
          if (s != id) {
            const std::uint64_t* src = bits_.data() + static_cast<std::size_t>(s) * words_;
            for (std::size_t w = 0; w < words_; ++w) row[w] |= src[w];
          }
        }
      }
    }
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::size_t scc_count_ = 0;
  std::vector<std::uint32_t> scc_of_, index_, low_;
  std::vector<std::uint8_t> on_stack_;
  std::vector<std::uint32_t> stack_;
  std::vector<std::uint32_t> members_, member_start_;
  std::vector<std::uint64_t> bits_;
};

/// Learned sets I_i, the reverse index and optionally reachability.
struct KnowledgeState {
  std::size_t n = 0;
  std::uint64_t network_fingerprint = 0;
  Condensation condensation;
  /// I_i: ideas learned from others (own ideas excluded).
  std::vector<IdeaSet> learned;
  /// Per idea, firms j with the idea in I_j.
  std::vector<IdeaSet> knows_idea;
  /// Per firm, firms reachable over indirect arcs (excluding itself unless on a cycle).
  std::optional<std::vector<IdeaSet>> reach;

  /// Own discovered ideas plus learned ideas.
  IdeaSet knowledge(const RealizedNetwork& net, std::size_t firm) const {
    IdeaSet k = learned[firm];
    net.add_own_discovered(firm, k);
    return k;
  }

  void check_against(const RealizedNetwork& net) const {
    if (net.n != n || net.fingerprint() != network_fingerprint)
      throw IntegrityError("knowledge state was computed for a different network");
  }
};

inline KnowledgeState knowledge_closure(const RealizedNetwork& net, bool with_reach = false) {
  KnowledgeState ks;
  ks.n = net.n;
  ks.network_fingerprint = net.fingerprint();
  ks.condensation.build(net);
  const std::size_t ideas = net.idea_count();
  ks.learned.assign(net.n, IdeaSet(ideas));
  ks.knows_idea.assign(ideas, IdeaSet(net.n));
  for (std::size_t i = 0; i < net.n; ++i) {
    auto dst = ks.learned[i].words();
    auto src = ks.condensation.shared(ks.condensation.scc_of(i));
    std::copy(src.begin(), src.end(), dst.begin());
    for (auto x = net.idea_offset[i]; x < net.idea_offset[i + 1]; ++x) ks.learned[i].reset(x);
    ks.learned[i].for_each([&](std::size_t x) { ks.knows_idea[x].set(i); });
  }
  if (with_reach) {
    std::vector<IdeaSet> reach(net.n, IdeaSet(net.n));
    std::vector<std::uint32_t> queue;
    for (std::size_t i = 0; i < net.n; ++i) {
      queue.clear();
      for (const auto& a : net.in[i])
        if (a.indirect && !reach[i].test(a.source)) {
          reach[i].set(a.source);
          queue.push_back(a.source);
        }
      for (std::size_t h = 0; h < queue.size(); ++h)
        for (const auto& a : net.in[queue[h]])
          if (a.indirect && !reach[i].test(a.source)) {
            reach[i].set(a.source);
            queue.push_back(a.source);
          }
    }
    ks.reach = std::move(reach);
  }
  return ks;
}

}  // namespace innonet
