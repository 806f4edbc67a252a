#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "innonet/core/errors.hpp"
#include "innonet/core/idea_set.hpp"
#include "innonet/core/rng.hpp"
#include "innonet/model/types.hpp"

namespace innonet {

/// Arc (learner <- source). `indirect` means the learner also takes everything
/// the source knows.
struct InArc {
  std::uint32_t source = 0;
  bool indirect = false;
  friend bool operator==(const InArc&, const InArc&) = default;
};

/// One sampled outcome. Ideas are numbered firm by firm: firm i owns ideas
/// [idea_offset[i], idea_offset[i+1]).
struct RealizedNetwork {
  std::size_t n = 0;
  std::vector<std::uint32_t> idea_offset;
  std::vector<std::uint32_t> idea_owner;
  IdeaSet discovered;
  std::vector<std::vector<InArc>> in;

  RealizedNetwork() = default;
  explicit RealizedNetwork(const std::vector<unsigned>& sigma) { reset(sigma); }

  void reset(const std::vector<unsigned>& sigma) {
    n = sigma.size();
    idea_offset.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) idea_offset[i + 1] = idea_offset[i] + sigma[i];
    idea_owner.resize(idea_offset[n]);
    for (std::size_t i = 0; i < n; ++i)
      for (auto x = idea_offset[i]; x < idea_offset[i + 1]; ++x) idea_owner[x] = static_cast<std::uint32_t>(i);
    discovered = IdeaSet(idea_offset[n]);
    in.assign(n, {});
  }

  std::size_t idea_count() const noexcept { return idea_offset.empty() ? 0 : idea_offset[n]; }
  unsigned sigma(std::size_t i) const noexcept { return idea_offset[i + 1] - idea_offset[i]; }
  std::uint32_t idea(std::size_t firm, unsigned slot) const noexcept {
    return idea_offset[firm] + slot;
  }

  bool any_discovered(std::size_t firm) const noexcept {
    for (auto x = idea_offset[firm]; x < idea_offset[firm + 1]; ++x)
      if (discovered.test(x)) return true;
    return false;
  }

  /// Sets the firm's discovered own ideas in `out`.
  void add_own_discovered(std::size_t firm, IdeaSet& out) const noexcept {
    for (auto x = idea_offset[firm]; x < idea_offset[firm + 1]; ++x)
      if (discovered.test(x)) out.set(x);
  }

  void add_arc(std::size_t learner, std::size_t source, bool indirect) {
    require(learner < n && source < n, "arc endpoint out of range");
    require(learner != source, "self arcs are not allowed");
    for (auto& a : in[learner]) {
      if (a.source == source) {
        a.indirect = a.indirect || indirect;
        return;
      }
    }
    in[learner].push_back({static_cast<std::uint32_t>(source), indirect});
  }

  bool has_arc(std::size_t learner, std::size_t source) const {
    for (const auto& a : in[learner])
      if (a.source == source) return true;
    return false;
  }

  /// For every firm, the firms that learn directly from it.
  std::vector<std::vector<std::uint32_t>> listeners() const {
    std::vector<std::vector<std::uint32_t>> out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& a : in[i]) out[a.source].push_back(static_cast<std::uint32_t>(i));
    return out;
  }

  std::size_t direct_arc_count() const noexcept {
    std::size_t c = 0;
    for (const auto& v : in) c += v.size();
    return c;
  }
  std::size_t indirect_arc_count() const noexcept {
    std::size_t c = 0;
    for (const auto& v : in)
      for (const auto& a : v) c += a.indirect;
    return c;
  }

  void canonicalize() {
    for (auto& v : in)
      std::sort(v.begin(), v.end(),
                [](const InArc& a, const InArc& b) { return a.source < b.source; });
  }

  /// Content hash used to tie derived state back to this realization.
  std::uint64_t fingerprint() const {
    std::uint64_t h = derive_seed(n, idea_count(), discovered.hash());
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& a : in[i]) h = derive_seed(h, i, a.source, a.indirect);
    return h;
  }

  void validate() const {
    require(in.size() == n && idea_offset.size() == n + 1, "network shape mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < in[i].size(); ++a) {
        require(in[i][a].source < n, "arc source out of range");
        require(in[i][a].source != i, "self arc");
        for (std::size_t b = a + 1; b < in[i].size(); ++b)
          require(in[i][a].source != in[i][b].source, "duplicate arc");
      }
    }
  }
};

inline std::vector<unsigned> sigma_of(const std::vector<FirmProfile>& profiles) {
  std::vector<unsigned> s(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) s[i] = profiles[i].sigma;
  return s;
}

/// Slot `slot` of firm i is discovered iff its keyed uniform falls below p_i.
/// Keyed draws couple realizations across different p.
inline double discovery_uniform(std::uint64_t rep_key, std::uint64_t stream, unsigned slot) {
  return hash_unit(rep_key, stream::kDiscovery, stream, slot);
}

inline void sample_discoveries(const std::vector<FirmProfile>& profiles, std::uint64_t rep_key,
                               RealizedNetwork& net) {
  net.discovered.clear();
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto sid = stream_of(profiles, i);
    for (unsigned s = 0; s < profiles[i].sigma; ++s)
      if (discovery_uniform(rep_key, sid, s) < profiles[i].p) net.discovered.set(net.idea(i, s));
  }
}

inline IdeaSet sample_discoveries(const std::vector<FirmProfile>& profiles,
                                  std::uint64_t rep_key) {
  RealizedNetwork net(sigma_of(profiles));
  sample_discoveries(profiles, rep_key, net);
  return net.discovered;
}

enum class ArcSampling {
  /// Geometric skipping through blocks of identical senders; O(n + arcs).
  skip,
  /// One keyed uniform per ordered pair; O(n^2). Monotone in q and
  /// equivariant under relabeling together with the stream ids.
  pairwise,
};

/// Senders grouped by the attributes that enter arc_probability as a source.
struct SenderBlocks {
  std::vector<std::vector<std::uint32_t>> members;
  std::vector<std::size_t> representative;
};

inline SenderBlocks make_sender_blocks(const std::vector<FirmProfile>& profiles,
                                  std::optional<std::size_t> exclude) {
  using Key = std::tuple<bool, bool, double, double, double>;
  auto key = [&](std::size_t i) {
    const auto& f = profiles[i];
    return Key{f.is_public, f.directed(), f.q, f.q_public.value_or(0.0),
               f.q_private.value_or(0.0)};
  };
  std::vector<std::uint32_t> order;
  order.reserve(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i)
    if (!exclude || *exclude != i) order.push_back(static_cast<std::uint32_t>(i));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
  SenderBlocks blocks;
  for (std::size_t pos = 0; pos < order.size();) {
    std::size_t end = pos + 1;
    while (end < order.size() && key(order[end]) == key(order[pos])) ++end;
    std::vector<std::uint32_t> m(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                 order.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(m.begin(), m.end());
    blocks.representative.push_back(m.front());
    blocks.members.push_back(std::move(m));
    pos = end;
  }
  // Deterministic block order independent of the key's floating-point order.
  std::vector<std::size_t> idx(blocks.members.size());
  for (std::size_t b = 0; b < idx.size(); ++b) idx[b] = b;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return blocks.representative[a] < blocks.representative[b];
  });
  SenderBlocks sorted;
  for (auto b : idx) {
    sorted.members.push_back(std::move(blocks.members[b]));
    sorted.representative.push_back(blocks.representative[b]);
  }
  return sorted;
}

/// Geometric-skip arc sampler over precomputed sender blocks.
inline void sample_arcs_skip(const std::vector<FirmProfile>& profiles, const WorldConfig& world,
                             std::uint64_t rep_key, const SenderBlocks& blocks,
                             RealizedNetwork& net,
                             std::optional<std::size_t> exclude = std::nullopt) {
  const std::size_t n = profiles.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto& arcs = net.in[i];
    arcs.clear();
    if (exclude && *exclude == i) continue;
    Rng rng(derive_seed(rep_key, stream::kArcs, stream_of(profiles, i)));
    for (std::size_t b = 0; b < blocks.members.size(); ++b) {
      const auto& members = blocks.members[b];
      const double prob =
          std::min(1.0, arc_probability(profiles[i], profiles[blocks.representative[b]]));
      if (prob <= 0.0) continue;
      if (prob >= 1.0) {
        for (auto j : members)
          if (j != i) arcs.push_back({j, rng.uniform() < world.delta});
        continue;
      }
      const double log_q = std::log1p(-prob);
      std::uint64_t pos = rng.geometric_skip(log_q);
      while (pos < members.size()) {
        const auto j = members[pos];
        if (j != i) arcs.push_back({j, rng.uniform() < world.delta});
        pos += 1 + rng.geometric_skip(log_q);
      }
    }
    if (blocks.members.size() > 1)
      std::sort(arcs.begin(), arcs.end(),
                [](const InArc& a, const InArc& b) { return a.source < b.source; });
  }
}

/// Samples the arcs of one realization into `net` (discoveries untouched).
/// Firm `exclude`, if given, takes no part: it neither learns nor is learned from.
inline void sample_learning_network(const std::vector<FirmProfile>& profiles,
                                    const WorldConfig& world, std::uint64_t rep_key,
                                    RealizedNetwork& net,
                                    ArcSampling mode = ArcSampling::skip,
                                    std::optional<std::size_t> exclude = std::nullopt) {
  const std::size_t n = profiles.size();
  for (auto& v : net.in) v.clear();
  if (mode == ArcSampling::pairwise) {
    for (std::size_t i = 0; i < n; ++i) {
      if (exclude && *exclude == i) continue;
      const auto si = stream_of(profiles, i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || (exclude && *exclude == j)) continue;
        const double prob = arc_probability(profiles[i], profiles[j]);
        if (prob <= 0.0) continue;
        const auto sj = stream_of(profiles, j);
        if (hash_unit(rep_key, stream::kPairPresence, si, sj) < prob) {
          const bool ind = hash_unit(rep_key, stream::kPairIndirect, si, sj) < world.delta;
          net.in[i].push_back({static_cast<std::uint32_t>(j), ind});
        }
      }
    }
    return;
  }

  sample_arcs_skip(profiles, world, rep_key, make_sender_blocks(profiles, exclude), net,
                   exclude);
}

inline RealizedNetwork sample_learning_network(const std::vector<FirmProfile>& profiles,
                                               const WorldConfig& world,
                                               std::uint64_t rep_key,
                                               ArcSampling mode = ArcSampling::skip) {
  RealizedNetwork net(sigma_of(profiles));
  sample_learning_network(profiles, world, rep_key, net, mode);
  return net;
}

/// Discoveries and arcs of replication `rep` under `seed`.
inline RealizedNetwork sample_realization(const std::vector<FirmProfile>& profiles,
                                          const WorldConfig& world, std::uint64_t rep_key,
                                          ArcSampling mode = ArcSampling::skip) {
  RealizedNetwork net(sigma_of(profiles));
  sample_discoveries(profiles, rep_key, net);
  sample_learning_network(profiles, world, rep_key, net, mode);
  return net;
}

inline std::uint64_t replication_key(std::uint64_t seed, std::uint64_t rep) {
  return derive_seed(seed, 0x5eedULL, rep);
}

}  // namespace innonet
