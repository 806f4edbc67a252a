#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "innonet/core/errors.hpp"
#include "innonet/sim/network.hpp"

namespace innonet {

/// Line-oriented realization file.
///
///   # comment
///   FIRMS 4          (optional; defaults to 1 + largest id seen)
///   SIGMA 2 3        (optional; firm 2 owns 3 idea slots)
///   DISCOVERED
///   0                (firm, slot 0)
///   2 1              (firm 2, slot 1)
///   DIRECT
///   0 1              (firm 0 learns directly from firm 1)
///   INDIRECT
///   0 1              (must also be listed under DIRECT)
inline RealizedNetwork parse_replay(std::istream& is) {
  enum class Section { none, discovered, direct, indirect };
  Section section = Section::none;
  std::size_t declared = 0;
  std::vector<std::pair<std::size_t, unsigned>> sigma_lines;
  std::vector<std::pair<std::size_t, unsigned>> disc;
  std::vector<std::pair<std::size_t, std::size_t>> direct, indirect;
  std::size_t max_id = 0;
  bool any_id = false;
  auto note = [&](std::size_t id) {
    max_id = std::max(max_id, id);
    any_id = true;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    const std::string where = "replay line " + std::to_string(lineno) + ": ";
    if (head == "DISCOVERED") { section = Section::discovered; continue; }
    if (head == "DIRECT") { section = Section::direct; continue; }
    if (head == "INDIRECT") { section = Section::indirect; continue; }
    if (head == "FIRMS") {
      require(static_cast<bool>(ls >> declared) && declared >= 1, where + "bad FIRMS");
      continue;
    }
    if (head == "SIGMA") {
      std::size_t f = 0;
      unsigned s = 0;
      require(static_cast<bool>(ls >> f >> s) && s >= 1, where + "bad SIGMA");
      sigma_lines.emplace_back(f, s);
      note(f);
      continue;
    }
    std::size_t a = 0;
    try {
      a = std::stoul(head);
    } catch (const std::exception&) {
      throw InvalidInput(where + "unexpected token '" + head + "'");
    }
    switch (section) {
      case Section::none: throw InvalidInput(where + "entry outside any section");
      case Section::discovered: {
        unsigned slot = 0;
        ls >> slot;
        disc.emplace_back(a, slot);
        note(a);
        break;
      }
      case Section::direct:
      case Section::indirect: {
        std::size_t b = 0;
        require(static_cast<bool>(ls >> b), where + "arc needs two firm ids");
        (section == Section::direct ? direct : indirect).emplace_back(a, b);
        note(a);
        note(b);
        break;
      }
    }
    std::string extra;
    require(!(ls >> extra), where + "trailing token '" + extra + "'");
  }

  const std::size_t n = declared ? declared : (any_id ? max_id + 1 : 0);
  require(n >= 1, "replay file declares no firms");
  require(!any_id || max_id < n, "replay firm id exceeds FIRMS");
  std::vector<unsigned> sigma(n, 1);
  for (auto [f, s] : sigma_lines) sigma[f] = s;
  for (auto [f, s] : disc) require(s < sigma[f], "replay discovered slot exceeds SIGMA");

  RealizedNetwork net(sigma);
  for (auto [f, s] : disc) net.discovered.set(net.idea(f, s));
  for (auto [i, j] : direct) net.add_arc(i, j, false);
  for (auto [i, j] : indirect) {
    require(net.has_arc(i, j), "indirect arc " + std::to_string(i) + " <- " +
                                   std::to_string(j) + " is not listed under DIRECT");
    net.add_arc(i, j, true);
  }
  net.canonicalize();
  return net;
}

inline RealizedNetwork load_replay(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "cannot open replay file " + path);
  return parse_replay(is);
}

inline std::string serialize_replay(const RealizedNetwork& net) {
  std::ostringstream os;
  os << "FIRMS " << net.n << '\n';
  for (std::size_t i = 0; i < net.n; ++i)
    if (net.sigma(i) != 1) os << "SIGMA " << i << ' ' << net.sigma(i) << '\n';
  os << "DISCOVERED\n";
  for (std::size_t i = 0; i < net.n; ++i)
    for (unsigned s = 0; s < net.sigma(i); ++s)
      if (net.discovered.test(net.idea(i, s))) {
        os << i;
        if (net.sigma(i) != 1) os << ' ' << s;
        os << '\n';
      }
  os << "DIRECT\n";
  for (std::size_t i = 0; i < net.n; ++i)
    for (const auto& a : net.in[i]) os << i << ' ' << a.source << '\n';
  os << "INDIRECT\n";
  for (std::size_t i = 0; i < net.n; ++i)
    for (const auto& a : net.in[i])
      if (a.indirect) os << i << ' ' << a.source << '\n';
  return os.str();
}

}  // namespace innonet
