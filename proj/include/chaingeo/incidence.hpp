#ifndef CHAINGEO_INCIDENCE_HPP
#define CHAINGEO_INCIDENCE_HPP

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chaingeo/chains.hpp"
#include "chaingeo/error.hpp"

namespace chaingeo {

/// Points 0..v-1 and blocks of equal size, each a sorted id list.
struct incidence {
  std::size_t v = 0;
  std::size_t block_size = 0;
  std::vector<std::vector<point_id>> blocks;

  static incidence from_geometry(const geometry& g) {
    return {g.v(), static_cast<std::size_t>(g.q() + 1), g.chains()};
  }
};

/// Line 1: `v b k`; then b lines of k ascending 0-based ids.
inline std::string format_incidence(const incidence& s) {
  std::ostringstream out;
  out << s.v << ' ' << s.blocks.size() << ' ' << s.block_size << '\n';
  for (const auto& b : s.blocks) {
    for (std::size_t i = 0; i < b.size(); ++i) out << (i ? " " : "") << b[i];
    out << '\n';
  }
  return out.str();
}

inline incidence parse_incidence(std::istream& in) {
  incidence s;
  std::size_t b = 0;
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw error(error_code::bad_file, "empty incidence file");
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> s.v >> b >> s.block_size) || (hs >> extra))
      throw error(error_code::bad_file, "header must be `v b k`");
  }
  for (std::size_t i = 0; i < b; ++i) {
    if (!next_line()) throw error(error_code::bad_file, "expected " + std::to_string(b) + " blocks");
    std::istringstream ls(line);
    std::vector<point_id> blk;
    long long id;
    while (ls >> id) {
      if (id < 0 || std::size_t(id) >= s.v) throw error(error_code::bad_file, "point id out of range");
      blk.push_back(static_cast<point_id>(id));
    }
    if (!ls.eof()) throw error(error_code::bad_file, "non-numeric token in block " + std::to_string(i));
    if (blk.size() != s.block_size)
      throw error(error_code::bad_file, "block " + std::to_string(i) + " has wrong size");
    if (!std::is_sorted(blk.begin(), blk.end()) || std::adjacent_find(blk.begin(), blk.end()) != blk.end())
      throw error(error_code::bad_file, "block " + std::to_string(i) + " is not strictly ascending");
    s.blocks.push_back(std::move(blk));
  }
  if (next_line()) throw error(error_code::bad_file, "more blocks than the header declares");
  return s;
}

inline incidence read_incidence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(error_code::bad_file, "cannot open " + path);
  return parse_incidence(in);
}

}  // namespace chaingeo

#endif  // CHAINGEO_INCIDENCE_HPP
