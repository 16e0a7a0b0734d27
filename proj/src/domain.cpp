#include "nts/domain.hpp"

namespace nts {

CompleteShape CompleteShape::make(std::uint32_t root_children,
                                  std::uint32_t branching,
                                  std::uint32_t depth,
                                  std::uint32_t treasure_depth) {
  require(root_children >= 1 || depth == 0, Errc::kInvalidArgument,
          "root child count must be >= 1");
  require(branching >= 1 || depth <= 1, Errc::kInvalidArgument,
          "branching must be >= 1");
  require(treasure_depth <= depth, Errc::kInvalidArgument,
          "treasure depth exceeds tree depth");
  CompleteShape s;
  s.root_children = root_children;
  s.branching = branching;
  s.depth = depth;
  s.treasure_depth = treasure_depth;
  s.level_off.assign(depth + 2, 0);
  unsigned __int128 total = 1, level = 1;
  s.level_off[0] = 0;
  for (std::uint32_t d = 1; d <= depth; ++d) {
    level = (d == 1) ? root_children : level * branching;
    s.level_off[d] = static_cast<std::uint64_t>(total);
    total += level;
    require(total < (static_cast<unsigned __int128>(1) << 62), Errc::kBudget,
            "virtual complete tree too large for 64-bit ids");
  }
  s.level_off[depth + 1] = static_cast<std::uint64_t>(total);
  if (depth == 0) s.level_off[1] = 1;
  s.size = static_cast<std::uint64_t>(total);
  return s;
}

CompleteShape CompleteShape::make_filled(std::uint32_t delta,
                                         std::uint64_t n) {
  require(delta >= 2, Errc::kInvalidArgument, "delta must be >= 2");
  require(n >= 1, Errc::kInvalidArgument, "node count must be >= 1");
  // depth of the filled tree
  std::uint32_t depth = 0;
  {
    std::uint64_t total = 1, level = 1;
    while (total < n) {
      level = (depth == 0) ? delta : level * (delta - 1);
      total += level;
      ++depth;
    }
  }
  CompleteShape s = make(delta, delta - 1, depth, depth);
  s.size = n;
  for (auto& off : s.level_off) off = std::min(off, n);
  // clamp to the real last level and point the treasure at its first node
  while (s.treasure_depth > 0 &&
         s.level_off[s.treasure_depth] >= n)
    --s.treasure_depth;
  s.depth = s.treasure_depth;
  return s;
}

}  // namespace nts
