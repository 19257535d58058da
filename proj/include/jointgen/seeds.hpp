#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jointgen/design.hpp"

namespace jointgen {

// mt19937_64 stream with bit-exact doubles on every platform.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(uint64_t seed) : eng(seed) {}
  double uniform() {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
  }
  double range(double a, double b) { return a + (b - a) * uniform(); }
  int upto(int n) { return static_cast<int>(eng() % static_cast<uint64_t>(n)); }
};

struct SeedParams {
  int points = 5;
  int edges = 5;
  uint64_t seed = 1;
  double mouth_width = 1.0;
  double depth = 0.8;           // bowl depth, relative to mouth width
  double lip_overhang_deg = 0.0;
  double jitter = 0.12;
};

// Bowl-shaped socket with the peg contact points placed on their
// corresponded edges at the seated pose.
JointDesign make_seed_design(const SeedParams& sp);

// Socket whose mouth walls lean inward enough to wedge a tilted entry.
JointDesign wedge_trap_design(double overhang_deg);

// Valid designs with a realizable full correspondence, for test corpora.
std::vector<JointDesign> random_design_corpus(int count, uint64_t seed);

}  // namespace jointgen
