#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>
#include <set>

#include "codebound/orbits.hpp"

using namespace codebound;

TEST_CASE("hamming distance") {
  CHECK(hamming_distance(Word(0b000, 3), Word(0b000, 3)) == 0);
  CHECK(hamming_distance(Word(0b00111, 5), Word(0b00000, 5)) == 3);
  CHECK_THROWS_AS(hamming_distance(Word(1, 3), Word(1, 4)), std::invalid_argument);
  // positionwise loop reference at n = 12
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    uint32_t a = rng() & 0xfff, b = rng() & 0xfff;
    int direct = 0;
    for (int i = 0; i < 12; ++i)
      if (((a >> i) & 1) != ((b >> i) & 1)) ++direct;
    CHECK(hamming_distance(Word(a, 12), Word(b, 12)) == direct);
  }
}

TEST_CASE("canonical labels of small sets") {
  CHECK(canonical_label(CodeSet(5, {7u})).to_string() == "s1:5");
  CHECK(canonical_label(CodeSet(5, {})).size == 0);
  // pair at distance 3 in n = 5: counts (2 zeros, 3 ones)
  OrbitLabel pair = canonical_label(CodeSet(5, {0b00000u, 0b00111u}));
  CHECK(pair.to_string() == "s2:2,3");
  CHECK_THROWS_AS(canonical_label(CodeSet(5, {1u, 2u, 4u, 8u, 16u})), std::invalid_argument);
}

namespace {

// all code sets of size <= 4 at length n
std::vector<std::vector<uint32_t>> all_sets(int n) {
  std::vector<std::vector<uint32_t>> sets;
  std::function<void(uint32_t, std::vector<uint32_t>&)> rec = [&](uint32_t from,
                                                                  std::vector<uint32_t>& cur) {
    if (!cur.empty()) sets.push_back(cur);
    if (cur.size() == 4) return;
    for (uint32_t w = from; w < (1u << n); ++w) {
      cur.push_back(w);
      rec(w + 1, cur);
      cur.pop_back();
    }
  };
  std::vector<uint32_t> cur;
  rec(0, cur);
  return sets;
}

std::vector<uint32_t> apply_generator(const std::vector<uint32_t>& s, int gen, int n) {
  std::vector<uint32_t> out;
  for (uint32_t w : s) {
    uint32_t img;
    if (gen == n - 1) {
      img = w ^ 1u;
    } else {
      uint32_t b0 = (w >> gen) & 1, b1 = (w >> (gen + 1)) & 1;
      img = (w & ~((1u << gen) | (1u << (gen + 1)))) | (b0 << (gen + 1)) | (b1 << gen);
    }
    out.push_back(img);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("canonical label is invariant and separates orbits exhaustively (n <= 5)") {
  for (int n = 2; n <= 5; ++n) {
    auto sets = all_sets(n);
    std::map<std::vector<uint32_t>, int> id;
    for (int i = 0; i < (int)sets.size(); ++i) id[sets[i]] = i;
    std::vector<int> parent(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) parent[i] = (int)i;
    std::function<int(int)> find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    std::vector<OrbitLabel> labels(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) labels[i] = canonical_label(CodeSet(n, sets[i]));
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (int gen = 0; gen < n; ++gen) {
        auto img = apply_generator(sets[i], gen, n);
        int j = id.at(img);
        REQUIRE(labels[i] == labels[j]);  // G-invariance on generators
        parent[find((int)i)] = find(j);
      }
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      auto [it, fresh] = seen.emplace(labels[i].to_string(), find((int)i));
      if (!fresh) REQUIRE(it->second == find((int)i));  // separation
    }
  }
}

TEST_CASE("orbit enumeration") {
  // pairs tier count
  for (int n = 4; n <= 9; ++n)
    for (int d = 2; d <= n; d += 2) {
      auto orbits = enumerate_orbits(n, d, 2, true);
      int pairs = 0, expect = 0;
      for (const auto& o : orbits) pairs += o.size == 2;
      for (int m = d; m <= n; m += 2) ++expect;
      CHECK(pairs == expect);
      CHECK(orbits.front().size == 0);
    }
  // max_size = 0 keeps only the empty label
  auto only_empty = enumerate_orbits(6, 4, 0, true);
  REQUIRE(only_empty.size() == 1);
  CHECK(only_empty[0].size == 0);
  // deterministic order and no duplicates
  auto a = enumerate_orbits(6, 4, 4, true);
  auto b = enumerate_orbits(6, 4, 4, true);
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::adjacent_find(a.begin(), a.end()) == a.end());
  // exhaustive reference in even mode at (6,4)
  std::set<std::string> exhaustive = {OrbitLabel{}.to_string()};
  for (const auto& s : all_sets(6)) {
    CodeSet S(6, s);
    if (S.distances_at_least(4) && S.distances_all_even())
      exhaustive.insert(canonical_label(S).to_string());
  }
  std::set<std::string> generated;
  for (const auto& o : a) generated.insert(o.to_string());
  CHECK(generated == exhaustive);
  // singletons: exactly one orbit per n
  int singles = 0;
  for (const auto& o : a) singles += o.size == 1;
  CHECK(singles == 1);
}

TEST_CASE("orbit sizes") {
  CHECK(orbit_size(OrbitLabel{1, {6}}, 6) == BigInt(32));   // 2^(n-1)
  CHECK(orbit_size(OrbitLabel{2, {0, 2}}, 2) == BigInt(1));  // the pair {00,11}
  CHECK(orbit_size(OrbitLabel{0, {}}, 6) == BigInt(1));
  CHECK_THROWS_AS(orbit_size(OrbitLabel{3, {1, 1, 1, 1}}, 4), std::invalid_argument);
  // closed form vs stabilizer counting for pairs
  for (int n = 3; n <= 7; ++n)
    for (int m = 2; m <= n; m += 2) {
      OrbitLabel lab{2, {n - m, m}};
      CHECK(orbit_size(lab, n) == orbit_size_exact(representative_code(lab, n), true));
    }
  // exhaustive orbit census at n = 5, even-weight codes only
  {
    int n = 5;
    std::map<std::string, std::set<std::vector<uint32_t>>> orbits;
    for (const auto& s : all_sets(n)) {
      CodeSet S(n, s);
      bool in_E = true;
      for (uint32_t w : S.words) in_E = in_E && (std::popcount(w) % 2 == 0);
      if (!in_E) continue;
      orbits[canonical_label(S).to_string()].insert(s);
    }
    for (const auto& [key, members] : orbits) {
      CodeSet rep(n, *members.begin());
      CHECK(orbit_size_exact(rep, true) == BigInt(members.size()));
    }
  }
}

TEST_CASE("union labels from pair configurations") {
  int n = 6, d = 4;
  // config reproducing v = w = u gives the base pair label
  {
    int m = 4;
    Distribution alpha(4, {0, 0, 0, 4});  // all columns (1,1): v = w = u on the window
    Distribution beta(4, {2, 0, 0, 0});
    auto lab = union_label_from_config(n, d, true, m, alpha, beta);
    REQUIRE(lab.has_value());
    CHECK(lab->to_string() == "s2:2,4");
  }
  // v at distance 2 from 0 violates the minimum distance
  {
    int m = 4;
    Distribution alpha(4, {2, 0, 2, 0});  // v has 2 ones in the window, w = 0
    Distribution beta(4, {2, 0, 0, 0});
    CHECK_FALSE(union_label_from_config(n, d, true, m, alpha, beta).has_value());
  }
  CHECK_THROWS_AS(union_label_from_config(n, d, true, 4, Distribution(4, {1, 0, 0, 0}),
                                          Distribution(4, {2, 0, 0, 0})),
                  std::invalid_argument);
  // agreement with explicit construction across all configs at n = 6
  for (int m = 4; m <= 6; m += 2) {
    uint32_t u = (1u << m) - 1;
    for (const auto& alpha : enumerate_distributions(4, m))
      for (const auto& beta : enumerate_distributions(4, 6 - m)) {
        uint32_t v = 0, w = 0;
        int pos = 0;
        for (const Distribution* dist : {&alpha, &beta})
          for (int c = 0; c < 4; ++c)
            for (int r = 0; r < dist->counts[c]; ++r, ++pos) {
              if (c >> 1) v |= 1u << pos;
              if (c & 1) w |= 1u << pos;
            }
        CodeSet S(6, {0u, u, v, w});
        bool feasible = S.distances_at_least(d) && S.distances_all_even();
        auto lab = union_label_from_config(6, d, true, m, alpha, beta);
        REQUIRE(lab.has_value() == feasible);
        if (lab) CHECK(*lab == canonical_label(S));
      }
  }
  // every produced label appears in the enumeration
  {
    auto orbits = enumerate_orbits(6, 4, 4, true);
    std::set<std::string> known;
    for (const auto& o : orbits) known.insert(o.to_string());
    for (const auto& alpha : enumerate_distributions(4, 4))
      for (const auto& beta : enumerate_distributions(4, 2)) {
        auto lab = union_label_from_config(6, 4, true, 4, alpha, beta);
        if (lab) CHECK(known.count(lab->to_string()) == 1);
      }
  }
}

TEST_CASE("union labels from quadruple configurations") {
  // lambda concentrated on 000: all four words equal, singleton union
  {
    std::vector<int> c(8, 0);
    c[0] = 6;
    auto lab = union_label_from_config(6, 4, true, Distribution(8, c));
    REQUIRE(lab.has_value());
    CHECK(lab->to_string() == "s1:6");
  }
  CHECK_THROWS_AS(union_label_from_config(6, 4, true, Distribution(4, {2, 2, 1, 1})),
                  std::invalid_argument);
}
