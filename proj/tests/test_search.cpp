#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "bentbook/errors.hpp"
#include "bentbook/search.hpp"
#include "oracles.hpp"

using namespace bentbook;

namespace {

const std::vector<Perm> kListedIs4 = {
    {3, 2, 4, 1}, {2, 4, 1, 3}, {3, 4, 1, 2}, {2, 4, 3, 1}, {3, 1, 4, 2}, {1, 3, 4, 2},
    {4, 2, 1, 3}, {2, 1, 4, 3}, {4, 1, 3, 2}, {2, 3, 1, 4}, {1, 4, 2, 3}, {3, 1, 2, 4},
};

std::vector<Perm> is_by_spectrum(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[k] = k + 1;
  const Perm id = Perm::identity(n);
  std::vector<Perm> out;
  do {
    const Perm p(v);
    if (oracle::compatible_by_spectrum(id, p)) out.push_back(p);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::set<std::set<int>> fixture_label_sets() {
  std::set<std::set<int>> out;
  for (const auto& line : oracle::fixture_lines("maximal_sets_n4.txt")) {
    std::istringstream in(line);
    std::set<int> s{0};
    for (int k; in >> k;) s.insert(k);
    out.insert(s);
  }
  return out;
}

int label_of(const Perm& p) {
  if (p.is_identity()) return 0;
  const auto& rho = labeled_is4();
  return static_cast<int>(std::find(rho.begin(), rho.end(), p) - rho.begin()) + 1;
}

CompatGraph n4_graph() {
  std::vector<Perm> v = labeled_is4();
  v.push_back(Perm::identity(4));
  return build_graph(v);
}

// Every maximal clique of a small graph by subset enumeration.
std::vector<Clique> brute_cliques(const CompatGraph& g, int min_size) {
  const int n = g.size();
  std::vector<std::uint32_t> cliques;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      for (int b = a + 1; b < n && ok; ++b) {
        if ((s >> a & 1) && (s >> b & 1) && !g.adjacent(a, b)) ok = false;
      }
    }
    if (ok) cliques.push_back(s);
  }
  std::vector<Clique> out;
  for (auto s : cliques) {
    bool maximal = true;
    for (auto t : cliques) {
      if (t != s && (t & s) == s) {
        maximal = false;
        break;
      }
    }
    if (!maximal || __builtin_popcount(s) < min_size) continue;
    Clique c;
    for (int v = 0; v < n; ++v) {
      if (s >> v & 1) c.push_back(v);
    }
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CompatGraph random_graph(int n, double p, std::mt19937_64& rng) {
  CompatGraph g;
  g.vertices.assign(static_cast<std::size_t>(n), Perm::identity(1));
  g.adjacency.assign(static_cast<std::size_t>(n), VertexSet(n));
  std::bernoulli_distribution edge(p);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (edge(rng)) {
        g.adjacency[a].set(b);
        g.adjacency[b].set(a);
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("IS_4 equals the listed twelve") {
  auto got = enumerate_is(4);
  CHECK(got.size() == 12);
  auto listed = kListedIs4;
  std::sort(listed.begin(), listed.end());
  CHECK(got == listed);
  CHECK(labeled_is4() == kListedIs4);
  CHECK(std::is_sorted(got.begin(), got.end()));
}

TEST_CASE("IS_n against the spectrum oracle and the serial reference") {
  for (int n = 2; n <= 6; ++n) {
    const auto got = enumerate_is(n);
    CHECK(got == is_by_spectrum(n));
    CHECK(got == enumerate_is_serial(n));
  }
  CHECK(enumerate_is(2).empty());
  CHECK(enumerate_is(7) == enumerate_is_serial(7));
}

TEST_CASE("search guard") {
  CHECK_THROWS_AS(enumerate_is(kDefaultSearchGuard + 1), GuardError);
  CHECK_THROWS_AS(enumerate_is(1), std::invalid_argument);
}

TEST_CASE("composition table matches the fixture") {
  const CompositionTable t = composition_table(labeled_is4());
  const auto rows = oracle::fixture_lines("composition_is4.txt");
  REQUIRE(rows.size() == 12);
  for (int i = 1; i <= 12; ++i) {
    std::istringstream in(rows[i - 1]);
    for (int j = 1; j <= 12; ++j) {
      std::string cell;
      in >> cell;
      const auto& e = t.at(i, j);
      if (cell == "0") {
        CHECK(e.kind == CompositionEntry::Kind::Identity);
      } else if (cell == "-") {
        CHECK(e.kind == CompositionEntry::Kind::NonMember);
      } else {
        CHECK(e.kind == CompositionEntry::Kind::Member);
        CHECK(e.member == std::stoi(cell));
      }
    }
  }
  // Independent check of the entries straight from the definition.
  const auto& rho = labeled_is4();
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const Perm c = compose(inverse(rho[i]), rho[j]);
      const auto& e = t.at(i + 1, j + 1);
      if (e.kind == CompositionEntry::Kind::Member) CHECK(rho[e.member - 1] == c);
      if (e.kind == CompositionEntry::Kind::Identity) CHECK(c.is_identity());
    }
  }
  const std::string text = t.render();
  CHECK(text.find("  1   0   -   6  10") != std::string::npos);
  CHECK_THROWS(t.at(0, 1));
  CHECK_THROWS(composition_table(std::vector<Perm>{Perm::identity(4)}));
}

TEST_CASE("vertex sets") {
  VertexSet a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  b.set(100);
  CHECK(a.count() == 3);
  CHECK(a.count_and(b) == 1);
  CHECK((a & b).count() == 1);
  CHECK((a | b).count() == 4);
  CHECK(a.minus(b).count() == 2);
  std::vector<int> seen;
  a.for_each([&](int v) { seen.push_back(v); });
  CHECK(seen == std::vector<int>{0, 64, 129});
  a.reset(0);
  CHECK(!a.test(0));
  CHECK(VertexSet(5).empty());
}

TEST_CASE("the n = 4 graph has exactly the listed maximal sets") {
  const CompatGraph g = n4_graph();
  CHECK(g.size() == 13);
  const auto cliques = maximal_cliques(g, 6);
  CHECK(cliques.size() == 32);
  std::set<std::set<int>> got;
  for (const auto& s : clique_perm_sets(g, cliques)) {
    std::set<int> labels;
    for (const auto& p : s) labels.insert(label_of(p));
    got.insert(labels);
  }
  CHECK(got == fixture_label_sets());
  for (const auto& c : maximal_cliques(g, 1)) CHECK(static_cast<int>(c.size()) <= paterson_bound(4));
  CHECK(paterson_bound(4) == 6);
}

TEST_CASE("reverse closure of the n = 4 maximal sets") {
  const CompatGraph g = n4_graph();
  const auto sets = clique_perm_sets(g, maximal_cliques(g, 6));
  const std::set<std::vector<Perm>> all(sets.begin(), sets.end());
  for (const auto& s : sets) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k].is_identity()) continue;
      auto t = s;
      t[k] = reverse(s[k]);
      std::sort(t.begin(), t.end());
      CHECK(all.count(t) == 1);
    }
  }
}

TEST_CASE("clique output does not depend on vertex order") {
  std::vector<Perm> v = labeled_is4();
  v.push_back(Perm::identity(4));
  const CompatGraph g = build_graph(v);
  const auto base = clique_perm_sets(g, maximal_cliques(g, 2));
  std::mt19937_64 rng(oracle::seed());
  for (int k = 0; k < 10; ++k) {
    std::shuffle(v.begin(), v.end(), rng);
    const CompatGraph h = build_graph(v);
    CHECK(clique_perm_sets(h, maximal_cliques(h, 2)) == base);
  }
}

TEST_CASE("graph construction") {
  std::vector<Perm> v = enumerate_is(5);
  v.push_back(Perm::identity(5));
  const CompatGraph g = build_graph(v);
  const CompatGraph s = build_graph_serial(v);
  CHECK(g.adjacency == s.adjacency);
  for (int a = 0; a < g.size(); ++a) {
    CHECK(!g.adjacent(a, a));
    for (int b = 0; b < g.size(); ++b) CHECK(g.adjacent(a, b) == is_compatible(v[a], v[b]));
  }
  CHECK_THROWS_AS(build_graph({Perm{1, 2, 3}, Perm{1, 2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({Perm{1, 2, 3}, Perm{1, 2}}), std::invalid_argument);
}

TEST_CASE("maximal cliques against subset enumeration") {
  std::mt19937_64 rng(oracle::seed() + 1);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 12);
    const CompatGraph g = random_graph(n, 0.3 + 0.05 * (trial % 10), rng);
    for (int min_size : {1, 3}) {
      const auto expect = brute_cliques(g, min_size);
      CHECK(maximal_cliques(g, min_size) == expect);
      CHECK(maximal_cliques_serial(g, min_size) == expect);
    }
  }
}

TEST_CASE("parallel and serial clique search agree on larger graphs") {
  std::mt19937_64 rng(oracle::seed() + 2);
  for (int trial = 0; trial < 5; ++trial) {
    const CompatGraph g = random_graph(150, 0.5, rng);
    CHECK(maximal_cliques(g, 5) == maximal_cliques_serial(g, 5));
  }
}
