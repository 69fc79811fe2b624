#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "bentbook/errors.hpp"
#include "bentbook/quadperm.hpp"
#include "bentbook/search.hpp"
#include "oracles.hpp"

using namespace bentbook;

namespace {

Perm random_perm(int n, std::mt19937_64& rng) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::shuffle(v.begin(), v.end(), rng);
  return Perm(v);
}

std::vector<Perm> all_perms(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  std::vector<Perm> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

QuadForm random_bent(int n, std::mt19937_64& rng) {
  for (;;) {
    QuadForm q(n);
    for (int i = 1; i <= n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (rng() & 1u) q.toggle_pair(i, j);
      }
    }
    if (quad_rank(q) == n) return q;
  }
}

}  // namespace

TEST_CASE("permutation basics") {
  const Perm p{3, 2, 4, 1};
  CHECK(p.size() == 4);
  CHECK(p(1) == 3);
  CHECK(to_string(p) == "[3,2,4,1]");
  CHECK(reverse(p) == Perm{1, 4, 2, 3});
  CHECK(inverse(p) == Perm{4, 2, 1, 3});
  CHECK(compose(p, inverse(p)).is_identity());
  CHECK(compose(Perm{2, 1, 3}, Perm{1, 3, 2}) == Perm{2, 3, 1});
  CHECK(Perm::identity(3) == Perm{1, 2, 3});
  CHECK_THROWS_AS(Perm({1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Perm({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(compose(Perm{1, 2}, Perm{1, 2, 3}), std::invalid_argument);
  std::ostringstream out;
  out << p;
  CHECK(out.str() == "[3,2,4,1]");
}

TEST_CASE("permutation parsing") {
  CHECK(parse_perm("[3,2,4,1]") == Perm{3, 2, 4, 1});
  CHECK(parse_perm("  [ 3, 2 ,4,1 ]\n") == Perm{3, 2, 4, 1});
  CHECK_THROWS(parse_perm("3,2,4,1"));
  CHECK_THROWS(parse_perm("[3,2,4,]"));
  CHECK_THROWS(parse_perm("[3,2,x,1]"));
  CHECK_THROWS(parse_perm("[3,2,2,1]"));
  std::mt19937_64 rng(oracle::seed());
  for (int k = 0; k < 50; ++k) {
    const Perm p = random_perm(1 + static_cast<int>(rng() % 12), rng);
    CHECK(parse_perm(to_string(p)) == p);
  }
}

TEST_CASE("path form and difference form") {
  const QuadForm q = q_pi(Perm{3, 2, 4, 1});
  CHECK(q.pairs() == std::vector<std::pair<int, int>>{{1, 4}, {2, 3}, {2, 4}});
  CHECK(q_pi(Perm{3, 2, 4, 1}) == q_pi(Perm{1, 4, 2, 3}));
  const QuadForm d = difference_form(Perm{3, 4, 1, 2}, Perm::identity(4));
  CHECK(d.pairs() == std::vector<std::pair<int, int>>{{1, 4}, {2, 3}});
  for (std::uint32_t x = 0; x < 16; ++x) CHECK(q.evaluate(x) == oracle::path_form(Perm{3, 2, 4, 1}, x));
}

TEST_CASE("compatibility against the spectrum and rank oracles") {
  const Perm id = Perm::identity(4);
  for (const auto& p : all_perms(4)) {
    const CompatVerdict v = compatible(id, p);
    CHECK(v.compatible == oracle::compatible_by_spectrum(id, p));
    CHECK(v.rank == oracle::rank_f2(oracle::difference_matrix(id, p)));
    CHECK(is_compatible(id, p) == v.compatible);
  }
  std::mt19937_64 rng(oracle::seed() + 1);
  for (int n : {5, 6, 7}) {
    for (int k = 0; k < 100; ++k) {
      const Perm a = random_perm(n, rng), b = random_perm(n, rng);
      const CompatVerdict v = compatible(a, b);
      CHECK(v.compatible == oracle::compatible_by_spectrum(a, b));
      if (v.compatible) CHECK(v.classification == (n % 2 ? Classification::NearBent : Classification::Bent));
    }
  }
  CHECK_THROWS_AS(compatible(Perm{1, 2}, Perm{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(compatible(Perm{1}, Perm{1}), std::invalid_argument);
}

TEST_CASE("compatibility symmetries") {
  SUBCASE("exhaustive at n = 4") {
    const auto all = all_perms(4);
    const Perm id = Perm::identity(4);
    for (const auto& s : all) {
      CHECK(is_compatible(id, s) == is_compatible(id, inverse(s)));
      for (const auto& p : all) {
        const bool c = is_compatible(p, s);
        CHECK(c == is_compatible(s, p));
        CHECK(c == is_compatible(s, reverse(p)));
        CHECK(c == is_compatible(id, compose(inverse(s), p)));
      }
    }
  }
  SUBCASE("sampled at n = 6 and 7") {
    std::mt19937_64 rng(oracle::seed() + 2);
    for (int n : {6, 7}) {
      const Perm id = Perm::identity(n);
      for (int k = 0; k < 500; ++k) {
        const Perm p = random_perm(n, rng), s = random_perm(n, rng);
        const bool c = is_compatible(p, s);
        CHECK(c == is_compatible(s, p));
        CHECK(c == is_compatible(s, reverse(p)));
        CHECK(c == is_compatible(id, compose(inverse(s), p)));
        CHECK(is_compatible(id, p) == is_compatible(id, inverse(p)));
      }
    }
  }
}

TEST_CASE("WHC agrees with its product definition") {
  int case1 = 0;
  for (const auto& rho : labeled_is4()) {
    const QuadForm f = difference_form(Perm::identity(4), rho);
    for (int i = 1; i <= 4; ++i) {
      for (int j = i + 1; j <= 4; ++j) {
        const bool w = whc(f, i, j);
        CHECK(w == whc_by_product(f, i, j));
        CHECK((prop1_classify(f, i, j) == Dichotomy::CaseI) == w);
        case1 += w;
      }
    }
  }
  CHECK(case1 > 0);
  std::mt19937_64 rng(oracle::seed() + 3);
  for (int k = 0; k < 100; ++k) {
    const QuadForm q = random_bent(6, rng);
    for (int i = 1; i <= 6; ++i) {
      for (int j = i + 1; j <= 6; ++j) {
        Dichotomy d{};
        REQUIRE_NOTHROW(d = prop1_classify(q, i, j));
        REQUIRE((d == Dichotomy::CaseI) == whc_by_product(q, i, j));
      }
    }
  }
}

TEST_CASE("WHC of the difference forms over IS_4") {
  // Pairs (i, j) on which Q_I + Q_rho satisfies the WHC, from the product oracle.
  const std::vector<std::vector<std::pair<int, int>>> expected = {
      {{1, 4}, {2, 4}},
      {},
      {{1, 2}, {1, 3}, {2, 4}, {3, 4}},
      {{1, 2}, {2, 3}},
      {},
      {{1, 2}, {2, 3}},
      {{2, 3}, {3, 4}},
      {{1, 2}, {1, 3}, {2, 4}, {3, 4}},
      {{1, 3}, {1, 4}},
      {{1, 3}, {1, 4}},
      {{1, 4}, {2, 4}},
      {{2, 3}, {3, 4}},
  };
  const auto& rho = labeled_is4();
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const QuadForm f = difference_form(Perm::identity(4), rho[k]);
    std::vector<std::pair<int, int>> got;
    for (int i = 1; i <= 4; ++i) {
      for (int j = i + 1; j <= 4; ++j) {
        if (whc_by_product(f, i, j)) got.emplace_back(i, j);
      }
    }
    CHECK(got == expected[k]);
  }
}

TEST_CASE("WHC preconditions") {
  const QuadForm bent = difference_form(Perm::identity(4), Perm{3, 4, 1, 2});
  CHECK_THROWS_AS(whc(bent, 2, 1), PreconditionError);
  CHECK_THROWS_AS(whc(bent, 1, 5), PreconditionError);
  CHECK_THROWS_AS(whc(QuadForm(4), 1, 2), PreconditionError);
  CHECK_THROWS_AS(whc(difference_form(Perm::identity(5), Perm{1, 3, 5, 2, 4}), 1, 2), PreconditionError);
  CHECK_THROWS_AS(whc_by_product(QuadForm(4), 1, 2), PreconditionError);
}
