#pragma once

// Permutations of {1..n}, the path quadratic forms they generate,
// compatibility, and the Walsh-Hadamard condition (WHC) on index pairs.

#include <compare>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bentbook/boolfn.hpp"

namespace bentbook {

// A bijection of {1..n}, written [p(1),...,p(n)].
class Perm {
 public:
  Perm() = default;
  // Throws std::invalid_argument unless images is a permutation of 1..n.
  explicit Perm(std::vector<int> images);
  Perm(std::initializer_list<int> images) : Perm(std::vector<int>(images)) {}

  static Perm identity(int n);

  int size() const { return static_cast<int>(map_.size()); }
  // 1-based: p(k) for 1 <= k <= n.
  int operator()(int k) const { return map_[static_cast<std::size_t>(k - 1)]; }
  std::span<const int> images() const { return map_; }
  bool is_identity() const;

  auto operator<=>(const Perm&) const = default;
  bool operator==(const Perm&) const = default;

 private:
  std::vector<int> map_;
};

Perm reverse(const Perm& p);
Perm inverse(const Perm& p);
// (p o q)(k) = p(q(k)).
Perm compose(const Perm& p, const Perm& q);

// "[3,2,4,1]" with no whitespace; parse_perm accepts surrounding whitespace.
std::string to_string(const Perm& p);
Perm parse_perm(std::string_view text);
std::ostream& operator<<(std::ostream& out, const Perm& p);

// Q_p(x) = sum_{i<n} x_{p(i)} x_{p(i+1)}.
QuadForm q_pi(const Perm& p);

// Q_p + Q_q.
QuadForm difference_form(const Perm& p, const Perm& q);

// Rank r == n for even n, r == n-1 for odd n.
bool is_full_rank(int rank, int n);

enum class CheckRoute {
  Rank,  // F_2 rank of the symplectic matrix only
  Both,  // rank and full Walsh spectrum (n <= 16), must agree
};

struct CompatVerdict {
  bool compatible = false;
  Classification classification = Classification::Other;
  int rank = 0;
};

inline constexpr int kMaxWhtRouteVars = 16;

// Throws std::invalid_argument on size mismatch or n < 2, std::logic_error if
// the two routes disagree.
CompatVerdict compatible(const Perm& p, const Perm& q, CheckRoute route = CheckRoute::Both);

// Rank-route predicate for hot loops.
bool is_compatible(const Perm& p, const Perm& q);

enum class Dichotomy { CaseI, CaseII };

const char* to_string(Dichotomy d);

// Classifies a bent quadratic q on (i,j) via its four restrictions:
// CaseI when at every c three restricted Walsh values vanish and one has
// magnitude 2^(n/2); CaseII when all four have magnitude 2^((n-2)/2).
// Throws PreconditionError for odd n, n < 4, non-bent q or bad indices, and
// VerificationError if neither case holds uniformly.
Dichotomy prop1_classify(const QuadForm& q, int i, int j);

// WHC on (i,j): prop1_classify(q, i, j) == CaseI.
bool whc(const QuadForm& q, int i, int j);

// WHC straight from its definition: the product of W_Q over the coset
// c + <e_i, e_j> equals 2^(2n) for every c.
bool whc_by_product(const QuadForm& q, int i, int j);

}  // namespace bentbook
