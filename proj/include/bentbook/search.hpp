#pragma once

// Exhaustive search over S_n: the set IS_n of permutations compatible with
// the identity, the composition table over a member list, the compatibility
// graph, and maximal-clique enumeration.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bentbook/quadperm.hpp"

namespace bentbook {

inline constexpr int kDefaultSearchGuard = 9;

// All p in S_n with p ~ I_n, in lexicographic order. Throws GuardError for
// n > kDefaultSearchGuard unless force is set.
std::vector<Perm> enumerate_is(int n, bool force = false);
std::vector<Perm> enumerate_is_serial(int n, bool force = false);

// The twelve members of IS_4 under their customary labels rho_1..rho_12
// (index 0 holds rho_1).
const std::vector<Perm>& labeled_is4();

struct CompositionEntry {
  enum class Kind { Identity, Member, NonMember };
  Kind kind = Kind::NonMember;
  int member = 0;  // 1-based member label when kind == Member

  bool operator==(const CompositionEntry&) const = default;
};

class CompositionTable {
 public:
  CompositionTable(int size, std::vector<CompositionEntry> entries);

  int size() const { return size_; }
  // 1-based row i, column j: the class of members[i]^-1 o members[j].
  const CompositionEntry& at(int i, int j) const;

  // Fixed-width text: "0" for the identity, "-" for non-members, else the
  // member label; one header row of column labels.
  std::string render() const;

 private:
  int size_;
  std::vector<CompositionEntry> entries_;
};

CompositionTable composition_table(std::span<const Perm> members);

// Packed vertex subset.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int size) : size_(size), words_((size + 63) / 64, 0) {}

  int capacity() const { return size_; }
  void set(int v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void reset(int v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  bool test(int v) const { return (words_[v >> 6] >> (v & 63)) & 1u; }
  bool empty() const;
  int count() const;
  int count_and(const VertexSet& other) const;
  VertexSet operator&(const VertexSet& other) const;
  VertexSet minus(const VertexSet& other) const;
  VertexSet operator|(const VertexSet& other) const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        f(static_cast<int>(w * 64) + b);
        bits &= bits - 1;
      }
    }
  }

  bool operator==(const VertexSet&) const = default;

 private:
  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct CompatGraph {
  std::vector<Perm> vertices;
  std::vector<VertexSet> adjacency;

  int size() const { return static_cast<int>(vertices.size()); }
  bool adjacent(int u, int v) const { return adjacency[u].test(v); }
  int degree(int v) const { return adjacency[v].count(); }
};

// Edges join compatible permutations. Throws std::invalid_argument on
// duplicates or mixed sizes.
CompatGraph build_graph(std::vector<Perm> candidates);
CompatGraph build_graph_serial(std::vector<Perm> candidates);

using Clique = std::vector<int>;

// All maximal cliques with at least min_size vertices, each sorted, the list
// sorted lexicographically. Bron-Kerbosch with pivoting under a degeneracy
// ordering; the parallel variant fans out over the outer ordering.
std::vector<Clique> maximal_cliques(const CompatGraph& g, int min_size);
std::vector<Clique> maximal_cliques_serial(const CompatGraph& g, int min_size);

// Cliques as permutation sets, each sorted, the list sorted: independent of
// the vertex order the graph was built with.
std::vector<std::vector<Perm>> clique_perm_sets(const CompatGraph& g,
                                                std::span<const Clique> cliques);

// n(n-1)/2.
int paterson_bound(int n);

}  // namespace bentbook
