#include "bentbook/search.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bentbook/errors.hpp"

namespace bentbook {

namespace {

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

void check_search_guard(int n, bool force) {
  if (n < 2) throw std::invalid_argument("IS_n needs n >= 2");
  if (n > kDefaultSearchGuard && !force) {
    throw GuardError("exhaustive search over S_" + std::to_string(n) +
                     " exceeds the guard; pass force to override");
  }
  if (n > 20) throw GuardError("n! overflows the search index");
}

// Lexicographic rank -> permutation of {1..n}.
std::vector<int> unrank(std::uint64_t rank, int n) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> out;
  out.reserve(pool.size());
  for (int k = n; k >= 1; --k) {
    const std::uint64_t block = factorial(k - 1);
    const auto idx = static_cast<std::ptrdiff_t>(rank / block);
    rank %= block;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + idx);
  }
  return out;
}

// Symplectic rows of Q_p, one bit mask per variable.
std::vector<std::uint32_t> path_rows(const Perm& p) {
  std::vector<std::uint32_t> rows(static_cast<std::size_t>(p.size()), 0);
  for (int k = 1; k < p.size(); ++k) {
    const int a = p(k) - 1, b = p(k + 1) - 1;
    rows[a] ^= std::uint32_t{1} << b;
    rows[b] ^= std::uint32_t{1} << a;
  }
  return rows;
}

// Rank over F_2 of the sum of two symplectic matrices.
int sum_rank(const std::uint32_t* a, const std::uint32_t* b, int n) {
  std::uint32_t rows[32];
  for (int r = 0; r < n; ++r) rows[r] = a[r] ^ b[r];
  int rank = 0;
  for (int r = 0; r < n; ++r) {
    const std::uint32_t pivot = rows[r];
    if (!pivot) continue;
    ++rank;
    const std::uint32_t low = pivot & -pivot;
    for (int t = r + 1; t < n; ++t) {
      if (rows[t] & low) rows[t] ^= pivot;
    }
  }
  return rank;
}

struct EdgeTest {
  int n = 0;
  std::vector<std::uint32_t> rows;  // vertex v occupies [v*n, (v+1)*n)

  explicit EdgeTest(const std::vector<Perm>& vertices) : n(vertices.empty() ? 0 : vertices.front().size()) {
    rows.reserve(vertices.size() * static_cast<std::size_t>(n));
    for (const auto& p : vertices) {
      const auto r = path_rows(p);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  }
  bool operator()(int u, int v) const {
    return is_full_rank(sum_rank(rows.data() + static_cast<std::size_t>(u) * n,
                                 rows.data() + static_cast<std::size_t>(v) * n, n),
                        n);
  }
};

void check_candidates(const std::vector<Perm>& candidates) {
  if (candidates.empty()) return;
  const int n = candidates.front().size();
  for (const auto& p : candidates) {
    if (p.size() != n) throw std::invalid_argument("graph vertices of different sizes");
  }
  std::vector<Perm> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate graph vertex");
  }
}

std::vector<int> degeneracy_order(const CompatGraph& g) {
  const int n = g.size();
  std::vector<int> degree(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) degree[v] = g.degree(v);
  std::vector<bool> removed(static_cast<std::size_t>(n), false);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (!removed[v] && (best < 0 || degree[v] < degree[best])) best = v;
    }
    removed[best] = true;
    order.push_back(best);
    g.adjacency[best].for_each([&](int w) {
      if (!removed[w]) --degree[w];
    });
  }
  return order;
}

class BronKerbosch {
 public:
  BronKerbosch(const CompatGraph& g, int min_size, std::vector<Clique>& out)
      : g_(g), min_size_(min_size), out_(out) {}

  void run(std::vector<int>& r, const VertexSet& p, const VertexSet& x) {
    if (static_cast<int>(r.size()) + p.count() < min_size_) return;
    if (p.empty()) {
      if (x.empty()) out_.push_back(r);
      return;
    }
    int pivot = -1;
    int best = -1;
    (p | x).for_each([&](int u) {
      const int c = p.count_and(g_.adjacency[u]);
      if (c > best) {
        best = c;
        pivot = u;
      }
    });
    VertexSet todo = p.minus(g_.adjacency[pivot]);
    VertexSet pp = p;
    VertexSet xx = x;
    todo.for_each([&](int v) {
      r.push_back(v);
      run(r, pp & g_.adjacency[v], xx & g_.adjacency[v]);
      r.pop_back();
      pp.reset(v);
      xx.set(v);
    });
  }

 private:
  const CompatGraph& g_;
  int min_size_;
  std::vector<Clique>& out_;
};

// Outer Bron-Kerbosch level for the vertex at position i of the ordering.
void expand_from(const CompatGraph& g, const std::vector<int>& order,
                 const std::vector<int>& position, int i, int min_size, std::vector<Clique>& out) {
  const int v = order[i];
  VertexSet p(g.size()), x(g.size());
  g.adjacency[v].for_each([&](int w) {
    if (position[w] > i) {
      p.set(w);
    } else {
      x.set(w);
    }
  });
  std::vector<int> r{v};
  BronKerbosch(g, min_size, out).run(r, p, x);
}

std::vector<Clique> canonical(std::vector<Clique> cliques) {
  for (auto& c : cliques) std::sort(c.begin(), c.end());
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

}  // namespace

std::vector<Perm> enumerate_is(int n, bool force) {
  check_search_guard(n, force);
  const Perm id = Perm::identity(n);
  const std::uint64_t total = factorial(n);
  const std::uint64_t chunk = std::max<std::uint64_t>(1, total / 512);
  const auto chunks = static_cast<std::int64_t>((total + chunk - 1) / chunk);
  std::vector<std::vector<Perm>> found(static_cast<std::size_t>(chunks));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk;
    const std::uint64_t end = std::min(total, begin + chunk);
    std::vector<int> images = unrank(begin, n);
    for (std::uint64_t k = begin; k < end; ++k) {
      Perm p(images);
      if (is_compatible(id, p)) found[c].push_back(std::move(p));
      std::next_permutation(images.begin(), images.end());
    }
  }

  std::vector<Perm> out;
  for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
  return out;
}

std::vector<Perm> enumerate_is_serial(int n, bool force) {
  check_search_guard(n, force);
  const Perm id = Perm::identity(n);
  std::vector<int> images(id.images().begin(), id.images().end());
  std::vector<Perm> out;
  do {
    Perm p(images);
    if (is_compatible(id, p)) out.push_back(std::move(p));
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

const std::vector<Perm>& labeled_is4() {
  static const std::vector<Perm> rho = {
      {3, 2, 4, 1}, {2, 4, 1, 3}, {3, 4, 1, 2}, {2, 4, 3, 1}, {3, 1, 4, 2}, {1, 3, 4, 2},
      {4, 2, 1, 3}, {2, 1, 4, 3}, {4, 1, 3, 2}, {2, 3, 1, 4}, {1, 4, 2, 3}, {3, 1, 2, 4},
  };
  return rho;
}

CompositionTable::CompositionTable(int size, std::vector<CompositionEntry> entries)
    : size_(size), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(size) * size) {
    throw std::invalid_argument("composition table entry count mismatch");
  }
}

const CompositionEntry& CompositionTable::at(int i, int j) const {
  if (i < 1 || j < 1 || i > size_ || j > size_) throw std::out_of_range("table index");
  return entries_[static_cast<std::size_t>(i - 1) * size_ + (j - 1)];
}

std::string CompositionTable::render() const {
  const int width = static_cast<int>(std::to_string(size_).size()) + 1;
  std::ostringstream out;
  out << std::setw(width) << "";
  for (int j = 1; j <= size_; ++j) out << ' ' << std::setw(width) << j;
  out << '\n';
  for (int i = 1; i <= size_; ++i) {
    out << std::setw(width) << i;
    for (int j = 1; j <= size_; ++j) {
      const auto& e = at(i, j);
      std::string cell = e.kind == CompositionEntry::Kind::Identity ? "0"
                         : e.kind == CompositionEntry::Kind::Member ? std::to_string(e.member)
                                                                    : "-";
      out << ' ' << std::setw(width) << cell;
    }
    out << '\n';
  }
  return out.str();
}

CompositionTable composition_table(std::span<const Perm> members) {
  const int k = static_cast<int>(members.size());
  std::map<Perm, int> label;
  for (int i = 0; i < k; ++i) {
    if (members[i].size() != members.front().size()) {
      throw std::invalid_argument("composition table members of different sizes");
    }
    if (members[i].is_identity()) throw std::invalid_argument("identity must not be a member");
    label.emplace(members[i], i + 1);
  }
  std::vector<CompositionEntry> entries;
  entries.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i) {
    const Perm inv = inverse(members[i]);
    for (int j = 0; j < k; ++j) {
      const Perm c = compose(inv, members[j]);
      if (c.is_identity()) {
        entries.push_back({CompositionEntry::Kind::Identity, 0});
      } else if (auto it = label.find(c); it != label.end()) {
        entries.push_back({CompositionEntry::Kind::Member, it->second});
      } else {
        entries.push_back({CompositionEntry::Kind::NonMember, 0});
      }
    }
  }
  return CompositionTable(k, std::move(entries));
}

bool VertexSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

int VertexSet::count() const {
  int c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

int VertexSet::count_and(const VertexSet& other) const {
  int c = 0;
  for (std::size_t k = 0; k < words_.size(); ++k) c += std::popcount(words_[k] & other.words_[k]);
  return c;
}

VertexSet VertexSet::operator&(const VertexSet& other) const {
  VertexSet r = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= other.words_[k];
  return r;
}

VertexSet VertexSet::operator|(const VertexSet& other) const {
  VertexSet r = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] |= other.words_[k];
  return r;
}

VertexSet VertexSet::minus(const VertexSet& other) const {
  VertexSet r = *this;
  for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= ~other.words_[k];
  return r;
}

CompatGraph build_graph(std::vector<Perm> candidates) {
  check_candidates(candidates);
  CompatGraph g{std::move(candidates), {}};
  const int n = g.size();
  g.adjacency.assign(static_cast<std::size_t>(n), VertexSet(n));
  const EdgeTest edge(g.vertices);
#pragma omp parallel for schedule(dynamic, 8)
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (edge(u, v)) g.adjacency[u].set(v);
    }
  }
  for (int u = 0; u < n; ++u) {
    g.adjacency[u].for_each([&](int v) {
      if (v > u) g.adjacency[v].set(u);
    });
  }
  return g;
}

CompatGraph build_graph_serial(std::vector<Perm> candidates) {
  check_candidates(candidates);
  CompatGraph g{std::move(candidates), {}};
  const int n = g.size();
  g.adjacency.assign(static_cast<std::size_t>(n), VertexSet(n));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (is_compatible(g.vertices[u], g.vertices[v])) {
        g.adjacency[u].set(v);
        g.adjacency[v].set(u);
      }
    }
  }
  return g;
}

std::vector<Clique> maximal_cliques(const CompatGraph& g, int min_size) {
  const auto order = degeneracy_order(g);
  std::vector<int> position(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<int>(i);
  std::vector<Clique> all;
#pragma omp parallel
  {
    std::vector<Clique> local;
#pragma omp for schedule(dynamic)
    for (int i = 0; i < g.size(); ++i) expand_from(g, order, position, i, min_size, local);
#pragma omp critical(bentbook_cliques)
    all.insert(all.end(), local.begin(), local.end());
  }
  return canonical(std::move(all));
}

std::vector<Clique> maximal_cliques_serial(const CompatGraph& g, int min_size) {
  const auto order = degeneracy_order(g);
  std::vector<int> position(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<int>(i);
  std::vector<Clique> all;
  for (int i = 0; i < g.size(); ++i) expand_from(g, order, position, i, min_size, all);
  return canonical(std::move(all));
}

std::vector<std::vector<Perm>> clique_perm_sets(const CompatGraph& g,
                                                std::span<const Clique> cliques) {
  // Ordering by vertex rank matches ordering by permutation.
  std::vector<int> by_perm(g.vertices.size());
  std::iota(by_perm.begin(), by_perm.end(), 0);
  std::sort(by_perm.begin(), by_perm.end(), [&](int a, int b) { return g.vertices[a] < g.vertices[b]; });
  std::vector<int> rank(by_perm.size());
  for (std::size_t k = 0; k < by_perm.size(); ++k) rank[by_perm[k]] = static_cast<int>(k);

  std::vector<std::vector<int>> ranked;
  ranked.reserve(cliques.size());
  for (const auto& c : cliques) {
    std::vector<int> r;
    r.reserve(c.size());
    for (int v : c) r.push_back(rank[v]);
    std::sort(r.begin(), r.end());
    ranked.push_back(std::move(r));
  }
  std::sort(ranked.begin(), ranked.end());

  std::vector<std::vector<Perm>> sets;
  sets.reserve(ranked.size());
  for (const auto& r : ranked) {
    std::vector<Perm> s;
    s.reserve(r.size());
    for (int k : r) s.push_back(g.vertices[by_perm[k]]);
    sets.push_back(std::move(s));
  }
  return sets;
}

int paterson_bound(int n) {
  if (n < 2) throw std::invalid_argument("Paterson bound needs n >= 2");
  return n * (n - 1) / 2;
}

}  // namespace bentbook
