#include "bentbook/quadperm.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "bentbook/errors.hpp"

namespace bentbook {

Perm::Perm(std::vector<int> images) : map_(std::move(images)) {
  const int n = size();
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int v : map_) {
    if (v < 1 || v > n || seen[v]) throw std::invalid_argument("not a permutation of 1..n");
    seen[v] = true;
  }
}

Perm Perm::identity(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 1);
  return Perm(std::move(m));
}

bool Perm::is_identity() const {
  for (int k = 0; k < size(); ++k) {
    if (map_[k] != k + 1) return false;
  }
  return true;
}

Perm reverse(const Perm& p) {
  std::vector<int> m(p.images().rbegin(), p.images().rend());
  return Perm(std::move(m));
}

Perm inverse(const Perm& p) {
  std::vector<int> m(static_cast<std::size_t>(p.size()));
  for (int k = 1; k <= p.size(); ++k) m[p(k) - 1] = k;
  return Perm(std::move(m));
}

Perm compose(const Perm& p, const Perm& q) {
  if (p.size() != q.size()) throw std::invalid_argument("composing permutations of different sizes");
  std::vector<int> m(static_cast<std::size_t>(p.size()));
  for (int k = 1; k <= p.size(); ++k) m[k - 1] = p(q(k));
  return Perm(std::move(m));
}

std::string to_string(const Perm& p) {
  std::string s = "[";
  for (int k = 1; k <= p.size(); ++k) {
    if (k > 1) s += ',';
    s += std::to_string(p(k));
  }
  s += ']';
  return s;
}

Perm parse_perm(std::string_view text) {
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return std::string_view{};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
  };
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw std::invalid_argument("permutation must be written as [a,b,...]");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<int> images;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto field = trim(text.substr(0, comma));
    int v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
      throw std::invalid_argument("bad permutation entry '" + std::string(field) + "'");
    }
    images.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw std::invalid_argument("trailing comma in permutation");
  }
  return Perm(std::move(images));
}

std::ostream& operator<<(std::ostream& out, const Perm& p) { return out << to_string(p); }

QuadForm q_pi(const Perm& p) {
  QuadForm q(p.size());
  for (int k = 1; k < p.size(); ++k) q.toggle_pair(p(k), p(k + 1));
  return q;
}

QuadForm difference_form(const Perm& p, const Perm& q) {
  if (p.size() != q.size()) throw std::invalid_argument("permutations of different sizes");
  return q_pi(p) + q_pi(q);
}

bool is_full_rank(int rank, int n) { return rank == (n % 2 == 0 ? n : n - 1); }

namespace {

Classification classification_from_rank(int rank, int n) {
  if (!is_full_rank(rank, n)) return Classification::Other;
  return n % 2 == 0 ? Classification::Bent : Classification::NearBent;
}

void check_bent_input(const QuadForm& q, int i, int j) {
  const int n = q.num_vars();
  if (n % 2 != 0 || n < 4) throw PreconditionError("WHC needs an even variable count >= 4");
  if (i < 1 || j > n || i >= j) throw PreconditionError("WHC indices must satisfy 1 <= i < j <= n");
  if (quad_rank(q) != n) throw PreconditionError("WHC needs a bent quadratic");
}

}  // namespace

CompatVerdict compatible(const Perm& p, const Perm& q, CheckRoute route) {
  if (p.size() != q.size()) throw std::invalid_argument("permutations of different sizes");
  const int n = p.size();
  if (n < 2) throw std::invalid_argument("compatibility needs n >= 2");
  const QuadForm form = difference_form(p, q);
  const int rank = quad_rank(form);
  const Classification by_rank = classification_from_rank(rank, n);
  if (route == CheckRoute::Both && n <= kMaxWhtRouteVars) {
    const Classification by_wht = classify_spectrum(wht(form.truth_table()));
    if (by_wht != by_rank) {
      throw std::logic_error("rank and Walsh routes disagree for " + to_string(p) + " vs " +
                             to_string(q));
    }
  }
  return {by_rank != Classification::Other, by_rank, rank};
}

bool is_compatible(const Perm& p, const Perm& q) {
  if (p.size() != q.size()) throw std::invalid_argument("permutations of different sizes");
  return is_full_rank(quad_rank(difference_form(p, q)), p.size());
}

const char* to_string(Dichotomy d) { return d == Dichotomy::CaseI ? "case-i" : "case-ii"; }

Dichotomy prop1_classify(const QuadForm& q, int i, int j) {
  check_bent_input(q, i, j);
  const int n = q.num_vars();
  const TruthTable f = q.truth_table();
  std::array<WalshSpectrum, 4> parts;
  for (int uv = 0; uv < 4; ++uv) parts[uv] = wht(restrict(f, i, j, uv & 1, uv >> 1));

  const std::int64_t full = std::int64_t{1} << (n / 2);
  const std::int64_t half = std::int64_t{1} << ((n - 2) / 2);
  bool seen_case1 = false;
  bool seen_case2 = false;
  for (std::size_t c = 0; c < parts[0].values.size(); ++c) {
    int zeros = 0, at_full = 0, at_half = 0;
    for (const auto& s : parts) {
      const std::int64_t a = std::abs(s.values[c]);
      zeros += a == 0;
      at_full += a == full;
      at_half += a == half;
    }
    if (zeros == 3 && at_full == 1) {
      seen_case1 = true;
    } else if (at_half == 4) {
      seen_case2 = true;
    } else {
      throw VerificationError("restricted Walsh values fit neither case");
    }
  }
  if (seen_case1 == seen_case2) throw VerificationError("restricted Walsh values mix both cases");
  return seen_case1 ? Dichotomy::CaseI : Dichotomy::CaseII;
}

bool whc(const QuadForm& q, int i, int j) { return prop1_classify(q, i, j) == Dichotomy::CaseI; }

bool whc_by_product(const QuadForm& q, int i, int j) {
  check_bent_input(q, i, j);
  const int n = q.num_vars();
  const auto w = wht(q.truth_table()).values;
  const std::size_t ei = std::size_t{1} << (i - 1);
  const std::size_t ej = std::size_t{1} << (j - 1);
  // Each factor is +-2^(n/2), so the product fits in int64 for n <= 30.
  const std::int64_t target = std::int64_t{1} << (2 * n);
  for (std::size_t c = 0; c < w.size(); ++c) {
    if (w[c] * w[c ^ ei] * w[c ^ ej] * w[c ^ ei ^ ej] != target) return false;
  }
  return true;
}

}  // namespace bentbook
