#pragma once

// Slow, independent reference computations used by the tests. None of these
// go through the library's transforms, rank routines or sequence builders.

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bentbook/quadperm.hpp"

namespace oracle {

inline std::uint64_t seed() {
  if (const char* s = std::getenv("BENTBOOK_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240601;
}

inline std::string fixture(const std::string& name) { return std::string(BENTBOOK_FIXTURES) + "/" + name; }

inline std::vector<std::string> fixture_lines(const std::string& name) {
  std::ifstream in(fixture(name));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

// Each fixture line as a row of whitespace-separated permutations.
inline std::vector<std::vector<bentbook::Perm>> fixture_perm_rows(const std::string& name) {
  std::vector<std::vector<bentbook::Perm>> rows;
  for (const auto& line : fixture_lines(name)) {
    std::istringstream in(line);
    std::vector<bentbook::Perm> row;
    for (std::string tok; in >> tok;) row.push_back(bentbook::parse_perm(tok));
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<bentbook::Perm> fixture_column(const std::string& name, std::size_t col) {
  std::vector<bentbook::Perm> out;
  for (const auto& row : fixture_perm_rows(name)) out.push_back(row.at(col));
  return out;
}

inline bool bit(std::uint32_t x, int k) { return (x >> (k - 1)) & 1u; }  // x_k, 1-based

// Q_p(x) straight from the path definition.
inline bool path_form(const bentbook::Perm& p, std::uint32_t x) {
  bool v = false;
  for (int k = 1; k < p.size(); ++k) v ^= bit(x, p(k)) && bit(x, p(k + 1));
  return v;
}

// W_f(c) = sum_x (-1)^{f(x) + c.x}, O(4^n).
template <class F>
std::vector<std::int64_t> walsh(int n, F&& f) {
  const std::uint32_t N = 1u << n;
  std::vector<std::int64_t> w(N);
  for (std::uint32_t c = 0; c < N; ++c) {
    std::int64_t s = 0;
    for (std::uint32_t x = 0; x < N; ++x) {
      const bool e = f(x) ^ (__builtin_popcount(c & x) & 1);
      s += e ? -1 : 1;
    }
    w[c] = s;
  }
  return w;
}

// Rank over F_2 of a dense 0/1 matrix by plain row reduction.
inline int rank_f2(std::vector<std::vector<int>> m) {
  int rank = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][c]) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = 0; r < rows; ++r) {
      if (r != rank && m[r][c]) {
        for (int k = 0; k < cols; ++k) m[r][k] ^= m[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

// Symplectic matrix of Q_p + Q_q built from the two edge lists.
inline std::vector<std::vector<int>> difference_matrix(const bentbook::Perm& p, const bentbook::Perm& q) {
  const int n = p.size();
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
  for (const auto* r : {&p, &q}) {
    for (int k = 1; k < n; ++k) {
      const int a = (*r)(k) - 1, b = (*r)(k + 1) - 1;
      m[a][b] ^= 1;
      m[b][a] ^= 1;
    }
  }
  return m;
}

// Compatibility by full Walsh spectrum of Q_p + Q_q.
inline bool compatible_by_spectrum(const bentbook::Perm& p, const bentbook::Perm& q) {
  const int n = p.size();
  const auto w = walsh(n, [&](std::uint32_t x) { return path_form(p, x) ^ path_form(q, x); });
  const std::int64_t mag = std::int64_t{1} << ((n + 1) / 2);
  for (auto v : w) {
    const std::int64_t a = v < 0 ? -v : v;
    if (n % 2 == 0 && a != (std::int64_t{1} << (n / 2))) return false;
    if (n % 2 == 1 && a != 0 && a != mag) return false;
  }
  return true;
}

inline std::vector<int> gdj_signs(const bentbook::Perm& p, std::uint32_t c, bool extra_first, bool eps) {
  const std::uint32_t N = 1u << p.size();
  std::vector<int> s(N);
  for (std::uint32_t x = 0; x < N; ++x) {
    bool f = path_form(p, x) ^ (__builtin_popcount(c & x) & 1) ^ eps;
    if (extra_first) f ^= bit(x, p(1));
    s[x] = f ? -1 : 1;
  }
  return s;
}

inline std::int64_t autocorr(const std::vector<int>& a, int tau) {
  const int N = static_cast<int>(a.size());
  std::int64_t s = 0;
  if (tau >= 0) {
    for (int i = 0; i + tau < N; ++i) s += a[i] * a[i + tau];
  } else {
    for (int i = 0; i + (-tau) < N; ++i) s += a[i - tau] * a[i];
  }
  return s;
}

// max_k |sum_i a_i e^{2 pi i k i / M}|^2 / N by direct summation.
inline double grid_papr(const std::vector<int>& a, int oversample) {
  const int N = static_cast<int>(a.size());
  const int M = N * oversample;
  double best = 0.0;
  for (int k = 0; k < M; ++k) {
    std::complex<double> s = 0.0;
    for (int i = 0; i < N; ++i) s += static_cast<double>(a[i]) * std::polar(1.0, 2.0 * std::numbers::pi * k * i / M);
    best = std::max(best, std::norm(s));
  }
  return best / N;
}

}  // namespace oracle
