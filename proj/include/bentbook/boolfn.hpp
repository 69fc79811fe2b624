#pragma once

// Boolean functions on F_2^n: truth tables, the Walsh-Hadamard transform,
// quadratic forms and their symplectic matrices, F_2 rank, and restriction
// to the flats x_i = u, x_j = v.
//
// Index convention: integer j <-> (j_1, ..., j_n) with
// j = j_1 + j_2*2 + ... + j_n*2^(n-1), i.e. x_1 is the least significant bit.
// Variable indices in public APIs are 1-based.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace bentbook {

inline constexpr int kMaxVars = 24;

enum class Classification { Bent, NearBent, Other };

const char* to_string(Classification c);

class TruthTable {
 public:
  // The zero function on n variables.
  explicit TruthTable(int n);

  template <class F>
  static TruthTable from_function(int n, F&& f) {
    TruthTable t(n);
    for (std::size_t x = 0; x < t.size(); ++x) t.set(x, static_cast<bool>(f(static_cast<std::uint32_t>(x))));
    return t;
  }

  int num_vars() const { return n_; }
  std::size_t size() const { return std::size_t{1} << n_; }

  bool operator[](std::size_t x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }
  void set(std::size_t x, bool value);

  std::span<const std::uint64_t> words() const { return words_; }

  bool operator==(const TruthTable&) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

struct WalshSpectrum {
  int n = 0;
  std::vector<std::int64_t> values;  // values[c] = W_f(c)

  std::int64_t max_abs() const;
  bool operator==(const WalshSpectrum&) const = default;
};

// Fast butterfly transform; parallel over butterflies for large n.
WalshSpectrum wht(const TruthTable& f);
// Single-threaded reference for wht.
WalshSpectrum wht_serial(const TruthTable& f);

// Applies the butterfly again; every entry must come back as +-2^n.
// Throws VerificationError otherwise.
TruthTable inverse_wht(const WalshSpectrum& s);

Classification classify_spectrum(const WalshSpectrum& s);

// Whitespace-separated debug dump: one value per line, index ascending.
void write_spectrum(std::ostream& out, const WalshSpectrum& s);

// Dense F_2 matrix with packed rows.
class BitMatrix {
 public:
  BitMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool get(int r, int c) const;
  void set(int r, int c, bool value);
  bool is_symmetric() const;

  bool operator==(const BitMatrix&) const = default;

 private:
  friend int rank_f2(const BitMatrix& m);
  int rows_;
  int cols_;
  int words_per_row_;
  std::vector<std::uint64_t> data_;
};

int rank_f2(const BitMatrix& m);

// Q(x) = sum over pairs {i,j} of x_i x_j + L_c(x) + constant.
// Addition is F_2 addition of functions: symmetric difference of pair sets,
// XOR of linear parts and constants.
class QuadForm {
 public:
  explicit QuadForm(int n);
  QuadForm(int n, std::span<const std::pair<int, int>> pairs, std::uint32_t linear = 0,
           bool constant = false);

  int num_vars() const { return n_; }

  void toggle_pair(int i, int j);
  bool has_pair(int i, int j) const;
  // Canonical pair list, each with i < j, sorted.
  std::vector<std::pair<int, int>> pairs() const;
  bool is_affine() const;

  // Bit k-1 is the coefficient of x_k.
  std::uint32_t linear() const { return linear_; }
  bool constant() const { return constant_; }
  void set_linear(std::uint32_t c);
  void set_constant(bool e) { constant_ = e; }

  // Row k (0-based) of the symplectic matrix as a bit mask.
  std::span<const std::uint32_t> adjacency() const { return adj_; }

  bool evaluate(std::uint32_t x) const;
  TruthTable truth_table() const;

  QuadForm& operator+=(const QuadForm& other);
  friend QuadForm operator+(QuadForm a, const QuadForm& b) { return a += b; }
  bool operator==(const QuadForm&) const = default;

 private:
  int n_;
  std::vector<std::uint32_t> adj_;
  std::uint32_t linear_ = 0;
  bool constant_ = false;
};

BitMatrix symplectic_matrix(const QuadForm& q);

// Rank of the symplectic matrix of q, computed on single-word rows.
int quad_rank(const QuadForm& q);

struct SpectrumSummary {
  int rank = 0;
  std::int64_t magnitude = 0;      // 2^(n - r/2)
  std::int64_t support_count = 0;  // 2^r
};

SpectrumSummary spectrum_from_rank(const QuadForm& q);

// f restricted to x_i = u, x_j = v, as a function of the remaining n-2
// variables in ascending original order. Requires 1 <= i < j <= n, n >= 3.
TruthTable restrict(const TruthTable& f, int i, int j, bool u, bool v);

// Inserts `bit` at position `pos` (0-based), shifting higher bits up.
constexpr std::uint32_t insert_bit(std::uint32_t x, int pos, bool bit) {
  const std::uint32_t low = x & ((std::uint32_t{1} << pos) - 1);
  return ((x >> pos) << (pos + 1)) | (std::uint32_t{bit} << pos) | low;
}

}  // namespace bentbook
