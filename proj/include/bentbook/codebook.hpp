#pragma once

// GDJ sequences from path quadratic forms, Golay-pair checks, PAPR, the
// spreading matrix built from a compatible set, and its coherence.
//
// Sequence entry j is (-1)^{f(x)} where x is the bit vector of j with x_1 the
// least significant bit. Column c of block l is the GDJ sequence of perms[l]
// with linear part c under the same convention.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bentbook/quadperm.hpp"

namespace bentbook {

inline constexpr int kMaterializeGuard = 12;
inline constexpr int kDirectCoherenceGuard = 8;
inline constexpr int kDefaultOversample = 16;

struct SignSequence {
  int n = 0;
  std::vector<std::int8_t> values;  // each +1 or -1

  std::size_t size() const { return values.size(); }
  bool operator==(const SignSequence&) const = default;
};

// Builds a sequence from +-1 values; the length must be a power of two.
SignSequence make_sequence(std::vector<std::int8_t> values);

// (-1)^{Q_p(x) + c.x + eps}. Throws std::invalid_argument if c has bits at or
// above position n.
SignSequence gdj_sequence(const Perm& p, std::uint32_t c, bool eps = false);

// (-1)^{Q_p(x) + c.x + x_{p(1)} + eps_prime}.
SignSequence golay_mate(const Perm& p, std::uint32_t c, bool eps_prime = false);

// sum_i a_i a_{i+tau}; negative tau uses the mirrored sum. |tau| < N.
std::int64_t aperiodic_autocorr(const SignSequence& a, std::int64_t tau);

bool is_golay_pair(const SignSequence& a, const SignSequence& b);

struct PaprResult {
  double grid_max = 0.0;     // max over t = k/(oversample N) of |A(t)|^2 / N
  double upper_bound = 0.0;  // (N + sum_{tau != 0} |C(tau)|) / N
};

// Grid PAPR through a zero-padded FFT of length oversample*N. The aperiodic
// autocorrelation for the bound comes out of the same transform.
PaprResult papr(const SignSequence& a, int oversample = kDefaultOversample);

// Exact rational p/q with q > 0, kept in lowest terms.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;  // "1/16", "0", "1"
  bool operator==(const Fraction&) const = default;
};

Fraction parse_fraction(std::string_view text);

// rows x cols sign matrix stored column-major as packed bits (bit set = -1).
class SignMatrix {
 public:
  SignMatrix() = default;
  SignMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_col() const { return wpc_; }

  int sign(std::size_t r, std::size_t c) const {
    return (col(c)[r >> 6] >> (r & 63)) & 1u ? -1 : 1;
  }
  void set_sign(std::size_t r, std::size_t c, int s);
  std::span<const std::uint64_t> col(std::size_t c) const { return {bits_.data() + c * wpc_, wpc_}; }
  std::span<std::uint64_t> col(std::size_t c) { return {bits_.data() + c * wpc_, wpc_}; }

  // Integer inner product of two columns.
  std::int64_t inner(std::size_t a, std::size_t b) const;
  SignSequence column_sequence(std::size_t c) const;

  bool operator==(const SignMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t wpc_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct RankCoherence {
  Fraction mu;  // 2^{-r_min/2}
  int r_min = 0;
};

// Throws std::invalid_argument for fewer than two perms, duplicates or mixed
// sizes.
RankCoherence coherence_via_rank(std::span<const Perm> perms);

// 2^{n - r_min/2}: the largest |W| of any pairwise difference form.
std::int64_t w_phi(std::span<const Perm> perms);

struct CodebookMetrics {
  int n = 0;
  int L = 0;
  std::int64_t N = 0;
  std::int64_t K = 0;
  std::optional<int> r_min;  // absent for a single block
  Fraction coherence;        // 0 for a single block
  std::optional<std::int64_t> w_phi;
};

// Metrics from ranks alone; works at any n supported by quad_rank.
CodebookMetrics rank_metrics(std::span<const Perm> perms);

struct Codebook {
  int n = 0;
  std::vector<Perm> perms;
  SignMatrix columns;  // N x (L N), unscaled; the 1/sqrt(N) factor is implied
  CodebookMetrics metrics;

  std::size_t N() const { return columns.rows(); }
  std::size_t L() const { return perms.size(); }
};

// Materializes [Phi_1, ..., Phi_L]. Throws std::invalid_argument on
// duplicates or mixed sizes, GuardError above `guard` variables, and
// VerificationError if two columns of a block are not orthogonal (all pairs
// checked up to n = 8, a fixed sample of pairs above).
Codebook spreading_matrix(std::span<const Perm> perms, int guard = kMaterializeGuard);

struct DirectCoherence {
  Fraction mu;
  std::int64_t max_inner = 0;
  std::size_t col_a = 0;  // a pair attaining max_inner
  std::size_t col_b = 0;
};

// Max |<a, b>| / N over column pairs from different blocks. Throws
// std::invalid_argument for a single block and GuardError above `guard`.
DirectCoherence coherence_direct(const Codebook& cb, int guard = kDirectCoherenceGuard);
DirectCoherence coherence_direct_serial(const Codebook& cb, int guard = kDirectCoherenceGuard);

struct PaprScan {
  double max_grid = 0.0;
  double max_upper_bound = 0.0;
  std::size_t worst_column = 0;
  std::optional<std::size_t> first_failure;  // first column with grid PAPR > limit
};

PaprScan papr_scan(const SignMatrix& m, int oversample = kDefaultOversample, double limit = 2.0 + 1e-9);

// sqrt((K - N) / ((K - 1) N)). Throws std::invalid_argument unless K > N >= 1.
double welch_bound(std::int64_t N, std::int64_t K);

// Lowest coherence two path quadratic blocks can have: 2^{-n/2} for even n,
// 2^{-(n-1)/2} for odd n.
Fraction quadratic_coherence_bound(int n);

}  // namespace bentbook
