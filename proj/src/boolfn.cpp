#include "bentbook/boolfn.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

#include "bentbook/errors.hpp"

namespace bentbook {

namespace {

void check_vars(int n) {
  if (n < 1 || n > kMaxVars) {
    throw GuardError("variable count " + std::to_string(n) + " outside [1, " +
                     std::to_string(kMaxVars) + "]");
  }
}

// Parallelising a stage only pays off once a stage has enough butterflies.
constexpr int kParallelWhtVars = 14;

std::vector<std::int64_t> signed_table(const TruthTable& f) {
  std::vector<std::int64_t> buf(f.size());
  for (std::size_t x = 0; x < buf.size(); ++x) buf[x] = f[x] ? -1 : 1;
  return buf;
}

void butterfly_serial(std::vector<std::int64_t>& a) {
  const std::size_t size = a.size();
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t i = 0; i < size; i += 2 * h) {
      for (std::size_t k = i; k < i + h; ++k) {
        const std::int64_t s = a[k];
        const std::int64_t t = a[k + h];
        a[k] = s + t;
        a[k + h] = s - t;
      }
    }
  }
}

void butterfly_parallel(std::vector<std::int64_t>& a) {
  constexpr std::int64_t kBlock = 4096;
  const std::int64_t size = static_cast<std::int64_t>(a.size());
  std::int64_t* data = a.data();
  const std::int64_t block = std::min(kBlock, size);
  // Strides below the block size stay inside one block.
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < size; b += block) {
    for (std::int64_t h = 1; h < block; h <<= 1) {
      for (std::int64_t i = b; i < b + block; i += 2 * h) {
        for (std::int64_t k = i; k < i + h; ++k) {
          const std::int64_t s = data[k];
          const std::int64_t t = data[k + h];
          data[k] = s + t;
          data[k + h] = s - t;
        }
      }
    }
  }
  // Larger strides: contiguous runs of `block` butterflies.
  const std::int64_t runs = size / 2 / block;
  for (std::int64_t h = block; h < size; h <<= 1) {
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < runs; ++j) {
      const std::int64_t first = j * block;
      const std::int64_t lo = (first / h) * 2 * h + first % h;
      for (std::int64_t k = lo; k < lo + block; ++k) {
        const std::int64_t s = data[k];
        const std::int64_t t = data[k + h];
        data[k] = s + t;
        data[k + h] = s - t;
      }
    }
  }
}

int eliminate(std::vector<std::uint64_t>& data, int rows, int cols, int words_per_row) {
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    const int w = c >> 6;
    const std::uint64_t bit = std::uint64_t{1} << (c & 63);
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (data[static_cast<std::size_t>(r) * words_per_row + w] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    auto row = [&](int r) { return data.begin() + static_cast<std::ptrdiff_t>(r) * words_per_row; };
    if (pivot != rank) std::swap_ranges(row(pivot), row(pivot) + words_per_row, row(rank));
    for (int r = 0; r < rows; ++r) {
      if (r != rank && (data[static_cast<std::size_t>(r) * words_per_row + w] & bit)) {
        for (int k = 0; k < words_per_row; ++k) row(r)[k] ^= row(rank)[k];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Bent: return "bent";
    case Classification::NearBent: return "near-bent";
    case Classification::Other: return "other";
  }
  return "?";
}

TruthTable::TruthTable(int n) : n_(n) {
  check_vars(n);
  words_.assign(std::max<std::size_t>(1, size() / 64), 0);
}

void TruthTable::set(std::size_t x, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (x & 63);
  if (value) {
    words_[x >> 6] |= bit;
  } else {
    words_[x >> 6] &= ~bit;
  }
}

std::int64_t WalshSpectrum::max_abs() const {
  std::int64_t m = 0;
  for (auto v : values) m = std::max(m, std::abs(v));
  return m;
}

WalshSpectrum wht(const TruthTable& f) {
  auto buf = signed_table(f);
  if (f.num_vars() >= kParallelWhtVars) {
    butterfly_parallel(buf);
  } else {
    butterfly_serial(buf);
  }
  return {f.num_vars(), std::move(buf)};
}

WalshSpectrum wht_serial(const TruthTable& f) {
  auto buf = signed_table(f);
  butterfly_serial(buf);
  return {f.num_vars(), std::move(buf)};
}

TruthTable inverse_wht(const WalshSpectrum& s) {
  auto buf = s.values;
  butterfly_serial(buf);
  const std::int64_t scale = std::int64_t{1} << s.n;
  TruthTable f(s.n);
  for (std::size_t x = 0; x < buf.size(); ++x) {
    if (buf[x] == scale) continue;
    if (buf[x] != -scale) throw VerificationError("inverse transform is not a +-1 table");
    f.set(x, true);
  }
  return f;
}

Classification classify_spectrum(const WalshSpectrum& s) {
  const int n = s.n;
  if (n % 2 == 0) {
    const std::int64_t mag = std::int64_t{1} << (n / 2);
    const bool bent = std::all_of(s.values.begin(), s.values.end(),
                                  [&](std::int64_t v) { return v == mag || v == -mag; });
    return bent ? Classification::Bent : Classification::Other;
  }
  const std::int64_t mag = std::int64_t{1} << ((n + 1) / 2);
  bool zero = false, pos = false, neg = false;
  for (auto v : s.values) {
    if (v == 0) {
      zero = true;
    } else if (v == mag) {
      pos = true;
    } else if (v == -mag) {
      neg = true;
    } else {
      return Classification::Other;
    }
  }
  return zero && pos && neg ? Classification::NearBent : Classification::Other;
}

void write_spectrum(std::ostream& out, const WalshSpectrum& s) {
  for (auto v : s.values) out << v << '\n';
}

BitMatrix::BitMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), words_per_row_(std::max(1, (cols + 63) / 64)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  data_.assign(static_cast<std::size_t>(rows) * words_per_row_, 0);
}

bool BitMatrix::get(int r, int c) const {
  return (data_[static_cast<std::size_t>(r) * words_per_row_ + (c >> 6)] >> (c & 63)) & 1u;
}

void BitMatrix::set(int r, int c, bool value) {
  auto& word = data_[static_cast<std::size_t>(r) * words_per_row_ + (c >> 6)];
  const std::uint64_t bit = std::uint64_t{1} << (c & 63);
  word = value ? (word | bit) : (word & ~bit);
}

bool BitMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int r = 0; r < rows_; ++r) {
    for (int c = r + 1; c < cols_; ++c) {
      if (get(r, c) != get(c, r)) return false;
    }
  }
  return true;
}

int rank_f2(const BitMatrix& m) {
  auto data = m.data_;
  return eliminate(data, m.rows_, m.cols_, m.words_per_row_);
}

QuadForm::QuadForm(int n) : n_(n) {
  check_vars(n);
  adj_.assign(static_cast<std::size_t>(n), 0);
}

QuadForm::QuadForm(int n, std::span<const std::pair<int, int>> pairs, std::uint32_t linear,
                   bool constant)
    : QuadForm(n) {
  for (auto [i, j] : pairs) toggle_pair(i, j);
  set_linear(linear);
  constant_ = constant;
}

void QuadForm::toggle_pair(int i, int j) {
  if (i == j) throw std::invalid_argument("quadratic monomial needs two distinct variables");
  if (i < 1 || j < 1 || i > n_ || j > n_) throw std::out_of_range("variable index out of range");
  adj_[i - 1] ^= std::uint32_t{1} << (j - 1);
  adj_[j - 1] ^= std::uint32_t{1} << (i - 1);
}

bool QuadForm::has_pair(int i, int j) const {
  if (i < 1 || j < 1 || i > n_ || j > n_) throw std::out_of_range("variable index out of range");
  return (adj_[i - 1] >> (j - 1)) & 1u;
}

std::vector<std::pair<int, int>> QuadForm::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if ((adj_[i] >> j) & 1u) out.emplace_back(i + 1, j + 1);
    }
  }
  return out;
}

bool QuadForm::is_affine() const {
  return std::all_of(adj_.begin(), adj_.end(), [](std::uint32_t r) { return r == 0; });
}

void QuadForm::set_linear(std::uint32_t c) {
  if (n_ < 32 && (c >> n_) != 0) throw std::out_of_range("linear part wider than n");
  linear_ = c;
}

bool QuadForm::evaluate(std::uint32_t x) const {
  unsigned v = constant_ ? 1u : 0u;
  v ^= std::popcount(linear_ & x) & 1u;
  for (int i = 0; i < n_; ++i) {
    if ((x >> i) & 1u) {
      const std::uint32_t above = adj_[i] & ~((std::uint32_t{2} << i) - 1);
      v ^= std::popcount(above & x) & 1u;
    }
  }
  return v & 1u;
}

TruthTable QuadForm::truth_table() const {
  return TruthTable::from_function(n_, [this](std::uint32_t x) { return evaluate(x); });
}

QuadForm& QuadForm::operator+=(const QuadForm& other) {
  if (other.n_ != n_) throw std::invalid_argument("adding forms with different variable counts");
  for (int i = 0; i < n_; ++i) adj_[i] ^= other.adj_[i];
  linear_ ^= other.linear_;
  constant_ = constant_ != other.constant_;
  return *this;
}

BitMatrix symplectic_matrix(const QuadForm& q) {
  const int n = q.num_vars();
  BitMatrix m(n, n);
  const auto adj = q.adjacency();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m.set(r, c, (adj[r] >> c) & 1u);
  }
  return m;
}

int quad_rank(const QuadForm& q) {
  std::vector<std::uint32_t> rows(q.adjacency().begin(), q.adjacency().end());
  const int n = q.num_vars();
  int rank = 0;
  for (int c = 0; c < n && rank < n; ++c) {
    const std::uint32_t bit = std::uint32_t{1} << c;
    int pivot = -1;
    for (int r = rank; r < n; ++r) {
      if (rows[r] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[pivot], rows[rank]);
    for (int r = 0; r < n; ++r) {
      if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

SpectrumSummary spectrum_from_rank(const QuadForm& q) {
  const int r = quad_rank(q);
  return {r, std::int64_t{1} << (q.num_vars() - r / 2), std::int64_t{1} << r};
}

TruthTable restrict(const TruthTable& f, int i, int j, bool u, bool v) {
  const int n = f.num_vars();
  if (n < 3) throw std::invalid_argument("restriction needs at least 3 variables");
  if (i == j) throw std::invalid_argument("restriction indices must differ");
  if (i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("restriction index out of range");
  if (i > j) {
    std::swap(i, j);
    std::swap(u, v);
  }
  TruthTable out(n - 2);
  for (std::uint32_t xbar = 0; xbar < out.size(); ++xbar) {
    out.set(xbar, f[insert_bit(insert_bit(xbar, i - 1, u), j - 1, v)]);
  }
  return out;
}

}  // namespace bentbook
