#include "bentbook/codebook.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

#include <fftw3.h>

#include "bentbook/errors.hpp"

namespace bentbook {

namespace {

int log2_exact(std::size_t len) {
  if (len == 0 || !std::has_single_bit(len)) throw std::invalid_argument("sequence length must be a power of two");
  return std::countr_zero(len);
}

void check_linear_part(const Perm& p, std::uint32_t c) {
  if (p.size() < 1 || p.size() > kMaxVars) throw GuardError("variable count out of range");
  if (p.size() < 32 && (c >> p.size()) != 0) throw std::invalid_argument("linear part longer than n");
}

SignSequence from_form(const QuadForm& q) {
  const TruthTable t = q.truth_table();
  SignSequence s{q.num_vars(), std::vector<std::int8_t>(t.size())};
  for (std::size_t x = 0; x < t.size(); ++x) s.values[x] = t[x] ? -1 : 1;
  return s;
}

void check_distinct(std::span<const Perm> perms) {
  if (perms.empty()) throw std::invalid_argument("empty permutation list");
  const int n = perms.front().size();
  for (const auto& p : perms) {
    if (p.size() != n) throw std::invalid_argument("permutations of different sizes");
  }
  std::vector<Perm> sorted(perms.begin(), perms.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate permutation");
  }
}

struct FftPlans {
  fftw_plan forward;
  fftw_plan backward;
};

// Planning is not thread-safe in FFTW; execution on fresh buffers is.
FftPlans plans_for(int len) {
  static std::mutex mu;
  static std::map<int, FftPlans> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(len);
  if (it != cache.end()) return it->second;
  double* re = fftw_alloc_real(static_cast<std::size_t>(len));
  fftw_complex* cx = fftw_alloc_complex(static_cast<std::size_t>(len / 2 + 1));
  FftPlans p{fftw_plan_dft_r2c_1d(len, re, cx, FFTW_ESTIMATE),
             fftw_plan_dft_c2r_1d(len, cx, re, FFTW_ESTIMATE)};
  fftw_free(re);
  fftw_free(cx);
  cache.emplace(len, p);
  return p;
}

std::uint64_t low_mask(std::size_t bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

// Bit b of linear_word[c] is the parity of c & b, for b, c < 64.
const std::array<std::uint64_t, 64>& linear_words() {
  static const auto table = [] {
    std::array<std::uint64_t, 64> t{};
    for (unsigned c = 0; c < 64; ++c) {
      for (unsigned b = 0; b < 64; ++b) {
        if (std::popcount(c & b) & 1) t[c] |= std::uint64_t{1} << b;
      }
    }
    return t;
  }();
  return table;
}

void fill_block(SignMatrix& m, std::size_t first_col, const Perm& p) {
  const TruthTable q = q_pi(p).truth_table();
  const auto words = q.words();
  const std::size_t N = m.rows();
  const std::uint64_t tail = low_mask(N);
  const auto& lin = linear_words();
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(N); ++c) {
    auto col = m.col(first_col + static_cast<std::size_t>(c));
    const std::uint64_t low = lin[c & 63];
    const std::uint64_t high = static_cast<std::uint64_t>(c) >> 6;
    for (std::size_t w = 0; w < col.size(); ++w) {
      const std::uint64_t flip = (std::popcount(high & w) & 1) ? ~std::uint64_t{0} : 0;
      col[w] = (words[w] ^ low ^ flip) & tail;
    }
  }
}

void check_block_orthogonality(const SignMatrix& m, std::size_t first_col, std::size_t N, int n) {
  bool ok = true;
  if (n <= 8) {
#pragma omp parallel for schedule(dynamic) reduction(&& : ok)
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(N); ++a) {
      for (std::size_t b = static_cast<std::size_t>(a) + 1; b < N; ++b) {
        ok = ok && m.inner(first_col + static_cast<std::size_t>(a), first_col + b) == 0;
      }
    }
  } else {
    std::mt19937_64 rng(0x5eed0000u + first_col);
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    for (int k = 0; k < 10000 && ok; ++k) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      if (a != b) ok = m.inner(first_col + a, first_col + b) == 0;
    }
  }
  if (!ok) throw VerificationError("block starting at column " + std::to_string(first_col) + " is not orthogonal");
}

struct Best {
  std::int64_t value = -1;
  std::size_t a = 0;
  std::size_t b = 0;

  void offer(std::int64_t v, std::size_t x, std::size_t y) {
    if (v > value || (v == value && std::pair{x, y} < std::pair{a, b})) *this = {v, x, y};
  }
};

void check_direct(const Codebook& cb, int guard) {
  if (cb.L() < 2) throw std::invalid_argument("coherence needs at least two blocks");
  if (cb.n > guard) throw GuardError("direct coherence guarded at n <= " + std::to_string(guard));
}

DirectCoherence finish(const Codebook& cb, const Best& best) {
  return {Fraction::make(best.value, static_cast<std::int64_t>(cb.N())), best.value, best.a, best.b};
}

}  // namespace

SignSequence make_sequence(std::vector<std::int8_t> values) {
  const int n = log2_exact(values.size());
  for (auto v : values) {
    if (v != 1 && v != -1) throw std::invalid_argument("sequence entries must be +1 or -1");
  }
  return {n, std::move(values)};
}

SignSequence gdj_sequence(const Perm& p, std::uint32_t c, bool eps) {
  check_linear_part(p, c);
  QuadForm q = q_pi(p);
  q.set_linear(c);
  q.set_constant(eps);
  return from_form(q);
}

SignSequence golay_mate(const Perm& p, std::uint32_t c, bool eps_prime) {
  check_linear_part(p, c);
  QuadForm q = q_pi(p);
  q.set_linear(c ^ (std::uint32_t{1} << (p(1) - 1)));
  q.set_constant(eps_prime);
  return from_form(q);
}

std::int64_t aperiodic_autocorr(const SignSequence& a, std::int64_t tau) {
  const auto N = static_cast<std::int64_t>(a.size());
  if (tau < 0) tau = -tau;
  if (tau >= N) throw std::out_of_range("autocorrelation shift out of range");
  std::int64_t sum = 0;
  for (std::int64_t i = 0; i + tau < N; ++i) sum += a.values[i] * a.values[i + tau];
  return sum;
}

bool is_golay_pair(const SignSequence& a, const SignSequence& b) {
  if (a.size() != b.size()) throw std::invalid_argument("Golay pair members of different lengths");
  for (std::int64_t tau = 1; tau < static_cast<std::int64_t>(a.size()); ++tau) {
    if (aperiodic_autocorr(a, tau) + aperiodic_autocorr(b, tau) != 0) return false;
  }
  return true;
}

PaprResult papr(const SignSequence& a, int oversample) {
  if (oversample < 4) throw std::invalid_argument("oversample must be >= 4");
  const std::size_t N = a.size();
  if (N == 0) throw std::invalid_argument("empty sequence");
  const std::size_t len = N * static_cast<std::size_t>(oversample);
  if (len > (std::size_t{1} << 30)) throw GuardError("PAPR transform too long");
  const FftPlans plans = plans_for(static_cast<int>(len));

  double* re = fftw_alloc_real(len);
  fftw_complex* cx = fftw_alloc_complex(len / 2 + 1);
  std::fill(re, re + len, 0.0);
  for (std::size_t i = 0; i < N; ++i) re[i] = a.values[i];
  fftw_execute_dft_r2c(plans.forward, re, cx);

  PaprResult out;
  double peak = 0.0;
  for (std::size_t k = 0; k <= len / 2; ++k) {
    const double power = cx[k][0] * cx[k][0] + cx[k][1] * cx[k][1];
    peak = std::max(peak, power);
    cx[k][0] = power;
    cx[k][1] = 0.0;
  }
  out.grid_max = peak / static_cast<double>(N);

  // Inverse of the power spectrum: len * C(tau) for 0 <= tau < N, since the
  // zero padding exceeds the sequence length.
  fftw_execute_dft_c2r(plans.backward, cx, re);
  double side = 0.0;
  for (std::size_t tau = 1; tau < N; ++tau) {
    side += static_cast<double>(std::llabs(std::llround(re[tau] / static_cast<double>(len))));
  }
  out.upper_bound = (static_cast<double>(N) + 2.0 * side) / static_cast<double>(N);
  fftw_free(re);
  fftw_free(cx);
  return out;
}

Fraction Fraction::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return g > 1 ? Fraction{num / g, den / g} : Fraction{num, den};
}

std::string Fraction::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Fraction parse_fraction(std::string_view text) {
  auto number = [](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      throw std::invalid_argument("bad fraction '" + std::string(s) + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Fraction::make(number(text), 1);
  return Fraction::make(number(text.substr(0, slash)), number(text.substr(slash + 1)));
}

SignMatrix::SignMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpc_((rows + 63) / 64), bits_(cols * ((rows + 63) / 64), 0) {}

void SignMatrix::set_sign(std::size_t r, std::size_t c, int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("sign must be +1 or -1");
  const std::uint64_t bit = std::uint64_t{1} << (r & 63);
  auto w = col(c);
  if (s < 0) {
    w[r >> 6] |= bit;
  } else {
    w[r >> 6] &= ~bit;
  }
}

std::int64_t SignMatrix::inner(std::size_t a, std::size_t b) const {
  const auto x = col(a);
  const auto y = col(b);
  std::int64_t diff = 0;
  for (std::size_t w = 0; w < wpc_; ++w) diff += std::popcount(x[w] ^ y[w]);
  return static_cast<std::int64_t>(rows_) - 2 * diff;
}

SignSequence SignMatrix::column_sequence(std::size_t c) const {
  std::vector<std::int8_t> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = static_cast<std::int8_t>(sign(r, c));
  return make_sequence(std::move(v));
}

RankCoherence coherence_via_rank(std::span<const Perm> perms) {
  if (perms.size() < 2) throw std::invalid_argument("coherence needs at least two permutations");
  check_distinct(perms);
  int r_min = -1;
  for (std::size_t a = 0; a < perms.size(); ++a) {
    for (std::size_t b = a + 1; b < perms.size(); ++b) {
      const int r = quad_rank(difference_form(perms[a], perms[b]));
      if (r_min < 0 || r < r_min) r_min = r;
    }
  }
  if (r_min % 2) throw VerificationError("odd symplectic rank");
  return {Fraction::make(1, std::int64_t{1} << (r_min / 2)), r_min};
}

std::int64_t w_phi(std::span<const Perm> perms) {
  const RankCoherence rc = coherence_via_rank(perms);
  return std::int64_t{1} << (perms.front().size() - rc.r_min / 2);
}

CodebookMetrics rank_metrics(std::span<const Perm> perms) {
  check_distinct(perms);
  CodebookMetrics m;
  m.n = perms.front().size();
  m.L = static_cast<int>(perms.size());
  m.N = std::int64_t{1} << m.n;
  m.K = m.N * m.L;
  if (m.L >= 2) {
    const RankCoherence rc = coherence_via_rank(perms);
    m.r_min = rc.r_min;
    m.coherence = rc.mu;
    m.w_phi = std::int64_t{1} << (m.n - rc.r_min / 2);
  }
  return m;
}

Codebook spreading_matrix(std::span<const Perm> perms, int guard) {
  check_distinct(perms);
  const int n = perms.front().size();
  if (n > guard) {
    throw GuardError("materialization guarded at n <= " + std::to_string(guard) + "; use metrics only");
  }
  Codebook cb;
  cb.n = n;
  cb.perms.assign(perms.begin(), perms.end());
  const std::size_t N = std::size_t{1} << n;
  cb.columns = SignMatrix(N, N * perms.size());
  for (std::size_t l = 0; l < perms.size(); ++l) {
    fill_block(cb.columns, l * N, perms[l]);
    check_block_orthogonality(cb.columns, l * N, N, n);
  }
  cb.metrics = rank_metrics(perms);
  return cb;
}

DirectCoherence coherence_direct(const Codebook& cb, int guard) {
  check_direct(cb, guard);
  const std::size_t N = cb.N();
  const std::size_t K = cb.columns.cols();
  Best best;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(K); ++a) {
      const auto ua = static_cast<std::size_t>(a);
      for (std::size_t b = (ua / N + 1) * N; b < K; ++b) {
        local.offer(std::abs(cb.columns.inner(ua, b)), ua, b);
      }
    }
#pragma omp critical
    if (local.value >= 0) best.offer(local.value, local.a, local.b);
  }
  return finish(cb, best);
}

DirectCoherence coherence_direct_serial(const Codebook& cb, int guard) {
  check_direct(cb, guard);
  const std::size_t N = cb.N();
  const std::size_t K = cb.columns.cols();
  Best best;
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = (a / N + 1) * N; b < K; ++b) best.offer(std::abs(cb.columns.inner(a, b)), a, b);
  }
  return finish(cb, best);
}

PaprScan papr_scan(const SignMatrix& m, int oversample, double limit) {
  std::vector<PaprResult> all(m.cols());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(m.cols()); ++c) {
    all[c] = papr(m.column_sequence(static_cast<std::size_t>(c)), oversample);
  }
  PaprScan scan;
  for (std::size_t c = 0; c < all.size(); ++c) {
    if (all[c].grid_max > scan.max_grid) {
      scan.max_grid = all[c].grid_max;
      scan.worst_column = c;
    }
    scan.max_upper_bound = std::max(scan.max_upper_bound, all[c].upper_bound);
    if (all[c].grid_max > limit && !scan.first_failure) scan.first_failure = c;
  }
  return scan;
}

double welch_bound(std::int64_t N, std::int64_t K) {
  if (N < 1 || K <= N) throw std::invalid_argument("Welch bound needs K > N >= 1");
  return std::sqrt(static_cast<double>(K - N) / (static_cast<double>(K - 1) * static_cast<double>(N)));
}

Fraction quadratic_coherence_bound(int n) {
  if (n < 2 || n > 60) throw std::invalid_argument("variable count out of range");
  return Fraction::make(1, std::int64_t{1} << ((n % 2 == 0 ? n : n - 1) / 2));
}

}  // namespace bentbook
