#include "bentbook/extend.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "bentbook/errors.hpp"
#include "bentbook/search.hpp"

namespace bentbook {

namespace {

std::string pair_label(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void require_in_is(const Perm& p, const char* role) {
  if (p.size() < 2 || !is_compatible(Perm::identity(p.size()), p)) {
    throw PreconditionError(std::string(role) + " " + to_string(p) + " is not compatible with the identity");
  }
}

QuadForm identity_difference(const Perm& p) { return difference_form(p, Perm::identity(p.size())); }

// Product of four Walsh values, tracked as (is zero, sign, log2 magnitude).
// Quadratic spectra take values 0 or +-2^k, so this is exact.
struct PowerProduct {
  bool zero = false;
  bool negative = false;
  int exponent = 0;
  bool exact = true;

  void times(std::int64_t w) {
    if (w == 0) {
      zero = true;
      return;
    }
    const auto mag = static_cast<std::uint64_t>(w < 0 ? -w : w);
    if (!std::has_single_bit(mag)) exact = false;
    negative ^= w < 0;
    exponent += std::countr_zero(mag);
  }
  PowerProduct operator*(const PowerProduct& o) const {
    return {zero || o.zero, negative != o.negative, exponent + o.exponent, exact && o.exact};
  }
};

PowerProduct product4(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  PowerProduct p;
  for (auto w : {a, b, c, d}) p.times(w);
  return p;
}

// prod_{u,v} W_{g_{u,v}}(bbar) W_f(a + u e_{p(n)} + v e_n) in {0, -2^(2n+2m-6)}
// for every a in F_2^n and bbar in F_2^(m-2).
bool odd_product_condition(const Perm& p, const Perm& r) {
  const int n = p.size();
  const int m = r.size();
  const auto wf = wht(identity_difference(p).truth_table()).values;
  const TruthTable g = identity_difference(r).truth_table();
  std::vector<std::vector<std::int64_t>> wg;
  for (int uv = 0; uv < 4; ++uv) wg.push_back(wht(restrict(g, 1, r(1), uv & 1, uv >> 1)).values);

  const std::size_t ei = std::size_t{1} << (p(n) - 1);
  const std::size_t en = std::size_t{1} << (n - 1);
  const int target = 2 * n + 2 * m - 6;
  for (std::size_t b = 0; b < wg[0].size(); ++b) {
    const PowerProduct pg = product4(wg[0][b], wg[1][b], wg[2][b], wg[3][b]);
    for (std::size_t a = 0; a < wf.size(); ++a) {
      const PowerProduct prod = pg * product4(wf[a], wf[a ^ ei], wf[a ^ en], wf[a ^ ei ^ en]);
      if (prod.zero) continue;
      if (!prod.exact || !prod.negative || prod.exponent != target) return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(ExtensionRoute route) {
  switch (route) {
    case ExtensionRoute::CaseI: return "case-i";
    case ExtensionRoute::CaseIIViaF: return "case-ii-via-f";
    case ExtensionRoute::CaseIIViaG: return "case-ii-via-g";
    case ExtensionRoute::OddCaseI: return "odd-case-i";
    case ExtensionRoute::OddCaseII: return "odd-case-ii";
    case ExtensionRoute::Direct: return "direct";
    case ExtensionRoute::Failed: return "failed";
  }
  return "?";
}

Perm extend_right(const Perm& p, const Perm& r) {
  std::vector<int> m(p.images().begin(), p.images().end());
  for (int v : r.images()) m.push_back(v + p.size());
  return Perm(std::move(m));
}

Perm self_power(const Perm& p, int m) {
  if (m < 1) throw std::invalid_argument("extension power must be >= 1");
  Perm out = p;
  for (int k = 1; k < m; ++k) out = extend_right(out, p);
  return out;
}

ExtensionReport theorem1_check(const Perm& p, const Perm& r) {
  const int n = p.size();
  const int m = r.size();
  if (n < 4 || m < 4 || n % 2 || m % 2) throw PreconditionError("even-even extension needs n, m even >= 4");
  require_in_is(p, "left factor");
  require_in_is(r, "right factor");

  ExtensionReport rep{extend_right(p, r), ExtensionRoute::Failed, {}, std::nullopt};
  const bool tail_fixed = p(n) == n;
  const bool head_fixed = r(1) == 1;
  rep.details.push_back({"(p(n)-n)(r(1)-1) = 0", tail_fixed || head_fixed});
  if (tail_fixed || head_fixed) {
    rep.route = ExtensionRoute::CaseI;
    return rep;
  }
  const bool f_whc = whc(identity_difference(p), p(n), n);
  rep.details.push_back({"f WHC on " + pair_label(p(n), n), f_whc});
  const bool g_whc = whc(identity_difference(r), 1, r(1));
  rep.details.push_back({"g WHC on " + pair_label(1, r(1)), g_whc});
  if (f_whc) {
    rep.route = ExtensionRoute::CaseIIViaF;
  } else if (g_whc) {
    rep.route = ExtensionRoute::CaseIIViaG;
  }
  return rep;
}

ExtensionReport theorem2_check(const Perm& p, const Perm& r) {
  const int n = p.size();
  const int m = r.size();
  if (n < 5 || n % 2 == 0) throw PreconditionError("odd-even extension needs odd n >= 5");
  if (m < 4 || m % 2) throw PreconditionError("odd-even extension needs even m >= 4");
  require_in_is(p, "left factor");
  require_in_is(r, "right factor");

  ExtensionReport rep{extend_right(p, r), ExtensionRoute::Failed, {}, std::nullopt};
  rep.direct = is_compatible(Perm::identity(n + m), rep.result);
  const bool head_fixed = r(1) == 1;
  rep.details.push_back({"r(1) = 1", head_fixed});
  if (head_fixed) {
    rep.route = ExtensionRoute::OddCaseI;
  } else if (p(n) != n) {
    const bool product = odd_product_condition(p, r);
    rep.details.push_back({"restricted Walsh product in {0, -2^(2n+2m-6)}", product});
    if (product) rep.route = ExtensionRoute::OddCaseII;
  }
  if (rep.route == ExtensionRoute::Failed && *rep.direct) rep.route = ExtensionRoute::Direct;
  if (rep.route != ExtensionRoute::Failed && rep.route != ExtensionRoute::Direct && !*rep.direct) {
    throw VerificationError("sufficient condition claimed for an incompatible extension " +
                            to_string(rep.result));
  }
  return rep;
}

bool tail_whc(const Perm& p) {
  const int n = p.size();
  if (p(n) == n) return true;
  return whc(identity_difference(p), p(n), n);
}

std::vector<Perm> universal_right_factors() {
  const auto& rho = labeled_is4();
  return {rho[2], rho[3], rho[5], rho[7], rho[8], rho[10]};
}

std::vector<ExtensionReport> corollary1_extend(const Perm& p) {
  require_in_is(p, "base");
  std::vector<ExtensionReport> out;
  for (const auto& r : universal_right_factors()) {
    out.push_back(p.size() % 2 == 0 ? theorem1_check(p, r) : theorem2_check(p, r));
  }
  return out;
}

void require_compatible_set(std::span<const Perm> s) {
  if (s.empty()) throw PreconditionError("empty permutation set");
  const int n = s.front().size();
  for (const auto& p : s) {
    if (p.size() != n) throw PreconditionError("set members of different sizes");
  }
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      if (s[a] == s[b]) throw PreconditionError("duplicate member " + to_string(s[a]));
      if (!is_compatible(s[a], s[b])) {
        throw PreconditionError("members " + to_string(s[a]) + " and " + to_string(s[b]) +
                                " are not compatible");
      }
    }
  }
}

std::vector<Perm> self_extend(std::span<const Perm> base, int m, bool deep) {
  if (m < 1) throw std::invalid_argument("extension power must be >= 1");
  if (base.empty() || base.front().size() != 4) throw PreconditionError("base must be a set in dimension 4");
  require_compatible_set(base);
  if (std::none_of(base.begin(), base.end(), [](const Perm& p) { return p.is_identity(); })) {
    throw PreconditionError("base must contain the identity");
  }
  std::vector<Perm> out;
  for (const auto& p : base) out.push_back(self_power(p, m));
  const CheckRoute route = (deep || 4 * m <= 12) ? CheckRoute::Both : CheckRoute::Rank;
  const SetReport rep = verify_compatible_set(out, route);
  if (!rep.all_pairs_ok) {
    const auto [a, b] = *rep.first_failure;
    throw VerificationError("self extension produced incompatible pair " + to_string(out[a]) +
                            ", " + to_string(out[b]));
  }
  return out;
}

namespace {

SetReport blank_report(std::span<const Perm> s) {
  SetReport rep;
  rep.L = static_cast<int>(s.size());
  rep.n = s.empty() ? 0 : s.front().size();
  for (const auto& p : s) {
    if (p.size() != rep.n) throw std::invalid_argument("set members of different sizes");
  }
  rep.ranks.assign(s.size(), std::vector<int>(s.size(), 0));
  return rep;
}

int pair_rank(const Perm& a, const Perm& b, CheckRoute route) {
  return route == CheckRoute::Both ? compatible(a, b, CheckRoute::Both).rank
                                   : quad_rank(difference_form(a, b));
}

void summarize(SetReport& rep) {
  rep.r_min = 0;
  bool first = true;
  for (int a = 0; a < rep.L; ++a) {
    for (int b = a + 1; b < rep.L; ++b) {
      const int r = rep.ranks[a][b];
      if (first || r < rep.r_min) rep.r_min = r;
      first = false;
      if (!is_full_rank(r, rep.n) && !rep.first_failure) rep.first_failure = std::pair{a, b};
    }
  }
  rep.all_pairs_ok = !rep.first_failure.has_value();
}

}  // namespace

SetReport verify_compatible_set(std::span<const Perm> s, CheckRoute route) {
  SetReport rep = blank_report(s);
  const int L = rep.L;
  const std::int64_t pairs = static_cast<std::int64_t>(L) * L;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < pairs; ++k) {
    const int a = static_cast<int>(k / L);
    const int b = static_cast<int>(k % L);
    if (a < b) {
      const int r = pair_rank(s[a], s[b], route);
      rep.ranks[a][b] = r;
      rep.ranks[b][a] = r;
    }
  }
  summarize(rep);
  return rep;
}

SetReport verify_compatible_set_serial(std::span<const Perm> s, CheckRoute route) {
  SetReport rep = blank_report(s);
  for (int a = 0; a < rep.L; ++a) {
    for (int b = a + 1; b < rep.L; ++b) {
      rep.ranks[a][b] = rep.ranks[b][a] = pair_rank(s[a], s[b], route);
    }
  }
  summarize(rep);
  return rep;
}

std::vector<Perm> extension_candidates(std::span<const Perm> a, std::span<const Perm> b) {
  std::vector<Perm> out;
  out.reserve(a.size() * b.size());
  for (const auto& p : a) {
    for (const auto& r : b) out.push_back(extend_right(p, r));
  }
  return out;
}

CandidateSets compatible_sets_from_candidates(std::span<const Perm> candidates, int min_size) {
  CandidateSets out;
  out.candidate_count = candidates.size();
  if (candidates.empty()) return out;
  const Perm id = Perm::identity(candidates.front().size());
  for (const auto& p : candidates) {
    if (p.size() != id.size()) throw std::invalid_argument("candidates of different sizes");
    if (p == id || is_compatible(id, p)) out.identity_compatible.push_back(p);
  }
  std::sort(out.identity_compatible.begin(), out.identity_compatible.end());
  out.identity_compatible.erase(
      std::unique(out.identity_compatible.begin(), out.identity_compatible.end()),
      out.identity_compatible.end());
  const CompatGraph g = build_graph(out.identity_compatible);
  const auto cliques = maximal_cliques(g, min_size);
  out.sets = clique_perm_sets(g, cliques);
  return out;
}

CandidateSets mixed_extend(std::span<const Perm> a, std::span<const Perm> b, int min_size) {
  require_compatible_set(a);
  require_compatible_set(b);
  return compatible_sets_from_candidates(extension_candidates(a, b), min_size);
}

}  // namespace bentbook
