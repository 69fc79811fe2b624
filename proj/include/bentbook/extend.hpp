#pragma once

// Right extensions p r^R = [p(1),...,p(n), r(1)+n,...,r(m)+n], the
// compatibility conditions for extensions of IS_n members, recursive
// self-extension of n = 4 compatible sets, and mixed extension of two sets.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bentbook/quadperm.hpp"

namespace bentbook {

Perm extend_right(const Perm& p, const Perm& r);

// p^{R_m}: p followed by m-1 shifted copies of itself. m = 1 gives p.
Perm self_power(const Perm& p, int m);

enum class ExtensionRoute {
  CaseI,        // (p(n)-n)(r(1)-1) = 0
  CaseIIViaF,   // f = Q_p + Q_I satisfies the WHC on (p(n), n)
  CaseIIViaG,   // g = Q_r + Q_I satisfies the WHC on (1, r(1))
  OddCaseI,     // odd n, r(1) = 1
  OddCaseII,    // odd n, restricted Walsh product condition holds
  Direct,       // no sufficient condition applies; compatible by direct check
  Failed,
};

const char* to_string(ExtensionRoute route);

struct ConditionCheck {
  std::string what;  // e.g. "f WHC on (1,4)"
  bool holds = false;
};

struct ExtensionReport {
  Perm result;
  ExtensionRoute route = ExtensionRoute::Failed;
  std::vector<ConditionCheck> details;
  // Direct compatibility of result with the identity, when evaluated.
  std::optional<bool> direct;

  bool compatible() const { return route != ExtensionRoute::Failed; }
};

// Even n, m >= 4, p in IS_n, r in IS_m (checked; PreconditionError
// otherwise). For these inputs the conditions are necessary and sufficient.
ExtensionReport theorem1_check(const Perm& p, const Perm& r);

// Odd n >= 5, even m >= 4, p in IS_n, r in IS_m. The conditions are only
// sufficient: when neither holds the extension is checked directly, and
// `direct` is always filled in.
ExtensionReport theorem2_check(const Perm& p, const Perm& r);

// WHC of Q_p + Q_{I_n} on (p(n), n). When p(n) = n there is no such pair;
// every right extension of p is then compatible, and this returns true.
bool tail_whc(const Perm& p);

// The six IS_4 members whose right extension of any p in IS_n stays in
// IS_{n+4}: rho_3, rho_4, rho_6, rho_8, rho_9, rho_11.
std::vector<Perm> universal_right_factors();

// Extends p with each universal right factor. Even n uses theorem1_check,
// odd n theorem2_check. Throws PreconditionError unless p ~ I_n.
std::vector<ExtensionReport> corollary1_extend(const Perm& p);

// A compatible set containing the identity: pairwise compatible, common
// size, no duplicates. Throws PreconditionError describing the first problem.
void require_compatible_set(std::span<const Perm> s);

// {p^{R_m} : p in base} for a size-4 compatible set containing I_4. Every
// pair of the output is verified (both routes for 4m <= 12 or deep, rank
// only otherwise); a failure throws VerificationError.
std::vector<Perm> self_extend(std::span<const Perm> base, int m, bool deep = false);

struct SetReport {
  int n = 0;
  int L = 0;
  int r_min = 0;
  bool all_pairs_ok = true;
  std::vector<std::vector<int>> ranks;  // ranks[a][b] = rank of Q_a + Q_b; 0 on the diagonal
  std::optional<std::pair<int, int>> first_failure;  // 0-based member indices
};

SetReport verify_compatible_set(std::span<const Perm> s, CheckRoute route = CheckRoute::Rank);
SetReport verify_compatible_set_serial(std::span<const Perm> s, CheckRoute route = CheckRoute::Rank);

// {p r^R : p in a, r in b}, a-major.
std::vector<Perm> extension_candidates(std::span<const Perm> a, std::span<const Perm> b);

struct CandidateSets {
  std::size_t candidate_count = 0;
  // Candidates equal or compatible to the identity, deduplicated and sorted.
  std::vector<Perm> identity_compatible;
  // Maximal compatible sets among identity_compatible, each sorted.
  std::vector<std::vector<Perm>> sets;
};

CandidateSets compatible_sets_from_candidates(std::span<const Perm> candidates, int min_size);

// Mixed extension of two compatible sets (each validated).
CandidateSets mixed_extend(std::span<const Perm> a, std::span<const Perm> b, int min_size);

}  // namespace bentbook
