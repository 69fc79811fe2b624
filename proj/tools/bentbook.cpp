// bentbook: search, extend, build and verify compatible permutation sets and
// the spreading matrices they generate.
//
// Exit codes: 0 ok, 1 I/O, 2 guard or usage, 3 verification failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bentbook/codebook.hpp"
#include "bentbook/errors.hpp"
#include "bentbook/extend.hpp"
#include "bentbook/io.hpp"
#include "bentbook/parallel.hpp"
#include "bentbook/search.hpp"

namespace fs = std::filesystem;
using namespace bentbook;
using io::json;

namespace {

constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kUsage = 2;
constexpr int kFailed = 3;

// Composition tables beyond this many members are not written.
constexpr std::size_t kMaxCompositionMembers = 64;

struct Options {
  int n = 4;
  int min_size = 2;
  bool force = false;
  bool self = false;
  bool mixed = false;
  int m = 2;
  std::string base;
  std::string partner;
  std::string format = "csv";
  int oversample = kDefaultOversample;
  std::uint64_t seed = 20240601;
  bool deep = false;
  std::string out = ".";
  std::string kind;
  std::string path;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void emit(const fs::path& path, std::string_view content, std::vector<fs::path>& outputs) {
  io::write_file(path, content);
  outputs.push_back(path);
}

std::string label_or_text(const Perm& p) {
  const auto& rho = labeled_is4();
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (rho[k] == p) return "rho" + std::to_string(k + 1);
  }
  return p.is_identity() ? "I" : to_string(p);
}

int cmd_search(const Options& o) {
  const auto t0 = Clock::now();
  const fs::path dir = o.out;
  std::vector<fs::path> outputs;

  std::vector<Perm> members = enumerate_is(o.n, o.force);
  // The customary labelled order for n = 4, lexicographic otherwise.
  if (o.n == 4) members = labeled_is4();
  const std::string tag = "n" + std::to_string(o.n);
  emit(dir / ("is_" + tag + ".json"), io::dump_rows(io::is_json(o.n, members)), outputs);

  if (!members.empty() && members.size() <= kMaxCompositionMembers) {
    emit(dir / ("composition_" + tag + ".txt"), composition_table(members).render(), outputs);
  }

  std::vector<Perm> vertices = members;
  vertices.insert(vertices.begin(), Perm::identity(o.n));
  const CompatGraph g = build_graph(vertices);
  const auto cliques = maximal_cliques(g, o.min_size);
  const auto sets = clique_perm_sets(g, cliques);
  emit(dir / ("sets_" + tag + ".json"), io::set_list_rows(o.n, o.min_size, sets), outputs);

  std::cout << "IS_" << o.n << ": " << members.size() << " members\n";
  std::cout << "maximal compatible sets with >= " << o.min_size << " members: " << sets.size() << "\n";
  io::write_manifest(dir / ("search_" + tag + ".manifest.json"),
                     {"search", {{"n", o.n}, {"min_size", o.min_size}, {"force", o.force}}, {}, outputs,
                      seconds_since(t0)});
  return kOk;
}

// Checks a loaded set and prints the outcome; true when every pair passes.
bool report_set(const std::vector<Perm>& perms, bool deep, bool per_pair) {
  const CheckRoute route = deep && perms.front().size() <= kMaxWhtRouteVars ? CheckRoute::Both : CheckRoute::Rank;
  const SetReport rep = verify_compatible_set(perms, route);
  for (int a = 0; a < rep.L && per_pair; ++a) {
    for (int b = a + 1; b < rep.L; ++b) {
      const bool ok = is_full_rank(rep.ranks[a][b], rep.n);
      std::cout << (ok ? "pass " : "FAIL ") << to_string(perms[a]) << " ~ " << to_string(perms[b])
                << " rank " << rep.ranks[a][b] << "\n";
    }
  }
  if (rep.first_failure) {
    const auto [a, b] = *rep.first_failure;
    std::cout << "set: FAIL at pair (" << label_or_text(perms[a]) << ", " << label_or_text(perms[b]) << ")\n";
  } else {
    std::cout << "set: pass, L=" << rep.L << " r_min=" << rep.r_min << "\n";
  }
  return rep.all_pairs_ok;
}

int cmd_extend(const Options& o) {
  const auto t0 = Clock::now();
  const fs::path dir = o.out;
  std::vector<fs::path> outputs;
  std::vector<fs::path> inputs{o.base};
  const io::PermSet base = io::load_perm_set(o.base);
  if (!report_set(base.perms, false, false)) return kFailed;

  if (o.self) {
    const std::vector<Perm> ext = self_extend(base.perms, o.m, o.deep);
    const SetReport rep = verify_compatible_set(ext, CheckRoute::Rank);
    if (!rep.all_pairs_ok) return kFailed;
    io::PermSet s{ext.front().size(), ext,
                  {{"operation", "self-extension"}, {"m", o.m}, {"base", fs::path(o.base).filename().string()}}};
    const std::string tag = "self_m" + std::to_string(o.m);
    emit(dir / (tag + ".json"), io::dump_rows(io::perm_set_json(s)), outputs);
    emit(dir / (tag + ".report.json"), io::set_report_json(rep, ext).dump(2) + "\n", outputs);
    std::cout << "self extension m=" << o.m << ": n=" << s.n << " L=" << ext.size() << " r_min=" << rep.r_min << "\n";
    for (const auto& p : ext) std::cout << "  " << p << "\n";
    io::write_manifest(dir / (tag + ".manifest.json"),
                       {"extend", {{"mode", "self"}, {"m", o.m}, {"deep", o.deep}}, inputs, outputs,
                        seconds_since(t0)});
    return kOk;
  }

  inputs.push_back(o.partner);
  const io::PermSet partner = io::load_perm_set(o.partner);
  if (!report_set(partner.perms, false, false)) return kFailed;
  const CandidateSets cs = mixed_extend(base.perms, partner.perms, o.min_size);
  json reports = json::array();
  for (const auto& s : cs.sets) {
    const SetReport rep = verify_compatible_set(s, CheckRoute::Rank);
    if (!rep.all_pairs_ok) return kFailed;
    reports.push_back(io::set_report_json(rep, s));
  }
  const int n = base.n + partner.n;
  json list = io::set_list_json(n, o.min_size, cs.sets);
  list["candidate_count"] = cs.candidate_count;
  list["identity_compatible_count"] = cs.identity_compatible.size();
  list["provenance"] = {{"operation", "mixed-extension"},
                        {"status", "experimental"},
                        {"base", fs::path(o.base).filename().string()},
                        {"partner", fs::path(o.partner).filename().string()}};
  emit(dir / "mixed.json", io::dump_rows(list), outputs);
  emit(dir / "mixed.report.json", reports.dump(2) + "\n", outputs);
  std::cout << "mixed extension (experimental): " << cs.candidate_count << " candidates, "
            << cs.identity_compatible.size() << " compatible with the identity, " << cs.sets.size()
            << " maximal sets with >= " << o.min_size << " members\n";
  io::write_manifest(dir / "mixed.manifest.json",
                     {"extend", {{"mode", "mixed"}, {"min_size", o.min_size}}, inputs, outputs, seconds_since(t0)});
  return kOk;
}

int cmd_codebook(const Options& o) {
  const auto t0 = Clock::now();
  const fs::path dir = o.out;
  std::vector<fs::path> outputs;
  const io::PermSet set = io::load_perm_set(o.base);
  if (!report_set(set.perms, false, false)) return kFailed;

  if (o.format == "metrics-only") {
    const CodebookMetrics m = rank_metrics(set.perms);
    emit(dir / "metrics.json", io::metrics_json(m, std::nullopt).dump(2) + "\n", outputs);
    std::cout << "N=" << m.N << " K=" << m.K << " coherence=" << m.coherence.str() << "\n";
  } else {
    if (set.n > kMaterializeGuard) {
      std::cerr << "n=" << set.n << " exceeds the materialization guard; use --format metrics-only\n";
      return kUsage;
    }
    const Codebook cb = spreading_matrix(set.perms);
    if (o.format == "csv") {
      emit(dir / "codebook.csv", io::codebook_csv(cb), outputs);
    } else {
      emit(dir / "codebook.bin", io::codebook_bin(cb.columns), outputs);
    }
    const PaprScan scan = papr_scan(cb.columns, o.oversample);
    json metrics = io::metrics_json(cb.metrics, scan);
    if (cb.L() >= 2 && cb.n <= kDirectCoherenceGuard) {
      const DirectCoherence dc = coherence_direct(cb);
      metrics["coherence_direct"] = dc.mu.str();
      if (!(dc.mu == cb.metrics.coherence)) {
        std::cerr << "direct coherence " << dc.mu.str() << " differs from rank value "
                  << cb.metrics.coherence.str() << "\n";
        return kFailed;
      }
    }
    emit(dir / "metrics.json", metrics.dump(2) + "\n", outputs);
    std::cout << "N=" << cb.metrics.N << " K=" << cb.metrics.K << " coherence=" << cb.metrics.coherence.str()
              << " max grid PAPR=" << scan.max_grid << "\n";
  }
  io::write_manifest(dir / "codebook.manifest.json",
                     {"codebook", {{"format", o.format}, {"oversample", o.oversample}}, {o.base}, outputs,
                      seconds_since(t0)});
  return kOk;
}

bool is_codebook_file(const fs::path& p) { return p.extension() == ".csv" || p.extension() == ".bin"; }

SignMatrix load_matrix(const fs::path& p) {
  const std::string bytes = io::read_file(p);
  return p.extension() == ".csv" ? io::parse_codebook_csv(bytes) : io::parse_codebook_bin(bytes);
}

int verify_codebook(const Options& o) {
  SignMatrix m;
  std::optional<Fraction> expected;
  if (is_codebook_file(o.path)) {
    m = load_matrix(o.path);
  } else {
    const io::PermSet set = io::load_perm_set(o.path);
    Codebook cb = spreading_matrix(set.perms);
    if (cb.L() >= 2) expected = cb.metrics.coherence;
    m = std::move(cb.columns);
  }
  const std::size_t N = m.rows();
  if (N == 0 || (N & (N - 1)) || m.cols() % N) {
    std::cout << "codebook: FAIL shape " << N << "x" << m.cols() << "\n";
    return kFailed;
  }
  const std::size_t blocks = m.cols() / N;
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::size_t> pick(0, N - 1);
  const bool exhaustive = N <= 256;
  for (std::size_t l = 0; l < blocks; ++l) {
    auto fail = [&](std::size_t a, std::size_t b) {
      std::cout << "orthogonality: FAIL block " << l + 1 << " columns " << a << ", " << b << "\n";
      return kFailed;
    };
    if (exhaustive) {
      for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = a + 1; b < N; ++b) {
          if (m.inner(l * N + a, l * N + b) != 0) return fail(a, b);
        }
      }
    } else {
      for (int k = 0; k < 10000; ++k) {
        const std::size_t a = pick(rng), b = pick(rng);
        if (a != b && m.inner(l * N + a, l * N + b) != 0) return fail(a, b);
      }
    }
  }
  std::cout << "orthogonality: pass (" << (exhaustive ? "all pairs" : "sampled pairs") << ")\n";
  if (blocks >= 2 && N <= (std::size_t{1} << kDirectCoherenceGuard)) {
    std::int64_t best = 0;
    for (std::size_t a = 0; a < m.cols(); ++a) {
      for (std::size_t b = (a / N + 1) * N; b < m.cols(); ++b) best = std::max<std::int64_t>(best, std::llabs(m.inner(a, b)));
    }
    const Fraction mu = Fraction::make(best, static_cast<std::int64_t>(N));
    std::cout << "coherence: " << mu.str();
    if (expected && !(mu == *expected)) {
      std::cout << " FAIL (rank value " << expected->str() << ")\n";
      return kFailed;
    }
    std::cout << " pass\n";
  }
  return kOk;
}

int verify_golay(const Options& o) {
  const io::PermSet set = io::load_perm_set(o.path);
  std::size_t checked = 0;
  for (const auto& p : set.perms) {
    for (std::uint32_t c = 0; c < (std::uint32_t{1} << set.n); ++c) {
      for (bool e : {false, true}) {
        ++checked;
        if (!is_golay_pair(gdj_sequence(p, c), golay_mate(p, c, e))) {
          std::cout << "golay: FAIL " << to_string(p) << " c=" << c << " eps'=" << e << "\n";
          return kFailed;
        }
      }
    }
  }
  std::cout << "golay: pass, " << checked << " pairs\n";
  return kOk;
}

int verify_papr(const Options& o) {
  const fs::path path = o.path;
  const SignMatrix m = is_codebook_file(path) ? load_matrix(path) : spreading_matrix(io::load_perm_set(path).perms).columns;
  const PaprScan scan = papr_scan(m, o.oversample);
  std::cout << "papr: max grid " << scan.max_grid << " (column " << scan.worst_column << "), max bound "
            << scan.max_upper_bound << "\n";
  if (scan.first_failure) {
    std::cout << "papr: FAIL at column " << *scan.first_failure << "\n";
    return kFailed;
  }
  std::cout << "papr: pass, grid PAPR <= 2\n";
  return kOk;
}

int cmd_verify(const Options& o) {
  if (o.kind == "set") {
    const io::PermSet s = io::load_perm_set(o.path);
    return report_set(s.perms, o.deep, true) ? kOk : kFailed;
  }
  if (o.kind == "codebook") return verify_codebook(o);
  if (o.kind == "golay") return verify_golay(o);
  return verify_papr(o);
}

}  // namespace

int main(int argc, char** argv) {
  parallel::configure_from_env();
  Options o;
  CLI::App app{"Compatible permutation sets of quadratic bent functions and their spreading matrices"};
  app.set_version_flag("--version", BENTBOOK_VERSION);
  app.require_subcommand(1);

  auto* search = app.add_subcommand("search", "enumerate IS_n and its maximal compatible sets");
  search->add_option("--n", o.n, "number of variables")->required()->check(CLI::Range(2, 20));
  search->add_option("--min-size", o.min_size, "smallest set size to report")->capture_default_str();
  search->add_flag("--force", o.force, "lift the exhaustive-search guard");
  search->add_option("--out", o.out, "output directory")->capture_default_str();

  auto* extend = app.add_subcommand("extend", "extend a compatible set");
  extend->add_option("base", o.base, "compatible set file")->required();
  auto* self = extend->add_flag("--self", o.self, "self extension p -> p^{R_m}");
  auto* mixed = extend->add_flag("--mixed", o.mixed, "mixed extension with --partner (experimental)");
  self->excludes(mixed);
  extend->add_option("--m", o.m, "self-extension power")->check(CLI::PositiveNumber)->capture_default_str();
  extend->add_option("--partner", o.partner, "second compatible set for --mixed");
  extend->add_option("--min-size", o.min_size, "smallest mixed set size to report")->capture_default_str();
  extend->add_flag("--deep", o.deep, "verify with both routes at every size");
  extend->add_option("--out", o.out, "output directory")->capture_default_str();

  auto* codebook = app.add_subcommand("codebook", "build the spreading matrix of a set");
  codebook->add_option("set", o.base, "compatible set file")->required();
  codebook->add_option("--format", o.format, "csv, bin or metrics-only")
      ->check(CLI::IsMember({"csv", "bin", "metrics-only"}))
      ->capture_default_str();
  codebook->add_option("--oversample", o.oversample, "PAPR grid oversampling")->capture_default_str();
  codebook->add_option("--out", o.out, "output directory")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "check a set or codebook");
  verify->add_option("kind", o.kind, "set, codebook, golay or papr")
      ->required()
      ->check(CLI::IsMember({"set", "codebook", "golay", "papr"}));
  verify->add_option("path", o.path, "set file, or codebook .csv/.bin")->required();
  verify->add_option("--oversample", o.oversample, "PAPR grid oversampling")->capture_default_str();
  verify->add_option("--seed", o.seed, "seed for sampled checks")->capture_default_str();
  verify->add_flag("--deep", o.deep, "verify with both routes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (*extend && !o.self && !o.mixed) {
    std::cerr << "extend: choose --self or --mixed\n";
    return kUsage;
  }
  if (*extend && o.mixed && o.partner.empty()) {
    std::cerr << "extend --mixed needs --partner\n";
    return kUsage;
  }

  try {
    if (*search) return cmd_search(o);
    if (*extend) return cmd_extend(o);
    if (*codebook) return cmd_codebook(o);
    return cmd_verify(o);
  } catch (const io::fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kUsage;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kFailed;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}
