#pragma once

// File formats: permutation sets (text and JSON), IS_n listings, set lists,
// verification reports, codebook exports (CSV, packed binary), metrics JSON
// and run manifests. Failures throw IoError.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bentbook/codebook.hpp"
#include "bentbook/extend.hpp"
#include "bentbook/quadperm.hpp"

namespace bentbook::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view content);

struct PermSet {
  int n = 0;
  std::vector<Perm> perms;
  json provenance = json::object();
};

// Text format: one permutation per line as [a,b,...]; blank lines and lines
// starting with '#' are ignored.
std::string perm_set_text(std::span<const Perm> perms);
std::vector<Perm> parse_perm_text(std::string_view text);

// {"n": 4, "perms": [[1,2,3,4], ...], "provenance": {...}}
json perm_set_json(const PermSet& s);
PermSet perm_set_from_json(const json& j);

// JSON when the file starts with '{', text otherwise. An empty set is an
// error.
PermSet load_perm_set(const fs::path& path);

// {"n": 4, "is_size": 12, "members": [...]}
json is_json(int n, std::span<const Perm> members);

// {"n": ..., "min_size": ..., "count": ..., "sets": [[perm, ...], ...]}
json set_list_json(int n, int min_size, std::span<const std::vector<Perm>> sets);
// dump_rows(set_list_json(...)) without building the JSON tree.
std::string set_list_rows(int n, int min_size, std::span<const std::vector<Perm>> sets);
std::vector<std::vector<Perm>> set_list_from_json(const json& j);

json set_report_json(const SetReport& rep, std::span<const Perm> perms);

// Header "l{block}_c{c}" per column (block 1-based), then one row of +1/-1
// per sequence index.
std::string codebook_csv(const Codebook& cb);
SignMatrix parse_codebook_csv(std::string_view text);

// u64 LE rows, u64 LE cols, then row-major sign bits packed LSB-first into
// bytes (bit set = -1), each row padded to a whole byte.
std::string codebook_bin(const SignMatrix& m);
SignMatrix parse_codebook_bin(std::string_view bytes);

json metrics_json(const CodebookMetrics& m, const std::optional<PaprScan>& papr);

// Top-level keys one per line; arrays of arrays or objects one element per
// line; everything else compact.
std::string dump_rows(const json& j);

std::string sha256_hex(std::string_view bytes);

struct Manifest {
  std::string command;
  json parameters = json::object();
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  double wall_seconds = 0.0;
};

// Writes the manifest JSON with a SHA-256 digest of every listed file.
void write_manifest(const fs::path& path, const Manifest& m);

}  // namespace bentbook::io
