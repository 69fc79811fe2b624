#include "bentbook/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "bentbook/errors.hpp"

namespace bentbook::io {

namespace {

json perm_json(const Perm& p) { return json(std::vector<int>(p.images().begin(), p.images().end())); }

Perm perm_from_json(const json& j) {
  if (j.is_string()) return parse_perm(j.get<std::string>());
  return Perm(j.get<std::vector<int>>());
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::uint64_t get_u64(std::string_view in, std::size_t at) {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= std::uint64_t{static_cast<unsigned char>(in[at + k])} << (8 * k);
  return v;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

std::string perm_set_text(std::span<const Perm> perms) {
  std::string out;
  for (const auto& p : perms) out += to_string(p) + "\n";
  return out;
}

std::vector<Perm> parse_perm_text(std::string_view text) {
  std::vector<Perm> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos || line[b] == '#') continue;
    try {
      out.push_back(parse_perm(line));
    } catch (const std::invalid_argument& e) {
      throw IoError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

json perm_set_json(const PermSet& s) {
  json perms = json::array();
  for (const auto& p : s.perms) perms.push_back(perm_json(p));
  return {{"n", s.n}, {"perms", perms}, {"provenance", s.provenance}};
}

PermSet perm_set_from_json(const json& j) {
  try {
    PermSet s;
    s.n = j.at("n").get<int>();
    for (const auto& p : j.at("perms")) s.perms.push_back(perm_from_json(p));
    if (j.contains("provenance")) s.provenance = j.at("provenance");
    for (const auto& p : s.perms) {
      if (p.size() != s.n) throw IoError("member " + to_string(p) + " does not match n = " + std::to_string(s.n));
    }
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed set JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("malformed set JSON: ") + e.what());
  }
}

PermSet load_perm_set(const fs::path& path) {
  const std::string text = read_file(path);
  const auto b = text.find_first_not_of(" \t\r\n");
  PermSet s;
  if (b != std::string::npos && text[b] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
    s = perm_set_from_json(j);
  } else {
    s.perms = parse_perm_text(text);
    if (!s.perms.empty()) s.n = s.perms.front().size();
    for (const auto& p : s.perms) {
      if (p.size() != s.n) throw IoError(path.string() + ": members of different sizes");
    }
  }
  if (s.perms.empty()) throw IoError(path.string() + ": empty permutation set");
  return s;
}

json is_json(int n, std::span<const Perm> members) {
  json list = json::array();
  for (const auto& p : members) list.push_back(perm_json(p));
  return {{"n", n}, {"is_size", members.size()}, {"members", list}};
}

json set_list_json(int n, int min_size, std::span<const std::vector<Perm>> sets) {
  json list = json::array();
  for (const auto& s : sets) {
    json one = json::array();
    for (const auto& p : s) one.push_back(perm_json(p));
    list.push_back(one);
  }
  return {{"n", n}, {"min_size", min_size}, {"count", sets.size()}, {"sets", list}};
}

std::string set_list_rows(int n, int min_size, std::span<const std::vector<Perm>> sets) {
  std::string out = "{\n  \"count\": " + std::to_string(sets.size()) + ",\n  \"min_size\": " +
                    std::to_string(min_size) + ",\n  \"n\": " + std::to_string(n) + ",\n  \"sets\": [";
  for (std::size_t k = 0; k < sets.size(); ++k) {
    out += k ? ",\n    [" : "\n    [";
    for (std::size_t i = 0; i < sets[k].size(); ++i) {
      if (i) out += ',';
      out += to_string(sets[k][i]);
    }
    out += ']';
  }
  return out + (sets.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

std::vector<std::vector<Perm>> set_list_from_json(const json& j) {
  try {
    std::vector<std::vector<Perm>> out;
    for (const auto& s : j.at("sets")) {
      std::vector<Perm> one;
      for (const auto& p : s) one.push_back(perm_from_json(p));
      out.push_back(std::move(one));
    }
    return out;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed set list: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("malformed set list: ") + e.what());
  }
}

json set_report_json(const SetReport& rep, std::span<const Perm> perms) {
  json members = json::array();
  for (const auto& p : perms) members.push_back(to_string(p));
  json j = {{"n", rep.n},
            {"L", rep.L},
            {"r_min", rep.r_min},
            {"all_pairs_ok", rep.all_pairs_ok},
            {"members", members},
            {"ranks", rep.ranks}};
  if (rep.first_failure) {
    const auto [a, b] = *rep.first_failure;
    j["first_failure"] = {to_string(perms[a]), to_string(perms[b])};
  } else {
    j["first_failure"] = nullptr;
  }
  return j;
}

std::string codebook_csv(const Codebook& cb) {
  const SignMatrix& m = cb.columns;
  const std::size_t N = m.rows();
  std::string out;
  out.reserve((m.cols() * 3 + 1) * (N + 1));
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (c) out += ',';
    out += "l" + std::to_string(c / N + 1) + "_c" + std::to_string(c % N);
  }
  out += '\n';
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += m.sign(r, c) < 0 ? "-1" : "1";
    }
    out += '\n';
  }
  return out;
}

SignMatrix parse_codebook_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
  }
  if (lines.empty()) throw IoError("empty codebook CSV");
  const std::size_t cols = static_cast<std::size_t>(std::count(lines[0].begin(), lines[0].end(), ',')) + 1;
  SignMatrix m(lines.size() - 1, cols);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::string_view line = lines[r];
    for (std::size_t c = 0; c < cols; ++c) {
      const auto comma = line.find(',');
      const auto field = line.substr(0, comma);
      if (field == "1" || field == "+1") {
        m.set_sign(r - 1, c, 1);
      } else if (field == "-1") {
        m.set_sign(r - 1, c, -1);
      } else {
        throw IoError("codebook CSV row " + std::to_string(r) + ": bad entry '" + std::string(field) + "'");
      }
      if ((comma == std::string_view::npos) != (c + 1 == cols)) {
        throw IoError("codebook CSV row " + std::to_string(r) + " has the wrong width");
      }
      if (comma != std::string_view::npos) line.remove_prefix(comma + 1);
    }
  }
  return m;
}

std::string codebook_bin(const SignMatrix& m) {
  const std::size_t row_bytes = (m.cols() + 7) / 8;
  std::string out;
  out.reserve(16 + row_bytes * m.rows());
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  std::string row(row_bytes, '\0');
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::fill(row.begin(), row.end(), '\0');
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.sign(r, c) < 0) row[c >> 3] = static_cast<char>(row[c >> 3] | (1 << (c & 7)));
    }
    out += row;
  }
  return out;
}

SignMatrix parse_codebook_bin(std::string_view bytes) {
  if (bytes.size() < 16) throw IoError("binary codebook shorter than its header");
  const std::uint64_t rows = get_u64(bytes, 0);
  const std::uint64_t cols = get_u64(bytes, 8);
  const std::uint64_t row_bytes = (cols + 7) / 8;
  if (rows > (std::uint64_t{1} << 32) || cols > (std::uint64_t{1} << 40) ||
      bytes.size() != 16 + rows * row_bytes) {
    throw IoError("binary codebook size does not match its header");
  }
  SignMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto* row = reinterpret_cast<const unsigned char*>(bytes.data() + 16 + r * row_bytes);
    for (std::size_t c = 0; c < cols; ++c) {
      if ((row[c >> 3] >> (c & 7)) & 1) m.set_sign(r, c, -1);
    }
  }
  return m;
}

json metrics_json(const CodebookMetrics& m, const std::optional<PaprScan>& papr) {
  json j = {{"n", m.n},
            {"L", m.L},
            {"N", m.N},
            {"K", m.K},
            {"r_min", m.r_min ? json(*m.r_min) : json(nullptr)},
            {"coherence", m.coherence.str()},
            {"w_phi", m.w_phi ? json(*m.w_phi) : json(nullptr)},
            {"papr_max_grid", papr ? json(papr->max_grid) : json(nullptr)},
            {"papr_upper_bound", papr ? json(papr->max_upper_bound) : json(nullptr)}};
  if (m.N > 0 && m.K > m.N) j["welch_bound"] = welch_bound(m.N, m.K);
  return j;
}

std::string dump_rows(const json& j) {
  if (!j.is_object()) return j.dump() + "\n";
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    out += first ? "\n  " : ",\n  ";
    first = false;
    out += json(key).dump() + ": ";
    const bool rows = value.is_array() && !value.empty() && (value.front().is_array() || value.front().is_object());
    if (!rows) {
      out += value.dump();
      continue;
    }
    out += "[";
    for (std::size_t k = 0; k < value.size(); ++k) out += (k ? ",\n    " : "\n    ") + value[k].dump();
    out += "\n  ]";
  }
  return out + "\n}\n";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 failed");
  }
  std::ostringstream out;
  for (unsigned int k = 0; k < len; ++k) out << std::hex << std::setw(2) << std::setfill('0') << int{digest[k]};
  return out.str();
}

void write_manifest(const fs::path& path, const Manifest& m) {
  auto digests = [](const std::vector<fs::path>& files) {
    json list = json::array();
    for (const auto& f : files) list.push_back({{"path", f.string()}, {"sha256", sha256_hex(read_file(f))}});
    return list;
  };
  const json j = {{"command", m.command},
                  {"parameters", m.parameters},
                  {"tool_version", BENTBOOK_VERSION},
                  {"inputs", digests(m.inputs)},
                  {"outputs", digests(m.outputs)},
                  {"timestamp", utc_now()},
                  {"wall_seconds", m.wall_seconds}};
  write_file(path, j.dump(2) + "\n");
}

}  // namespace bentbook::io
