#pragma once

// Request dispatch for the command-line tool, with a content-addressed
// report cache keyed by the SHA-256 of the canonicalized request.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <openssl/evp.h>

#include "torelli/audit.hpp"
#include "torelli/errors.hpp"
#include "torelli/jacobian.hpp"
#include "torelli/json_io.hpp"
#include "torelli/lattice.hpp"
#include "torelli/laurent.hpp"
#include "torelli/period_kernel.hpp"

namespace torelli {

enum ExitCode : int { kExitOk = 0, kExitHypothesis = 2, kExitOracle = 3, kExitIo = 4 };

struct RunRequest {
  std::string command;
  std::string polytope_path;
  std::string poly = "random";  ///< "random", a path, or inline JSON
  std::uint64_t seed = 1;
  std::int64_t bound = 997;
  int k = 1;
  int trials = 3;
  Coord q_max = 30;
  std::vector<std::string> corpus;  ///< polytope files or directories for scan
  std::string output;
};

struct RunReport {
  Json report;
  int exit_code = kExitOk;
  bool cache_hit = false;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"hodge",  "kernel", "classify",     "nondegen",
                                          "stable", "scan",   "verify-white", "verify-prop"};
  return c;
}

inline std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace detail {

inline Json load_polynomial_json(const RunRequest& r) {
  if (r.poly == "random") return Json{{"mode", "random"}, {"seed", r.seed}, {"bound", r.bound}};
  if (!r.poly.empty() && r.poly.front() == '{') {
    try {
      return Json::parse(r.poly);
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("inline polynomial: ") + e.what());
    }
  }
  return read_json_file(r.poly);
}

inline std::vector<std::pair<std::string, LatticePolytope>> load_corpus(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    if (std::filesystem::is_directory(p)) {
      for (const auto& e : std::filesystem::directory_iterator(p))
        if (e.path().extension() == ".json") files.push_back(e.path().string());
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, LatticePolytope>> out;
  for (const auto& f : files)
    out.emplace_back(std::filesystem::path(f).stem().string(), polytope_from_json(read_json_file(f)));
  return out;
}

inline bool needs_polytope(const std::string& cmd) {
  return cmd != "scan" && cmd != "verify-white";
}

/// Canonical request: command, relevant options and canonical inputs.
inline Json canonical_request(const RunRequest& r, const std::optional<std::pair<LatticePolytope, LaurentPolynomial<Rational>>>& in,
                              const std::vector<std::pair<std::string, LatticePolytope>>& corpus) {
  Json j{{"schema", kSchemaVersion}, {"command", r.command}};
  if (in) j["input"] = canonical_input(in->first, in->second);
  if (r.command == "kernel" || r.command == "verify-prop") j["k"] = r.k;
  if (r.command == "hodge" || r.command == "nondegen" || r.command == "scan") {
    j["trials"] = r.trials;
    j["seed"] = r.seed;
  }
  if (r.command == "verify-white") j["q_max"] = r.q_max;
  if (r.command == "scan") {
    Json c = Json::array();
    for (const auto& [name, p] : corpus) c.push_back(Json{{"name", name}, {"polytope", polytope_to_json(p)}});
    j["corpus"] = c;
  }
  return j;
}

inline void require_spanning(const LatticePolytope& p, Json& warnings, int& exit_code) {
  if (!interior_affinely_spanning(p)) {
    warnings.push_back("hypothesis violated: interior lattice points lie in an affine hyperplane; "
                       "theorem enumeration skipped, brute-force data only");
    exit_code = kExitHypothesis;
  }
}

inline Json dispatch(const RunRequest& r, const std::optional<std::pair<LatticePolytope, LaurentPolynomial<Rational>>>& in,
                     const std::vector<std::pair<std::string, LatticePolytope>>& corpus, Json& warnings, int& exit_code) {
  const std::string& cmd = r.command;
  if (cmd == "verify-white") {
    const auto s = white_sweep(r.q_max);
    if (!s.violations.empty() || s.witnesses_failed > 0) exit_code = kExitOracle;
    return to_json(s);
  }
  if (cmd == "scan") {
    const auto entries = scan_obstructions(corpus, r.seed, r.trials);
    Json scan = Json::array();
    for (const auto& e : entries) {
      scan.push_back(to_json(e));
      if (e.verdict && *e.verdict == Verdict::Fails) exit_code = kExitOracle;
    }
    return Json{{"scan", scan}};
  }

  const auto& [p, f] = *in;
  const std::size_t n = p.dim();
  if (cmd == "hodge") {
    const auto ctx = build_context<Rational>(p, f, static_cast<int>(n) + 1);
    const auto h = hodge_report(ctx);
    Json j = to_json(h);
    j["tangent_dim"] = tangent_dim(ctx);
    if (!points(p, true).empty()) {
      const auto closed = batyrev_dim2(p);
      j["closed_form_dim2"] = closed;
      const bool match = n < 2 || closed == static_cast<long long>(h.dims[1].interior_module);  // NOLINT(google-runtime-int)
      j["closed_form_match"] = match;
      if (!match) exit_code = kExitOracle;
    }
    j["certificate"] = to_string(nondegeneracy_certificate<Fp>(p, f, r.trials, r.seed + 1).status);
    if (!h.duality) exit_code = kExitOracle;
    return j;
  }
  if (cmd == "nondegen") {
    return to_json(nondegeneracy_certificate<Rational>(p, f, r.trials, r.seed + 1));
  }
  if (cmd == "stable") {
    Json j = to_json(stability_check(p, f));
    if (!contains(p, LatticePoint(n), true)) {
      if (const auto t = interior_normalizing_shift(p)) {
        j["normalization_shift"] = t->coords();
        j["normalized"] = to_json(stability_check(translate(p, *t), shift(f, *t)));
        warnings.push_back("origin is not interior; the normalized report uses the translate by " + t->str());
      } else {
        warnings.push_back("polytope has no interior lattice points, so no stable points exist");
      }
    }
    return j;
  }
  if (cmd == "kernel") {
    if (r.k < 1 || r.k > std::max(1, static_cast<int>(n) - 1)) throw ParseError("--k must lie in [1, max(1, n-1)]");
    require_spanning(p, warnings, exit_code);
    const auto ctx = build_context<Rational>(p, f, r.k + 1);
    Json j = to_json(compare_kernels(ctx, r.k), n);
    j["roots"] = demazure_roots(p).size();
    if (j.contains("spans_equal") && !j["spans_equal"].get<bool>()) exit_code = kExitOracle;
    return j;
  }
  if (cmd == "classify") {
    require_spanning(p, warnings, exit_code);
    const auto ctx = build_context<Rational>(p, f);
    const auto itt = itt_report(ctx);
    Json j = to_json(itt, n);
    for (const auto& c : itt.by_degree)
      if (c.theorem && !c.spans_equal) exit_code = kExitOracle;
    if (!itt.kodaira_spencer_contained) exit_code = kExitOracle;
    return j;
  }
  if (cmd == "verify-prop") {
    if (r.k < 2 || r.k > static_cast<int>(n) + 1) throw ParseError("--k must lie in [2, n+1]");
    const auto ctx = build_context<Rational>(p, f, r.k);
    try {
      return to_json(verify_proposition(ctx, r.k));
    } catch (const PropositionViolation& e) {
      exit_code = kExitOracle;
      return Json{{"k", r.k}, {"span_equal", false}, {"violation", e.what()}};
    }
  }
  throw ParseError("unknown command \"" + cmd + "\"");
}

inline std::optional<RunReport> cache_lookup(const std::filesystem::path& file, const std::string& hash, bool& corrupt) {
  if (!std::filesystem::exists(file)) return std::nullopt;
  try {
    const Json entry = read_json_file(file.string());
    if (entry.at("input_hash").get<std::string>() != hash || entry.at("report").at("input_hash").get<std::string>() != hash)
      throw ParseError("hash mismatch");
    RunReport r;
    r.report = entry.at("report");
    r.exit_code = entry.at("exit_code").get<int>();
    r.cache_hit = true;
    return r;
  } catch (const std::exception&) {
    corrupt = true;
    return std::nullopt;
  }
}

inline void cache_store(const std::filesystem::path& dir, const std::string& hash, const RunReport& r) {
  std::filesystem::create_directories(dir);
  std::random_device rd;
  const auto tmp = dir / (hash + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp);
    if (!out) throw ParseError("cannot write cache file " + tmp.string());
    out << Json{{"input_hash", hash}, {"exit_code", r.exit_code}, {"report", r.report}}.dump();
  }
  std::filesystem::rename(tmp, dir / (hash + ".json"));
}

}  // namespace detail

/// Parses inputs, consults the cache in `cache_dir` (if nonempty), dispatches
/// and assembles the report. Parse and I/O failures propagate as ParseError.
inline RunReport run(const RunRequest& r, const std::string& cache_dir = "") {
  const auto start = std::chrono::steady_clock::now();
  if (std::find(commands().begin(), commands().end(), r.command) == commands().end())
    throw ParseError("unknown command \"" + r.command + "\"");

  Json warnings = Json::array();
  std::optional<std::pair<LatticePolytope, LaurentPolynomial<Rational>>> in;
  std::vector<std::pair<std::string, LatticePolytope>> corpus;
  if (detail::needs_polytope(r.command)) {
    if (r.polytope_path.empty()) throw ParseError("--polytope is required for " + r.command);
    auto p = polytope_from_json(read_json_file(r.polytope_path));
    const auto spec = polynomial_spec_from_json(detail::load_polynomial_json(r), p.dim());
    LaurentPolynomial<Rational> f(p.dim());
    try {
      f = realize(spec, p);
    } catch (const Error& e) {
      throw ParseError(std::string("polynomial: ") + e.what());
    }
    in.emplace(std::move(p), std::move(f));
  }
  if (r.command == "scan") corpus = detail::load_corpus(r.corpus);

  const std::string hash = sha256_hex(detail::canonical_request(r, in, corpus).dump());
  const std::filesystem::path dir = cache_dir;
  const auto file = dir / (hash + ".json");

  RunReport out;
  std::optional<RunReport> hit;
  bool corrupt = false;
  if (!cache_dir.empty()) hit = detail::cache_lookup(file, hash, corrupt);
  if (hit) {
    out = std::move(*hit);
  } else {
    int exit_code = kExitOk;
    Json result = detail::dispatch(r, in, corpus, warnings, exit_code);
    out.report = Json{{"schema_version", kSchemaVersion}, {"command", r.command}, {"input_hash", hash}};
    if (in) {
      out.report["polytope"] = polytope_to_json(in->first);
      out.report["field"] = field_name<Rational>();
    }
    out.report["result"] = std::move(result);
    out.report["warnings"] = warnings;
    out.exit_code = exit_code;
    if (!cache_dir.empty()) detail::cache_store(dir, hash, out);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report["timing"] = Json{{"seconds", seconds}, {"cache", out.cache_hit ? "hit" : (corrupt ? "corrupt_recomputed" : "miss")}};
  return out;
}

}  // namespace torelli
