#pragma once

// The `clq` command line: construct, verify, export-pg3, report-pattern,
// report-decomposition, verify-charsums, bench.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid input,
// 3 resource cap. Progress goes to the error stream, data to the output
// stream; --json turns tables and errors into JSON.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clq/artifact.hpp"
#include "clq/character_engine.hpp"
#include "clq/construction.hpp"
#include "clq/error.hpp"
#include "clq/field_identities.hpp"
#include "clq/parallel.hpp"
#include "clq/report.hpp"
#include "clq/suite.hpp"
#include "clq/verifier.hpp"

namespace clq::cli {

enum Exit : int { kOk = 0, kVerificationFailed = 1, kInvalidInput = 2, kResourceCap = 3 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime:
    case ErrorCode::DegreeTooLarge:
    case ErrorCode::InvalidQ:
    case ErrorCode::BadFlag:
    case ErrorCode::BadArtifact:
    case ErrorCode::NotOnQuadric:
      return kInvalidInput;
    case ErrorCode::ResourceCap:
    case ErrorCode::FieldTooLarge:
      return kResourceCap;
    default:
      return kVerificationFailed;
  }
}

struct JobConfig {
  std::string command;
  std::uint32_t q = 0, p = 0, h = 0;
  std::string sign = "minus";
  std::optional<std::size_t> a1;
  std::string checks = "all";
  std::uint64_t seed = 1;
  std::string out;
  std::string file;
  bool json = false;
  unsigned threads = 0;  // 0: hardware parallelism
  std::uint64_t mem_cap = 0;  // bytes, 0: none
  std::optional<std::uint32_t> line;
  std::vector<std::uint32_t> bench_q{17, 29};
};

/// (p, h) with q = p^h, or nullopt when q is not a prime power.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> factor_prime_power(std::uint32_t q) {
  if (q < 2) return std::nullopt;
  std::uint32_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  std::uint32_t h = 0, r = q;
  while (r % p == 0) {
    r /= p;
    ++h;
  }
  if (r != 1) return std::nullopt;
  return std::pair{p, h};
}

/// Rough peak memory of a construction with the PG(3,q) side, in bytes.
inline std::uint64_t estimate_memory(std::uint64_t q, bool lines, bool planes) {
  const std::uint64_t n = (q * q + 1) * (q * q + q + 1);
  std::uint64_t bytes = 32 * q * q * q + 64 * n;
  if (lines) bytes += 8 * n * (q + 1) + 16 * n;
  if (planes) bytes += 8 * (q * q * q + q * q + q + 1) * (q * q + q + 1);
  return bytes;
}

inline bool is_construction_command(const std::string& c) {
  return c == "construct" || c == "export-pg3" || c == "report-pattern" || c == "report-decomposition" ||
         c == "verify-charsums";
}

inline JobConfig validate_config(JobConfig cfg) {
  if (cfg.sign != "minus" && cfg.sign != "plus") throw Error(ErrorCode::BadFlag, "--sign must be plus or minus");
  if (cfg.threads == 0) cfg.threads = default_thread_count();
  parse_check_list(cfg.checks);
  if (cfg.command == "verify") {
    if (cfg.file.empty()) throw Error(ErrorCode::BadFlag, "verify needs a file");
    return cfg;
  }
  if (cfg.command == "bench") {
    for (auto q : cfg.bench_q) {
      const auto f = factor_prime_power(q);
      if (!f || !is_admissible_q(q)) throw Error(ErrorCode::InvalidQ, "q=" + std::to_string(q) + " is not admissible");
      if (cfg.mem_cap && estimate_memory(q, true, false) > cfg.mem_cap)
        throw Error(ErrorCode::ResourceCap, "q=" + std::to_string(q) + " needs about " +
                                                std::to_string(estimate_memory(q, true, false)) + " bytes");
    }
    return cfg;
  }
  if (!is_construction_command(cfg.command)) throw Error(ErrorCode::BadFlag, "unknown command '" + cfg.command + "'");
  if (cfg.q != 0) {
    const auto f = factor_prime_power(cfg.q);
    if (!f) throw Error(ErrorCode::InvalidQ, "q=" + std::to_string(cfg.q) + " is not a prime power");
    if ((cfg.p && cfg.p != f->first) || (cfg.h && cfg.h != f->second))
      throw Error(ErrorCode::BadFlag, "--q disagrees with --p/--h");
    cfg.p = f->first;
    cfg.h = f->second;
  } else {
    if (cfg.p == 0) throw Error(ErrorCode::BadFlag, "give --q or --p and --h");
    if (cfg.h == 0) cfg.h = 1;
    if (!clq::detail::is_prime(cfg.p)) throw Error(ErrorCode::NotPrime, std::to_string(cfg.p) + " is not prime");
    const std::uint64_t q = clq::detail::ipow(cfg.p, cfg.h);
    if (q > 0xffffu) throw Error(ErrorCode::InvalidQ, "q too large");
    cfg.q = static_cast<std::uint32_t>(q);
  }
  if (!is_admissible_q(cfg.q)) throw Error(ErrorCode::InvalidQ, "q=" + std::to_string(cfg.q) + " is not 5 or 9 mod 12");
  if (cfg.mem_cap) {
    const bool lines = cfg.command != "verify-charsums";
    const auto need = estimate_memory(cfg.q, lines, lines);
    if (need > cfg.mem_cap)
      throw Error(ErrorCode::ResourceCap, "q=" + std::to_string(cfg.q) + " needs about " + std::to_string(need) + " bytes");
  }
  return cfg;
}

namespace detail {

inline OmegaSign sign_of(const JobConfig& cfg) { return cfg.sign == "plus" ? OmegaSign::plus : OmegaSign::minus; }

inline ArtifactConfig artifact_config_of(const JobConfig& cfg, std::size_t a1) {
  return {cfg.p, cfg.h, sign_of(cfg), a1, cfg.seed};
}

inline std::unique_ptr<Construction> build(const JobConfig& cfg, std::ostream& err, bool planes = true) {
  BuildOptions opt;
  opt.sign = sign_of(cfg);
  opt.a1 = cfg.a1.value_or(0);
  opt.threads = cfg.threads;
  opt.planes = planes;
  err << "[clq] building q=" << cfg.q << " (sign " << cfg.sign << ", a1 " << opt.a1 << ")\n";
  Stopwatch sw;
  auto c = construct(cfg.p, cfg.h, opt);
  err << "[clq] built in " << sw.elapsed_ms() << " ms\n";
  return c;
}

inline SuiteOptions suite_options(const JobConfig& cfg) {
  SuiteOptions s;
  s.groups = parse_check_list(cfg.checks);
  s.seed = cfg.seed;
  s.threads = cfg.threads;
  return s;
}

inline void print_table(std::ostream& os, const std::vector<CheckReport>& reports) {
  std::size_t w = 0;
  for (const auto& r : reports) w = std::max(w, r.name.size());
  for (const auto& r : reports) {
    os << (r.pass() ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(w) + 2) << r.name
       << std::right << std::setw(12) << r.checked << "  " << r.scope << "  " << r.elapsed_ms << " ms\n";
    for (const auto& f : r.failures) os << "      " << f << "\n";
  }
  std::size_t failed = 0;
  for (const auto& r : reports) failed += !r.pass();
  os << (failed == 0 ? "all " + std::to_string(reports.size()) + " checks passed"
                     : std::to_string(failed) + " of " + std::to_string(reports.size()) + " checks failed")
     << "\n";
}

inline nlohmann::json verdicts_json(const std::vector<CheckReport>& reports, std::uint32_t q, std::uint64_t seed) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& r : reports) {
    auto j = to_verdict(r, q, true);
    j["seed"] = seed;
    j["details"] = r.details;
    v.push_back(std::move(j));
  }
  return v;
}

inline void emit_reports(std::ostream& os, const JobConfig& cfg, std::uint32_t q, const std::vector<CheckReport>& reports,
                         nlohmann::json extra = nlohmann::json::object()) {
  if (cfg.json) {
    extra["command"] = cfg.command;
    extra["q"] = q;
    extra["seed"] = cfg.seed;
    extra["pass"] = all_pass(reports);
    extra["verdicts"] = verdicts_json(reports, q, cfg.seed);
    os << extra.dump(2) << "\n";
  } else {
    os << "q=" << q << " seed=" << cfg.seed << "\n";
    print_table(os, reports);
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::BadFlag, "cannot write " + path);
  f << text;
}

inline int cmd_construct(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  auto c = build(cfg, err);
  const auto reports = run_suite(*c, suite_options(cfg));
  const auto art = dump_artifact(artifact_json(*c, artifact_config_of(cfg, c->partition.a1), reports));
  if (cfg.out.empty()) {
    out << art;
    emit_reports(err, cfg, c->q(), reports);
  } else {
    write_text(cfg.out, art);
    err << "[clq] wrote " << cfg.out << "\n";
    emit_reports(out, cfg, c->q(), reports, {{"artifact", cfg.out}});
  }
  return all_pass(reports) ? kOk : kVerificationFailed;
}

inline int cmd_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto j = read_json_file(cfg.file);
  err << "[clq] loading " << cfg.file << "\n";
  const auto c = load_artifact(j);
  JobConfig eff = cfg;
  // sampled checks reuse the seed recorded in the file
  eff.seed = artifact_config(j).seed;
  auto reports = run_suite(*c, suite_options(eff));
  reports.push_back(verify_reproducible(*c));
  emit_reports(out, eff, c->q(), reports, {{"file", cfg.file}});
  return all_pass(reports) ? kOk : kVerificationFailed;
}

inline int cmd_export(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  auto c = build(cfg, err, false);
  const Subfield& F = c->scene->subfield();
  nlohmann::json j;
  j["format_version"] = kArtifactFormat;
  j["q"] = c->q();
  j["tower"] = tower_block(*c->tower);
  nlohmann::json codes = nlohmann::json::array();
  for (Code k = 0; k < F.size(); ++k) codes.push_back(F.element(k).index);
  j["subfield_codes"] = codes;  // code k is the E element with this index
  j["scene"] = {{"points", c->scene->num_points()}, {"lines", c->scene->num_lines()}};
  j["line_classes"] = nlohmann::json::array();
  for (const LineClass* L : {&c->L1, &c->L2}) {
    nlohmann::json lines = nlohmann::json::array();
    for (auto l : L->lines) {
      const auto [a, b] = c->scene->line_basis(l);
      lines.push_back({{"id", l}, {"basis", {a, b}}});
    }
    j["line_classes"].push_back({{"label", L->label}, {"x", L->x}, {"size", L->size()}, {"lines", lines}});
  }
  const std::string text = j.dump() + "\n";
  if (cfg.out.empty()) out << text;
  else {
    write_text(cfg.out, text);
    err << "[clq] wrote " << cfg.out << "\n";
  }
  return kOk;
}

inline std::string format_matrix(const std::vector<std::vector<std::int64_t>>& m) {
  std::ostringstream os;
  for (const auto& row : m) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << std::setw(4) << row[k];
    os << "\n";
  }
  return os.str();
}

inline int cmd_report_pattern(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  auto c = build(cfg, err);
  const Pg3Scene& sc = *c->scene;
  const Permutation gc = c->quadric->permutation(IsometryMap::c()), gz = c->quadric->permutation(IsometryMap::z());
  const auto po = compute_point_orbits(sc, c->klein,
                                       {induced_point_permutation(sc, c->klein, gc), induced_point_permutation(sc, c->klein, gz)});
  CheckReport ar;
  const AValues av = extract_a_values(sc, c->L1, po, &ar);
  std::uint32_t line = Pg3Scene::kNone;
  if (cfg.line) {
    if (*cfg.line >= sc.num_lines()) throw Error(ErrorCode::BadFlag, "--line out of range");
    line = *cfg.line;
  } else {
    for (std::uint32_t l = 0; l < sc.num_lines() && line == Pg3Scene::kNone; ++l)
      if (!sc.on_line(c->klein.p0, l) && !sc.in_plane(l, c->klein.pi)) line = l;
  }
  const PatternMatrix pm = compute_pattern(sc, c->L1, line);
  PatternOptions popt;
  popt.seed = cfg.seed;
  popt.a_values = &av;
  popt.p0 = c->klein.p0;
  popt.pi = c->klein.pi;
  std::vector<CheckReport> reports{verify_point_orbits(sc, c->klein, po), ar, verify_pattern_props(sc, c->L1, popt)};
  std::vector<std::size_t> sizes;
  for (const auto& m : po.members) sizes.push_back(m.size());
  if (cfg.json) {
    emit_reports(out, cfg, c->q(), reports,
                 {{"orbit_sizes", sizes}, {"a_values", av.a}, {"line", line}, {"in_L1", c->L1.contains(line)}, {"pattern", pm.t}});
  } else {
    out << "point orbits of <c,z>:";
    for (auto s : sizes) out << " " << s;
    out << "\na-values: " << av.a[0] << " " << av.a[1] << " " << av.a[2] << " " << av.a[3] << "\n";
    out << "pattern of L1 along line " << line << (c->L1.contains(line) ? " (in L1)" : "") << ":\n" << format_matrix(pm.t);
    emit_reports(out, cfg, c->q(), reports);
  }
  return all_pass(reports) ? kOk : kVerificationFailed;
}

inline nlohmann::json table_with_labels(const Table4& t) {
  static const char* rows[] = {"{p0}", "pi", "P1", "P2"};
  static const char* cols[] = {"star(p0)", "line(pi)", "L1", "L2"};
  nlohmann::json j = nlohmann::json::object();
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) j[rows[i]][cols[k]] = t[i][k];
  return j;
}

inline void print_table4(std::ostream& os, const char* title, const Table4& got, const Table4& want) {
  static const char* rows[] = {"{p0}", "pi", "P1", "P2"};
  os << title << "\n" << std::setw(6) << "" << std::setw(10) << "star(p0)" << std::setw(10) << "line(pi)" << std::setw(10) << "L1"
     << std::setw(10) << "L2" << "\n";
  for (int i = 0; i < 4; ++i) {
    os << std::setw(6) << std::left << rows[i] << std::right;
    for (int k = 0; k < 4; ++k) os << std::setw(10) << (std::to_string(got[i][k]) + (got[i][k] == want[i][k] ? "" : "!"));
    os << "\n";
  }
}

inline int cmd_report_decomposition(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!square_power_of_three(cfg.q)) throw Error(ErrorCode::InvalidQ, "q=" + std::to_string(cfg.q) + " is not 3^(2e)");
  auto c = build(cfg, err);
  const auto d = verify_tactical_decomposition(*c->scene, c->klein, c->L1, c->L2);
  std::vector<CheckReport> reports{d.report, verify_affine_sets(*c->scene, c->klein, d)};
  if (cfg.json) {
    emit_reports(out, cfg, c->q(), reports,
                 {{"e", d.e},
                  {"lines_per_point", table_with_labels(d.lines_per_point)},
                  {"points_per_line", table_with_labels(d.points_per_line)},
                  {"expected_lines_per_point", table_with_labels(d.expected_lpp)},
                  {"expected_points_per_line", table_with_labels(d.expected_ppl)}});
  } else {
    print_table4(out, "lines per point", d.lines_per_point, d.expected_lpp);
    print_table4(out, "points per line", d.points_per_line, d.expected_ppl);
    out << "affine sets: " << reports[1].details.dump() << "\n";
    emit_reports(out, cfg, c->q(), reports);
  }
  return all_pass(reports) ? kOk : kVerificationFailed;
}

inline int cmd_verify_charsums(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  TowerOptions topt;
  topt.omega_sign = sign_of(cfg);
  err << "[clq] character suites for q=" << cfg.q << "\n";
  const FieldTower t = FieldTower::build(cfg.p, cfg.h, topt);
  std::vector<CheckReport> reports;
  Stopwatch sw;
  for (auto& r : verify_field_identities(t, 1u << 20, cfg.seed)) reports.push_back(std::move(r));
  for (auto& r : verify_kappa_theorem(t, cfg.threads)) reports.push_back(std::move(r));
  GaussSuiteOptions g;
  g.seed = cfg.seed;
  for (auto& r : verify_gauss_identities(t, g)) reports.push_back(std::move(r));
  if (!reports.empty()) reports.front().elapsed_ms = sw.elapsed_ms();
  emit_reports(out, cfg, t.q(), reports);
  return all_pass(reports) ? kOk : kVerificationFailed;
}

/// Construction plus the exhaustive tight-set and line-count certificates.
inline int cmd_bench(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  nlohmann::json rows = nlohmann::json::array();
  bool ok = true;
  for (auto q : cfg.bench_q) {
    const auto [p, h] = *factor_prime_power(q);
    err << "[clq] bench q=" << q << "\n";
    BuildOptions opt;
    opt.sign = sign_of(cfg);
    opt.threads = cfg.threads;
    opt.planes = false;
    Stopwatch total;
    auto c = construct(p, h, opt);
    const auto t_build = total.elapsed_ms();
    const auto tight = verify_tight_set(*c->quadric, c->sets.T1.points, c->x(), cfg.threads);
    const auto lines = verify_cl_line_counts(*c->scene, c->L1, cfg.threads);
    const bool pass = tight.pass() && lines.pass();
    ok = ok && pass;
    rows.push_back({{"q", q},
                    {"threads", cfg.threads},
                    {"construct_ms", t_build},
                    {"tight_set_ms", tight.elapsed_ms},
                    {"total_ms", total.elapsed_ms()},
                    {"quadric_points", c->quadric->size()},
                    {"pass", pass}});
  }
  if (cfg.json) {
    out << nlohmann::json{{"command", "bench"}, {"seed", cfg.seed}, {"runs", rows}}.dump(2) << "\n";
  } else {
    out << "     q  threads   construct   tight-set       total  result\n";
    for (const auto& r : rows)
      out << std::setw(6) << r["q"].get<std::uint32_t>() << std::setw(9) << r["threads"].get<unsigned>() << std::setw(9)
          << r["construct_ms"].get<std::uint64_t>() << " ms" << std::setw(9) << r["tight_set_ms"].get<std::uint64_t>() << " ms"
          << std::setw(9) << r["total_ms"].get<std::uint64_t>() << " ms  " << (r["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kOk : kVerificationFailed;
}

inline int report_error(const JobConfig& cfg, std::ostream& out, std::ostream& err, const std::string& code,
                        const std::string& message, int exit_code) {
  if (cfg.json)
    out << nlohmann::json{{"error", code}, {"message", message}, {"exit_code", exit_code}}.dump(2) << "\n";
  else
    err << "clq: " << message << "\n";
  return exit_code;
}

}  // namespace detail

inline int dispatch(const JobConfig& raw, std::ostream& out, std::ostream& err) {
  JobConfig cfg = raw;
  try {
    cfg = validate_config(raw);
    if (cfg.command == "construct") return detail::cmd_construct(cfg, out, err);
    if (cfg.command == "verify") return detail::cmd_verify(cfg, out, err);
    if (cfg.command == "export-pg3") return detail::cmd_export(cfg, out, err);
    if (cfg.command == "report-pattern") return detail::cmd_report_pattern(cfg, out, err);
    if (cfg.command == "report-decomposition") return detail::cmd_report_decomposition(cfg, out, err);
    if (cfg.command == "verify-charsums") return detail::cmd_verify_charsums(cfg, out, err);
    if (cfg.command == "bench") return detail::cmd_bench(cfg, out, err);
    throw Error(ErrorCode::BadFlag, "unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    return detail::report_error(cfg, out, err, std::string(to_string(e.code())), e.what(), exit_code_for(e.code()));
  } catch (const std::bad_alloc&) {
    return detail::report_error(cfg, out, err, "ResourceCap", "out of memory", kResourceCap);
  } catch (const std::exception& e) {
    return detail::report_error(cfg, out, err, "InternalError", e.what(), kVerificationFailed);
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tight sets of Q+(5,q) and Cameron-Liebler line classes of PG(3,q)", "clq"};
  app.set_help_flag("--help", "print this help");  // -h would clash with --h
  app.require_subcommand(1);
  app.fallthrough();
  JobConfig cfg;
  std::uint32_t line = 0;
  std::size_t a1 = 0;

  app.add_option("--q", cfg.q, "field order q = p^h");
  app.add_option("--p", cfg.p, "characteristic");
  app.add_option("--h", cfg.h, "degree of F over F_p");
  app.add_option("--sign", cfg.sign, "omega = alpha^(-(q^2+q+1)) (minus) or alpha^(q^2+q+1) (plus)")
      ->check(CLI::IsMember({"minus", "plus"}));
  app.add_option("--threads", cfg.threads, "worker threads (default: hardware)");
  app.add_option("--seed", cfg.seed, "seed for sampled checks");
  app.add_option("--out", cfg.out, "output file");
  app.add_flag("--json", cfg.json, "machine-readable output");
  app.add_option("--checks", cfg.checks, "comma-separated check groups, or all");
  app.add_option("--mem-cap", cfg.mem_cap, "refuse jobs estimated above this many bytes");
  auto* a1_opt = app.add_option("--a1", a1, "position in S of the element that fixes X1");

  app.add_subcommand("construct", "build the tight sets and line classes, run the checks, write an artifact");
  auto* verify = app.add_subcommand("verify", "re-run the checks on an artifact file");
  verify->add_option("file", cfg.file, "artifact")->required();
  app.add_subcommand("export-pg3", "write the line classes with their line coordinates");
  auto* pattern = app.add_subcommand("report-pattern", "point orbits, a-values and a pattern matrix");
  auto* line_opt = pattern->add_option("--line", line, "line id (default: first line off p0 and pi)");
  app.add_subcommand("report-decomposition", "tactical decomposition tables for q = 3^(2e)");
  app.add_subcommand("verify-charsums", "field identities, kappa theorem and Gauss sum identities");
  auto* bench = app.add_subcommand("bench", "time construction and exhaustive certificates");
  bench->add_option("qs", cfg.bench_q, "field orders (default 17 29)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    return detail::report_error(cfg, out, err, "BadFlag", e.what(), kInvalidInput);
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (a1_opt->count() > 0) cfg.a1 = a1;
  if (line_opt->count() > 0) cfg.line = line;
  return dispatch(cfg, out, err);
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace clq::cli
