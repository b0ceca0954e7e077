#include "bertrand/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bertrand/bounds.hpp"
#include "bertrand/case_tables.hpp"
#include "bertrand/certificate.hpp"
#include "bertrand/chebyshev.hpp"
#include "bertrand/errors.hpp"
#include "bertrand/table.hpp"
#include "bertrand/verify.hpp"

namespace bertrand {

std::int64_t parse_count(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw DomainError("empty number");
  char* end = nullptr;
  errno = 0;
  const long long whole = std::strtoll(s.c_str(), &end, 10);
  if (*end == '\0' && errno == 0) return whole;
  const double v = std::strtod(s.c_str(), &end);
  if (*end != '\0' || !std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9e18)
    throw DomainError("not an integer: '" + s + "'");
  return static_cast<std::int64_t>(v);
}

Point parse_point(std::string_view text) {
  Point p;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!item.empty()) {
      const std::size_t eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) throw DomainError("expected name=value, got '" + std::string(item) + "'");
      p[std::string(item.substr(0, eq))] = parse_count(item.substr(eq + 1));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return p;
}

std::pair<std::int64_t, std::int64_t> parse_range(std::string_view text) {
  const std::size_t dots = text.find("..");
  if (dots == std::string_view::npos) throw DomainError("expected lo..hi, got '" + std::string(text) + "'");
  return {parse_count(text.substr(0, dots)), parse_count(text.substr(dots + 2))};
}

namespace {

struct Failure {
  int code;
  nlohmann::json summary;
};

std::uint64_t default_limit_budget() {
  if (const char* env = std::getenv(kSieveLimitEnv)) return static_cast<std::uint64_t>(parse_count(env));
  return 2'000'000'000;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ResourceError("cannot write " + path);
  f << text;
}

std::string summary_line(const Certificate& c) {
  std::ostringstream os;
  os << c.theorem_id << ' ' << to_string(c.status) << " [" << c.lo << ", " << c.hi << "] failures=" << c.failures.size()
     << " elapsed_ms=" << c.elapsed_ms;
  return os.str();
}

nlohmann::json failure_summary(const Certificate& c) {
  nlohmann::json f = nlohmann::json::array();
  for (std::size_t i = 0; i < c.failures.size() && i < 20; ++i) f.push_back(c.failures[i]);
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : c.parts)
    if (p.status != Status::verified) parts.push_back({{"id", p.theorem_id}, {"failures", p.failures.size()}});
  return {{"check", c.theorem_id}, {"status", to_string(c.status)}, {"failures", f}, {"failure_count", c.failures.size()},
          {"failed_parts", parts}};
}

std::string print_value(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit prime-interval verification toolkit", "bertrand"};
  app.set_version_flag("--version", kToolkitVersion);
  app.require_subcommand(1);

  std::uint64_t budget_bytes = 0;
  unsigned jobs = 1;
  app.add_option("--budget", budget_bytes, "Largest sieve allowed, in bytes (default from " + std::string(kSieveLimitEnv) + ")");
  app.add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::Range(1u, 256u));

  // verify
  auto* verify = app.add_subcommand("verify", "Run a theorem driver and print its certificate");
  std::string theorem_id, out_file, checkpoint;
  std::string from_s, to_s;
  bool long_job = false;
  verify->add_option("theorem-id", theorem_id, "Theorem driver, e.g. thm-2.1.3")->required();
  verify->add_option("--from", from_s, "First n");
  verify->add_option("--to", to_s, "Last n");
  verify->add_option("--out", out_file, "Write the certificate here instead of standard output");
  verify->add_flag("--long-job", long_job, "Run the full opt-in range with checkpoints");
  verify->add_option("--checkpoint", checkpoint, "Checkpoint file for long jobs");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate registered inequalities");
  bounds->require_subcommand(1);
  std::string bound_id, at_s, range_s, param, trace_file;
  std::string step_s = "1";
  bool as_json = false;
  auto* eval = bounds->add_subcommand("eval", "Evaluate at one point");
  eval->add_option("id", bound_id)->required();
  eval->add_option("--at", at_s, "Point, e.g. k=8,n=10000")->required();
  eval->add_flag("--json", as_json, "Print the full margin as JSON");
  auto* scan_c = bounds->add_subcommand("scan", "Scan one parameter over a range");
  scan_c->add_option("id", bound_id)->required();
  scan_c->add_option("--range", range_s, "lo..hi")->required();
  scan_c->add_option("--step", step_s);
  scan_c->add_option("--param", param);
  scan_c->add_option("--at", at_s, "Fixed parameters");
  scan_c->add_option("--trace", trace_file, "Write the slack trace as CSV");
  auto* thr = bounds->add_subcommand("threshold", "Find the crossing point");
  thr->add_option("id", bound_id)->required();
  thr->add_option("--range", range_s, "lo..hi")->required();
  thr->add_option("--param", param);
  thr->add_option("--at", at_s, "Fixed parameters");
  auto* blist = bounds->add_subcommand("list", "Print the bound registry");

  // table
  auto* table = app.add_subcommand("table", "Print the count-bound comparison table as CSV");
  int table_k = 4;
  std::string n_list_s;
  table->add_option("--k", table_k)->required()->check(CLI::IsMember({4, 8}));
  table->add_option("--n-list", n_list_s, "Comma-separated n values")->required();
  table->add_flag("--json", as_json, "Print JSON with raw values");
  table->add_option("--out", out_file);

  // certify-all
  auto* certify = app.add_subcommand("certify-all", "Run every theorem driver and the threshold scans");
  bool long_jobs = false;
  std::string out_dir;
  certify->add_flag("--long-jobs", long_jobs, "Include the opt-in long jobs");
  certify->add_option("--out", out_dir, "Directory for certificates");

  // recheck
  auto* recheck_c = app.add_subcommand("recheck", "Re-test a certificate file");
  std::string cert_file;
  double fraction = 0.01;
  recheck_c->add_option("certificate", cert_file)->required()->check(CLI::ExistingFile);
  recheck_c->add_option("--fraction", fraction, "Witness sample fraction")->check(CLI::Range(1e-6, 1.0));

  // registry
  auto* registry = app.add_subcommand("registry", "Dump a registry as JSON");
  std::string which = "bounds";
  registry->add_option("which", which)->check(CLI::IsMember({"bounds", "analytic", "cases", "theorems"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kExitUsage;
  }

  const std::uint64_t limit_budget = budget_bytes ? budget_bytes * 16 : default_limit_budget();
  EvalContext ctx;
  ctx.sieve_budget = limit_budget;

  auto fail = [&](int code, const nlohmann::json& summary) {
    err << summary.dump() << '\n';
    return code;
  };

  try {
    if (verify->parsed()) {
      DriverOptions o;
      if (!from_s.empty()) o.from = parse_count(from_s);
      if (!to_s.empty()) o.to = parse_count(to_s);
      o.jobs = jobs;
      o.sieve_budget = limit_budget;
      o.long_job = long_job;
      o.checkpoint = checkpoint;
      if (long_job && checkpoint.empty()) o.checkpoint = theorem_id + ".checkpoint.json";
      const Certificate c = run_theorem(theorem_id, o);
      const std::string text = to_json(c).dump(1) + "\n";
      if (out_file.empty()) {
        out << text;
      } else {
        write_text(out_file, text);
        out << summary_line(c) << '\n';
      }
      if (c.status != Status::verified) return fail(kExitCheckFailed, failure_summary(c));
      return kExitPass;
    }

    if (bounds->parsed()) {
      if (blist->parsed()) {
        out << bound_registry_json().dump(1) << '\n';
        return kExitPass;
      }
      const Point fixed = at_s.empty() ? Point{} : parse_point(at_s);
      if (eval->parsed()) {
        const Margin m = evaluate(bound_id, fixed, ctx);
        if (as_json) {
          out << to_json(m).dump(1) << '\n';
        } else {
          out << m.bound_id << ' ' << format_point(m.point) << '\n';
          if (m.value != 0 || m.verdict == Verdict::not_applicable)
            out << "value " << one_decimal(m.value) << " (" << print_value(m.value) << ")\n";
          out << "slack " << print_value(m.slack) << '\n';
          out << "verdict " << to_string(m.verdict) << '\n';
        }
        if (m.verdict == Verdict::satisfied || m.verdict == Verdict::not_applicable) return kExitPass;
        return fail(kExitCheckFailed, {{"check", m.bound_id}, {"point", m.point}, {"verdict", to_string(m.verdict)},
                                       {"slack", number_json(m.slack)}});
      }
      const auto [lo, hi] = parse_range(range_s);
      if (param.empty()) {
        // first parameter that is neither fixed nor defaulted
        const BoundSpec& spec = bound_spec(bound_id);
        for (const auto& name : spec.params)
          if (!fixed.count(name) && !spec.defaults.count(name)) {
            param = name;
            break;
          }
        if (param.empty()) param = spec.params.front();
      }
      if (scan_c->parsed()) {
        ScanOptions so;
        so.step = parse_count(step_s);
        so.jobs = jobs;
        so.keep_trace = !trace_file.empty();
        const ScanResult r = scan(bound_id, param, lo, hi, fixed, so, ctx);
        if (!trace_file.empty()) write_text(trace_file, scan_trace_csv(r));
        out << to_json(r).dump(1) << '\n';
        if (r.all_satisfied()) return kExitPass;
        return fail(kExitCheckFailed, {{"check", r.bound_id}, {"violated", r.violated}, {"inconclusive", r.inconclusive},
                                       {"argmin", r.argmin}});
      }
      if (thr->parsed()) {
        out << to_json(threshold(bound_id, param, lo, hi, fixed, ctx)).dump(1) << '\n';
        return kExitPass;
      }
    }

    if (table->parsed()) {
      std::vector<std::int64_t> ns;
      std::stringstream ss(n_list_s);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) ns.push_back(parse_count(item));
      if (ns.empty()) throw DomainError("empty --n-list");
      std::int64_t top = 0;
      for (const auto n : ns) top = std::max(top, n);
      SieveOptions so;
      so.budget = limit_budget;
      so.jobs = jobs;
      const Sieve s(static_cast<std::uint64_t>((table_k + 1) * top), so);
      const auto rows = pnt_table(s, table_k, ns);
      const std::string text = as_json ? to_json(rows).dump(1) + "\n" : table_csv(rows);
      if (out_file.empty())
        out << text;
      else
        write_text(out_file, text);
      return kExitPass;
    }

    if (certify->parsed()) {
      if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
      nlohmann::json report;
      report["version"] = kToolkitVersion;
      bool all_ok = true;
      auto& theorems = report["theorems"] = nlohmann::json::array();
      for (const auto& d : theorem_drivers()) {
        DriverOptions o;
        o.jobs = jobs;
        o.sieve_budget = limit_budget;
        const Certificate c = run_theorem(d.id, o);
        const bool ok = driver_outcome_ok(d, c);
        all_ok = all_ok && ok;
        nlohmann::json e{{"id", d.id}, {"status", to_string(c.status)}, {"range", {c.lo, c.hi}},
                         {"failures", c.failures.size()}, {"outcome_ok", ok}, {"elapsed_ms", c.elapsed_ms}};
        if (d.finding) e["finding"] = *d.finding;
        theorems.push_back(e);
        if (!out_dir.empty()) write_text(out_dir + "/" + d.id + ".json", to_json(c).dump(1) + "\n");
        err << summary_line(c) << (ok ? "" : "  <-- unexpected") << '\n';
      }
      if (long_jobs) {
        DriverOptions o;
        o.jobs = jobs;
        o.sieve_budget = limit_budget;
        o.long_job = true;
        o.checkpoint = (out_dir.empty() ? std::string(".") : out_dir) + "/thm-2.4.2.checkpoint.json";
        const Certificate c = run_theorem("thm-2.4.2", o);
        const bool ok = c.status == Status::verified;
        all_ok = all_ok && ok;
        theorems.push_back({{"id", "thm-2.4.2 (full range)"}, {"status", to_string(c.status)}, {"range", {c.lo, c.hi}},
                            {"failures", c.failures.size()}, {"outcome_ok", ok}, {"elapsed_ms", c.elapsed_ms}});
        if (!out_dir.empty()) write_text(out_dir + "/thm-2.4.2-full.json", to_json(c).dump(1) + "\n");
      }
      // Each inequality from its stated base point over the next 10^4 integers.
      struct ScanJob {
        const char* id;
        Point fixed;
        std::int64_t base;
      };
      const ScanJob scans[] = {
          {"L2.1.1a", {}, 6818},          {"L2.1.2", {}, 6818},           {"L2.2.4", {{"m", 3}}, 10437},
          {"L2.2.4", {{"m", 5}}, 10437},  {"L2.2.4", {{"m", 7}}, 10437},  {"L2.2.5chain", {{"m", 3}}, 10437},
          {"L2.2.5chain", {{"m", 5}}, 10437}, {"L2.2.5chain", {{"m", 7}}, 10437}, {"L2.2.6", {}, 28327},
          {"L2.2.7a", {}, 93},            {"L2.2.7b", {}, 93},            {"L2.2.7c", {}, 93},
          {"L2.2.9", {}, 56833},
      };
      auto& scan_list = report["scans"] = nlohmann::json::array();
      for (const auto& job : scans) {
        ScanOptions so;
        so.jobs = jobs;
        const ScanResult r = scan(job.id, "n", job.base, job.base + 10'000, job.fixed, so, ctx);
        const bool ok = r.all_satisfied() && r.minimum.slack > 0;
        all_ok = all_ok && ok;
        scan_list.push_back({{"id", job.id}, {"fixed", job.fixed}, {"range", {job.base, job.base + 10'000}},
                             {"min_slack", r.minimum.slack}, {"argmin", r.argmin}, {"ok", ok}});
      }
      report["ok"] = all_ok;
      out << report.dump(1) << '\n';
      if (!all_ok) return fail(kExitCheckFailed, {{"check", "certify-all"}, {"ok", false}});
      return kExitPass;
    }

    if (recheck_c->parsed()) {
      std::ifstream in(cert_file);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("not JSON: ") + e.what());
      }
      const RecheckReport r = recheck(certificate_from_json(j), fraction);
      out << to_json(r).dump(1) << '\n';
      if (r.ok()) return kExitPass;
      return fail(kExitCheckFailed, {{"check", "recheck"}, {"problems", r.problems.size()}});
    }

    if (registry->parsed()) {
      nlohmann::json j;
      if (which == "bounds") j = bound_registry_json();
      if (which == "analytic") j = analytic_registry_json();
      if (which == "cases") j = {case_table_json(case_table(4)), case_table_json(case_table(8))};
      if (which == "theorems") {
        j = nlohmann::json::array();
        for (const auto& d : theorem_drivers()) {
          nlohmann::json e{{"id", d.id}, {"statement", d.statement}, {"range", {d.lo, d.hi}}};
          if (d.finding) e["finding"] = *d.finding;
          j.push_back(e);
        }
      }
      out << j.dump(1) << '\n';
      return kExitPass;
    }
  } catch (const UnknownIdError& e) {
    return fail(kExitUsage, {{"error", "unknown_id"}, {"message", e.what()}});
  } catch (const DomainError& e) {
    return fail(kExitUsage, {{"error", "domain"}, {"message", e.what()}});
  } catch (const CoverageError& e) {
    return fail(kExitResource, {{"error", "coverage"}, {"message", e.what()}});
  } catch (const ResourceError& e) {
    return fail(kExitResource, {{"error", "resource"}, {"message", e.what()}});
  } catch (const std::bad_alloc&) {
    return fail(kExitResource, {{"error", "resource"}, {"message", "out of memory"}});
  }
  return kExitUsage;
}

}  // namespace bertrand
