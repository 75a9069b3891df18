#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bbmsel/bbbm.hpp"
#include "bbmsel/checkpoint.hpp"
#include "bbmsel/coupling.hpp"
#include "bbmsel/errors.hpp"
#include "bbmsel/kernels.hpp"
#include "bbmsel/killed.hpp"
#include "bbmsel/levy.hpp"
#include "bbmsel/parallel.hpp"
#include "bbmsel/rng.hpp"
#include "bbmsel/selection.hpp"
#include "bbmsel/stats.hpp"
#include "config_io.hpp"
#include "manifest.hpp"

namespace bbmsel::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct File {
  std::string name;
  std::string bytes;
};

struct ReplicaOutput {
  std::vector<File> files;
  std::string summary;
};

std::string header(const std::string& hash) { return "# manifest_sha256=" + hash + "\n"; }

std::string fr(double v) { return format_real(v); }

std::string series_bytes(const StatsSeries& s, const std::string& hash) {
  std::ostringstream os;
  write_series_csv(os, s, hash);
  return os.str();
}

std::string summary_header(Mode m) {
  switch (m) {
    case Mode::Killed: return "replica,N0,Z0,Y0,count_T,Z_T,R_T";
    case Mode::Nbbm: return "replica,kills,branchings,count_T";
    case Mode::Coupled: return "replica,events,checks,rewires";
    default: return "replica,N_reference,hits_a,trials,breakouts,pieces,absorbed,red_killed,blue_killed,blue_pruned,count_T";
  }
}

BarrierVariant variant(Mode m) {
  switch (m) {
    case Mode::Bflat: return BarrierVariant::Flat;
    case Mode::Bsharp: return BarrierVariant::Sharp;
    case Mode::Csharp: return BarrierVariant::CSharp;
    default: return BarrierVariant::Plain;
  }
}

ReplicaOutput run_replica(const ExperimentManifest& m, std::uint32_t r, const std::string& hash) {
  const SimConfig& cfg = m.cfg;
  ReplicaOutput out;
  const std::string id = std::to_string(r);
  switch (m.mode) {
    case Mode::Killed: {
      KilledOptions ko;
      ko.keep_events = m.events;
      const auto res = run_killed(cfg, r, ko);
      out.files.push_back({"series_" + id + ".csv", series_bytes(res.series, hash)});
      if (m.events) {
        std::ostringstream os;
        write_event_log(os, res.events, hash);
        out.files.push_back({"events_" + id + ".log", os.str()});
      }
      const auto& last = res.series.rows.back();
      out.summary = id + "," + std::to_string(res.N0) + "," + fr(res.Z0) + "," + fr(res.Y0) + "," + fr(last.count) +
                    "," + fr(last.Z) + "," + fr(last.R_cum);
      break;
    }
    case Mode::Nbbm: {
      const auto timing =
          m.timing == "branch-events" ? selection::Timing::BranchEvents : selection::Timing::StepEnd;
      const auto res = selection::run_nbbm(cfg, r, timing);
      out.files.push_back({"series_" + id + ".csv", series_bytes(res.series, hash)});
      if (m.checkpoint) {
        std::ostringstream os;
        save_checkpoint(os, res.final_population, hash);
        out.files.push_back({"checkpoint_" + id + ".txt", os.str()});
      }
      out.summary = id + "," + std::to_string(res.kills) + "," + std::to_string(res.branchings) + "," +
                    std::to_string(res.final_population.size());
      break;
    }
    case Mode::Coupled: {
      const auto res = run_coupled(cfg, r);
      out.files.push_back({"series_plus_" + id + ".csv", series_bytes(res.plus, hash)});
      out.files.push_back({"series_middle_" + id + ".csv", series_bytes(res.middle, hash)});
      out.files.push_back({"series_minus_" + id + ".csv", series_bytes(res.minus, hash)});
      std::string rw = header(hash) + "time,level,rewired,old_partner,new_partner,old_partner_x,new_partner_x\n";
      for (const auto& w : res.rewires)
        rw += fr(w.time) + "," + (w.level == CouplingLevel::Middle ? "middle" : "minus") + "," +
              w.rewired.to_string() + "," + w.old_partner.to_string() + "," + w.new_partner.to_string() + "," +
              fr(w.old_partner_x) + "," + fr(w.new_partner_x) + "\n";
      out.files.push_back({"rewires_" + id + ".csv", rw});
      out.summary = id + "," + std::to_string(res.events) + "," + std::to_string(res.checks) + "," +
                    std::to_string(res.rewire_count);
      break;
    }
    default: {
      const auto res = run_barrier(cfg, variant(m.mode), r);
      out.files.push_back({"series_" + id + ".csv", series_bytes(res.series, hash)});
      std::string tr = header(hash) + "tau,Z,Y,stopped,sigma_max,sigma_exceeded,breakout,eligible\n";
      std::size_t breakouts = 0;
      for (const auto& t : res.trials) {
        breakouts += t.breakout;
        tr += fr(t.tau) + "," + fr(t.Z) + "," + fr(t.Y) + "," + std::to_string(t.stopped) + "," + fr(t.sigma_max) +
              "," + std::to_string(t.sigma_exceeded) + "," + std::to_string(t.breakout) + "," +
              std::to_string(t.eligible) + "\n";
      }
      out.files.push_back({"trials_" + id + ".csv", tr});
      std::string bp = header(hash) +
                       "start,base,has_breakout,T,T_plus,Delta,delta_rejected,closed,Theta,Z_Theta_scaled,in_between\n";
      for (const auto& p : res.barrier.pieces())
        bp += fr(p.start) + "," + fr(p.base) + "," + std::to_string(p.has_breakout) + "," + fr(p.T) + "," +
              fr(p.T_plus) + "," + fr(p.Delta) + "," + std::to_string(p.delta_rejected) + "," +
              std::to_string(p.closed) + "," + fr(p.Theta) + "," + fr(p.Z_Theta_scaled) + "," +
              std::to_string(p.in_between) + "\n";
      out.files.push_back({"barrier_" + id + ".csv", bp});
      out.summary = id + "," + std::to_string(res.N_reference) + "," + std::to_string(res.hits_a) + "," +
                    std::to_string(res.trials.size()) + "," + std::to_string(breakouts) + "," +
                    std::to_string(res.barrier.pieces().size()) + "," + std::to_string(res.absorbed) + "," +
                    std::to_string(res.red_killed) + "," + std::to_string(res.blue_killed) + "," +
                    std::to_string(res.blue_pruned) + "," + std::to_string(res.final_population.size());
      break;
    }
  }
  return out;
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream os(p, std::ios::binary);
  os << bytes;
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DomainError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int cmd_simulate(const RunOptions& opt, bool coupled_only) {
  ExperimentManifest m;
  std::vector<std::string> warnings;
  if (!opt.manifest.empty()) {
    m = read_manifest(opt.manifest);
    if (!opt.mode.empty()) m.mode = parse_mode(opt.mode);
  } else {
    if (opt.config.empty()) throw DomainError("--config or --manifest is required");
    auto pc = parse_config(opt.config, coupled_only ? "coupled" : opt.mode);
    m.cfg = std::move(pc.cfg);
    m.mode = pc.mode;
    m.created_utc = utc_now();
  }
  if (coupled_only) m.mode = Mode::Coupled;
  if (opt.replicas) m.cfg.replicas = *opt.replicas;
  if (opt.seed) m.cfg.seed = *opt.seed;
  if (opt.inject_fault_at) m.cfg.inject_fault_at = *opt.inject_fault_at;
  if (!opt.timing.empty()) m.timing = opt.timing;
  if (opt.events) m.events = true;
  if (opt.checkpoint) m.checkpoint = true;
  if (m.timing != "step-end" && m.timing != "branch-events")
    throw DomainError("--timing: expected step-end or branch-events");
  m.code_version = code_version();
  warnings = validate(m.cfg, m.mode);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  if (opt.out.empty()) throw DomainError("--out is required");

  const fs::path dir(opt.out);
  fs::create_directories(dir);
  const std::string hash = m.content_hash();
  const unsigned threads = opt.threads ? opt.threads : default_threads();
  m.outputs.clear();
  std::string summary = header(hash) + summary_header(m.mode) + "\n";

  // Workers fill a batch; this thread alone writes it out, in replica order.
  const std::size_t batch = std::max<std::size_t>(16, 4 * static_cast<std::size_t>(threads));
  for (std::size_t first = 0; first < m.cfg.replicas; first += batch) {
    const std::size_t n = std::min(batch, m.cfg.replicas - first);
    const auto outs = parallel_map(
        n,
        [&](std::size_t i) { return run_replica(m, static_cast<std::uint32_t>(first + i), hash); },
        threads);
    for (const auto& o : outs) {
      for (const auto& f : o.files) {
        write_file(dir / f.name, f.bytes);
        m.outputs.push_back(f.name);
      }
      summary += o.summary + "\n";
    }
  }
  write_file(dir / "summary.csv", summary);
  m.outputs.push_back("summary.csv");
  write_file(dir / "manifest.json", serialize(m));
  std::cout << "mode " << to_string(m.mode) << ", " << m.cfg.replicas << " replicas, manifest " << hash << "\n";
  return 0;
}

int cmd_selfcheck(const std::string& out) {
  const auto rep = kernels::run_selfcheck();
  json j;
  j["pass"] = rep.pass();
  j["seconds"] = rep.seconds;
  for (const auto& it : rep.items) {
    std::printf("%-30s worst %-11.3g tol %-9.3g %s\n", it.name.c_str(), it.worst, it.tolerance, it.pass ? "ok" : "FAIL");
    j["items"].push_back({{"name", it.name}, {"worst", it.worst}, {"tolerance", it.tolerance}, {"pass", it.pass}});
  }
  std::printf("%s in %.3f s\n", rep.pass() ? "all checks passed" : "self-check FAILED", rep.seconds);
  if (!out.empty()) {
    fs::create_directories(out);
    write_file(fs::path(out) / "selfcheck.json", j.dump(2) + "\n");
  }
  return rep.pass() ? 0 : 1;
}

int cmd_levy(const LevyOptions& opt) {
  levy::LevyParams lp;
  lp.c = opt.c;
  lp.jump_truncation = opt.truncation;
  lp.gaussian_small_jumps = opt.gaussian_small_jumps;
  const levy::LevySampler sampler(lp);
  if (!(opt.t > 0)) throw DomainError("--t: must be > 0");
  const auto xs = parallel_map(
      opt.samples,
      [&](std::size_t i) {
        Rng rng = rng_stream(opt.seed, static_cast<std::uint32_t>(i), lanes::levy);
        return sampler.sample(opt.t, rng);
      },
      opt.threads ? opt.threads : default_threads());
  if (!opt.out.empty()) {
    std::string csv = "replica,t,value,seed\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
      csv += std::to_string(i) + "," + fr(opt.t) + "," + fr(xs[i]) + "," + std::to_string(opt.seed) + "\n";
    fs::create_directories(opt.out);
    write_file(fs::path(opt.out) / "levy.csv", csv);
  }
  if (xs.size() >= 200) {
    const auto cmp = stats::increment_vs_levy(xs, opt.t, opt.lambdas, lp, false);
    std::printf("%8s %24s %24s %10s %10s\n", "lambda", "empirical", "exp(t kappa)", "|diff|", "se");
    for (std::size_t i = 0; i < opt.lambdas.size(); ++i)
      std::printf("%8.3f %11.6f%+11.6fi %11.6f%+11.6fi %10.3g %10.3g\n", opt.lambdas[i], cmp.empirical[i].real(),
                  cmp.empirical[i].imag(), cmp.model[i].real(), cmp.model[i].imag(), cmp.deviation[i], cmp.se[i]);
    std::printf("within 3 se: %s\n", cmp.pass ? "yes" : "no");
  }
  return 0;
}

int cmd_report(const std::string& dir_name, double burn_in_fraction) {
  const fs::path dir(dir_name);
  const auto m = read_manifest((dir / "manifest.json").string());
  const std::string hash = m.content_hash();
  const std::string expect = header(hash);
  std::vector<std::string> groups;
  if (m.mode == Mode::Coupled) {
    groups = {"series_plus_", "series_middle_", "series_minus_"};
  } else {
    groups = {"series_"};
  }
  json rep;
  rep["manifest_sha256"] = hash;
  rep["mode"] = to_string(m.mode);
  rep["replicas"] = m.cfg.replicas;
  for (const auto& g : groups) {
    std::vector<StatsSeries> runs;
    for (std::size_t r = 0; r < m.cfg.replicas; ++r) {
      const std::string bytes = slurp(dir / (g + std::to_string(r) + ".csv"));
      if (bytes.rfind(expect, 0) != 0) throw DomainError(g + std::to_string(r) + ".csv: manifest hash mismatch");
      std::istringstream is(bytes);
      runs.push_back(read_series_csv(is));
    }
    json block;
    const double burn = burn_in_fraction * m.cfg.horizon;
    std::vector<double> final_count;
    for (const auto& s : runs) final_count.push_back(s.rows.back().count);
    const auto fc = stats::mean_se(final_count);
    block["final_count"] = {{"mean", fc.mean}, {"se", fc.se}};
    for (std::size_t j = 0; m.mode != Mode::Killed && j < m.cfg.alphas.size(); ++j) {
      try {
        const auto sp = stats::speed_estimate(runs, j, burn);
        block["speed"].push_back({{"alpha", m.cfg.alphas[j]}, {"slope", sp.slope}, {"se", sp.se}});
      } catch (const DomainError& e) {
        block["speed"].push_back({{"alpha", m.cfg.alphas[j]}, {"error", e.what()}});
      }
    }
    if (m.mode == Mode::Killed && runs.size() >= 30) {
      std::vector<double> z0, zt;
      for (const auto& s : runs) {
        z0.push_back(s.rows.front().Z);
        zt.push_back(s.rows.back().Z);
      }
      const auto v = stats::oracle_Z(z0, zt);
      block["Z_ratio"] = {{"mean", v.estimate}, {"se", v.se}, {"within_3se_of_1", v.pass}};
    }
    rep[g == "series_" ? "series" : g.substr(7, g.size() - 8)] = block;
  }
  const std::string text = rep.dump(2) + "\n";
  write_file(dir / "report.json", text);
  std::cout << text;
  return 0;
}

int cmd_calibrate() {
  json j;
  j["C_R"] = stats::calibrate_R_constant();
  j["C_N"] = stats::calibrate_N_constant();
  std::cout << j.dump(2) << "\n";
  return 0;
}

int report_error(const std::exception& e, const std::string& out) {
  std::string kind = "error";
  int code = 1;
  if (dynamic_cast<const DomainError*>(&e)) {
    kind = "domain_error";
    code = 2;
  } else if (dynamic_cast<const NumericError*>(&e)) {
    kind = "numeric_error";
    code = 3;
  } else if (dynamic_cast<const CouplingViolation*>(&e)) {
    kind = "coupling_violation";
    code = 4;
  } else if (dynamic_cast<const ResourceError*>(&e)) {
    kind = "resource_error";
    code = 5;
  }
  const json rec = {{"error", kind}, {"message", e.what()}, {"exit_code", code}};
  std::cerr << rec.dump() << "\n";
  if (!out.empty()) {
    std::error_code ec;
    fs::create_directories(out, ec);
    std::ofstream os(fs::path(out) / "error.json");
    os << rec.dump(2) << "\n";
  }
  return code;
}

}  // namespace bbmsel::cli
