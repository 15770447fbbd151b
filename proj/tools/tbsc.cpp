// tbsc: construct, simulate and verify rate-optimal three-node burst
// streaming codes.
//
// Exit codes: 0 success, 1 usage error, 2 infeasible parameters,
// 3 verification failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbsc/constructions.hpp"
#include "tbsc/detail/parallel.hpp"
#include "tbsc/errors.hpp"
#include "tbsc/oracle.hpp"
#include "tbsc/relay.hpp"
#include "tbsc/report.hpp"

namespace fs = std::filesystem;
using namespace tbsc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerifyFailed = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Params {
  int b1 = 0;
  int b2 = 0;
  int T = 0;
  std::string spec_path;
  std::string out;
  std::string format = "text";
};

void add_param_flags(CLI::App* cmd, Params& p, bool allow_spec) {
  cmd->add_option("--b1", p.b1, "SR burst length");
  cmd->add_option("--b2", p.b2, "RD burst length");
  cmd->add_option("--T", p.T, "end-to-end delay");
  if (allow_spec) {
    cmd->add_option("--spec", p.spec_path, "load a spec manifest instead of --b1/--b2/--T");
  }
  cmd->add_option("--out", p.out, "output path (default directory: $TBSC_OUT_DIR)");
}

std::string default_out_dir() {
  const char* env = std::getenv("TBSC_OUT_DIR");
  return env ? env : "";
}

// Resolves a report file: explicit --out wins, else $TBSC_OUT_DIR/<name>, else none.
std::string report_path(const Params& p, const std::string& name) {
  if (!p.out.empty()) return p.out;
  auto dir = default_out_dir();
  return dir.empty() ? std::string{} : (fs::path(dir) / name).string();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RelayNetworkSpec load_or_build(const Params& p) {
  if (!p.spec_path.empty()) return spec_from_manifest(Json::parse(read_file(p.spec_path)));
  if (p.b1 < 1 || p.b2 < 1 || p.T < 1) throw UsageError("--b1, --b2 and --T are required");
  return build_tbsc(p.b1, p.b2, p.T);
}

// stdout follows --format; the report file is CSV for --format csv, JSON otherwise.
void emit(const Params& p, const std::string& name, const Json& doc, const std::string& text,
          const std::string& csv) {
  const std::string json = doc.dump(2) + "\n";
  std::cout << (p.format == "json" ? json : p.format == "csv" ? csv : text);
  auto path = report_path(p, p.format == "csv" ? name + ".csv" : name + ".json");
  if (!path.empty()) write_file(path, p.format == "csv" ? csv : json);
}

std::string csv_profile(const DelayProfile& d) {
  std::string out = d.to_string();
  std::replace(out.begin(), out.end(), ',', ';');
  return out;
}

std::vector<Time> parse_index_list(const std::string& text) {
  std::vector<Time> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw UsageError("bad erased index '" + item + "'");
    }
  }
  return out;
}

struct Range {
  int lo = 0;
  int hi = 0;
};

Range parse_range(const std::string& text) {
  try {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
      int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("bad range '" + text + "', expected N or LO..HI");
  }
}

std::string describe_spec(const RelayNetworkSpec& spec) {
  std::ostringstream s;
  s << "parameters: b1=" << spec.b1() << " b2=" << spec.b2() << " T=" << spec.T()
    << " k=" << spec.k() << " n=" << spec.sr().n() << "\n"
    << "rate: " << format_rational(spec.sr().rate()) << "\n"
    << "SR profile: " << spec.d_sr().to_string() << "\n"
    << "RD profile: " << spec.d_rd().to_string() << "\n"
    << "end-to-end: " << spec.predicted_end_to_end().to_string() << "\n";
  std::vector<int> lags;
  for (int i = 1; i <= spec.k(); ++i) lags.push_back(spec.lag(i));
  s << "relay lags: " << DelayProfile{lags}.to_string() << "\n";
  return s.str();
}

int cmd_construct(const Params& p) {
  RelayNetworkSpec spec = [&] {
    if (!p.spec_path.empty()) return load_or_build(p);
    auto rep = feasibility(p.b1, p.b2, p.T);
    std::cout << "path: " << to_string(rep.path) << "\n"
              << "feasible: " << (rep.feasible ? "yes" : "no") << " [" << rep.constraint() << "]\n"
              << "sufficient condition: " << (rep.sufficient ? "yes" : "no") << "\n"
              << "prior-work divisibility: " << (rep.prior_work ? "yes" : "no") << "\n";
    return build_tbsc(p.b1, p.b2, p.T);
  }();
  std::cout << describe_spec(spec);

  std::string dir = p.out.empty() ? default_out_dir() : p.out;
  if (!dir.empty()) {
    write_file(fs::path(dir) / "spec.json", manifest(spec).dump(2) + "\n");
    for (const auto& [hop, code] : {std::pair{"sr", &spec.sr()}, std::pair{"rd", &spec.rd()}}) {
      for (int i : code->nonzero_parity_indices()) {
        write_file(fs::path(dir) / (std::string(hop) + "_P" + std::to_string(i) + ".txt"),
                   code->parity(i).to_text());
      }
    }
    std::cout << "wrote " << (fs::path(dir) / "spec.json").string() << "\n";
  }
  return kExitOk;
}

std::string verification_text(const VerificationReport& rep) {
  std::ostringstream s;
  s << "mode: " << to_string(rep.mode) << " horizon=" << rep.horizon << " seed=" << rep.seed
    << "\n"
    << "pairs checked: " << rep.pairs_checked << "\n"
    << "max delay: " << rep.max_delay.to_string() << " (deadline " << rep.T << ")\n";
  if (rep.failure) {
    s << "failure: " << rep.failure->reason << "\n"
      << "  SR erased: " << to_json(rep.failure->sr).dump() << "\n"
      << "  RD erased: " << to_json(rep.failure->rd).dump() << "\n";
  }
  s << (rep.pass ? "PASS" : "FAIL") << "\n";
  return s.str();
}

int cmd_verify(const Params& p, bool exhaustive, std::size_t budget, std::uint64_t seed,
               Time horizon) {
  auto spec = load_or_build(p);
  VerifyOptions opt;
  opt.mode = exhaustive ? VerifyMode::kExhaustive : VerifyMode::kRandomized;
  opt.budget = budget;
  opt.seed = seed;
  opt.horizon = horizon;
  auto rep = verify_tbsc(spec, opt);
  std::ostringstream csv;
  csv << "b1,b2,T,mode,horizon,seed,pairs_checked,max_delay,pass\n"
      << rep.b1 << "," << rep.b2 << "," << rep.T << "," << to_string(rep.mode) << ","
      << rep.horizon << "," << rep.seed << "," << rep.pairs_checked << ","
      << csv_profile(rep.max_delay) << "," << (rep.pass ? 1 : 0) << "\n";
  emit(p, "verify", envelope("verify", to_json(rep)), verification_text(rep), csv.str());
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_simulate(const Params& p, const std::string& sr_erase, const std::string& rd_erase,
                 const std::string& schedules_path, std::uint64_t seed, Time horizon,
                 bool trace) {
  auto spec = load_or_build(p);
  std::vector<Time> sr = parse_index_list(sr_erase);
  std::vector<Time> rd = parse_index_list(rd_erase);
  if (!schedules_path.empty()) {
    auto doc = Json::parse(read_file(schedules_path));
    sr = doc.value("sr", std::vector<Time>{});
    rd = doc.value("rd", std::vector<Time>{});
  }
  SimulationReport rep;
  try {
    rep = simulate_network(spec, sr_schedule(spec, sr), rd_schedule(spec, rd), horizon, seed,
                           trace);
  } catch (const InvalidParameters& e) {
    throw UsageError(e.what());
  }
  std::ostringstream s;
  for (const auto& line : rep.trace) s << line << "\n";
  s << "horizon: " << rep.horizon << " (delays accounted for source times < " << rep.accounted
    << ")\n"
    << "max delay: " << rep.max_delay.to_string() << " (deadline " << spec.T() << ")\n";
  if (!rep.success) s << "failure: " << rep.failure << "\n";
  s << (rep.success ? "PASS" : "FAIL") << "\n";
  std::ostringstream csv;
  csv << "source_time,coord,relay_recovered_at,destination_recovered_at\n";
  for (std::size_t t = 0; t < rep.relay_recovery.size(); ++t) {
    for (std::size_t j = 0; j < rep.relay_recovery[t].size(); ++j) {
      const auto& r = rep.relay_recovery[t][j];
      const auto& d = rep.destination_recovery[t][j];
      csv << t << "," << j + 1 << "," << (r ? std::to_string(*r) : "") << ","
          << (d ? std::to_string(*d) : "") << "\n";
    }
  }
  emit(p, "simulate", envelope("simulate", to_json(rep)), s.str(), csv.str());
  return rep.success ? kExitOk : kExitVerifyFailed;
}

struct SweepRow {
  FeasibilityReport feasibility;
  std::string check;  // pass | fail | skipped
  std::string max_delay;
};

int cmd_sweep(const Params& p, const std::string& b1_text, const std::string& b2_text,
              const std::string& t_text, bool check) {
  const auto b1r = parse_range(b1_text);
  const auto b2r = parse_range(b2_text);
  const auto tr = parse_range(t_text);
  std::vector<std::tuple<int, int, int>> grid;
  for (int b1 = b1r.lo; b1 <= b1r.hi; ++b1) {
    for (int b2 = b2r.lo; b2 <= b2r.hi; ++b2) {
      for (int T = tr.lo; T <= tr.hi; ++T) {
        if (b1 >= 1 && b2 >= 1 && T >= b1 + b2) grid.emplace_back(b1, b2, T);
      }
    }
  }

  std::vector<SweepRow> rows(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    auto [b1, b2, T] = grid[i];
    SweepRow row{feasibility(b1, b2, T), "skipped", ""};
    if (row.feasibility.feasible && check) {
      try {
        auto worst = worst_case_delays(build_tbsc(b1, b2, T));
        row.check = "pass";
        row.max_delay = std::to_string(worst.max());
      } catch (const ConstructionInvalid&) {
        row.check = "fail";
      }
    }
    rows[i] = std::move(row);
  });

  bool failed = false;
  std::ostringstream csv;
  csv << "b1,b2,T,feasible,sufficient,prior_work,path,rate,check,max_delay\n";
  Json doc = Json::array();
  for (const auto& row : rows) {
    const auto& f = row.feasibility;
    failed = failed || row.check == "fail";
    csv << f.b1 << "," << f.b2 << "," << f.T << "," << f.feasible << "," << f.sufficient << ","
        << f.prior_work << "," << to_string(f.path) << "," << format_rational(f.optimal_rate)
        << "," << row.check << "," << row.max_delay << "\n";
    Json entry = to_json(f);
    entry["check"] = row.check;
    doc.push_back(std::move(entry));
  }

  const bool as_json = p.format == "json";
  const std::string body = as_json ? envelope("sweep", {{"rows", doc}}).dump(2) + "\n" : csv.str();
  std::cout << body;
  auto path = report_path(p, as_json ? "sweep.json" : "sweep.csv");
  if (!path.empty()) write_file(path, body);
  return failed ? kExitVerifyFailed : kExitOk;
}

// Hard-coded (2,3,7) instance with every value it is known to produce.
int cmd_example() {
  int mismatches = 0;
  auto expect = [&](const std::string& what, const std::string& got, const std::string& want) {
    const bool ok = got == want;
    mismatches += ok ? 0 : 1;
    std::cout << (ok ? "ok       " : "MISMATCH ") << what << ": " << got;
    if (!ok) std::cout << " (expected " << want << ")";
    std::cout << "\n";
  };
  auto spec = build_tbsc(2, 3, 7);
  auto nonzero = [](const StreamCodeSpec& c) {
    std::vector<int> idx = c.nonzero_parity_indices();
    return DelayProfile{idx}.to_string();
  };
  expect("rate", format_rational(spec.sr().rate()), "5/8");
  expect("rate bound", format_rational(rate_bound(2, 3, 7)), "5/8");
  expect("SR nonzero parity", nonzero(spec.sr()), "2,4");
  expect("SR P_2", to_json(spec.sr().parity(2)).dump(), R"(["100","010","001","000","000"])");
  expect("SR P_4", to_json(spec.sr().parity(4)).dump(), R"(["000","000","000","100","010"])");
  expect("RD nonzero parity", nonzero(spec.rd()), "1,2,3,5");
  expect("RD P'_1", to_json(spec.rd().parity(1)).dump(), R"(["001","000","000","000","000"])");
  expect("RD P'_2", to_json(spec.rd().parity(2)).dump(), R"(["000","001","000","000","000"])");
  expect("RD P'_3", to_json(spec.rd().parity(3)).dump(), R"(["100","010","000","000","000"])");
  expect("RD P'_5", to_json(spec.rd().parity(5)).dump(), R"(["000","000","100","010","001"])");
  expect("SR profile (predicted)", spec.d_sr().to_string(), "2,2,2,4,4");
  expect("SR profile (measured)", measure_delay_profile(spec.sr()).to_string(), "2,2,2,4,4");
  expect("SR profile (oracle)", oracle_recovery_times(spec.sr()).to_string(), "2,2,2,4,4");
  expect("RD profile (predicted)", spec.d_rd().to_string(), "3,3,5,5,5");
  expect("RD profile (measured)", measure_delay_profile(spec.rd()).to_string(), "3,3,5,5,5");
  expect("RD profile (oracle)", oracle_recovery_times(spec.rd()).to_string(), "3,3,5,5,5");
  expect("end-to-end worst case", worst_case_delays(spec).to_string(), "7,7,7,7,7");
  std::cout << (mismatches == 0 ? "PASS" : "FAIL") << "\n";
  return mismatches == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-optimal streaming codes over three-node relay networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  Params p;
  bool exhaustive = false;
  std::size_t budget = 1000;
  std::uint64_t seed = 1;
  Time horizon = 0;
  std::string sr_erase;
  std::string rd_erase;
  std::string schedules_path;
  bool trace = false;
  std::string b1_range = "1..4";
  std::string b2_range = "1..4";
  std::string t_range = "2..14";
  bool no_check = false;
  const std::vector<std::string> formats = {"json", "csv", "text"};

  auto* construct = app.add_subcommand("construct", "build a code and dump its matrices");
  add_param_flags(construct, p, true);

  auto* verify = app.add_subcommand("verify", "verify a code against all or sampled schedules");
  add_param_flags(verify, p, true);
  verify->add_flag("--exhaustive", exhaustive, "enumerate every admissible schedule pair");
  verify->add_option("--budget", budget, "randomized schedule pairs");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--horizon", horizon, "simulated packets");
  verify->add_option("--format", p.format, "output format")->check(CLI::IsMember(formats));

  auto* simulate = app.add_subcommand("simulate", "run one pair of erasure schedules");
  add_param_flags(simulate, p, true);
  simulate->add_option("--sr-erase", sr_erase, "erased SR packet times, comma separated");
  simulate->add_option("--rd-erase", rd_erase, "erased RD packet times, comma separated");
  simulate->add_option("--schedules", schedules_path, "JSON file {\"sr\": [...], \"rd\": [...]}");
  simulate->add_option("--seed", seed, "random seed for the source stream");
  simulate->add_option("--horizon", horizon, "simulated packets");
  simulate->add_flag("--trace", trace, "print per-packet trace");
  simulate->add_option("--format", p.format, "output format")->check(CLI::IsMember(formats));

  auto* sweep = app.add_subcommand("sweep", "tabulate feasibility over a parameter grid");
  sweep->add_option("--b1", b1_range, "N or LO..HI");
  sweep->add_option("--b2", b2_range, "N or LO..HI");
  sweep->add_option("--T", t_range, "N or LO..HI");
  sweep->add_flag("--no-check", no_check, "skip the single-burst simulation check");
  sweep->add_option("--out", p.out, "output file (default directory: $TBSC_OUT_DIR)");
  sweep->add_option("--format", p.format, "output format")->check(CLI::IsMember(formats));

  auto* example = app.add_subcommand("example", "reproduce the (2,3,7) worked example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (sweep->parsed() && p.format == "text") p.format = "csv";

  try {
    if (construct->parsed()) return cmd_construct(p);
    if (verify->parsed()) return cmd_verify(p, exhaustive, budget, seed, horizon);
    if (simulate->parsed()) {
      return cmd_simulate(p, sr_erase, rd_erase, schedules_path, seed, horizon, trace);
    }
    if (sweep->parsed()) return cmd_sweep(p, b1_range, b2_range, t_range, !no_check);
    if (example->parsed()) return cmd_example();
  } catch (const InfeasibleParameters& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidParameters& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
