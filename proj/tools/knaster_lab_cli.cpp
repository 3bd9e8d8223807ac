// knaster-lab: command line front end over the knaster_lab C API.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "knaster_lab.h"

namespace {

using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int code;
  std::string message;
};

int exit_for(kl_status s) {
  switch (s) {
    case KL_ERR_VERIFICATION_FAILED:
    case KL_ERR_NO_WITNESS:
    case KL_ERR_ITERATION_CAP:
    case KL_ERR_INTERNAL:
      return kExitFail;
    default:
      return kExitUsage;
  }
}

void check(kl_status s) {
  if (s != KL_OK) throw CliError{exit_for(s), std::string(kl_status_name(s)) + ": " + kl_last_error()};
}

struct MapDeleter {
  void operator()(kl_map* m) const { kl_map_free(m); }
};
using Map = std::unique_ptr<kl_map, MapDeleter>;

struct PrimesDeleter {
  void operator()(kl_primes* p) const { kl_primes_free(p); }
};
using Primes = std::unique_ptr<kl_primes, PrimesDeleter>;

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  kl_string_free(s);
  return out;
}

// An argument is inline JSON when it starts with '{', '[' or '"'; otherwise a file path.
std::string load(const std::string& arg) {
  std::size_t i = 0;
  while (i < arg.size() && std::isspace(static_cast<unsigned char>(arg[i]))) ++i;
  if (i < arg.size() && (arg[i] == '{' || arg[i] == '[' || arg[i] == '"')) return arg;
  std::ifstream in(arg);
  if (!in) throw CliError{kExitUsage, "cannot read '" + arg + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Map load_map(const std::string& arg) {
  kl_map* m = nullptr;
  check(kl_map_from_json(load(arg).c_str(), &m));
  return Map(m);
}

Primes load_primes(const std::string& spec) {
  kl_primes* p = nullptr;
  check(kl_primes_create(spec.c_str(), &p));
  return Primes(p);
}

void print_map(const kl_map* m) {
  char* s = nullptr;
  check(kl_map_to_json(m, &s));
  std::cout << take(s) << "\n";
}

void print_json(char* s) { std::cout << take(s) << "\n"; }

void write_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path);
  if (!out) throw CliError{kExitUsage, "cannot write '" + path + "'"};
  out << text;
  if (text.empty() || text.back() != '\n') out << "\n";
}

json param_value(const std::string& text) {
  json list = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    bool digits = !item.empty();
    for (char c : item) digits = digits && std::isdigit(static_cast<unsigned char>(c));
    if (digits) {
      list.push_back(std::stoull(item));
    } else {
      list.push_back(item);
    }
  }
  return list.size() == 1 ? list[0] : list;
}

// Campaign flags; each named flag mirrors a config field or suite parameter.
struct CampaignFlags {
  std::string config_path;
  std::string primes;
  std::string output;
  std::string replay_dir = ".";
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t replay_seed = 0;
  unsigned jobs = 0;
  bool json_out = false;
  std::map<std::string, std::string> named;
  std::vector<std::string> extra;
};

const std::vector<std::pair<std::string, std::string>> kParamFlags = {
    {"--d-max", "d_max"},       {"--max-breakpoints", "max_breakpoints"},
    {"--degree-max", "degree_max"}, {"--extra", "extra"},
    {"--delta", "delta"},       {"--d", "d"},
    {"--eps", "eps"},           {"--eta", "eta"},
    {"--mode", "mode"},         {"--m", "m"},
    {"--n-min", "n_min"},       {"--n-max", "n_max"},
    {"--max-depth", "max_depth"}, {"--j", "j"},
    {"--extra-max", "extra_max"}, {"--gap-max", "gap_max"},
    {"--k-min", "k_min"},       {"--k-max", "k_max"},
};

void add_campaign_flags(CLI::App* app, CampaignFlags& f) {
  app->add_option("--config", f.config_path, "experiment config (file or inline JSON)");
  app->add_option("--trials", f.trials, "number of trials");
  app->add_option("--seed", f.seed, "campaign seed");
  app->add_option("--primes", f.primes, "all2, diagonal or a comma separated prime list");
  app->add_option("--output", f.output, "write the JSON report here");
  app->add_option("--jobs", f.jobs, "worker threads");
  app->add_option("--replay-dir", f.replay_dir, "directory for replay files of failed trials");
  app->add_option("--replay-seed", f.replay_seed, "run a single trial with this trial seed");
  app->add_flag("--json", f.json_out, "print the JSON report instead of the table");
  for (const auto& [flag, key] : kParamFlags) {
    app->add_option(flag, f.named[key], "suite parameter " + key);
  }
  app->add_option("--param", f.extra, "suite parameter key=value (repeatable)");
}

json campaign_config(const std::string& suite, CLI::App* app, const CampaignFlags& f) {
  json cfg = json::object();
  if (!f.config_path.empty()) {
    try {
      cfg = json::parse(load(f.config_path));
    } catch (const json::exception& e) {
      throw CliError{kExitUsage, std::string("bad config: ") + e.what()};
    }
    if (!cfg.is_object()) throw CliError{kExitUsage, "config must be a JSON object"};
    if (cfg.contains("suite") && cfg["suite"] != suite) {
      throw CliError{kExitUsage, "config is for suite '" + cfg["suite"].get<std::string>() + "'"};
    }
  }
  cfg["suite"] = suite;
  if (app->count("--trials")) cfg["trials"] = f.trials;
  if (app->count("--seed")) cfg["seed"] = f.seed;
  if (app->count("--primes")) cfg["primes"] = f.primes;
  if (app->count("--output")) cfg["output"] = f.output;
  if (app->count("--jobs")) cfg["jobs"] = f.jobs;
  if (app->count("--replay-seed")) cfg["replay_trial_seed"] = f.replay_seed;
  if (!cfg.contains("params")) cfg["params"] = json::object();
  for (const auto& [flag, key] : kParamFlags) {
    if (app->count(flag)) cfg["params"][key] = param_value(f.named.at(key));
  }
  for (const auto& kv : f.extra) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw CliError{kExitUsage, "--param expects key=value"};
    cfg["params"][kv.substr(0, eq)] = param_value(kv.substr(eq + 1));
  }
  return cfg;
}

int run_campaign(const std::string& command, const json& cfg, const CampaignFlags& f) {
  char* report_s = nullptr;
  char* table_s = nullptr;
  int ok = 0;
  check(kl_run_suite(cfg.dump().c_str(), &report_s, &table_s, &ok));
  const std::string report_text = take(report_s);
  const std::string table = take(table_s);
  const json report = json::parse(report_text);

  if (f.json_out) {
    std::cout << report_text << "\n";
  } else {
    std::cout << table;
  }
  const std::string output = cfg.value("output", std::string());
  if (!output.empty()) write_file(output, report_text);

  if (report.contains("replays")) {
    for (const auto& r : report["replays"]) {
      const std::string name = "replay-" + cfg["suite"].get<std::string>() + "-" +
                               std::to_string(r["index"].get<std::uint64_t>()) + ".json";
      const std::string path = (std::filesystem::path(f.replay_dir) / name).string();
      write_file(path, r["config"].dump(2));
      std::cerr << "replay: knaster-lab " << command << " --config " << path << "\n";
    }
  }
  return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact PL interval maps, tent algebra and Knaster continuum checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kl_version()));
  int status = 0;

  // pl
  auto* pl = app.add_subcommand("pl", "piecewise-linear maps of [0,1]");
  pl->require_subcommand(1);
  std::string f_arg, g_arg, h_arg, x_arg, ref_arg;
  std::uint64_t d = 0;

  auto* pl_eval = pl->add_subcommand("eval", "evaluate f at x");
  pl_eval->add_option("-f,--f", f_arg, "map")->required();
  pl_eval->add_option("-x,--x", x_arg, "point p/q")->required();
  pl_eval->callback([&] {
    auto f = load_map(f_arg);
    char* s = nullptr;
    check(kl_map_eval(f.get(), x_arg.c_str(), &s));
    std::cout << take(s) << "\n";
  });

  auto* pl_compose = pl->add_subcommand("compose", "f o g");
  pl_compose->add_option("-f,--f", f_arg, "outer map")->required();
  pl_compose->add_option("-g,--g", g_arg, "inner map")->required();
  pl_compose->callback([&] {
    auto f = load_map(f_arg);
    auto g = load_map(g_arg);
    kl_map* out = nullptr;
    check(kl_map_compose(f.get(), g.get(), &out));
    print_map(Map(out).get());
  });

  auto* pl_invert = pl->add_subcommand("invert", "inverse of a homeomorphism");
  pl_invert->add_option("-f,--f", f_arg, "homeomorphism")->required();
  pl_invert->callback([&] {
    auto f = load_map(f_arg);
    kl_map* out = nullptr;
    check(kl_map_invert(f.get(), &out));
    print_map(Map(out).get());
  });

  bool with_at = false;
  auto* pl_dist = pl->add_subcommand("dist", "exact sup distance");
  pl_dist->add_option("-f,--f", f_arg, "map")->required();
  pl_dist->add_option("-g,--g", g_arg, "map")->required();
  pl_dist->add_flag("--at", with_at, "also print the leftmost point attaining it");
  pl_dist->callback([&] {
    auto f = load_map(f_arg);
    auto g = load_map(g_arg);
    char* v = nullptr;
    char* at = nullptr;
    check(kl_map_sup_dist(f.get(), g.get(), &v, &at));
    std::string vs = take(v), as = take(at);
    std::cout << vs;
    if (with_at) std::cout << " at " << as;
    std::cout << "\n";
  });

  auto* pl_degree = pl->add_subcommand("degree", "number of laps of an open map");
  pl_degree->add_option("-f,--f", f_arg, "open map")->required();
  pl_degree->callback([&] {
    auto f = load_map(f_arg);
    std::uint64_t deg = 0;
    check(kl_map_degree(f.get(), &deg));
    std::cout << deg << "\n";
  });

  auto* pl_reflect = pl->add_subcommand("reflect", "x -> 1 - f(1 - x)");
  pl_reflect->add_option("-f,--f", f_arg, "homeomorphism")->required();
  pl_reflect->callback([&] {
    auto f = load_map(f_arg);
    kl_map* out = nullptr;
    check(kl_map_reflect(f.get(), &out));
    print_map(Map(out).get());
  });

  // tent
  auto* tent = app.add_subcommand("tent", "tent maps and block sums");
  tent->require_subcommand(1);

  auto* tent_build = tent->add_subcommand("build", "tent map of degree d");
  tent_build->add_option("-d,--d", d, "degree")->required();
  tent_build->callback([&] {
    kl_map* out = nullptr;
    check(kl_tent(d, &out));
    print_map(Map(out).get());
  });

  auto* tent_oplus = tent->add_subcommand("oplus", "d blocks alternating g and its reflection");
  tent_oplus->add_option("-g,--g", g_arg, "homeomorphism")->required();
  tent_oplus->add_option("-d,--d", d, "block count")->required();
  tent_oplus->callback([&] {
    auto g = load_map(g_arg);
    kl_map* out = nullptr;
    check(kl_oplus_power(g.get(), d, &out));
    print_map(Map(out).get());
  });

  auto* tent_semiconj = tent->add_subcommand("semiconj", "check g o T_d = T_d o oplus(g)");
  tent_semiconj->add_option("-g,--g", g_arg, "homeomorphism")->required();
  tent_semiconj->add_option("-d,--d", d, "degree")->required();
  tent_semiconj->callback([&] {
    auto g = load_map(g_arg);
    char* rec = nullptr;
    int equal = 0;
    check(kl_semiconjugacy(g.get(), d, &rec, &equal));
    print_json(rec);
    if (!equal) status = kExitFail;
  });

  auto* tent_straighten = tent->add_subcommand("straighten", "h with g o h = f");
  tent_straighten->add_option("-f,--f", f_arg, "open map")->required();
  tent_straighten->add_option("-g,--g", g_arg, "open map")->required();
  tent_straighten->callback([&] {
    auto f = load_map(f_arg);
    auto g = load_map(g_arg);
    kl_map* out = nullptr;
    check(kl_straighten(f.get(), g.get(), &out));
    print_map(Map(out).get());
  });

  // conj
  auto* conj = app.add_subcommand("conj", "fixed signatures and conjugators");
  conj->require_subcommand(1);
  std::string eta = "1/100", delta = "1/5";

  auto* conj_sig = conj->add_subcommand("signature", "fixed signature of a homeomorphism");
  conj_sig->add_option("-f,--f", f_arg, "homeomorphism")->required();
  conj_sig->callback([&] {
    auto f = load_map(f_arg);
    char* s = nullptr;
    check(kl_signature(f.get(), &s));
    std::cout << '"' << take(s) << "\"\n";
  });

  auto* conj_decide = conj->add_subcommand("decide", "are f and g conjugate");
  conj_decide->add_option("-f,--f", f_arg, "homeomorphism")->required();
  conj_decide->add_option("-g,--g", g_arg, "homeomorphism")->required();
  conj_decide->callback([&] {
    auto f = load_map(f_arg);
    auto g = load_map(g_arg);
    int yes = 0;
    check(kl_decide_conjugate(f.get(), g.get(), &yes));
    std::cout << (yes ? "conjugate" : "not conjugate") << "\n";
  });

  auto* conj_synth = conj->add_subcommand("synthesize", "certified h with sup_dist(h^-1 f h, g) < eta");
  conj_synth->add_option("-f,--f", f_arg, "homeomorphism")->required();
  conj_synth->add_option("-g,--g", g_arg, "homeomorphism")->required();
  conj_synth->add_option("--eta", eta, "tolerance");
  conj_synth->callback([&] {
    auto f = load_map(f_arg);
    auto g = load_map(g_arg);
    char* cert = nullptr;
    check(kl_approx_conjugator(f.get(), g.get(), eta.c_str(), &cert));
    print_json(cert);
  });

  auto* conj_block = conj->add_subcommand("blockwise", "conjugate oplus(f, d) close to h block by block");
  conj_block->add_option("-f,--f", f_arg, "homeomorphism")->required();
  conj_block->add_option("-d,--d", d, "block count")->required();
  conj_block->add_option("-t,--target", h_arg, "target fixing the grid")->required();
  conj_block->add_option("--eta", eta, "tolerance");
  conj_block->callback([&] {
    auto f = load_map(f_arg);
    auto h = load_map(h_arg);
    char* res = nullptr;
    check(kl_grid_block_conjugate(f.get(), d, h.get(), eta.c_str(), &res));
    print_json(res);
  });

  auto* conj_snap = conj->add_subcommand("snap", "pull h onto the grid i/d");
  conj_snap->add_option("--map", h_arg, "homeomorphism")->required();
  conj_snap->add_option("-d,--d", d, "grid size")->required();
  conj_snap->add_option("--ref", ref_arg, "reference fixing the grid")->required();
  conj_snap->add_option("--delta", delta, "radius is delta/d");
  conj_snap->callback([&] {
    auto h = load_map(h_arg);
    auto r = load_map(ref_arg);
    kl_map* out = nullptr;
    check(kl_snap_to_grid(h.get(), d, r.get(), delta.c_str(), &out));
    print_map(Map(out).get());
  });

  // knaster
  auto* kn = app.add_subcommand("knaster", "truncated Knaster continuum");
  kn->require_subcommand(1);
  std::string primes_spec = "all2", y_arg, point_arg;
  std::size_t n = 0, m = 0;
  bool proof = false;
  auto primes_opt = [&](CLI::App* c) { c->add_option("--primes", primes_spec, "prime sequence"); };

  auto* kn_point = kn->add_subcommand("point", "extend x_n to a coherent point");
  kn_point->add_option("-x,--x", x_arg, "coordinate value")->required();
  kn_point->add_option("-n,--n", n, "coordinate index")->required();
  primes_opt(kn_point);
  kn_point->callback([&] {
    auto p = load_primes(primes_spec);
    char* s = nullptr;
    check(kl_extend_point(x_arg.c_str(), n, p.get(), &s));
    std::cout << take(s) << "\n";
  });

  auto* kn_dist = kn->add_subcommand("dist", "certified distance of two points");
  kn_dist->add_option("-x,--x", x_arg, "point")->required();
  kn_dist->add_option("-y,--y", y_arg, "point")->required();
  primes_opt(kn_dist);
  kn_dist->callback([&] {
    auto p = load_primes(primes_spec);
    char* s = nullptr;
    check(kl_knaster_dist(load(x_arg).c_str(), load(y_arg).c_str(), p.get(), &s));
    print_json(s);
  });

  auto* kn_lift = kn->add_subcommand("lift", "represent a diagonal map at coordinate m");
  kn_lift->add_option("--map", f_arg, "diagonal map")->required();
  kn_lift->add_option("-m,--m", m, "target coordinate")->required();
  primes_opt(kn_lift);
  kn_lift->callback([&] {
    auto p = load_primes(primes_spec);
    char* s = nullptr;
    check(kl_diagonal_lift(load(f_arg).c_str(), m, p.get(), &s));
    std::cout << take(s) << "\n";
  });

  auto* kn_eval = kn->add_subcommand("evaldiag", "apply a diagonal map to a point");
  kn_eval->add_option("--map", f_arg, "diagonal map")->required();
  kn_eval->add_option("--point", point_arg, "point")->required();
  primes_opt(kn_eval);
  kn_eval->callback([&] {
    auto p = load_primes(primes_spec);
    char* s = nullptr;
    check(kl_diagonal_eval(load(f_arg).c_str(), load(point_arg).c_str(), p.get(), &s));
    std::cout << take(s) << "\n";
  });

  auto* kn_degree = kn->add_subcommand("degree", "degree of a general diagonal map");
  kn_degree->add_option("--map", f_arg, "general diagonal map")->required();
  primes_opt(kn_degree);
  kn_degree->callback([&] {
    auto p = load_primes(primes_spec);
    char* s = nullptr;
    check(kl_degree_diagonal(load(f_arg).c_str(), p.get(), &s));
    std::cout << take(s) << "\n";
  });

  auto* kn_diagdist = kn->add_subcommand("diagdist", "certified sup distance of two diagonal maps");
  kn_diagdist->add_option("-f,--f", f_arg, "diagonal map")->required();
  kn_diagdist->add_option("-g,--g", g_arg, "diagonal map")->required();
  kn_diagdist->add_option("-n,--n", n, "truncation depth")->required();
  primes_opt(kn_diagdist);
  kn_diagdist->callback([&] {
    auto p = load_primes(primes_spec);
    char* s = nullptr;
    check(kl_diag_dist(load(f_arg).c_str(), load(g_arg).c_str(), n, p.get(), &s));
    print_json(s);
  });

  auto* kn_witness = kn->add_subcommand("witness", "x with a large tent gap between f and g");
  kn_witness->add_option("-f,--f", f_arg, "homeomorphism")->required();
  kn_witness->add_option("-g,--g", g_arg, "homeomorphism")->required();
  kn_witness->add_option("-d,--d", d, "tent degree")->required();
  kn_witness->add_option("--delta", delta, "gap parameter");
  kn_witness->add_flag("--proof", proof, "follow the constructive search instead of exhaustive search");
  kn_witness->callback([&] {
    auto f = load_map(f_arg);
    auto g = load_map(g_arg);
    char* s = nullptr;
    check(kl_tent_witness(f.get(), g.get(), d, delta.c_str(), proof ? 1 : 0, &s));
    print_json(s);
  });

  // verify / experiment
  auto* verify = app.add_subcommand("verify", "seeded verification campaign");
  std::string suite;
  bool list = false;
  CampaignFlags vflags;
  verify->add_option("suite", suite, "suite name");
  verify->add_flag("--list", list, "list suites");
  add_campaign_flags(verify, vflags);
  verify->callback([&] {
    if (list) {
      char* s = nullptr;
      check(kl_suite_names(&s));
      for (const auto& name : json::parse(take(s))) std::cout << name.get<std::string>() << "\n";
      return;
    }
    if (suite.empty()) throw CliError{kExitUsage, "verify: a suite name is required (see --list)"};
    status = run_campaign("verify " + suite, campaign_config(suite, verify, vflags), vflags);
  });

  auto* experiment = app.add_subcommand("experiment", "experiments");
  experiment->require_subcommand(1);
  CampaignFlags eflags;
  auto* density = experiment->add_subcommand("density", "conjugacy class density at coordinate m");
  add_campaign_flags(density, eflags);
  density->callback([&] {
    status = run_campaign("experiment density", campaign_config("density", density, eflags), eflags);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const CliError& e) {
    std::cerr << "knaster-lab: " << e.message << "\n";
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "knaster-lab: " << e.what() << "\n";
    return kExitUsage;
  }
  return status;
}
