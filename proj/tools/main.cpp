// regret-lab: experiment driver over the regret_lab library.
//
// Every run prints a JSON manifest on stdout. Diagnostics go to stderr,
// as plain text or, with --json-logs, one JSON object per line.
// Exit codes: 0 ok, 1 verification failed, 2 usage or format error,
// 3 capacity, numeric or structural error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "regret_lab/corrector.hpp"
#include "regret_lab/errors.hpp"
#include "regret_lab/exchange.hpp"
#include "regret_lab/game.hpp"
#include "regret_lab/selfcheck.hpp"
#include "regret_lab/strategy.hpp"
#include "regret_lab/version.hpp"

using nlohmann::ordered_json;
using namespace regret_lab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCompute = 3;

bool g_json_logs = false;

void log(const std::string& level, const std::string& message) {
  if (g_json_logs) {
    std::cerr << ordered_json{{"level", level}, {"msg", message}}.dump() << '\n';
  } else {
    std::cerr << "regret-lab: " << (level == "info" ? "" : level + ": ") << message << '\n';
  }
}

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

long parse_long(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(what + ": expected an integer, got '" + s + "'");
}

std::uint64_t parse_seed(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used == s.size() && !s.starts_with('-')) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(what + ": expected a non-negative integer seed, got '" + s + "'");
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(what + ": expected a number, got '" + s + "'");
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// Run manifest

struct Manifest {
  ordered_json config = ordered_json::object();
  ordered_json seeds = ordered_json::object();
  ordered_json outputs = ordered_json::object();
  ordered_json results = ordered_json::object();

  void output(const std::string& path, const std::string& content) {
    write_file_atomic(path, content);
    outputs[path] = {{"bytes", content.size()}, {"fnv1a64", hex64(fnv1a64(content))}};
  }

  std::string dump(const std::string& command, int exit_code) const {
    ordered_json doc;
    doc["tool"] = "regret-lab";
    doc["version"] = kVersion;
    doc["command"] = command;
    doc["config"] = config;
    doc["config_hash"] = hex64(fnv1a64(command + config.dump()));
    doc["seeds"] = seeds;
    doc["outputs"] = outputs;
    doc["results"] = results;
    doc["exit_code"] = exit_code;
    return doc.dump(2);
  }
};

// ---------------------------------------------------------------------------
// Input shorthands

// debruijn:<d> | random:<n>:<seed> | <path>
LabeledDigraph load_graph(const std::string& spec, Manifest& man) {
  const auto parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "debruijn") return debruijn(static_cast<int>(parse_long(parts[1], "--graph")));
  if (parts.size() == 3 && parts[0] == "random") {
    const std::uint64_t seed = parse_seed(parts[2], "--graph");
    man.seeds["graph"] = seed;
    const long n = parse_long(parts[1], "--graph");
    if (n < 2) throw UsageError("--graph: random graphs need at least 2 nodes");
    return random_eulerian_outdeg2(static_cast<std::size_t>(n), seed);
  }
  return graph_from_json(read_file(spec));
}

// random:<seed> (uniform on [-1, 1]) | <path>
NodeFunction load_function(const std::string& spec, std::size_t nodes, Manifest& man) {
  if (spec.starts_with("random:")) {
    const std::uint64_t seed = parse_seed(spec.substr(7), "--h");
    man.seeds["h"] = seed;
    std::mt19937_64 rng(seed);
    NodeFunction h(nodes);
    for (std::size_t x = 0; x < nodes; ++x) {
      h[x] = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    }
    return h;
  }
  return node_function_from_json(read_file(spec), nodes);
}

struct PanelFlags {
  std::string file;
  std::string symmetric;  // d:mu
  std::string random;     // d:mu:seed

  void add(CLI::App* cmd) {
    cmd->add_option("--panel", file, "Panel JSON file");
    cmd->add_option("--panel-symmetric", symmetric, "Constant panel (mu, -mu) as d:mu");
    cmd->add_option("--panel-random", random, "Uniform random panel as d:mu:seed");
  }

  ExpertPanel load(Manifest& man) const {
    const int given = !file.empty() + !symmetric.empty() + !random.empty();
    if (given != 1) throw UsageError("give exactly one of --panel, --panel-symmetric, --panel-random");
    if (!file.empty()) {
      ExpertPanel p = panel_from_json(read_file(file));
      man.config["panel"] = ordered_json::parse(panel_to_json(p));
      return p;
    }
    if (!symmetric.empty()) {
      const auto parts = split(symmetric, ':');
      if (parts.size() != 2) throw UsageError("--panel-symmetric: expected d:mu");
      man.config["panel"] = "symmetric:" + symmetric;
      return ExpertPanel::symmetric(static_cast<int>(parse_long(parts[0], "--panel-symmetric")),
                                    parse_real(parts[1], "--panel-symmetric"));
    }
    const auto parts = split(random, ':');
    if (parts.size() != 3) throw UsageError("--panel-random: expected d:mu:seed");
    const std::uint64_t seed = parse_seed(parts[2], "--panel-random");
    man.config["panel"] = "random:" + random;
    man.seeds["panel"] = seed;
    return ExpertPanel::random(static_cast<int>(parse_long(parts[0], "--panel-random")), 2,
                               parse_real(parts[1], "--panel-random"), seed);
  }
};

std::vector<double> parse_range(const std::string& spec, const std::string& what) {
  // lo:hi:count or a comma list
  const auto parts = split(spec, ':');
  if (parts.size() == 3) {
    const double lo = parse_real(parts[0], what), hi = parse_real(parts[1], what);
    const long count = parse_long(parts[2], what);
    if (count < 1) throw UsageError(what + ": count must be positive");
    std::vector<double> out;
    for (long i = 0; i < count; ++i) {
      out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(spec, ',')) out.push_back(parse_real(p, what));
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_graph(Manifest& man, std::optional<int> depth, std::optional<long> random_n,
              std::uint64_t seed, const std::string& emit, bool check) {
  if (depth.has_value() == random_n.has_value()) throw UsageError("give exactly one of --debruijn, --random");
  LabeledDigraph g = depth ? debruijn(*depth) : random_eulerian_outdeg2(static_cast<std::size_t>(*random_n), seed);
  if (depth) {
    man.config["debruijn"] = *depth;
  } else {
    man.config["random"] = *random_n;
    man.seeds["graph"] = seed;
  }
  man.config["check_eulerian"] = check;
  man.results["nodes"] = g.node_count();
  man.results["edges"] = g.edge_count();
  if (!emit.empty()) man.output(emit, graph_to_json(g));
  if (check) {
    const bool eulerian = g.is_eulerian();
    man.results["eulerian"] = eulerian;
    if (!eulerian) return kExitVerify;
  }
  return kExitOk;
}

int cmd_poisson(Manifest& man, const std::string& graph_spec, const std::string& h_spec,
                const std::string& method, const std::string& emit) {
  man.config["graph"] = graph_spec;
  man.config["h"] = h_spec;
  man.config["method"] = method;
  const LabeledDigraph g = load_graph(graph_spec, man);
  const NodeFunction h = load_function(h_spec, g.node_count(), man);
  auto representation = [&] {
    if (!g.debruijn_depth()) throw UsageError("--method representation needs a de Bruijn graph");
    return debruijn_representation(h, *g.debruijn_depth()).centered();
  };
  NodeFunction H;
  if (method == "solve" || method == "both") {
    H = solve_poisson(g, h);
    if (method == "both") {
      const double gap = (representation() - H).max_abs();
      man.results["representation_gap"] = gap;
      if (gap > 1e-10) {
        log("error", "representation differs from the solve by " + format_double(gap));
        if (!emit.empty()) man.output(emit, node_function_to_json(H));
        return kExitVerify;
      }
    }
  } else {
    H = representation();
  }
  man.results["residual"] = poisson_residual(g, H, h);
  man.results["mean_h"] = mean(h);
  if (!emit.empty()) man.output(emit, node_function_to_json(H));
  return kExitOk;
}

int cmd_lp_verify(Manifest& man, const std::string& graph_spec, const std::string& h_spec,
                  const std::string& convention, std::size_t cap, const std::string& report_path) {
  man.config["graph"] = graph_spec;
  man.config["h"] = h_spec;
  man.config["convention"] = convention;
  man.config["cap"] = cap;
  const LpConvention conv = parse_convention(convention);
  const LabeledDigraph g = load_graph(graph_spec, man);
  const NodeFunction h = load_function(h_spec, g.node_count(), man);
  const LPReport report = verify_indifference(g, h, cap, conv);
  man.results["indifferent"] = report.indifferent;
  man.results["cycle_count"] = report.cycle_rows.size();
  man.results["mean_h"] = report.mean_h;
  man.results["M_investor"] = report.M_investor;
  man.results["M_market"] = report.M_market;
  if (!report_path.empty()) man.output(report_path, lp_report_to_json(report));
  return report.indifferent ? kExitOk : kExitVerify;
}

int cmd_value(Manifest& man, const PanelFlags& pf, const std::string& payoff_spec, long N,
              const std::string& x1s, const std::string& x2s, const std::string& ts,
              const std::string& emit) {
  const ExpertPanel panel = pf.load(man);
  man.config["payoff"] = payoff_spec;
  man.config["N"] = N;
  man.config["x1"] = x1s;
  man.config["x2"] = x2s;
  man.config["t"] = ts;
  const StrategyContext ctx(panel, Payoff::parse(payoff_spec), N);
  std::ostringstream csv;
  csv << "x1,x2,t,m,u,f_star,H\n";
  std::size_t rows = 0, clamped = 0;
  for (double x1 : parse_range(x1s, "--x1")) {
    for (double x2 : parse_range(x2s, "--x2")) {
      for (double t : parse_range(ts, "--t")) {
        for (std::size_t id = 0; id < panel.histories(); ++id) {
          const MarketState m(panel.depth(), static_cast<std::uint32_t>(id));
          const Regret x{x1, x2};
          const FStar f = ctx.f_star(x, t, m);
          clamped += f.clamped;
          csv << format_double(x1) << ',' << format_double(x2) << ',' << format_double(t) << ','
              << m.to_string() << ',' << format_double(ctx.value().u(x, t)) << ','
              << format_double(f.value) << ',' << format_double(ctx.H(x, t, m)) << '\n';
          ++rows;
        }
      }
    }
  }
  man.results["rows"] = rows;
  man.results["clamped"] = clamped;
  man.results["sigma2"] = panel.sigma2();
  if (!emit.empty()) {
    man.output(emit, csv.str());
  } else {
    std::cerr << csv.str();
  }
  return kExitOk;
}

// {"panel": <panel object> | "symmetric:d:mu" | "random:d:mu:seed",
//  "payoff": "max", "N": 4, "start": {"x": [0, 0], "t": 0, "m": "0"}}
GameConfig config_from_json(const std::string& text, Manifest& man) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw FormatError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("", "config must be an object");
  if (!doc.contains("panel")) throw FormatError("panel", "missing");
  if (!doc.contains("N") || !doc["N"].is_number_integer()) throw FormatError("N", "missing integer");
  std::optional<ExpertPanel> panel;
  if (doc["panel"].is_string()) {
    const std::string s = doc["panel"];
    PanelFlags pf;
    if (s.starts_with("symmetric:")) {
      pf.symmetric = s.substr(10);
    } else if (s.starts_with("random:")) {
      pf.random = s.substr(7);
    } else {
      throw FormatError("panel", "expected symmetric:d:mu, random:d:mu:seed or an object");
    }
    panel = pf.load(man);
  } else if (doc["panel"].is_object()) {
    panel = panel_from_json(doc["panel"].dump());
    man.config["panel"] = doc["panel"];
  } else {
    throw FormatError("panel", "expected a string or an object");
  }
  if (doc.contains("payoff") && !doc["payoff"].is_string()) throw FormatError("payoff", "must be a string");
  const std::string payoff = doc.value("payoff", "max");
  GameConfig cfg = GameConfig::standard(std::move(*panel), Payoff::parse(payoff), doc["N"].get<long>());
  if (doc.contains("start")) {
    const auto& st = doc["start"];
    if (!st.is_object()) throw FormatError("start", "must be an object");
    if (st.contains("x")) {
      if (!st["x"].is_array() || st["x"].size() != 2) throw FormatError("start.x", "must be [x1, x2]");
      cfg.start_x = {st["x"][0].get<double>(), st["x"][1].get<double>()};
    }
    if (st.contains("t")) {
      if (!st["t"].is_number()) throw FormatError("start.t", "must be a number");
      cfg.start_t = st["t"].get<double>();
    }
    if (st.contains("m")) {
      if (!st["m"].is_string()) throw FormatError("start.m", "must be a history string");
      try {
        cfg.start_m = MarketState::parse(st["m"].get<std::string>());
      } catch (const Error& e) {
        throw FormatError("start.m", e.what());
      }
    }
  }
  return cfg;
}

int cmd_minimax(Manifest& man, const std::string& config_path, int fgrid, const std::string& emit) {
  const std::string text = read_file(config_path);
  const GameConfig cfg = config_from_json(text, man);
  man.config["config_file"] = ordered_json::parse(text);
  man.config["fgrid"] = fgrid;
  const ValueBracket v = exact_value(cfg, fgrid);
  man.results["lower"] = v.lower;
  man.results["upper"] = v.upper;
  man.results["leaves"] = v.leaves;
  man.results["epsilon"] = cfg.epsilon();
  if (!emit.empty()) {
    ordered_json out{{"N", cfg.horizon}, {"fgrid", fgrid},   {"epsilon", cfg.epsilon()},
                     {"lower", v.lower}, {"upper", v.upper}, {"leaves", v.leaves}};
    man.output(emit, out.dump(2) + "\n");
  }
  return kExitOk;
}

std::vector<double> read_script(const std::string& path) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_file(path));
  } catch (const ordered_json::parse_error& e) {
    throw FormatError("script", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError("script", "must be an array of predictions");
  std::vector<double> out;
  for (const auto& v : doc) {
    if (!v.is_number()) throw FormatError("script", "predictions must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

int cmd_simulate(Manifest& man, const PanelFlags& pf, const std::string& payoff_spec, long N,
                 const std::string& investor_spec, const std::string& market_spec,
                 std::uint64_t seed, const std::string& emit) {
  const ExpertPanel panel = pf.load(man);
  man.config["payoff"] = payoff_spec;
  man.config["N"] = N;
  man.config["investor"] = investor_spec;
  man.config["market"] = market_spec;
  const GameConfig cfg = GameConfig::standard(panel, Payoff::parse(payoff_spec), N);
  const StrategyContext ctx(panel, cfg.payoff, N);

  Investor investor;
  if (investor_spec == "fstar") {
    investor = fstar_investor(ctx);
  } else if (investor_spec == "lookahead") {
    investor = lookahead_investor(ctx);
  } else if (investor_spec.starts_with("const:")) {
    investor = constant_investor(parse_real(investor_spec.substr(6), "--investor"));
  } else if (investor_spec.starts_with("perturbed:")) {
    investor = perturbed_fstar_investor(ctx, parse_real(investor_spec.substr(10), "--investor"));
  } else if (investor_spec.starts_with("script:")) {
    investor = script_investor(read_script(investor_spec.substr(7)));
  } else {
    throw UsageError("--investor: expected fstar, const:<v>, perturbed:<a>, lookahead or script:<path>");
  }

  Market market;
  if (market_spec == "bstar") {
    market = bstar_market(ctx);
  } else if (market_spec == "all-plus") {
    market = all_plus_market();
  } else if (market_spec == "greedy") {
    market = greedy_market(ctx);
  } else if (market_spec.starts_with("random:")) {
    seed = parse_seed(market_spec.substr(7), "--market");
    market = random_market();
  } else if (market_spec == "exhaustive") {
    const WorstCase worst = exhaustive_market(cfg, investor);
    man.results["leaves"] = worst.leaves;
    market = {"exhaustive", [path = worst.path](const Turn& t, double) {
                return path[static_cast<std::size_t>(t.step)];
              }};
  } else {
    throw UsageError("--market: expected bstar, all-plus, random:<seed>, greedy or exhaustive");
  }
  man.seeds["game"] = seed;

  const GameTranscript tr = simulate(cfg, investor, market, seed);
  const double u0 = ctx.value().u(cfg.start_x, cfg.start_t);
  man.results["final_x"] = {tr.final_x[0], tr.final_x[1]};
  man.results["final_payoff"] = tr.final_payoff;
  man.results["u_start"] = u0;
  man.results["gap"] = tr.final_payoff - u0;
  man.results["gap_over_eps"] = (tr.final_payoff - u0) / cfg.epsilon();
  if (!emit.empty()) man.output(emit, transcript_to_json(tr, investor.name, market.name));
  return kExitOk;
}

int cmd_rate(Manifest& man, const PanelFlags& pf, const std::string& payoff_spec,
             const std::string& side_spec, const std::string& adversary_spec,
             const std::string& n_list, const std::string& emit) {
  const ExpertPanel panel = pf.load(man);
  man.config["payoff"] = payoff_spec;
  man.config["side"] = side_spec;
  man.config["adversary"] = adversary_spec;
  man.config["N_list"] = n_list;
  RateSide side;
  if (side_spec == "investor") {
    side = RateSide::Investor;
  } else if (side_spec == "market") {
    side = RateSide::Market;
  } else {
    throw UsageError("--side: expected investor or market");
  }
  Adversary adversary;
  if (adversary_spec == "exhaustive") {
    adversary = Adversary::Exhaustive;
  } else if (adversary_spec == "bstar") {
    adversary = Adversary::BStar;
  } else {
    throw UsageError("--adversary: expected exhaustive or bstar");
  }
  std::vector<long> horizons;
  for (const auto& s : split(n_list, ',')) horizons.push_back(parse_long(s, "--N-list"));
  if (horizons.size() < 2) throw UsageError("--N-list: need at least two horizons");
  const RateTable table = rate_experiment(panel, Payoff::parse(payoff_spec), horizons, adversary, side);
  man.results["slope"] = table.slope;
  man.results["r_squared"] = table.r_squared;
  ordered_json rows = ordered_json::array();
  for (const RateRow& r : table.rows) rows.push_back({{"N", r.horizon}, {"gap", r.gap}, {"gap_over_eps", r.gap_over_eps}});
  man.results["rows"] = rows;
  if (!emit.empty()) man.output(emit, rate_table_to_csv(table));
  return kExitOk;
}

int cmd_selftest(Manifest& man) {
  bool all = true;
  ordered_json rows = ordered_json::array();
  for (const CheckResult& r : run_selfchecks()) {
    all = all && r.passed;
    rows.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    log(r.passed ? "info" : "error",
        (r.passed ? "PASS " : "FAIL ") + r.name + (r.detail.empty() ? "" : ": " + r.detail));
  }
  man.results["checks"] = rows;
  man.results["passed"] = all;
  return all ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments with history-dependent expert prediction games", "regret-lab"};
  app.set_version_flag("--version", kVersion);
  app.add_flag("--json-logs", g_json_logs, "Diagnostics as line-delimited JSON on stderr");
  app.require_subcommand(1);
  app.fallthrough();

  // graph
  auto* graph = app.add_subcommand("graph", "Generate a de Bruijn or random Eulerian graph");
  std::optional<int> g_depth;
  std::optional<long> g_random;
  std::uint64_t g_seed = 0;
  std::string g_emit;
  bool g_check = false;
  graph->add_option("--debruijn", g_depth, "de Bruijn depth d");
  graph->add_option("--random", g_random, "Random Eulerian graph with n nodes");
  graph->add_option("--seed", g_seed, "Seed for --random");
  graph->add_option("--emit", g_emit, "Write the graph JSON here");
  graph->add_flag("--check-eulerian", g_check, "Exit 1 unless the graph is Eulerian");

  // poisson
  auto* poisson = app.add_subcommand("poisson", "Solve the graph Poisson equation");
  poisson->set_help_flag("--help", "Print this help message and exit");  // --h is taken
  std::string p_graph, p_h, p_method = "solve", p_emit;
  poisson->add_option("--graph", p_graph, "debruijn:<d>, random:<n>:<seed> or a graph file")->required();
  poisson->add_option("--h", p_h, "random:<seed> or a node-function file")->required();
  poisson->add_option("--method", p_method, "solve, representation or both")
      ->check(CLI::IsMember({"solve", "representation", "both"}));
  poisson->add_option("--emit", p_emit, "Write H here");

  // lp-verify
  auto* lp = app.add_subcommand("lp-verify", "Certify cycle-average indifference");
  lp->set_help_flag("--help", "Print this help message and exit");
  std::string l_graph, l_h, l_conv = "investor", l_report;
  std::size_t l_cap = kDefaultCycleCap;
  lp->add_option("--graph", l_graph, "debruijn:<d>, random:<n>:<seed> or a graph file")->required();
  lp->add_option("--h", l_h, "random:<seed> or a node-function file")->required();
  lp->add_option("--convention", l_conv, "investor or general");
  lp->add_option("--cap", l_cap, "Maximum number of simple cycles");
  lp->add_option("--report", l_report, "Write the LP report JSON here");

  // value
  auto* value = app.add_subcommand("value", "Tabulate u, f* and H on a grid");
  PanelFlags v_panel;
  v_panel.add(value);
  std::string v_payoff = "max", v_x1 = "-1:1:5", v_x2 = "0", v_t = "0,0.5", v_emit;
  long v_N = 10'000;
  value->add_option("--payoff", v_payoff, "max, lse or lse:<kappa>");
  value->add_option("--N", v_N, "Horizon fixing epsilon in f*");
  value->add_option("--x1", v_x1, "lo:hi:count or comma list");
  value->add_option("--x2", v_x2, "lo:hi:count or comma list");
  value->add_option("--t", v_t, "lo:hi:count or comma list");
  value->add_option("--emit", v_emit, "Write the CSV here (stderr otherwise)");

  // minimax
  auto* minimax = app.add_subcommand("minimax", "Exact small-horizon game value");
  std::string m_config, m_emit;
  int m_fgrid = 21;
  minimax->add_option("--config", m_config, "Game config JSON")->required();
  minimax->add_option("--fgrid", m_fgrid, "Investor grid size");
  minimax->add_option("--emit", m_emit, "Write the value bracket JSON here");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Play one game");
  PanelFlags s_panel;
  s_panel.add(sim);
  std::string s_payoff = "max", s_investor = "fstar", s_market = "bstar", s_emit;
  long s_N = 10'000;
  std::uint64_t s_seed = 0;
  sim->add_option("--payoff", s_payoff, "max, lse or lse:<kappa>");
  sim->add_option("--N", s_N, "Horizon");
  sim->add_option("--investor", s_investor, "fstar, const:<v>, perturbed:<a>, lookahead, script:<path>");
  sim->add_option("--market", s_market, "bstar, all-plus, random:<seed>, greedy, exhaustive");
  sim->add_option("--seed", s_seed, "Seed for randomised strategies");
  sim->add_option("--emit", s_emit, "Write the transcript JSON here");

  // rate
  auto* rate = app.add_subcommand("rate", "Convergence-rate experiment");
  PanelFlags r_panel;
  r_panel.add(rate);
  std::string r_payoff = "lse", r_side = "investor", r_adv = "exhaustive", r_list = "4,8,12,16,20", r_emit;
  rate->add_option("--payoff", r_payoff, "max, lse or lse:<kappa>");
  rate->add_option("--side", r_side, "investor or market");
  rate->add_option("--adversary", r_adv, "exhaustive or bstar (investor side)");
  rate->add_option("--N-list", r_list, "Comma-separated horizons");
  rate->add_option("--emit", r_emit, "Write the rate CSV here");

  auto* selftest = app.add_subcommand("selftest", "Run the invariant sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Manifest man;
  int code = kExitOk;
  try {
    if (cmd == graph) {
      code = cmd_graph(man, g_depth, g_random, g_seed, g_emit, g_check);
    } else if (cmd == poisson) {
      code = cmd_poisson(man, p_graph, p_h, p_method, p_emit);
    } else if (cmd == lp) {
      code = cmd_lp_verify(man, l_graph, l_h, l_conv, l_cap, l_report);
    } else if (cmd == value) {
      code = cmd_value(man, v_panel, v_payoff, v_N, v_x1, v_x2, v_t, v_emit);
    } else if (cmd == minimax) {
      code = cmd_minimax(man, m_config, m_fgrid, m_emit);
    } else if (cmd == sim) {
      code = cmd_simulate(man, s_panel, s_payoff, s_N, s_investor, s_market, s_seed, s_emit);
    } else if (cmd == rate) {
      code = cmd_rate(man, r_panel, r_payoff, r_side, r_adv, r_list, r_emit);
    } else if (cmd == selftest) {
      code = cmd_selftest(man);
    }
  } catch (const CapacityError& e) {
    log("error", e.what());
    code = kExitCompute;
  } catch (const NumericError& e) {
    log("error", e.what());
    code = kExitCompute;
  } catch (const StructuralError& e) {
    log("error", e.what());
    code = kExitCompute;
  } catch (const SizeError& e) {
    log("error", e.what());
    code = kExitCompute;
  } catch (const GenerationError& e) {
    log("error", e.what());
    code = kExitCompute;
  } catch (const Error& e) {
    log("error", e.what());
    code = kExitUsage;
  } catch (const std::exception& e) {
    log("error", std::string("unexpected failure: ") + e.what());
    code = kExitCompute;
  }
  std::cout << man.dump(cmd->get_name(), code) << '\n';
  return code;
}
