#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "meetwalk/chain_analysis.hpp"
#include "meetwalk/digraph.hpp"
#include "meetwalk/error.hpp"
#include "meetwalk/graph_io.hpp"
#include "meetwalk/mc_oracle.hpp"
#include "meetwalk/meeting_ctmc.hpp"
#include "meetwalk/meeting_dtmc.hpp"
#include "meetwalk/product_space.hpp"
#include "meetwalk/serialize.hpp"

namespace meetwalk::cli {
namespace {

using nlohmann::json;

constexpr std::size_t kHumanValueLimit = 10000;

struct Options {
  std::string command;

  std::optional<std::string> family;
  std::optional<std::string> graph_path;
  int n = 20;
  std::optional<int> clique;
  std::optional<int> tail;
  std::optional<int> rows;
  std::optional<int> cols;
  double radius = 0.0;
  std::uint64_t seed = 1;

  bool self_loops = false;
  std::vector<std::string> pursuer_files;
  std::vector<std::string> evader_files;
  int pursuers = 1;
  int evaders = 1;
  bool ctmc = false;

  std::string start;
  std::string out_path;
  std::string csv_path;
  std::string transition_csv;
  std::string rate_csv;

  std::uint64_t trials = 100000;
  std::optional<double> horizon;
  unsigned threads = 0;

  std::vector<double> rgg_radii;
  bool lollipop_sweep = false;

  std::optional<std::size_t> state_budget;
  bool json = false;
};

// Published worst-case values at n = 20.
struct PublishedRow {
  const char* name;
  Family family;
  double m_max;
  double h_max;
};
constexpr PublishedRow kPublishedRows[] = {
    {"ring", Family::ring, 83.7, 150.0},       {"path", Family::path, 174.8, 551.0},
    {"star", Family::star, 8.0, 58.0},         {"lollipop", Family::lollipop, 224.0, 483.8},
    {"lattice", Family::lattice, 35.9, 83.7},
};
constexpr int kPublishedNodes = 20;

std::string human(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string human(const std::optional<double>& v) { return v ? human(*v) : "inf"; }

json number_or_inf(const std::optional<double>& v) { return v ? json(*v) : json("inf"); }

std::size_t resolve_budget(const Options& o) {
  if (o.state_budget) {
    if (*o.state_budget == 0) throw ValidationError("--state-budget must be positive");
    return *o.state_budget;
  }
  if (const char* env = std::getenv("MEETWALK_STATE_BUDGET"); env != nullptr && *env != '\0') {
    std::size_t value = 0;
    const std::string_view text(env);
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || value == 0) {
      throw ValidationError("MEETWALK_STATE_BUDGET must be a positive integer, got '" + std::string(text) + "'");
    }
    return value;
  }
  return kDefaultStateBudget;
}

GeneratorParams generator_params(const Options& o) {
  GeneratorParams p;
  p.n = o.n;
  p.clique = o.clique;
  p.tail = o.tail;
  p.rows = o.rows;
  p.cols = o.cols;
  p.radius = o.radius;
  p.seed = o.seed;
  return p;
}

Digraph load_source_graph(const Options& o) {
  if (o.graph_path && o.family) throw ValidationError("give either --family or --graph, not both");
  if (o.graph_path) return load_graph(*o.graph_path);
  if (o.family) return generate(parse_family(*o.family), generator_params(o));
  throw ValidationError("no graph source: give --family or --graph");
}

json graph_echo(const Options& o) {
  if (o.graph_path) return {{"source", "file"}, {"path", *o.graph_path}};
  if (!o.family) return nullptr;
  json g = {{"source", "generator"}, {"family", *o.family}, {"n", o.n}};
  if (o.clique) g["clique"] = *o.clique;
  if (o.tail) g["tail"] = *o.tail;
  if (o.rows) g["rows"] = *o.rows;
  if (o.cols) g["cols"] = *o.cols;
  if (parse_family(*o.family) == Family::random_geometric) {
    g["radius"] = o.radius;
    g["seed"] = o.seed;
  }
  return g;
}

json config_echo(const Options& o, std::size_t budget) {
  const bool from_files = !o.pursuer_files.empty() && !o.evader_files.empty();
  const char* construction = o.ctmc ? "rates_from_weights" : from_files ? "matrix_file" : "equal_neighbor";
  json chain = {{"construction", construction}};
  if (!from_files && !o.ctmc) chain["self_loops"] = o.self_loops;
  if (!o.pursuer_files.empty()) chain["pursuer_matrices"] = o.pursuer_files;
  if (!o.evader_files.empty()) chain["evader_matrices"] = o.evader_files;
  json c = {{"command", o.command},
            {"graph", graph_echo(o)},
            {"chain", chain},
            {"L", o.pursuers},
            {"M", o.evaders},
            {"time_model", o.ctmc ? "continuous" : "discrete"},
            {"seed", o.seed},
            {"state_budget", budget}};
  if (!o.start.empty()) c["start"] = o.start;
  if (o.command == "simulate") {
    c["trials"] = o.trials;
    c["horizon"] = o.horizon ? json(*o.horizon) : json(nullptr);
  }
  if (!o.out_path.empty()) c["output"] = o.out_path;
  if (!o.csv_path.empty()) c["csv"] = o.csv_path;
  return c;
}

void print_config(std::ostream& out, const json& config) {
  out << "# meetwalk " << config["command"].get<std::string>();
  for (const auto& [key, value] : config.items()) {
    if (key == "command" || value.is_null()) continue;
    out << ' ' << key << '=' << value.dump();
  }
  out << '\n';
}

template <class Matrix>
struct Agents {
  std::vector<Matrix> pursuers;
  std::vector<Matrix> evaders;
};

// Agent chains per role: explicit matrix files if given, otherwise copies of
// the chain built from the graph source.
template <class Matrix, class FromGraph, class FromFile>
Agents<Matrix> build_agents(Options& o, FromGraph from_graph, FromFile from_file) {
  auto role = [&](const std::vector<std::string>& files, int& count, const char* flag) {
    std::vector<Matrix> chains;
    if (files.empty()) {
      if (count < 1) throw ValidationError(std::string("--") + flag + " must be at least 1");
      const Matrix base = from_graph(load_source_graph(o));
      chains.assign(static_cast<std::size_t>(count), base);
      return chains;
    }
    for (const auto& f : files) chains.push_back(from_file(load_graph(f)));
    if (chains.size() == 1 && count > 1) {
      chains.assign(static_cast<std::size_t>(count), chains.front());
    } else {
      count = static_cast<int>(chains.size());
    }
    return chains;
  };
  Agents<Matrix> a;
  a.pursuers = role(o.pursuer_files, o.pursuers, "L");
  a.evaders = role(o.evader_files, o.evaders, "M");
  return a;
}

Agents<TransitionMatrix> dtmc_agents(Options& o) {
  return build_agents<TransitionMatrix>(
      o, [&](const Digraph& g) { return equal_neighbor_matrix(g, o.self_loops); },
      [](const Digraph& g) { return transition_matrix_from_digraph(g); });
}

Agents<RateMatrix> ctmc_agents(Options& o) {
  return build_agents<RateMatrix>(o, [](const Digraph& g) { return rate_matrix_from_digraph(g); },
                                  [](const Digraph& g) { return rate_matrix_from_digraph(g); });
}

std::vector<int> parse_start(const std::string& text, const ProductIndex& index) {
  std::vector<int> labels;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    int v = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || end != item.data() + item.size()) {
      throw ValidationError("--start must be comma-separated node labels, got '" + text + "'");
    }
    if (v < 1 || v > index.node_count()) {
      throw ValidationError("--start label " + std::to_string(v) + " outside 1.." +
                            std::to_string(index.node_count()));
    }
    labels.push_back(v - 1);
  }
  if (labels.size() != static_cast<std::size_t>(index.agents())) {
    throw ValidationError("--start needs " + std::to_string(index.agents()) + " labels (pursuers first), got " +
                          std::to_string(labels.size()));
  }
  return labels;
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

// ---------------------------------------------------------------- gen

int cmd_gen(Options& o, std::ostream& out, std::ostream& err) {
  const std::size_t budget = resolve_budget(o);
  const Digraph g = load_source_graph(o);
  const json config = config_echo(o, budget);
  if (!o.transition_csv.empty()) save_matrix_csv(equal_neighbor_matrix(g, o.self_loops).to_dense(), o.transition_csv);
  if (!o.rate_csv.empty()) save_matrix_csv(rate_matrix_from_digraph(g).to_dense(), o.rate_csv);
  if (o.out_path.empty()) {
    out << format_graph(g);
    print_config(err, config);
    return kSuccess;
  }
  save_graph(g, o.out_path);
  const json summary = {{"config", config},
                        {"n", g.node_count()},
                        {"edges", g.edges().size()},
                        {"symmetric", g.is_symmetric()}};
  if (o.json) {
    emit(out, summary);
  } else {
    print_config(out, config);
    out << "wrote " << o.out_path << ": n=" << g.node_count() << ", " << g.edges().size() << " directed edges\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------- analyze

template <class Matrix>
json decompositions(const std::vector<Matrix>& chains) {
  json out = json::array();
  for (const Matrix& m : chains) out.push_back(to_json(decompose(m)));
  return out;
}

void print_decomposition(std::ostream& out, const std::string& label, const json& d) {
  out << label << ": " << d["classes"].size() << " class(es)" << (d["ergodic"].get<bool>() ? ", ergodic" : "")
      << '\n';
  for (const auto& c : d["classes"]) {
    out << "  " << c["kind"].get<std::string>() << " {";
    bool first = true;
    for (const auto& v : c["nodes"]) {
      out << (first ? "" : ",") << v.get<int>();
      first = false;
    }
    out << "} period " << c["period"].get<int>() << '\n';
  }
}

int cmd_analyze(Options& o, std::ostream& out) {
  const std::size_t budget = resolve_budget(o);
  json doc;
  if (o.ctmc) {
    const Agents<RateMatrix> a = ctmc_agents(o);
    const KroneckerSumGraph graph(a.pursuers, a.evaders, budget);
    const std::vector<char> reaches = reaches_meeting_set(graph);
    json flags = {{"finite", true}};
    for (std::size_t s = 0; s < reaches.size(); ++s) {
      if (!reaches[s]) {
        flags["finite"] = false;
        flags["witness"] = json::array();
        for (int v : graph.index().unflatten(s)) flags["witness"].push_back(v + 1);
        break;
      }
    }
    doc = {{"pursuers", decompositions(a.pursuers)},
           {"evaders", decompositions(a.evaders)},
           {"classification", flags},
           {"certificate", to_json(make_certificate(graph.index(), finite_states(graph, reaches)))}};
  } else {
    const Agents<TransitionMatrix> a = dtmc_agents(o);
    const KroneckerProductGraph graph(a.pursuers, a.evaders, budget);
    const PairClassification flags = classify_tuple(a.pursuers, a.evaders, budget);
    doc = {{"pursuers", decompositions(a.pursuers)},
           {"evaders", decompositions(a.evaders)},
           {"classification", to_json(flags)},
           {"certificate",
            to_json(make_certificate(graph.index(), finite_states(graph, reaches_meeting_set(graph))))}};
  }
  doc["config"] = config_echo(o, budget);
  if (o.json) {
    emit(out, doc);
    return kSuccess;
  }
  print_config(out, doc["config"]);
  for (std::size_t k = 0; k < doc["pursuers"].size(); ++k) {
    print_decomposition(out, "pursuer " + std::to_string(k + 1), doc["pursuers"][k]);
  }
  for (std::size_t k = 0; k < doc["evaders"].size(); ++k) {
    print_decomposition(out, "evader " + std::to_string(k + 1), doc["evaders"][k]);
  }
  for (const auto& [key, value] : doc["classification"].items()) out << key << ": " << value.dump() << '\n';
  const json& cert = doc["certificate"];
  out << "infinite start states: " << cert["infinite_count"].get<std::size_t>() << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- meet

int cmd_meet(Options& o, std::ostream& out) {
  const std::size_t budget = resolve_budget(o);
  SolverOptions solver;
  solver.state_budget = budget;
  std::optional<MeetingTimeResult> result;
  std::optional<double> mean;
  if (o.ctmc) {
    const Agents<RateMatrix> a = ctmc_agents(o);
    result = ctmc_group_meeting_times(a.pursuers, a.evaders, solver);
  } else {
    const Agents<TransitionMatrix> a = dtmc_agents(o);
    result = group_meeting_times(a.pursuers, a.evaders, solver);
    mean = stationary_mean(*result, a.pursuers, a.evaders);
  }
  std::optional<std::size_t> only;
  if (!o.start.empty()) only = result->index().flatten(parse_start(o.start, result->index()));
  if (!o.csv_path.empty()) save_matrix_csv(result->to_matrix(), o.csv_path);

  json doc = to_json(*result, mean, only);
  doc["config"] = config_echo(o, budget);
  if (o.json) {
    emit(out, doc);
    return kSuccess;
  }
  print_config(out, doc["config"]);
  const ProductIndex& index = result->index();
  out << "time model: " << doc["time_unit"].get<std::string>() << ", " << index.state_count() << " start states\n";
  if (only || index.state_count() <= kHumanValueLimit) {
    std::vector<int> labels(static_cast<std::size_t>(index.agents()));
    auto line = [&](std::size_t s) {
      index.unflatten(s, labels);
      out << "  (" << tuple_key(labels) << ")  " << human(result->value(s)) << '\n';
    };
    if (only) {
      line(*only);
    } else {
      for (std::size_t s = 0; s < index.state_count(); ++s) line(s);
    }
  } else {
    out << "  (value table omitted; use --json or --start)\n";
  }
  out << "max: " << human(result->max()) << '\n';
  out << "mean: " << (mean ? human(*mean) : std::string("undefined")) << '\n';
  out << "residual: " << human(result->residual()) << " (" << result->method() << ")\n";
  const FinitenessCertificate cert = result->certificate();
  if (!cert.all_finite) out << "infinite start states: " << cert.infinite_count << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- simulate

template <class Result>
std::vector<int> worst_start(const Result& result) {
  std::optional<double> best;
  std::size_t arg = 0;
  for (std::size_t s = 0; s < result.state_count(); ++s) {
    const auto v = result.value(s);
    if (v && (!best || *v > *best)) {
      best = v;
      arg = s;
    }
  }
  if (!best) throw ValidationError("--start worst: no start state has a finite meeting time");
  return result.index().unflatten(arg);
}

int cmd_simulate(Options& o, std::ostream& out) {
  const std::size_t budget = resolve_budget(o);
  if (o.start.empty()) throw ValidationError("simulate needs --start (comma-separated labels or 'worst')");
  SimulationOptions sim;
  sim.trials = o.trials;
  sim.horizon = o.horizon;
  sim.seed = o.seed;
  sim.threads = o.threads;
  SolverOptions solver;
  solver.state_budget = budget;

  SimulationEstimate est;
  std::vector<int> start;
  if (o.ctmc) {
    const Agents<RateMatrix> a = ctmc_agents(o);
    const ProductIndex index(a.pursuers.front().size(), o.pursuers, o.evaders, budget);
    start = o.start == "worst" ? worst_start(ctmc_group_meeting_times(a.pursuers, a.evaders, solver))
                               : parse_start(o.start, index);
    est = simulate_ctmc(a.pursuers, a.evaders, start, sim);
  } else {
    const Agents<TransitionMatrix> a = dtmc_agents(o);
    const ProductIndex index(a.pursuers.front().size(), o.pursuers, o.evaders, budget);
    start = o.start == "worst" ? worst_start(group_meeting_times(a.pursuers, a.evaders, solver))
                               : parse_start(o.start, index);
    est = simulate_dtmc(a.pursuers, a.evaders, start, sim);
  }

  json doc = to_json(est);
  doc["start"] = json::array();
  for (int v : start) doc["start"].push_back(v + 1);
  doc["config"] = config_echo(o, budget);
  if (o.json) {
    emit(out, doc);
    return kSuccess;
  }
  print_config(out, doc["config"]);
  out << "start: (" << tuple_key(start) << ")\n";
  if (!est.mean) {
    out << "mean: undefined (all " << est.trials << " trials censored at horizon " << human(est.horizon) << ")\n";
    return kSuccess;
  }
  out << "mean: " << (est.lower_bound_only() ? ">= " : "") << human(*est.mean) << " +- " << human(est.std_error)
      << " (std. error)\n";
  out << "trials: " << est.trials << ", censored: " << est.censored << ", horizon: " << human(est.horizon) << '\n';
  if (est.lower_bound_only()) out << "lower bound only: some trials reached the horizon\n";
  return kSuccess;
}

// ---------------------------------------------------------------- table1

struct Maxima {
  std::optional<double> meeting;
  std::optional<double> hitting;
};

Maxima table_maxima(const Digraph& g, const SolverOptions& solver) {
  const TransitionMatrix p = equal_neighbor_matrix(g, true);
  Maxima m;
  m.meeting = meeting_times(p, p, solver).max();
  if (decompose(p).is_irreducible()) m.hitting = hitting_times(p, solver).maxCoeff();
  return m;
}

json diff_or_null(const std::optional<double>& computed, double published) {
  if (!computed) return nullptr;
  return std::abs(*computed - published);
}

int cmd_table1(Options& o, std::ostream& out) {
  o.self_loops = true;
  const std::size_t budget = resolve_budget(o);
  SolverOptions solver;
  solver.state_budget = budget;
  const bool comparable = o.n == kPublishedNodes;

  json rows = json::array();
  for (const PublishedRow& row : kPublishedRows) {
    GeneratorParams params = generator_params(o);
    const Digraph g = generate(row.family, params);
    const Maxima m = table_maxima(g, solver);
    json r = {{"graph", row.name}, {"m_max", number_or_inf(m.meeting)}, {"h_max", number_or_inf(m.hitting)}};
    if (row.family == Family::lollipop) {
      r["clique"] = o.clique.value_or((o.n + 1) / 2);
      r["tail"] = o.tail.value_or(o.n - r["clique"].get<int>());
    }
    if (row.family == Family::lattice) {
      const int nodes = g.node_count();
      int rows_used = o.rows.value_or(o.cols ? nodes / *o.cols : 0);
      if (rows_used == 0) {
        for (int d = 1; d * d <= nodes; ++d) {
          if (nodes % d == 0) rows_used = d;
        }
      }
      r["rows"] = rows_used;
      r["cols"] = nodes / rows_used;
    }
    if (comparable) {
      r["published_m_max"] = row.m_max;
      r["published_h_max"] = row.h_max;
      r["m_diff"] = diff_or_null(m.meeting, row.m_max);
      r["h_diff"] = diff_or_null(m.hitting, row.h_max);
    } else {
      r["published_m_max"] = r["published_h_max"] = r["m_diff"] = r["h_diff"] = nullptr;
    }
    rows.push_back(r);
  }

  json rgg = json::array();
  for (double radius : o.rgg_radii) {
    const Digraph g = random_geometric_graph(o.n, radius, o.seed);
    const Maxima m = table_maxima(g, solver);
    rgg.push_back({{"graph", "random_geometric"},
                   {"radius", radius},
                   {"seed", o.seed},
                   {"m_max", number_or_inf(m.meeting)},
                   {"h_max", number_or_inf(m.hitting)},
                   {"note", "not comparable to published averages"}});
  }

  json sweep = json::array();
  if (o.lollipop_sweep) {
    for (int c = 1; c <= o.n; ++c) {
      const Maxima m = table_maxima(lollipop_graph(c, o.n - c), solver);
      sweep.push_back({{"clique", c},
                       {"tail", o.n - c},
                       {"m_max", number_or_inf(m.meeting)},
                       {"h_max", number_or_inf(m.hitting)}});
    }
  }

  json doc = {{"config", config_echo(o, budget)}, {"n", o.n}, {"rows", rows}, {"random_geometric", rgg}};
  if (o.lollipop_sweep) doc["lollipop_sweep"] = sweep;
  if (o.json) {
    emit(out, doc);
    return kSuccess;
  }
  print_config(out, doc["config"]);
  auto cell = [](const json& v) -> std::string {
    if (v.is_null()) return "-";
    if (v.is_string()) return v.get<std::string>();
    return human(v.get<double>());
  };
  auto line = [&](const std::string& name, const std::vector<std::string>& cells) {
    out << std::left << std::setw(18) << name << std::right;
    for (const auto& c : cells) out << ' ' << std::setw(12) << c;
  };
  line("graph", {"M_max", "published", "|diff|", "H_max", "published", "|diff|"});
  out << '\n';
  for (const auto& r : rows) {
    std::string name = r["graph"].get<std::string>();
    if (r.contains("clique")) {
      name += "(" + std::to_string(r["clique"].get<int>()) + "," + std::to_string(r["tail"].get<int>()) + ")";
    }
    if (r.contains("rows")) {
      name += "(" + std::to_string(r["rows"].get<int>()) + "x" + std::to_string(r["cols"].get<int>()) + ")";
    }
    line(name, {cell(r["m_max"]), cell(r["published_m_max"]), cell(r["m_diff"]), cell(r["h_max"]),
                cell(r["published_h_max"]), cell(r["h_diff"])});
    out << '\n';
  }
  for (const auto& r : rgg) {
    line("rgg(r=" + human(r["radius"].get<double>()) + ")", {cell(r["m_max"]), "-", "-", cell(r["h_max"]), "-", "-"});
    out << "  not comparable to published averages\n";
  }
  if (o.lollipop_sweep) {
    out << "lollipop sweep (clique + tail = " << o.n << "):\n";
    for (const auto& r : sweep) {
      out << "  clique " << std::setw(2) << r["clique"].get<int>() << "  tail " << std::setw(2)
          << r["tail"].get<int>() << "  M_max " << std::setw(10) << cell(r["m_max"]) << "  H_max " << std::setw(10)
          << cell(r["h_max"]) << '\n';
    }
  }
  return kSuccess;
}

// ---------------------------------------------------------------- wiring

void add_graph_options(CLI::App* app, Options& o) {
  app->add_option("--family", o.family, "Generator: ring, path, star, lollipop, lattice, random_geometric");
  app->add_option("--graph", o.graph_path, "Graph JSON file");
  app->add_option("--n", o.n, "Number of nodes")->capture_default_str();
  app->add_option("--clique", o.clique, "Lollipop clique size");
  app->add_option("--tail", o.tail, "Lollipop tail length");
  app->add_option("--rows", o.rows, "Lattice rows");
  app->add_option("--cols", o.cols, "Lattice columns");
  app->add_option("--radius", o.radius, "Random geometric connection radius");
  app->add_option("--seed", o.seed, "Seed for random graphs and simulation")->capture_default_str();
  app->add_option("--state-budget", o.state_budget, "Maximum product-space size (overrides MEETWALK_STATE_BUDGET)");
  app->add_flag("--json", o.json, "Machine-readable output");
}

void add_chain_options(CLI::App* app, Options& o) {
  app->add_flag("--self-loops", o.self_loops, "Equal-neighbor walk includes each node itself");
  app->add_option("--pursuer-matrix", o.pursuer_files, "Pursuer chain as JSON edge file (repeatable)");
  app->add_option("--evader-matrix", o.evader_files, "Evader chain as JSON edge file (repeatable)");
  app->add_option("--L", o.pursuers, "Number of pursuers")->capture_default_str();
  app->add_option("--M", o.evaders, "Number of evaders")->capture_default_str();
  app->add_flag("--ctmc", o.ctmc, "Continuous time: edge weights are jump rates");
}

int dispatch(Options& o, std::ostream& out, std::ostream& err) {
  if (o.command == "gen") return cmd_gen(o, out, err);
  if (o.command == "analyze") return cmd_analyze(o, out);
  if (o.command == "meet") return cmd_meet(o, out);
  if (o.command == "simulate") return cmd_simulate(o, out);
  return cmd_table1(o, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Expected meeting times of random walkers on digraphs", "meetwalk");
  app.require_subcommand(1);

  CLI::App* gen = app.add_subcommand("gen", "Generate a graph file and optional matrix exports");
  add_graph_options(gen, o);
  gen->add_flag("--self-loops", o.self_loops, "Self-loops in the exported transition matrix");
  gen->add_option("--out", o.out_path, "Graph JSON output path (stdout if omitted)");
  gen->add_option("--transition-csv", o.transition_csv, "Write the equal-neighbor transition matrix as CSV");
  gen->add_option("--rate-csv", o.rate_csv, "Write the rate matrix as CSV");

  CLI::App* analyze = app.add_subcommand("analyze", "Communicating classes and finiteness classification");
  add_graph_options(analyze, o);
  add_chain_options(analyze, o);

  CLI::App* meet = app.add_subcommand("meet", "Exact expected meeting times");
  add_graph_options(meet, o);
  add_chain_options(meet, o);
  meet->add_option("--start", o.start, "Report one start tuple, e.g. 1,2 (pursuers first)");
  meet->add_option("--csv", o.csv_path, "Write the n x n meeting-time matrix as CSV (L = M = 1)");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a meeting time");
  add_graph_options(simulate, o);
  add_chain_options(simulate, o);
  simulate->add_option("--start", o.start, "Start tuple, e.g. 1,2, or 'worst'");
  simulate->add_option("--trials", o.trials, "Number of trials")->capture_default_str();
  simulate->add_option("--horizon", o.horizon, "Step (or time) limit per trial");
  simulate->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();

  CLI::App* table1 = app.add_subcommand("table1", "Worst meeting and hitting times on the standard graphs");
  add_graph_options(table1, o);
  table1->add_option("--rgg-radius", o.rgg_radii, "Also report random geometric graphs with these radii");
  table1->add_flag("--lollipop-sweep", o.lollipop_sweep, "Report every clique/tail split of the lollipop");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidation;
  }
  for (CLI::App* sub : app.get_subcommands()) o.command = sub->get_name();

  try {
    return dispatch(o, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace meetwalk::cli
