// hidnet command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>

#include "hidnet/config.hpp"
#include "hidnet/error.hpp"
#include "hidnet/experiments.hpp"
#include "hidnet/homophily.hpp"
#include "hidnet/kernels.hpp"
#include "hidnet/matrix_io.hpp"
#include "hidnet/random_walk.hpp"
#include "hidnet/rng.hpp"

using namespace hidnet;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

Config load_config(const Options& o) {
  Config c = o.config_path.empty() ? Config{} : Config::parse_file(o.config_path);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parse, "--set expects key=value, got " + kv);
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed_given) c.set("seed", std::to_string(o.seed));
  const std::string exec = c.get("exec");
  if (exec == "serial") set_default_exec(Exec::Serial);
  else if (exec == "parallel") set_default_exec(Exec::Parallel);
  else throw Error(ErrorKind::InvalidArgument, "exec must be serial or parallel");
  return c;
}

// Output sink that honours `output = -`.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::Io, "cannot write " + path);
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

DatasetBundle load_data(const Config& c) {
  if (!c.get("dataset").empty()) return load_dataset(c.get("dataset"));
  return generate_synthetic(synthetic_spec(c));
}

Graph load_graph(const Config& c) {
  if (!c.get("dataset").empty() || c.get("edges").empty()) return load_data(c).graph;
  const auto edges = read_edge_list(c.get("edges"));
  Index n = 0;
  if (!c.get("features").empty()) {
    n = static_cast<Index>(read_matrix(c.get("features")).rows());
  } else {
    for (const auto& e : edges) n = std::max({n, e.u + 1, e.v + 1});
  }
  return build_graph(edges, n);
}

Graph cycle_graph(Index n) {
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return build_graph(edges, n);
}

ExperimentConfig experiment_config(const Config& c) {
  ExperimentConfig e;
  e.diffusion = diffusion_config(c);
  e.train = train_config(c);
  e.repeats = static_cast<int>(c.get_int("repeats"));
  return e;
}

void cmd_verify(const Config& c) {
  const std::string target = c.get("verify.target");
  if (target != "walk" && target != "kernel") {
    throw Error(ErrorKind::InvalidArgument, "verify.target must be walk or kernel");
  }
  Sink sink(c.get("output"));
  auto& out = sink.out();
  c.write_header(out);
  DiffusionConfig cfg = diffusion_config(c);
  cfg.mode = HidMode{};
  const Graph g = c.get("edges").empty() && c.get("dataset").empty()
                      ? cycle_graph(static_cast<Index>(c.get_int("verify.cycle_nodes")))
                      : load_graph(c);
  out << std::setprecision(12);
  if (target == "walk") {
    const auto root = static_cast<Index>(c.get_int("verify.root"));
    const auto freq = monte_carlo_estimate(g, cfg, root, cfg.steps, c.get_int("verify.trials"),
                                           c.get_uint("seed"));
    const auto kernel = build_kernel(normalize(g), cfg);
    out << "node,empirical_freq,kernel_prob,abs_err\n";
    for (Index i = 0; i < g.num_nodes(); ++i) {
      const double p = kernel.h(i, root);
      out << i << ',' << freq[i] << ',' << p << ',' << std::abs(freq[i] - p) << '\n';
    }
  } else if (target == "kernel") {
    const NormalizedOperator op = normalize(g);
    FeatureMatrix x0 = c.get("features").empty()
                           ? FeatureMatrix(FeatureMatrix::Identity(g.num_nodes(), g.num_nodes()))
                           : read_matrix(c.get("features"));
    out << "check,value\n";
    out << "kernel_max_deviation," << expectation_equivalence(op, cfg, x0, cfg.steps) << '\n';
    const FeatureMatrix y = steady_state(x0, op, cfg);
    out << "euler_lagrange_residual,"
        << euler_lagrange_residual(y, x0, op, cfg).cwiseAbs().maxCoeff() << '\n';
  }
}

void cmd_similarity(const Config& c) {
  Graph g;
  LabelVector labels;
  if (!c.get("dataset").empty() || c.get("labels").empty()) {
    auto data = load_data(c);
    g = std::move(data.graph);
    labels = std::move(data.split.labels);
  } else {
    std::ifstream in(c.get("labels"));
    if (!in) throw Error(ErrorKind::Io, "cannot open " + c.get("labels"));
    for (int y; in >> y;) labels.y.push_back(y);
    labels.num_classes = labels.y.empty() ? 0 : *std::max_element(labels.y.begin(), labels.y.end()) + 1;
    const auto edges = read_edge_list(c.get("edges"));
    g = build_graph(edges, static_cast<Index>(labels.y.size()));
  }
  const auto r = similarity_report(g, labels);
  Sink sink(c.get("output"));
  c.write_header(sink.out());
  sink.out() << std::setprecision(6) << "h1,h2,h12\n" << r.h1 << ',' << r.h2 << ',' << r.h12 << '\n';
}

void cmd_propagate(const Config& c) {
  Graph g;
  FeatureMatrix x;
  if (!c.get("dataset").empty() || c.get("features").empty()) {
    auto data = load_data(c);
    g = std::move(data.graph);
    x = std::move(data.features);
  } else {
    x = read_matrix(c.get("features"));
    g = build_graph(read_edge_list(c.get("edges")), static_cast<Index>(x.rows()));
  }
  const auto cfg = bind_mode(diffusion_config(c), g);
  const FeatureMatrix y = propagate(x, normalize(g), cfg);
  Sink sink(c.get("output"));
  write_matrix(sink.out(), y);
}

void cmd_train(const Config& c) {
  const auto data = load_data(c);
  const auto e = experiment_config(c);
  const auto summary = run_node_classification(data, e);
  Sink sink(c.get("output"));
  auto& out = sink.out();
  c.write_header(out);
  out << std::setprecision(6) << "run,accuracy,f1_macro,f1_micro,auc\n";
  for (std::size_t r = 0; r < summary.runs.size(); ++r) {
    const auto& m = summary.runs[r];
    out << r << ',' << m.accuracy << ',' << m.f1_macro << ',' << m.f1_micro << ',' << m.auc << '\n';
  }
  out << "mean," << summary.mean_accuracy << ',' << summary.mean_f1_macro << ','
      << summary.mean_f1_micro << ',' << summary.mean_auc << '\n';
  out << "std," << summary.std_accuracy << ",," << summary.std_f1_micro << ",\n";

  if (!c.get("history").empty() || !c.get("checkpoint").empty()) {
    // Replays run 0, which is deterministic given the seed.
    const NormalizedOperator op = normalize(data.graph);
    const auto cfg = bind_mode(e.diffusion, data.graph);
    TrainConfig tc = e.train;
    tc.seed = Rng::derive(e.train.seed, 0);
    const auto result = train(data.features, op, data.split, cfg, tc);
    if (!c.get("history").empty()) {
      std::ofstream h(c.get("history"));
      if (!h) throw Error(ErrorKind::Io, "cannot write " + c.get("history"));
      c.write_header(h);
      write_history_csv(h, result.history);
    }
    if (!c.get("checkpoint").empty()) save_checkpoint(c.get("checkpoint"), result.params, cfg, tc);
  }
}

void cmd_attack(const Config& c) {
  const AttackKind kind = parse_attack_kind(c.get("attack.kind"));
  const double rate = c.get_double("attack.rate");
  const std::uint64_t seed = c.get_uint("seed");
  const std::string output = c.get("output");
  Sink sink(output);
  nlohmann::json manifest = {{"kind", to_string(kind)}, {"rate", rate}, {"seed", seed}};
  if (kind == AttackKind::FeatureNoise) {
    const FeatureMatrix x = c.get("dataset").empty() && !c.get("features").empty()
                                ? read_matrix(c.get("features"))
                                : load_data(c).features;
    write_matrix(sink.out(), attack_features(x, rate, seed));
    manifest["achieved"] = x.size();
  } else {
    const auto res = attack_edges(load_graph(c), {kind, rate, seed});
    write_edge_list(sink.out(), res.graph);
    manifest["requested"] = res.requested;
    manifest["achieved"] = res.achieved;
    manifest["feasible"] = res.feasible;
  }
  if (output == "-") {
    std::cerr << manifest.dump() << '\n';
  } else {
    std::ofstream m(output + ".manifest.jsonl", std::ios::app);
    if (!m) throw Error(ErrorKind::Io, "cannot write manifest for " + output);
    m << manifest.dump() << '\n';
  }
}

void cmd_oversmooth(const Config& c) {
  std::vector<int> ks;
  for (auto k : c.get_ints("sweep.k")) ks.push_back(static_cast<int>(k));
  const auto rows = run_oversmoothing_sweep(load_data(c), experiment_config(c), ks);
  Sink sink(c.get("output"));
  c.write_header(sink.out());
  write_sweep_csv(sink.out(), "k", rows);
}

void cmd_robustness(const Config& c) {
  const auto rows = run_robustness_curve(load_data(c), experiment_config(c),
                                         parse_attack_kind(c.get("attack.kind")),
                                         c.get_doubles("robust.rates"));
  Sink sink(c.get("output"));
  c.write_header(sink.out());
  write_sweep_csv(sink.out(), "rate", rows);
}

void cmd_bench(const Config& c) {
  std::vector<Index> ns;
  for (auto n : c.get_ints("bench.n")) ns.push_back(static_cast<Index>(n));
  const auto rows = bench_propagation(ns, c.get_double("bench.avg_degree"),
                                      static_cast<Index>(c.get_int("bench.feature_dim")),
                                      static_cast<int>(c.get_int("bench.steps")),
                                      static_cast<int>(c.get_int("bench.reps")), c.get_uint("seed"));
  Sink sink(c.get("output"));
  c.write_header(sink.out());
  write_bench_csv(sink.out(), rows);
  if (rows.size() >= 2) sink.out() << "# exponent " << scaling_exponent(rows) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hidnet: high-order diffusion message passing"};
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
    void (*fn)(const Config&);
  };
  const std::vector<Command> commands = {
      {"verify", "Monte Carlo walk vs kernel column, or kernel self-checks", cmd_verify},
      {"similarity", "1-hop, 2-hop and combined monophily scores", cmd_similarity},
      {"propagate", "propagate node features and write the result", cmd_propagate},
      {"train", "train and evaluate the node classifier", cmd_train},
      {"attack", "perturb a graph or its features", cmd_attack},
      {"oversmooth", "accuracy against propagation depth", cmd_oversmooth},
      {"robustness", "accuracy against attack rate", cmd_robustness},
      {"bench", "time propagation steps on random sparse graphs", cmd_bench},
  };
  std::string keys = "Config keys (key = default: help):\n";
  for (const auto& k : config_keys())
    keys += std::string("  ") + k.key + " = " + k.default_value + ": " + k.help + "\n";
  app.footer(keys);

  void (*selected)(const Config&) = nullptr;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", opt.overrides, "override a config key (key=value)");
    sub->add_option("--seed", opt.seed, "override the seed");
    sub->callback([&selected, fn = fn] { selected = fn; });
  }
  CLI11_PARSE(app, argc, argv);
  for (auto* sub : app.get_subcommands())
    opt.seed_given = sub->count("--seed") > 0;

  try {
    selected(load_config(opt));
  } catch (const Error& e) {
    std::cerr << "error:" << to_string(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
