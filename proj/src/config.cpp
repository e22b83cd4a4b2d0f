#include "hidnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hidnet/error.hpp"

namespace hidnet {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"seed", "0", "master seed; --seed overrides"},
      {"output", "-", "output file, '-' for stdout"},
      {"exec", "parallel", "kernel execution path: parallel or serial"},
      // data
      {"dataset", "", "dataset directory; empty generates the synthetic SBM"},
      {"edges", "", "edge list for propagate/attack/similarity without a dataset"},
      {"features", "", "feature matrix for propagate/attack without a dataset"},
      {"labels", "", "label file for similarity without a dataset"},
      {"synthetic.n", "600", "SBM node count"},
      {"synthetic.classes", "3", "SBM blocks / classes"},
      {"synthetic.p_in", "0.05", "within-block edge probability"},
      {"synthetic.p_out", "0.01", "between-block edge probability"},
      {"synthetic.feature_dim", "16", "feature dimension"},
      {"synthetic.signal", "1.0", "distance between class means"},
      {"synthetic.train_per_class", "20", "training nodes per class"},
      {"synthetic.val_per_class", "30", "validation nodes per class"},
      // propagation
      {"mode", "hid", "hid, sgc, appnp, gat, amp or dagnn"},
      {"alpha", "0.1", "fidelity weight"},
      {"beta", "0.9", "diffusion weight"},
      {"gamma", "0.3", "second-order share"},
      {"dt", "0.8", "step size"},
      {"steps", "10", "propagation steps"},
      {"appnp.eta", "0.1", "teleport probability"},
      {"amp.eps", "0.1", "AMP step size"},
      {"amp.lambda", "0.5", "AMP balance"},
      {"dagnn.retainment", "0.5,0.25,0.25", "combination weights s_0..s_K"},
      // training
      {"lr", "0.01", "Adam learning rate"},
      {"weight_decay", "5e-4", "L2 penalty on weights"},
      {"epochs", "1000", "maximum epochs"},
      {"patience", "100", "early-stopping patience"},
      {"hidden", "64", "hidden units"},
      {"dropout", "0.5", "dropout rate"},
      {"repeats", "5", "independent runs per setting"},
      {"history", "", "optional training-history CSV (train)"},
      {"checkpoint", "", "optional checkpoint path (train)"},
      // verify
      {"verify.target", "walk", "walk or kernel"},
      {"verify.cycle_nodes", "12", "cycle length used when no edge list is given"},
      {"verify.root", "0", "walk root"},
      {"verify.trials", "1000000", "Monte Carlo walkers"},
      // attacks and sweeps
      {"attack.kind", "edge_add", "edge_add, edge_delete or feature_noise"},
      {"attack.rate", "0.1", "edge fraction or noise ratio"},
      {"sweep.k", "0,2,4,8,16,20", "propagation depths for oversmooth"},
      {"robust.rates", "0,0.05,0.1,0.2,0.3,0.4", "attack rates for robustness"},
      // bench
      {"bench.n", "1000,2000,4000,8000", "graph sizes"},
      {"bench.avg_degree", "8", "average degree of the random graphs"},
      {"bench.feature_dim", "32", "feature columns"},
      {"bench.steps", "10", "timed steps per size"},
      {"bench.reps", "3", "repetitions; the fastest is kept"},
  };
  return keys;
}

namespace {

const ConfigKey* find_key(const std::string& key) {
  const auto& keys = config_keys();
  auto it = std::find_if(keys.begin(), keys.end(), [&](const ConfigKey& k) { return key == k.key; });
  return it == keys.end() ? nullptr : &*it;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::Parse, "config key '" + key + "': cannot parse '" + text + "'");
  }
  return v;
}

}  // namespace

Config Config::parse(std::istream& in) {
  std::vector<std::string> lines, header;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("#@", 0) == 0) header.push_back(line.substr(2));
    lines.push_back(line);
  }
  Config c;
  const auto& source = header.empty() ? lines : header;
  for (std::size_t i = 0; i < source.size(); ++i) {
    std::string line = source[i];
    if (header.empty()) line = line.substr(0, line.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Parse, "config line " + std::to_string(i + 1) + ": expected key = value");
    }
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
  return parse(in);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
  values_[key] = value;
}

std::string Config::get(const std::string& key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  const ConfigKey* k = find_key(key);
  if (!k) throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
  return k->default_value;
}

double Config::get_double(const std::string& key) const {
  return parse_number<double>(key, get(key));
}

std::int64_t Config::get_int(const std::string& key) const {
  return parse_number<std::int64_t>(key, get(key));
}

std::uint64_t Config::get_uint(const std::string& key) const {
  return parse_number<std::uint64_t>(key, get(key));
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(get(key))) out.push_back(parse_number<double>(key, item));
  return out;
}

std::vector<std::int64_t> Config::get_ints(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(get(key))) out.push_back(parse_number<std::int64_t>(key, item));
  return out;
}

std::map<std::string, std::string> Config::resolved() const {
  std::map<std::string, std::string> out;
  for (const auto& k : config_keys()) out[k.key] = get(k.key);
  return out;
}

void Config::write_header(std::ostream& out) const {
  for (const auto& [k, v] : resolved()) out << "#@ " << k << " = " << v << '\n';
}

DiffusionConfig diffusion_config(const Config& c) {
  DiffusionConfig cfg;
  cfg.alpha = c.get_double("alpha");
  cfg.beta = c.get_double("beta");
  cfg.gamma = c.get_double("gamma");
  cfg.dt = c.get_double("dt");
  cfg.steps = static_cast<int>(c.get_int("steps"));
  const std::string mode = c.get("mode");
  if (mode == "hid") cfg.mode = HidMode{};
  else if (mode == "sgc") cfg.mode = SgcMode{};
  else if (mode == "appnp") cfg.mode = AppnpMode{c.get_double("appnp.eta")};
  else if (mode == "amp") cfg.mode = AmpMode{c.get_double("amp.eps"), c.get_double("amp.lambda")};
  else if (mode == "dagnn") cfg.mode = DagnnMode{c.get_doubles("dagnn.retainment")};
  else if (mode == "gat") cfg.mode = GatMode{};  // attention is filled in from the graph
  else throw Error(ErrorKind::InvalidArgument, "unknown mode '" + mode + "'");
  return cfg;
}

TrainConfig train_config(const Config& c) {
  TrainConfig t;
  t.learning_rate = c.get_double("lr");
  t.weight_decay = c.get_double("weight_decay");
  t.epochs = static_cast<int>(c.get_int("epochs"));
  t.patience = static_cast<int>(c.get_int("patience"));
  t.hidden = static_cast<int>(c.get_int("hidden"));
  t.dropout = c.get_double("dropout");
  t.seed = c.get_uint("seed");
  return t;
}

SyntheticSpec synthetic_spec(const Config& c) {
  SyntheticSpec s;
  s.n = static_cast<Index>(c.get_int("synthetic.n"));
  s.classes = static_cast<int>(c.get_int("synthetic.classes"));
  s.p_in = c.get_double("synthetic.p_in");
  s.p_out = c.get_double("synthetic.p_out");
  s.feature_dim = static_cast<Index>(c.get_int("synthetic.feature_dim"));
  s.signal = c.get_double("synthetic.signal");
  s.train_per_class = static_cast<int>(c.get_int("synthetic.train_per_class"));
  s.val_per_class = static_cast<int>(c.get_int("synthetic.val_per_class"));
  s.seed = c.get_uint("seed");
  return s;
}

}  // namespace hidnet
