#include "adnd/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "adnd/csv_io.hpp"
#include "adnd/eval.hpp"
#include "adnd/model.hpp"
#include "adnd/random.hpp"
#include "adnd/rhss.hpp"
#include "adnd/sampler.hpp"

namespace adnd::cli {

void RunConfig::validate() const {
  hyper().validate();
  trunc().validate();
  if (!(calib_fraction > 0.0 && calib_fraction < 1.0)) {
    throw std::invalid_argument("calib-fraction must lie in (0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (max_sweeps < 1) throw std::invalid_argument("max-sweeps must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel-tol must be positive");
}

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw UsageError("config: bad value for '" + key + "': " + text);
  return v;
}

// Flat `key = value` file; keys are the long flag names without dashes.
void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
      {"eta", [&](auto& k, auto& v) { cfg.eta = parse_number<double>(k, v); }},
      {"gamma", [&](auto& k, auto& v) { cfg.gamma = parse_number<double>(k, v); }},
      {"tau", [&](auto& k, auto& v) { cfg.tau = parse_number<double>(k, v); }},
      {"kh", [&](auto& k, auto& v) { cfg.k_h = parse_number<int>(k, v); }},
      {"ka", [&](auto& k, auto& v) { cfg.k_a = parse_number<int>(k, v); }},
      {"kb", [&](auto& k, auto& v) { cfg.k_b = parse_number<int>(k, v); }},
      {"calib-fraction", [&](auto& k, auto& v) { cfg.calib_fraction = parse_number<double>(k, v); }},
      {"epsilon", [&](auto& k, auto& v) { cfg.epsilon = parse_number<double>(k, v); }},
      {"orientation", [&](auto&, auto& v) { cfg.orientation = parse_orientation(v); }},
      {"seed", [&](auto& k, auto& v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
      {"max-sweeps", [&](auto& k, auto& v) { cfg.max_sweeps = parse_number<int>(k, v); }},
      {"rel-tol", [&](auto& k, auto& v) { cfg.rel_tol = parse_number<double>(k, v); }},
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("config: unknown key '" + key + "'");
    it->second(key, value);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

FittedModel read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model '" + path + "'");
  return load_model(in);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>("epsilons", trim(item)));
  if (out.empty()) throw UsageError("empty epsilon list");
  return out;
}

void write_curve(const std::string& path, const std::string& kind,
                 const std::vector<CurvePoint>& points) {
  auto out = open_out(path);
  out << "# curve: " << kind << "\nx,y\n";
  for (const auto& p : points) out << format_real(p.x) << ',' << format_real(p.y) << '\n';
}

struct Paths {
  std::string train, model, edges, calib, test, out, scores, labels, out_prefix, score_column;
  std::string train_out, calib_out, epsilons = "0.01,0.05,0.1,0.2";
};

struct SynthOptions {
  std::size_t nodes = 30;
  std::size_t edges = 726;
  double anomaly_fraction = 0.0;
  std::uint64_t param_seed = 0;
  bool param_seed_set = false;
};

struct SimOptions {
  std::size_t nodes = 30, n_train = 363, n_calib = 363, n_test = 2000;
  int trials = 20;
};

int cmd_fit(const RunConfig& cfg, const Paths& p, std::ostream& out) {
  const EdgeTable table = read_edge_table(p.train);
  if (table.size() == 0) throw DataError(p.train + ": no edges");
  const EdgeCorpus corpus = intern_edges(table, std::make_shared<NodeVocab>());
  const FittedModel model =
      fit(corpus, cfg.hyper(), cfg.trunc(),
          {cfg.max_sweeps, cfg.rel_tol, derive_seed(cfg.seed, "init")});
  auto file = open_out(p.model);
  save_model(file, model);
  out << "fit: " << corpus.size() << " edges, " << corpus.vocab().size() << " nodes, "
      << model.diagnostics.sweeps << " sweeps, converged=" << (model.diagnostics.converged ? 1 : 0)
      << ", elbo=" << format_real(model.diagnostics.elbo_trace.back()) << '\n';
  return kExitOk;
}

int cmd_score(const Paths& p, std::ostream& out) {
  const FittedModel model = read_model(p.model);
  const EdgeTable table = read_edge_table(p.edges);
  const EdgeCorpus corpus = resolve_edges(table, model.vocab);
  auto file = open_out(p.out);
  file << (table.labels ? "src,dst,alpha,label\n" : "src,dst,alpha\n");
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    file << table.src[n] << ',' << table.dst[n] << ','
         << format_real(nonconformity_score(model, corpus[n]));
    if (table.labels) file << ',' << ((*table.labels)[n] ? '1' : '0');
    file << '\n';
  }
  out << "score: " << corpus.size() << " edges\n";
  return kExitOk;
}

int cmd_detect(const RunConfig& cfg, const Paths& p, std::ostream& out) {
  const FittedModel model = read_model(p.model);
  const EdgeCorpus calib_edges = resolve_edges(read_edge_table(p.calib), model.vocab);
  if (calib_edges.empty()) throw DataError(p.calib + ": no calibration edges");
  const EdgeTable test_table = read_edge_table(p.test);
  const EdgeCorpus test = resolve_edges(test_table, model.vocab);
  const CalibrationScores calib = calibrate(model, calib_edges);

  const std::uint64_t stream = derive_seed(cfg.seed, "detect");
  auto file = open_out(p.out);
  file << "src,dst,alpha,p_value,anomalous\n";
  std::size_t flagged = 0;
  for (std::size_t n = 0; n < test.size(); ++n) {
    const AnomalyVerdict v =
        detect(model, calib, test[n], cfg.epsilon, derive_seed(stream, n), cfg.orientation);
    flagged += v.is_anomalous ? 1 : 0;
    file << test_table.src[n] << ',' << test_table.dst[n] << ',' << format_real(v.alpha) << ','
         << format_real(v.p_value) << ',' << (v.is_anomalous ? 1 : 0) << '\n';
  }
  out << "detect: " << test.size() << " edges, " << flagged << " flagged at epsilon="
      << cfg.epsilon << " (" << to_string(cfg.orientation) << ")\n";
  return kExitOk;
}

int cmd_eval(const Paths& p, bool invert, std::ostream& out) {
  const CsvTable table = read_csv(p.scores);
  std::optional<std::size_t> col;
  if (!p.score_column.empty()) {
    col = table.column(p.score_column);
    if (!col) throw DataError(p.scores + ": no column '" + p.score_column + "'");
  } else {
    for (const char* name : {"p_value", "rhss_score", "score"}) {
      if ((col = table.column(name))) break;
    }
    if (!col) throw DataError(p.scores + ": no score column (use --score-column)");
  }

  std::vector<bool> labels;
  if (!p.labels.empty()) {
    const EdgeTable lt = read_edge_table(p.labels);
    if (!lt.labels) throw DataError(p.labels + ": no label column");
    labels = *lt.labels;
  } else if (auto lc = table.column("label")) {
    for (const auto& row : table.rows) {
      if (row[*lc] != "0" && row[*lc] != "1") throw DataError(p.scores + ": label must be 0 or 1");
      labels.push_back(row[*lc] == "1");
    }
  } else {
    throw DataError(p.scores + ": no labels (add a label column or pass --labels)");
  }
  if (labels.size() != table.rows.size()) throw DataError("labels and scores differ in length");

  std::vector<LabeledScore> entries;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    char* end = nullptr;
    const std::string& cell = table.rows[i][*col];
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') {
      throw DataError(p.scores + ": row " + std::to_string(i + 1) + ": bad score '" + cell + "'");
    }
    entries.push_back({invert ? -v : v, labels[i]});
  }
  const LabeledScores scores(std::move(entries));
  if (scores.anomalies() == 0) throw DataError("no ground-truth anomalies");

  const auto pr = precision_recall_at_k(scores);
  const auto roc = roc_points(scores);
  const double area = auc(roc);

  {
    auto file = open_out(p.out_prefix + "_topk.csv");
    file << "k,precision,recall\n";
    for (const auto& e : pr) file << e.k << ',' << format_real(e.precision) << ',' << format_real(e.recall) << '\n';
  }
  std::vector<CurvePoint> pr_curve;
  for (const auto& e : pr) pr_curve.push_back({e.recall, e.precision});
  write_curve(p.out_prefix + "_pr.csv", "precision_recall", pr_curve);
  write_curve(p.out_prefix + "_roc.csv", "roc", roc);
  out << "auc=" << format_real(area) << '\n';
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg, const Paths& p, const SynthOptions& s, std::ostream& out) {
  if (s.nodes < 1 || s.edges < 1) throw UsageError("synth: --nodes and --edges must be >= 1");
  if (!(s.anomaly_fraction >= 0.0 && s.anomaly_fraction <= 1.0)) {
    throw UsageError("synth: --anomaly-fraction must lie in [0, 1]");
  }
  const std::uint64_t param_seed = s.param_seed_set ? s.param_seed : cfg.seed;
  const PlantedCorpus planted =
      sample_planted(cfg.hyper(), cfg.trunc(), s.nodes, s.edges, s.anomaly_fraction, param_seed,
                     derive_seed(cfg.seed, "synth-edges"));
  EdgeTable table;
  table.labels.emplace();
  const auto& vocab = planted.corpus.vocab();
  for (std::size_t n = 0; n < planted.corpus.size(); ++n) {
    table.src.push_back(vocab.label(planted.corpus[n].sender));
    table.dst.push_back(vocab.label(planted.corpus[n].receiver));
    table.labels->push_back(planted.labels[n]);
  }
  auto file = open_out(p.out);
  write_edge_table(file, table);
  out << "synth: " << table.size() << " edges, " << table.anomaly_count() << " planted anomalies\n";
  return kExitOk;
}

int cmd_split(const RunConfig& cfg, const Paths& p, std::ostream& out) {
  const EdgeTable table = read_edge_table(p.edges);
  std::size_t n_calib = 0;
  const auto order = split_order(table.size(), cfg.calib_fraction, derive_seed(cfg.seed, "split"), n_calib);
  EdgeTable train, calib;
  if (table.labels) {
    train.labels.emplace();
    calib.labels.emplace();
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    EdgeTable& dst = k < n_calib ? calib : train;
    dst.src.push_back(table.src[order[k]]);
    dst.dst.push_back(table.dst[order[k]]);
    if (table.labels) dst.labels->push_back((*table.labels)[order[k]]);
  }
  auto train_file = open_out(p.train_out);
  write_edge_table(train_file, train);
  auto calib_file = open_out(p.calib_out);
  write_edge_table(calib_file, calib);
  out << "split: " << train.size() << " train, " << calib.size() << " calibration\n";
  return kExitOk;
}

int cmd_rhss(const Paths& p, double threshold, std::ostream& out) {
  const EdgeTable train_table = read_edge_table(p.train);
  auto vocab = std::make_shared<NodeVocab>();
  const EdgeCorpus train = intern_edges(train_table, vocab);
  const EdgeTable test_table = read_edge_table(p.test);
  const EdgeCorpus test = resolve_edges(test_table, vocab);
  StreamHistory history;
  history.observe(train);
  auto file = open_out(p.out);
  file << "src,dst,alpha,rhss_score,anomalous\n";
  for (std::size_t n = 0; n < test.size(); ++n) {
    const double s = rhss_score(history, test[n]);
    file << test_table.src[n] << ',' << test_table.dst[n] << ',' << format_real(1.0 - s) << ','
         << format_real(s) << ',' << (s <= threshold ? 1 : 0) << '\n';
  }
  out << "rhss: " << test.size() << " edges scored\n";
  return kExitOk;
}

int cmd_fpr_sim(const RunConfig& cfg, const Paths& p, const SimOptions& s, std::ostream& out) {
  FprSimulationConfig sim;
  sim.hyper = cfg.hyper();
  sim.trunc = cfg.trunc();
  sim.fit = {cfg.max_sweeps, cfg.rel_tol, 0};
  sim.nodes = s.nodes;
  sim.n_train = s.n_train;
  sim.n_calib = s.n_calib;
  sim.n_test = s.n_test;
  sim.trials = s.trials;
  sim.epsilons = parse_list(p.epsilons);
  sim.seed = cfg.seed;
  sim.orientation = cfg.orientation;
  for (double e : sim.epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw UsageError("epsilons must lie in (0, 1)");
  }
  if (s.nodes < 1 || s.n_train < 1 || s.n_calib < 1 || s.n_test < 1 || s.trials < 1) {
    throw UsageError("fpr-sim: sizes and trials must be >= 1");
  }
  const auto report = fpr_simulation(sim);
  auto file = open_out(p.out);
  file << "epsilon,empirical_fpr,stderr,n_test\n";
  for (const auto& r : report) {
    file << format_real(r.epsilon) << ',' << format_real(r.empirical_fpr) << ','
         << format_real(r.std_error) << ',' << r.n_test << '\n';
    out << "epsilon=" << r.epsilon << " fpr=" << r.empirical_fpr << " stderr=" << r.std_error << '\n';
  }
  return kExitOk;
}

void add_model_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--eta", cfg.eta, "Dirichlet concentration of the topic base measure")->capture_default_str();
  sub->add_option("--gamma", cfg.gamma, "Corpus-level DP concentration")->capture_default_str();
  sub->add_option("--tau", cfg.tau, "Sender/receiver DP concentration")->capture_default_str();
  sub->add_option("--kh", cfg.k_h, "Corpus-level truncation")->capture_default_str();
  sub->add_option("--ka", cfg.k_a, "Sender truncation")->capture_default_str();
  sub->add_option("--kb", cfg.k_b, "Receiver truncation")->capture_default_str();
  sub->add_option("--max-sweeps", cfg.max_sweeps, "Coordinate-ascent sweep limit")->capture_default_str();
  sub->add_option("--rel-tol", cfg.rel_tol, "Relative ELBO convergence tolerance")->capture_default_str();
}

void add_orientation(CLI::App* sub, RunConfig& cfg) {
  const std::map<std::string, Orientation> names{{"paper", Orientation::Paper},
                                                 {"power-corrected", Orientation::PowerCorrected}};
  sub->add_option("--orientation", cfg.orientation, "p-value orientation: paper | power-corrected")
      ->transform(CLI::CheckedTransformer(names, CLI::ignore_case));
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) apply_config_file(cfg, args[i + 1]);
      if (args[i].rfind("--config=", 0) == 0) apply_config_file(cfg, args[i].substr(9));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Edge-exchangeable anomaly detection with conformal p-values", "adnd"};
  app.require_subcommand(1, 1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value configuration file");
  app.add_option("--seed", cfg.seed, "Run seed")->capture_default_str();

  Paths p;
  SynthOptions synth;
  SimOptions sim;
  bool invert = false;
  double rhss_threshold = 0.05;

  auto* fit_cmd = app.add_subcommand("fit", "Fit the model on training edges and save it");
  fit_cmd->add_option("--train", p.train, "Training edge CSV")->required();
  fit_cmd->add_option("--model", p.model, "Output model file")->required();
  add_model_options(fit_cmd, cfg);

  auto* score_cmd = app.add_subcommand("score", "Nonconformity score per edge");
  score_cmd->add_option("--model", p.model)->required();
  score_cmd->add_option("--edges", p.edges)->required();
  score_cmd->add_option("--out", p.out)->required();

  auto* detect_cmd = app.add_subcommand("detect", "Conformal anomaly verdict per test edge");
  detect_cmd->add_option("--model", p.model)->required();
  detect_cmd->add_option("--calib", p.calib)->required();
  detect_cmd->add_option("--test", p.test)->required();
  detect_cmd->add_option("--epsilon", cfg.epsilon, "Anomaly threshold")->capture_default_str();
  detect_cmd->add_option("--out", p.out)->required();
  add_orientation(detect_cmd, cfg);

  auto* eval_cmd = app.add_subcommand("eval", "Precision/recall, ROC and AUC from labeled scores");
  eval_cmd->add_option("--scores", p.scores)->required();
  eval_cmd->add_option("--out-prefix", p.out_prefix)->required();
  eval_cmd->add_option("--score-column", p.score_column, "Column holding the score");
  eval_cmd->add_option("--labels", p.labels, "Edge CSV with a label column, row-aligned");
  eval_cmd->add_flag("--invert", invert, "Treat higher scores as more anomalous");

  auto* synth_cmd = app.add_subcommand("synth", "Sample an edge list from the generative model");
  synth_cmd->add_option("--nodes", synth.nodes)->required();
  synth_cmd->add_option("--edges", synth.edges)->required();
  synth_cmd->add_option("--out", p.out)->required();
  synth_cmd->add_option("--anomaly-fraction", synth.anomaly_fraction,
                        "Fraction of edges drawn from an independent parameter draw");
  synth_cmd->add_option("--param-seed", synth.param_seed, "Seed of the parameter draw (default: --seed)")
      ->each([&synth](const std::string&) { synth.param_seed_set = true; });
  add_model_options(synth_cmd, cfg);

  auto* split_cmd = app.add_subcommand("split", "Random train/calibration split of an edge list");
  split_cmd->add_option("--edges", p.edges)->required();
  split_cmd->add_option("--calib-fraction", cfg.calib_fraction)->capture_default_str();
  split_cmd->add_option("--train-out", p.train_out)->required();
  split_cmd->add_option("--calib-out", p.calib_out)->required();

  auto* rhss_cmd = app.add_subcommand("rhss", "RHSS baseline scores against a training history");
  rhss_cmd->add_option("--train", p.train)->required();
  rhss_cmd->add_option("--test", p.test)->required();
  rhss_cmd->add_option("--out", p.out)->required();
  rhss_cmd->add_option("--threshold", rhss_threshold, "Flag edges with score <= threshold")
      ->capture_default_str();

  auto* sim_cmd = app.add_subcommand("fpr-sim", "Empirical false-positive-rate simulation");
  sim_cmd->add_option("--epsilons", p.epsilons)->capture_default_str();
  sim_cmd->add_option("--trials", sim.trials)->capture_default_str();
  sim_cmd->add_option("--nodes", sim.nodes)->capture_default_str();
  sim_cmd->add_option("--n-train", sim.n_train)->capture_default_str();
  sim_cmd->add_option("--n-calib", sim.n_calib)->capture_default_str();
  sim_cmd->add_option("--n-test", sim.n_test)->capture_default_str();
  sim_cmd->add_option("--out", p.out)->required();
  add_orientation(sim_cmd, cfg);
  add_model_options(sim_cmd, cfg);

  // let subcommands accept the global options too
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv{"adnd"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(cfg, p, out);
    if (score_cmd->parsed()) return cmd_score(p, out);
    if (detect_cmd->parsed()) return cmd_detect(cfg, p, out);
    if (eval_cmd->parsed()) return cmd_eval(p, invert, out);
    if (synth_cmd->parsed()) return cmd_synth(cfg, p, synth, out);
    if (split_cmd->parsed()) return cmd_split(cfg, p, out);
    if (rhss_cmd->parsed()) return cmd_rhss(p, rhss_threshold, out);
    if (sim_cmd->parsed()) return cmd_fpr_sim(cfg, p, sim, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace adnd::cli
