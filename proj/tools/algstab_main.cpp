// Experiment driver: stabilize single matrices, sweep stability curves, run
// sequence-model corrections and universal-norm estimation, with
// reproducible seeded output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "algstab/errors.hpp"
#include "algstab/io.hpp"
#include "algstab/lifter.hpp"
#include "algstab/matcore.hpp"
#include "algstab/normest.hpp"
#include "algstab/parallel.hpp"
#include "algstab/seqmodel.hpp"
#include "algstab/sweep.hpp"

namespace {

using algstab::BasinError;
using algstab::ValidationError;
using nlohmann::json;

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("ALGSTAB_LOG");
  if (!env) return LogLevel::Error;
  const std::string v(env);
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Error;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "[info] " << msg << "\n";
}

struct CommonOpts {
  std::string poly;
  std::string out;
  std::string format = "csv";
  bool deterministic = false;
  int jobs = 1;
  double stol = 0.0;
  double tau = 0.0;
  double captol = algstab::kCaptol;
  double seqtol = algstab::kSeqtol;
};

algstab::StabilizeOptions to_stabilize_opts(const CommonOpts& c) {
  algstab::StabilizeOptions o;
  o.stol = c.stol;
  o.tau = c.tau;
  o.captol = c.captol;
  return o;
}

json config_json(const CommonOpts& c, json extra) {
  json cfg = std::move(extra);
  cfg["format"] = c.format;
  cfg["deterministic"] = c.deterministic;
  cfg["jobs"] = c.jobs;
  cfg["stol"] = c.stol;
  cfg["tau"] = c.tau;
  cfg["captol"] = c.captol;
  cfg["seqtol"] = c.seqtol;
  if (!c.poly.empty()) cfg["poly"] = c.poly;
  return cfg;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open output file " + path);
  f << text;
}

// Rows are emitted as CSV (one `# config` comment line) or a JSON array,
// depending on --format.
struct Table {
  std::vector<std::string> columns;
  std::vector<json> rows;

  std::string render(const CommonOpts& c, const json& cfg) const {
    if (c.format == "json") {
      json doc;
      doc["config"] = cfg;
      if (!c.deterministic) doc["timestamp"] = timestamp();
      doc["rows"] = rows;
      return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    json hdr = cfg;
    if (!c.deterministic) hdr["timestamp"] = timestamp();
    out << "# config " << hdr.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << columns[i];
    out << "\n";
    out.precision(17);
    for (const json& row : rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ",";
        const json& v = row.at(columns[i]);
        if (v.is_number_float())
          out << v.get<double>();
        else if (v.is_number_unsigned())
          out << v.get<unsigned long long>();
        else if (v.is_number_integer())
          out << v.get<long long>();
        else
          out << v.get<std::string>();
      }
      out << "\n";
    }
    return out.str();
  }
};

int run_stabilize(const CommonOpts& common, const std::string& input, double C) {
  algstab::Polynomial p = algstab::parse_polynomial_arg(common.poly);
  algstab::Mat X = algstab::load_matrix(input);
  log_info("stabilizing " + std::to_string(X.rows()) + "x" +
           std::to_string(X.cols()) + " input");
  algstab::StabilizationReport rep =
      algstab::stabilize(X, p, C, to_stabilize_opts(common));

  json doc;
  doc["config"] = config_json(common, {{"subcommand", "stabilize"},
                                       {"in", input},
                                       {"C", C}});
  if (!common.deterministic) doc["timestamp"] = timestamp();
  doc["regime"] = algstab::regime_name(rep.regime);
  doc["residual_before"] = rep.residual_before;
  doc["residual_after"] = rep.residual_after;
  doc["distance"] = rep.distance;
  doc["norm_before"] = rep.norm_before;
  doc["norm_after"] = rep.norm_after;
  doc["cond_s"] = rep.cond_s;
  doc["cap_factor"] = rep.cap_factor;
  doc["output"] = algstab::matrix_to_json(rep.output);
  write_text(common.out, doc.dump(2) + "\n");
  return 0;
}

int run_curve(const CommonOpts& common, int dim, const std::string& eps_range,
              int steps, int trials, std::uint64_t seed, double headroom,
              double cond_cap) {
  algstab::Polynomial p = algstab::parse_polynomial_arg(common.poly);

  const auto sep = eps_range.find("..");
  if (sep == std::string::npos)
    throw ValidationError("--eps expects the form <lo>..<hi>");
  const double lo = std::stod(eps_range.substr(0, sep));
  const double hi = std::stod(eps_range.substr(sep + 2));
  if (steps <= 0)
    steps = static_cast<int>(std::lround(std::log10(hi / lo))) + 1;

  algstab::CurveConfig cfg;
  cfg.dim = dim;
  cfg.eps_grid = algstab::geometric_grid(lo, hi, steps);
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.headroom = headroom;
  cfg.cond_cap = cond_cap;
  cfg.jobs = common.jobs;
  cfg.opts = to_stabilize_opts(common);
  log_info("curve sweep: " + std::to_string(cfg.eps_grid.size()) + " x " +
           std::to_string(trials) + " trials");
  auto rows = algstab::run_curve(p, cfg);

  Table t;
  t.columns = {"eps", "trial", "refused", "distance", "residual_after",
               "norm_after", "C"};
  for (const auto& r : rows)
    t.rows.push_back({{"eps", r.eps},
                      {"trial", r.trial},
                      {"refused", r.refused ? 1 : 0},
                      {"distance", r.distance},
                      {"residual_after", r.residual_after},
                      {"norm_after", r.norm_after},
                      {"C", r.bound}});
  json cfgj = config_json(common, {{"subcommand", "curve"},
                                   {"dim", dim},
                                   {"eps", eps_range},
                                   {"steps", steps},
                                   {"trials", trials},
                                   {"seed", seed},
                                   {"headroom", headroom},
                                   {"cond_cap", cond_cap}});
  write_text(common.out, t.render(common, cfgj));
  return 0;
}

int run_calkin(const CommonOpts& common, const std::string& input, int window) {
  algstab::Polynomial p = algstab::parse_polynomial_arg(common.poly);
  algstab::MatSeq s = algstab::load_matseq(input);

  algstab::CompactCorrectOptions opts;
  opts.stabilize = to_stabilize_opts(common);
  opts.window = window;
  opts.jobs = common.jobs;
  opts.seqtol = common.seqtol;
  auto [corrected, compact, rep] = algstab::compact_correct(s, p, opts);
  (void)corrected;
  (void)compact;

  Table t;
  t.columns = {"k", "residual_before", "correction_norm", "corrected_norm",
               "residual_after", "corrected"};
  for (const auto& tc : rep.terms)
    t.rows.push_back({{"k", tc.index},
                      {"residual_before", tc.residual_before},
                      {"correction_norm", tc.correction_norm},
                      {"corrected_norm", tc.corrected_norm},
                      {"residual_after", tc.residual_after},
                      {"corrected", tc.corrected ? 1 : 0}});
  json cfgj = config_json(common,
                          {{"subcommand", "calkin"},
                           {"in", input},
                           {"window", rep.window},
                           {"essential_before", rep.essential_before},
                           {"essential_after", rep.essential_after},
                           {"essential_norm_drift", rep.essential_norm_drift},
                           {"trailing_max_correction", rep.trailing_max_correction},
                           {"holder_ratio", rep.holder_ratio},
                           {"all_corrected", rep.all_corrected}});
  write_text(common.out, t.render(common, cfgj));
  log_info("essential norm " + std::to_string(rep.essential_before) + " -> " +
           std::to_string(rep.essential_after));
  return 0;
}

int run_normest(const CommonOpts& common, const std::string& word,
                const std::string& dims_arg, int trials, std::uint64_t seed,
                double cond_cap) {
  algstab::Polynomial p = algstab::parse_polynomial_arg(common.poly);
  algstab::NCPoly q = algstab::NCPoly::parse(word);

  std::vector<int> dims;
  const auto sep = dims_arg.find("..");
  if (sep != std::string::npos) {
    const int lo = std::stoi(dims_arg.substr(0, sep));
    const int hi = std::stoi(dims_arg.substr(sep + 2));
    for (int d = lo; d <= hi; ++d) dims.push_back(d);
  } else {
    std::stringstream ss(dims_arg);
    std::string item;
    while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
  }
  if (dims.empty()) throw ValidationError("--dims produced an empty list");

  algstab::NormEstimate est =
      algstab::estimate_norm(q, p, dims, trials, seed, common.jobs, cond_cap);

  Table t;
  t.columns = {"dim", "trials", "best", "argmax_seed"};
  for (const auto& de : est.per_dim)
    t.rows.push_back({{"dim", de.dim},
                      {"trials", de.trials},
                      {"best", de.best},
                      {"argmax_seed", de.argmax_seed}});
  json cfgj = config_json(common, {{"subcommand", "normest"},
                                   {"q", word},
                                   {"dims", dims_arg},
                                   {"trials", trials},
                                   {"seed", seed},
                                   {"cond_cap", cond_cap},
                                   {"lower_bound", est.lower_bound}});
  write_text(common.out, t.render(common, cfgj));
  log_info("lower bound " + std::to_string(est.lower_bound));
  return 0;
}

int run_inspect(const CommonOpts& common, const std::string& input) {
  algstab::Polynomial p = algstab::parse_polynomial_arg(common.poly);
  algstab::Mat X = algstab::load_matrix(input);
  algstab::SpectralData sd = algstab::spectral_data(X, p, common.stol);
  algstab::SpectralResiduals res = algstab::spectral_residuals(sd, p);

  json doc;
  doc["config"] = config_json(common, {{"subcommand", "inspect"}, {"in", input}});
  if (!common.deterministic) doc["timestamp"] = timestamp();
  doc["regime"] = algstab::regime_name(algstab::classify(p));
  doc["spectral"] = algstab::spectral_data_to_json(sd);
  doc["residuals"] = {{"idempotent_sum", res.idempotent_sum},
                      {"idempotent_cross_max", res.idempotent_cross_max},
                      {"projection_defect", res.projection_defect},
                      {"projection_sum", res.projection_sum},
                      {"corner_offdiag", res.corner_offdiag},
                      {"corner_annihilation", res.corner_annihilation}};

  // Corner chains, where the multiple-root construction defines them.
  if (algstab::classify(p) == algstab::Regime::AllMultiple) {
    json chains = json::array();
    const algstab::Mat& c = sd.similarity_image;
    for (int i = 0; i < p.num_roots(); ++i) {
      const auto& rf = p.roots()[static_cast<std::size_t>(i)];
      const algstab::Mat& proj = sd.projections[static_cast<std::size_t>(i)];
      algstab::Mat corner =
          proj * (c - rf.root * algstab::Mat::Identity(c.rows(), c.cols())) * proj;
      json entry;
      entry["root"] = {{"re", rf.root.real()}, {"im", rf.root.imag()}};
      try {
        algstab::ChainOptions copts;
        copts.tau = common.tau;
        entry["chain"] = algstab::nil_chain_to_json(
            algstab::build_chain(corner, rf.multiplicity, copts));
      } catch (const BasinError& e) {
        entry["chain_error"] = e.what();
      }
      chains.push_back(std::move(entry));
    }
    doc["chains"] = std::move(chains);
  }
  write_text(common.out, doc.dump(2) + "\n");
  return 0;
}

int run_sample(const CommonOpts& common, int dim, std::uint64_t seed,
               double cond_cap) {
  algstab::Polynomial p = algstab::parse_polynomial_arg(common.poly);
  algstab::RepSample s = algstab::sample_representation(p, dim, seed, cond_cap);
  log_info("sample: ||p(X)|| = " + std::to_string(s.relation_residual) +
           ", ||X|| = " + std::to_string(s.norm));
  if (common.out.empty())
    std::cout << algstab::matrix_to_json(s.X).dump(2) << "\n";
  else
    algstab::save_matrix(common.out, s.X);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Eigen::setNbThreads(1);  // trial-level parallelism only, keeps runs seed-stable

  CLI::App app{"algstab: exact stabilization of polynomial matrix relations"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CommonOpts common;
  app.add_option("--format", common.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--deterministic", common.deterministic,
               "Suppress timestamps so equal seeds give byte-identical output");
  app.add_option("--jobs", common.jobs,
                 "Worker threads for sweeps (0 = all hardware threads)");
  app.add_option("--stol", common.stol, "Spectral data tolerance override");
  app.add_option("--tau", common.tau, "Chain threshold override");
  app.add_option("--captol", common.captol, "Relative slack on the norm bound");
  app.add_option("--seqtol", common.seqtol, "Essential-norm matching tolerance");
  app.add_option("-o,--out", common.out, "Output file (default: stdout)");

  // stabilize
  auto* cs = app.add_subcommand("stabilize", "Stabilize one matrix");
  std::string in_path;
  double C = 1.0;
  cs->add_option("--poly", common.poly, "Polynomial (inline JSON or path)")
      ->required();
  cs->add_option("--in", in_path, "Input matrix (.json or .bin)")->required();
  cs->add_option("--C", C, "Norm bound")->required();

  // curve
  auto* cc = app.add_subcommand("curve", "Stability-curve sweep");
  int dim = 8, steps = 0, trials = 20;
  std::uint64_t seed = 0;
  double headroom = 1.25, cond_cap = 2.0;
  std::string eps_range = "1e-6..1e-1";
  cc->add_option("--poly", common.poly, "Polynomial (inline JSON or path)")
      ->required();
  cc->add_option("--dim", dim, "Matrix dimension");
  cc->add_option("--eps", eps_range, "Noise grid <lo>..<hi> (geometric)");
  cc->add_option("--steps", steps, "Grid points (default: one per decade)");
  cc->add_option("--trials", trials, "Trials per grid point");
  cc->add_option("--seed", seed, "Master seed");
  cc->add_option("--headroom", headroom, "C = headroom * max(1, ||X0||)");
  cc->add_option("--cond-cap", cond_cap, "Similarity conditioning of solutions");

  // calkin
  auto* ck = app.add_subcommand("calkin", "Compact-correct a matrix sequence");
  std::string seq_path;
  int window = 0;
  ck->add_option("--poly", common.poly, "Polynomial (inline JSON or path)")
      ->required();
  ck->add_option("--in", seq_path, "Input sequence JSON")->required();
  ck->add_option("--window", window, "Trailing window (default: L/3)");

  // normest
  auto* cn = app.add_subcommand("normest", "Universal-norm lower bounds");
  std::string word = "x", dims_arg = "2..8";
  int ne_trials = 100;
  std::uint64_t ne_seed = 0;
  double ne_cond = 10.0;
  cn->add_option("--poly", common.poly, "Polynomial (inline JSON or path)")
      ->required();
  cn->add_option("-q,--word", word, "Polynomial in x, x* (e.g. \"x + x*\")");
  cn->add_option("--dims", dims_arg, "Dimensions: <lo>..<hi> or comma list");
  cn->add_option("--trials", ne_trials, "Trials per dimension");
  cn->add_option("--seed", ne_seed, "Master seed");
  cn->add_option("--cond-cap", ne_cond, "Similarity conditioning cap");

  // inspect
  auto* ci = app.add_subcommand("inspect",
                                "Dump spectral data and corner chains as JSON");
  std::string inspect_path;
  ci->add_option("--poly", common.poly, "Polynomial (inline JSON or path)")
      ->required();
  ci->add_option("--in", inspect_path, "Input matrix (.json or .bin)")->required();

  // sample
  auto* cp = app.add_subcommand("sample", "Emit one exact representation");
  int sdim = 4;
  std::uint64_t sseed = 0;
  double scond = 10.0;
  cp->add_option("--poly", common.poly, "Polynomial (inline JSON or path)")
      ->required();
  cp->add_option("--dim", sdim, "Dimension");
  cp->add_option("--seed", sseed, "Seed");
  cp->add_option("--cond-cap", scond, "Similarity conditioning cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cs->parsed()) return run_stabilize(common, in_path, C);
    if (cc->parsed())
      return run_curve(common, dim, eps_range, steps, trials, seed, headroom,
                       cond_cap);
    if (ck->parsed()) return run_calkin(common, seq_path, window);
    if (cn->parsed())
      return run_normest(common, word, dims_arg, ne_trials, ne_seed, ne_cond);
    if (ci->parsed()) return run_inspect(common, inspect_path);
    if (cp->parsed()) return run_sample(common, sdim, sseed, scond);
  } catch (const BasinError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
