#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ckt/bootstrap.hpp"
#include "ckt/covariance.hpp"
#include "ckt/csv.hpp"
#include "ckt/error.hpp"
#include "ckt/estimators.hpp"
#include "ckt/hypothesis.hpp"
#include "ckt/parallel.hpp"
#include "ckt/serialize.hpp"
#include "ckt/simulation.hpp"
#include "ckt/tree.hpp"

namespace ckt::cli {

namespace {

struct Options {
  std::string input;
  std::string roles;
  std::string boxes;
  std::vector<std::string> methods;
  std::size_t B = 1000;
  std::uint64_t seed = 1;
  double min_cut = 0.2;
  double min_size = 0.1;
  double alpha = 0.0;
  std::size_t max_depth = 6;
  double split_fraction = 0.5;
  unsigned threads = 0;
  std::string out;
  std::string covariance = "automatic";
  bool ridge = false;
  bool smoothed = false;

  // simulate
  std::string scenario = "gauss_level";
  std::vector<std::size_t> ns{1000};
  std::vector<std::size_t> ms{4};
  std::size_t R = 100;
  double lambda = 0.5;
  std::size_t p = 2;
  std::size_t q = 1;
  bool null_model = false;

  // verify-counterexamples
  std::size_t n_check = 100000;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input:
    case ErrorKind::insufficient_subsample:
    case ErrorKind::degenerate_box: return 2;
    case ErrorKind::singular_matrix:
    case ErrorKind::numerical: return 3;
    case ErrorKind::coverage: return 4;
  }
  return 2;
}

ColumnRoles load_roles(const std::string& text) {
  namespace fs = std::filesystem;
  if (text.size() > 5 && text.ends_with(".json") && fs::exists(text)) {
    std::ifstream in(text);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw Error(ErrorKind::invalid_input, "cannot parse roles file: " + std::string(e.what()));
    }
    ColumnRoles roles;
    if (j.is_object()) {
      for (const auto& [name, role] : j.items()) roles.push_back({name, parse_role(role.get<std::string>())});
    } else {
      for (const auto& item : j)
        roles.push_back({item.at("name").get<std::string>(), parse_role(item.at("role").get<std::string>())});
    }
    return roles;
  }
  return parse_roles(text);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_input, "cannot parse '" + path + "': " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::invalid_input, "cannot write '" + path + "'");
  f << text;
}

void emit(const json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") out << text;
  else write_text(path, text);
}

std::vector<Method> resolve_methods(const std::vector<std::string>& names, std::vector<Method> fallback) {
  if (names.empty()) return fallback;
  std::vector<Method> out;
  for (const auto& s : names) {
    const Method m = parse_method(s);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

CovariancePath parse_path(const std::string& s) {
  if (s == "automatic") return CovariancePath::automatic;
  if (s == "disjoint") return CovariancePath::disjoint;
  if (s == "general") return CovariancePath::general;
  throw Error(ErrorKind::invalid_input, "unknown covariance path '" + s + "'");
}

json envelope(const json& config) {
  json j;
  j["version"] = kVersion;
  j["seed"] = config.at("seed");
  j["config_hash"] = config_hash(config);
  j["config"] = config;
  return j;
}

// Runs the requested methods on a sample and family. Bootstrap schemes are
// run once each and shared by their two statistics.
std::vector<TestResult> run_methods(const Sample& s, const BoxFamily& family,
                                    const std::vector<Method>& methods, const Options& o,
                                    unsigned threads) {
  if (family.m() < 2) throw Error(ErrorKind::invalid_input, "at least 2 boxes are required for a test");
  std::vector<TestResult> out;
  std::optional<BootstrapOutcome> classical, conditional;
  for (Method m : methods) {
    if (m == Method::wald) {
      const TauEstimates tau = tau_matrix(s, family, false, threads);
      const CovarianceEstimate cov = delta_hat(s, family, tau, parse_path(o.covariance), threads);
      WaldOptions w;
      w.ridge = o.ridge;
      out.push_back(wald_statistic(tau, cov, ContrastMatrix::extended(family.m(), s.p()), w));
      continue;
    }
    const bool is_classical = m == Method::boot_inf_classical || m == Method::boot_l2_classical;
    auto& slot = is_classical ? classical : conditional;
    if (!slot) {
      BootstrapConfig cfg;
      cfg.B = o.B;
      cfg.scheme = is_classical ? Scheme::classical : Scheme::conditional;
      cfg.seed = derive_seed(o.seed, is_classical ? 1 : 2);
      cfg.threads = threads;
      cfg.smoothed = o.smoothed;
      slot = bootstrap_test(s, family, cfg);
    }
    TestResult r = (m == Method::boot_inf_classical || m == Method::boot_inf_conditional) ? slot->inf : slot->l2;
    r.seed = o.seed;
    out.push_back(r);
  }
  return out;
}

json base_config(const Options& o, const char* command) {
  json c;
  c["command"] = command;
  c["seed"] = o.seed;
  return c;
}

int cmd_test(const Options& o, std::ostream& out, std::ostream&) {
  if (o.input.empty() || o.roles.empty() || o.boxes.empty())
    throw Error(ErrorKind::invalid_input, "test needs --input, --roles and --boxes");
  const unsigned threads = o.threads ? o.threads : default_threads();
  const Sample s = load_sample(o.input, load_roles(o.roles));
  const BoxFamily family = parse_boxes(read_json_file(o.boxes), s);
  const auto methods = resolve_methods(o.methods, all_methods());

  json config = base_config(o, "test");
  config["input"] = o.input;
  config["conditioned"] = s.conditioned_names();
  config["conditioning"] = s.conditioning_names();
  config["boxes"] = boxes_to_json(family, s.conditioning_names());
  json mj = json::array();
  for (auto m : methods) mj.push_back(to_string(m));
  config["methods"] = mj;
  config["B"] = o.B;
  config["covariance"] = o.covariance;
  config["ridge"] = o.ridge;
  config["smoothed"] = o.smoothed;

  const auto results = run_methods(s, family, methods, o, threads);
  json j = envelope(config);
  j["tau"] = to_json(tau_matrix(s, family));
  j["results"] = json::array();
  for (const auto& r : results) j["results"].push_back(to_json(r));
  emit(j, o.out, out);
  return 0;
}

int cmd_tree(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.input.empty() || o.roles.empty()) throw Error(ErrorKind::invalid_input, "tree needs --input and --roles");
  if (!(o.split_fraction > 0.0 && o.split_fraction <= 1.0))
    throw Error(ErrorKind::invalid_input, "--split-fraction must lie in (0, 1]");
  const unsigned threads = o.threads ? o.threads : default_threads();
  const Sample s = load_sample(o.input, load_roles(o.roles));
  const auto methods = resolve_methods(o.methods, {Method::boot_inf_classical});
  TreeConfig tc{o.min_cut, o.min_size, o.alpha, o.max_depth};

  std::vector<std::size_t> rows(s.n());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::vector<std::size_t> build = rows, test;
  if (o.split_fraction < 1.0) {
    Rng rng(derive_seed(o.seed, 0));
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.index(i)]);
    const auto nb = static_cast<std::size_t>(std::floor(o.split_fraction * static_cast<double>(s.n())));
    build.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(nb));
    test.assign(rows.begin() + static_cast<std::ptrdiff_t>(nb), rows.end());
    std::sort(build.begin(), build.end());
    std::sort(test.begin(), test.end());
  }
  if (build.size() < 2) throw Error(ErrorKind::invalid_input, "build part has fewer than 2 rows");

  const Sample build_sample = s.subset(build);
  const DependenceTree tree = cut_ckt(build_sample, tc, threads);
  const BoxFamily family = leaves(tree);

  json config = base_config(o, "tree");
  config["input"] = o.input;
  config["conditioned"] = s.conditioned_names();
  config["conditioning"] = s.conditioning_names();
  config["tree"] = to_json(tc);
  config["split_fraction"] = o.split_fraction;
  json mj = json::array();
  for (auto m : methods) mj.push_back(to_string(m));
  config["methods"] = mj;
  config["B"] = o.B;

  json j = envelope(config);
  j["build_rows"] = build.size();
  j["test_rows"] = test.size();
  j["tree"] = to_json(tree, s.conditioned_names(), s.conditioning_names());
  j["binary_search_in_tau"] = is_binary_search_in_tau(tree);
  j["leaves"] = boxes_to_json(family, s.conditioning_names());
  j["results"] = json::array();
  if (test.empty()) {
    err << "warning: split fraction 1.0, tree built on all rows and no test run\n";
    j["notice"] = "no held-out rows; test skipped";
  } else if (family.m() < 2) {
    err << "notice: the tree has a single leaf; nothing to test\n";
    j["notice"] = "single-leaf tree; test skipped";
  } else {
    const Sample test_sample = s.subset(test);
    for (const auto& r : run_methods(test_sample, family, methods, o, threads))
      j["results"].push_back(to_json(r));
  }

  const std::string prefix = o.out.empty() ? "ckt_tree" : o.out;
  write_text(prefix + ".json", j.dump(2) + "\n");
  write_text(prefix + ".dot", to_dot(tree, s.conditioned_names(), s.conditioning_names()));
  out << "wrote " << prefix << ".json and " << prefix << ".dot (" << tree.leaf_count() << " leaves)\n";
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  const ScenarioTag tag = parse_scenario(o.scenario);
  const auto methods = resolve_methods(o.methods, all_methods());
  StudyOptions so;
  so.methods = methods;
  so.R = o.R;
  so.seed = o.seed;
  so.B = o.B;
  so.threads = o.threads ? o.threads : default_threads();
  so.path = parse_path(o.covariance);
  so.wald.ridge = o.ridge;

  const bool tree_driven = tag == ScenarioTag::dvine_datadriven;
  std::vector<MonteCarloReport> reports;
  json runs = json::array();
  for (std::size_t n : o.ns) {
    for (std::size_t m : tree_driven ? std::vector<std::size_t>{0} : o.ms) {
      Scenario sc;
      sc.tag = tag;
      sc.n = n;
      sc.m = m;
      sc.p = o.p;
      sc.q = o.q;
      sc.lambda = o.lambda;
      sc.alternative = !o.null_model;
      sc.tree = TreeConfig{o.min_cut, o.min_size, o.alpha, o.max_depth};
      sc.split_fraction = o.split_fraction;
      reports.push_back(run_study(sc, so));
      runs.push_back(to_json(reports.back()));
    }
  }

  json config = base_config(o, "simulate");
  config["scenario"] = o.scenario;
  config["n"] = o.ns;
  if (!tree_driven) config["m"] = o.ms;
  config["R"] = o.R;
  config["B"] = o.B;
  json mj = json::array();
  for (auto m : methods) mj.push_back(to_string(m));
  config["methods"] = mj;
  if (tag == ScenarioTag::clayton_break) config["lambda"] = o.lambda;
  if (tree_driven) {
    config["p"] = o.p;
    config["q"] = o.q;
    config["alternative"] = !o.null_model;
    config["tree"] = to_json(TreeConfig{o.min_cut, o.min_size, o.alpha, o.max_depth});
    config["split_fraction"] = o.split_fraction;
  }
  config["covariance"] = o.covariance;
  config["ridge"] = o.ridge;

  json j = envelope(config);
  j["runs"] = runs;
  const std::string csv = report_csv(reports);
  if (o.out.empty() || o.out == "-") {
    out << j.dump(2) << "\n" << csv;
  } else {
    write_text(o.out + ".json", j.dump(2) + "\n");
    write_text(o.out + ".csv", csv);
    out << csv;
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&) {
  const auto claims = verify_counterexamples(o.n_check, o.seed);
  bool failed = false;
  for (const auto& c : claims) {
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-17s %-52s value=% .4f target=% .4f tol=%.4f%s\n",
                  to_string(c.status), c.model.c_str(), c.claim.c_str(), c.value, c.target,
                  c.tolerance, c.lower_bound ? " (lower bound)" : "");
    out << line;
    failed = failed || c.status == ClaimStatus::fail;
  }
  if (!o.out.empty()) {
    json config = base_config(o, "verify-counterexamples");
    config["n"] = o.n_check;
    json j = envelope(config);
    j["claims"] = to_json(claims);
    write_text(o.out, j.dump(2) + "\n");
  }
  return failed ? 1 : 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Tests of equal conditional Kendall's tau across conditioning boxes"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto common = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Master seed");
    c->add_option("--threads", o.threads, "Worker threads (default: CKT_THREADS or all cores)");
    c->add_option("--out", o.out, "Output path or prefix");
  };
  auto data = [&](CLI::App* c) {
    c->add_option("--input", o.input, "CSV file with a header row");
    c->add_option("--roles", o.roles, "name:role list (cond, conditioning, ignore) or a JSON file");
  };
  auto testing = [&](CLI::App* c) {
    c->add_option("--method", o.methods, "wald, boot_inf_classical, boot_l2_classical, "
                                         "boot_inf_conditional, boot_l2_conditional (repeatable)");
    c->add_option("--B", o.B, "Bootstrap replicates");
    c->add_option("--covariance", o.covariance, "automatic, disjoint or general");
    c->add_flag("--ridge", o.ridge, "Add 1e-8 * trace/size to the contrasted covariance");
    c->add_flag("--smoothed", o.smoothed, "Bootstrap p-value (1 + #exceed) / (B + 1)");
  };
  auto tree_opts = [&](CLI::App* c) {
    c->add_option("--min-cut", o.min_cut, "Smallest tau difference that justifies a split");
    c->add_option("--min-size", o.min_size, "Smallest side of a split, as a fraction of n");
    c->add_option("--alpha", o.alpha, "Weight of the balance bonus in the split score");
    c->add_option("--max-depth", o.max_depth, "Depth limit");
    c->add_option("--split-fraction", o.split_fraction, "Share of rows used to build the tree");
  };

  CLI::App* test = app.add_subcommand("test", "Test equality of conditional taus over given boxes");
  common(test);
  data(test);
  testing(test);
  test->add_option("--boxes", o.boxes, "Box family JSON");

  CLI::App* tree = app.add_subcommand("tree", "Build boxes with the dependence tree, then test on held-out rows");
  common(tree);
  data(tree);
  testing(tree);
  tree_opts(tree);

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo level/power study");
  common(sim);
  testing(sim);
  tree_opts(sim);
  sim->add_option("--scenario", o.scenario,
                  "gauss_level, gauss_power, clayton_break, dvine_datadriven, counterexample_1, counterexample_2");
  sim->add_option("--n", o.ns, "Sample sizes")->delimiter(',');
  sim->add_option("--m", o.ms, "Box counts")->delimiter(',');
  sim->add_option("--R", o.R, "Monte Carlo replications");
  sim->add_option("--lambda", o.lambda, "Break point for clayton_break");
  sim->add_option("--p", o.p, "Conditioned dimension (dvine_datadriven)");
  sim->add_option("--q", o.q, "Conditioning dimension (dvine_datadriven)");
  sim->add_flag("--null", o.null_model, "dvine_datadriven under independence");

  CLI::App* verify = app.add_subcommand("verify-counterexamples", "Monte Carlo check of the two counter-example models");
  common(verify);
  verify->add_option("--n", o.n_check, "Sample size per model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*test) return cmd_test(o, out, err);
    if (*tree) return cmd_tree(o, out, err);
    if (*sim) return cmd_simulate(o, out, err);
    if (*verify) return cmd_verify(o, out, err);
  } catch (const InsufficientSubsample& e) {
    json j{{"error", to_string(e.kind())}, {"message", e.what()}, {"count", e.count()}};
    j["box"] = e.box() ? json(*e.box()) : json(nullptr);
    err << j.dump() << "\n";
    return exit_code(e.kind());
  } catch (const Error& e) {
    err << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    err << json{{"error", "invalid_input"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ckt::cli
