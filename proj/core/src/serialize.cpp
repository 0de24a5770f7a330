#include "ckt/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ckt/error.hpp"

namespace ckt {

namespace {

json bound(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

double read_bound(const json& j, const char* key, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "-inf" || s == "-Infinity") return -kInf;
    if (s == "inf" || s == "+inf" || s == "Infinity") return kInf;
  }
  throw Error(ErrorKind::invalid_input, std::string("box bound '") + key + "' is not a number");
}

std::string format_number(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pair_label(PairIndex p, const std::vector<std::string>& names) {
  auto name = [&](std::size_t a) { return a < names.size() ? names[a] : "X" + std::to_string(a + 1); };
  return name(p.a) + "," + name(p.b);
}

std::string column_name(std::size_t j, const std::vector<std::string>& names) {
  return j < names.size() ? names[j] : "Z" + std::to_string(j + 1);
}

std::string escape_dot(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

BoxFamily parse_boxes(const json& j, const Sample& s) {
  return parse_boxes(j, s.conditioning_names());
}

BoxFamily parse_boxes(const json& j, const std::vector<std::string>& names) {
  const json& list = j.is_object() ? j.at("boxes") : j;
  if (!list.is_array()) throw Error(ErrorKind::invalid_input, "box config must be an array of boxes");
  std::vector<Box> boxes;
  for (const auto& jb : list) {
    const json& cons = jb.is_object() && jb.contains("constraints") ? jb.at("constraints") : jb;
    if (!cons.is_array()) throw Error(ErrorKind::invalid_input, "a box must be an array of constraints");
    std::vector<Constraint> c(names.size(), Interval{});
    std::vector<bool> seen(names.size(), false);
    for (const auto& jc : cons) {
      if (!jc.contains("column")) throw Error(ErrorKind::invalid_input, "box constraint without 'column'");
      std::size_t pos = names.size();
      const auto& col = jc.at("column");
      if (col.is_string()) {
        const auto name = col.get<std::string>();
        for (std::size_t q = 0; q < names.size(); ++q)
          if (names[q] == name) pos = q;
        if (pos == names.size())
          throw Error(ErrorKind::invalid_input, "box refers to '" + name + "', not a conditioning column");
      } else if (col.is_number_unsigned()) {
        pos = col.get<std::size_t>();
        if (pos >= names.size())
          throw Error(ErrorKind::invalid_input, "box column index " + std::to_string(pos) + " out of range");
      } else {
        throw Error(ErrorKind::invalid_input, "box 'column' must be a name or an index");
      }
      if (seen[pos]) throw Error(ErrorKind::invalid_input, "column constrained twice in one box");
      seen[pos] = true;
      if (jc.contains("codes")) {
        CodeSet cs;
        for (const auto& code : jc.at("codes")) cs.codes.push_back(code.get<std::int64_t>());
        c[pos] = cs;
      } else {
        Interval iv;
        iv.lower = read_bound(jc, "lower", -kInf);
        iv.upper = read_bound(jc, "upper", kInf);
        iv.lower_open = jc.value("lower_open", true);
        iv.upper_open = jc.value("upper_open", std::isinf(iv.upper));
        c[pos] = iv;
      }
    }
    boxes.emplace_back(std::move(c));
  }
  if (j.is_object() && j.contains("disjoint") && j.at("disjoint").get<bool>()) {
    BoxFamily checked(boxes);
    if (!checked.disjoint())
      throw Error(ErrorKind::invalid_input, "boxes declared disjoint but they overlap");
    return checked;
  }
  return BoxFamily(std::move(boxes));
}

json box_to_json(const Box& box, const std::vector<std::string>& names) {
  json out = json::array();
  for (std::size_t q = 0; q < box.dim(); ++q) {
    json c;
    c["column"] = column_name(q, names);
    if (const auto* iv = std::get_if<Interval>(&box[q])) {
      if (std::isinf(iv->lower) && std::isinf(iv->upper)) continue;
      c["lower"] = bound(iv->lower);
      c["upper"] = bound(iv->upper);
      c["lower_open"] = iv->lower_open;
      c["upper_open"] = iv->upper_open;
    } else {
      c["codes"] = std::get<CodeSet>(box[q]).codes;
    }
    out.push_back(std::move(c));
  }
  return out;
}

json boxes_to_json(const BoxFamily& family, const std::vector<std::string>& names) {
  json out;
  out["disjoint"] = family.disjoint();
  out["boxes"] = json::array();
  for (const auto& b : family.boxes()) out["boxes"].push_back(box_to_json(b, names));
  return out;
}

json to_json(const TestResult& r) {
  json j;
  j["method"] = to_string(r.method);
  j["statistic"] = r.statistic;
  j["df"] = r.df ? json(*r.df) : json(nullptr);
  j["p_value"] = r.p_value;
  j["m"] = r.m;
  j["p"] = r.p;
  j["n"] = r.n;
  j["B"] = r.B ? json(*r.B) : json(nullptr);
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  return j;
}

json to_json(const TauEstimates& t) {
  json j;
  j["n"] = t.n;
  j["p"] = t.p;
  j["m"] = t.m;
  j["pairs"] = json::array();
  for (const auto& pr : t.pairs) j["pairs"].push_back({pr.a, pr.b});
  json rows = json::array();
  for (std::size_t pi = 0; pi < t.pairs.size(); ++pi) {
    json row = json::array();
    for (std::size_t k = 0; k < t.m; ++k) row.push_back(t.at(pi, k));
    rows.push_back(std::move(row));
  }
  j["tau"] = std::move(rows);
  j["p_hat"] = t.p_hat;
  j["counts"] = t.counts;
  j["s_n"] = t.s_n;
  return j;
}

json to_json(const CovarianceEstimate& c) {
  auto matrix = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(r, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  json j;
  j["n"] = c.n;
  j["m"] = c.m;
  j["disjoint_path"] = c.disjoint_path;
  j["delta"] = matrix(c.delta);
  j["i_hat"] = matrix(c.i_hat);
  j["j_hat"] = c.j_hat;
  j["d_hat"] = c.d_hat;
  j["p_hat"] = c.p_hat;
  j["p_overlap"] = matrix(c.p_overlap);
  return j;
}

json to_json(const TreeConfig& c) {
  return {{"min_cut", c.min_cut}, {"min_size", c.min_size}, {"alpha", c.alpha},
          {"max_depth", c.max_depth}};
}

json to_json(const DependenceTree& tree, const std::vector<std::string>& xn,
             const std::vector<std::string>& zn) {
  json j;
  j["n"] = tree.n;
  j["p"] = tree.p;
  j["config"] = to_json(tree.config);
  j["pairs"] = json::array();
  for (const auto& pr : tree.pairs) j["pairs"].push_back(pair_label(pr, xn));
  j["nodes"] = json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    json jn;
    jn["id"] = i;
    jn["depth"] = node.depth;
    jn["count"] = node.count;
    jn["tau"] = node.tau;
    jn["box"] = box_to_json(node.box, zn);
    if (node.split) {
      const auto& s = *node.split;
      jn["split"] = {{"pair", pair_label(tree.pairs[s.pair], xn)},
                     {"pair_index", s.pair},
                     {"coordinate", column_name(s.coordinate, zn)},
                     {"coordinate_index", s.coordinate},
                     {"threshold", s.threshold},
                     {"diff", s.diff},
                     {"score", s.score}};
      jn["left"] = node.left;
      jn["right"] = node.right;
    }
    j["nodes"].push_back(std::move(jn));
  }
  j["leaves"] = tree.leaf_indices();
  return j;
}

std::string to_dot(const DependenceTree& tree, const std::vector<std::string>& xn,
                   const std::vector<std::string>& zn) {
  std::ostringstream out;
  out << "digraph dependence_tree {\n  node [shape=box, fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    std::string label;
    for (std::size_t pi = 0; pi < tree.pairs.size(); ++pi)
      label += "tau(" + pair_label(tree.pairs[pi], xn) + ") = " + format_number(node.tau[pi]) + "\\n";
    label += "n = " + std::to_string(node.count);
    out << "  n" << i << " [label=\"" << escape_dot(label) << "\""
        << (node.is_leaf() ? ", style=rounded" : "") << "];\n";
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    if (!node.split) continue;
    const std::string col = escape_dot(column_name(node.split->coordinate, zn));
    const std::string t = format_number(node.split->threshold);
    out << "  n" << i << " -> n" << node.left << " [label=\"" << col << " <= " << t << "\"];\n";
    out << "  n" << i << " -> n" << node.right << " [label=\"" << col << " > " << t << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

json to_json(const Scenario& sc) {
  json j;
  j["tag"] = to_string(sc.tag);
  j["n"] = sc.n;
  if (sc.tag == ScenarioTag::dvine_datadriven) {
    j["p"] = sc.p;
    j["q"] = sc.q;
    j["alternative"] = sc.alternative;
    j["tree"] = to_json(sc.tree);
    j["split_fraction"] = sc.split_fraction;
  } else {
    j["m"] = sc.m;
  }
  if (sc.tag == ScenarioTag::clayton_break) j["lambda"] = sc.lambda;
  return j;
}

json to_json(const MonteCarloReport& report, bool include_timing) {
  json j;
  j["scenario"] = to_json(report.scenario);
  j["R"] = report.options.R;
  j["B"] = report.options.B;
  j["seed"] = report.options.seed;
  j["level"] = report.options.level;
  j["methods"] = json::array();
  for (const auto& ms : report.methods) {
    json jm;
    jm["method"] = to_string(ms.method);
    jm["rejections"] = ms.rejections;
    jm["failures"] = ms.failures;
    jm["frequency"] = ms.frequency;
    j["methods"].push_back(std::move(jm));
  }
  if (report.scenario.tag == ScenarioTag::dvine_datadriven) {
    j["mean_leaves"] = report.mean_leaves;
    j["single_leaf_runs"] = report.single_leaf;
  }
  if (include_timing) j["seconds"] = report.seconds;
  return j;
}

json to_json(const std::vector<ClaimResult>& claims) {
  json out = json::array();
  for (const auto& c : claims)
    out.push_back({{"model", c.model},
                   {"claim", c.claim},
                   {"value", c.value},
                   {"target", c.target},
                   {"tolerance", c.tolerance},
                   {"lower_bound", c.lower_bound},
                   {"status", to_string(c.status)}});
  return out;
}

std::string report_csv(const std::vector<MonteCarloReport>& reports) {
  std::vector<Method> columns;
  for (const auto& r : reports)
    for (const auto& ms : r.methods)
      if (std::find(columns.begin(), columns.end(), ms.method) == columns.end())
        columns.push_back(ms.method);
  std::ostringstream out;
  out << "n,m";
  for (auto m : columns) out << ',' << to_string(m);
  out << '\n';
  for (const auto& r : reports) {
    out << r.scenario.n << ',';
    if (r.scenario.tag == ScenarioTag::dvine_datadriven) out << "tree";
    else out << r.scenario.m;
    for (auto m : columns) {
      out << ',';
      for (const auto& ms : r.methods)
        if (ms.method == m) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.3f", ms.frequency);
          out << buf;
        }
    }
    out << '\n';
  }
  return out.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

}  // namespace ckt
