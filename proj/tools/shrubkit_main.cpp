#include <array>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shrubkit/bush.hpp"
#include "shrubkit/cover.hpp"
#include "shrubkit/kernel.hpp"
#include "shrubkit/quasibush.hpp"
#include "shrubkit/wcol.hpp"

using ordered_json = nlohmann::ordered_json;
using namespace shrubkit;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path, 0);
  out << text;
}

// empty out_path means stdout
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

std::vector<int> parse_csv_ints(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t c = s.find(',', pos);
    std::string tok = s.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad integer list entry '" + tok + "' in '" + s + "'", 0);
    out.push_back(std::stoi(tok));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  return out;
}

// --order accepts strategy:<name>, a file path, or a comma-separated sequence
VertexOrder resolve_order(const ColoredGraph& g, const std::string& spec) {
  if (spec.empty()) return heuristic_order(g, "degeneracy");
  if (spec.rfind("strategy:", 0) == 0) return heuristic_order(g, spec.substr(9));
  if (std::ifstream(spec).good()) return parse_order(read_file(spec), g.n);
  if (spec.find_first_not_of("0123456789,") == std::string::npos) {
    std::vector<int> seq = parse_csv_ints(spec);
    if (static_cast<int>(seq.size()) != g.n)
      throw ParseError("--order lists " + std::to_string(seq.size()) +
                           " vertices, graph has " + std::to_string(g.n),
                       0);
    return order_from_sequence(seq);
  }
  throw ParseError("unrecognized --order value: " + spec, 0);
}

Formula resolve_formula(const std::string& text, const std::string& file) {
  if (!text.empty() && !file.empty())
    throw ParseError("give --formula or --formula-file, not both", 0);
  if (!text.empty()) return parse_formula(text);
  if (!file.empty()) return parse_formula(read_file(file));
  throw ParseError("a formula is required (--formula or --formula-file)", 0);
}

std::string digraph_to_json(const DirectedGraph& d) {
  ordered_json j;
  j["n"] = d.n;
  j["arcs"] = ordered_json::array();
  for (const auto& [u, v] : d.arcs) j["arcs"].push_back({u, v});
  return j.dump(2) + "\n";
}

std::string digraph_to_dot(const DirectedGraph& d) {
  std::ostringstream out;
  out << "digraph decoded {\n";
  for (int v = 0; v < d.n; ++v) out << "  " << v << ";\n";
  for (const auto& [u, v] : d.arcs) out << "  " << u << " -> " << v << ";\n";
  out << "}\n";
  return out.str();
}

void err_json(const ordered_json& j) { std::cerr << j.dump() << "\n"; }

// exit 0 when equal; otherwise report the first differing arc and exit 1
int report_decode_match(const DirectedGraph& got, const DirectedGraph& want) {
  if (got.n == want.n && got.arcs == want.arcs) {
    std::cout << "ok\n";
    return 0;
  }
  ordered_json j;
  j["error"] = "decode-mismatch";
  if (got.n != want.n) {
    j["message"] = "vertex counts differ";
  } else {
    std::pair<Vertex, Vertex> w{-1, -1};
    std::size_t i = 0, k = 0;
    while (i < got.arcs.size() || k < want.arcs.size()) {
      if (i == got.arcs.size() || (k < want.arcs.size() && want.arcs[k] < got.arcs[i])) {
        w = want.arcs[k];
        break;
      }
      if (k == want.arcs.size() || got.arcs[i] < want.arcs[k]) {
        w = got.arcs[i];
        break;
      }
      ++i, ++k;
    }
    j["witness"] = {w.first, w.second};
  }
  err_json(j);
  return 1;
}

struct Opts {
  std::string graph, order, formula, formula_file, input, output, qbush, a_csv;
  std::string format = "json";
  std::string r_list = "1";
  int r = 1, q = 0, p = 1;
  std::uint64_t seed = 1;
  int cap_treedepth = 25;
  int cap_exact_wcol = 10;
  bool q_given = false;
};

int cmd_wcol(const Opts& o) {
  ColoredGraph g = load_graph(read_file(o.graph));
  VertexOrder ord = resolve_order(g, o.order);
  std::vector<int> rs = parse_csv_ints(o.r_list);
  if (rs.empty()) throw ParseError("-r needs at least one radius", 0);
  std::ostringstream out;
  for (int r : rs) {
    out << "wcol_" << r << " = " << wcol_of_order(g, ord, r) << "\n";
    for (const char* s : {"degeneracy", "bfs", "sorted-degree"})
      out << "heuristic " << s << ": wcol_" << r << " = "
          << wcol_of_order(g, heuristic_order(g, s), r) << "\n";
    if (g.n <= o.cap_exact_wcol && g.n <= 10) {
      UniversalReport rep = check_universal_inequality(g, ord, r, o.cap_exact_wcol);
      out << "universal: " << rep.lhs << " <= " << rep.rhs << " [exact wcol_"
          << 2 * r << " = " << rep.wcol_2r_exact << "] "
          << (rep.holds ? "holds" : "VIOLATED") << "\n";
    }
  }
  std::cout << out.str();
  return 0;
}

int cmd_bush_build(const Opts& o) {
  ColoredGraph g = load_graph(read_file(o.graph));
  VertexOrder ord = resolve_order(g, o.order);
  Formula phi = resolve_formula(o.formula, o.formula_file);
  Bush b = build_bush(g, ord, o.r, o.q, phi);
  emit(o.output, o.format == "dot" ? bush_to_dot(b) : bush_to_json(b));
  return 0;
}

int cmd_bush_decode(const Opts& o) {
  Bush b = bush_from_json(read_file(o.input));
  DirectedGraph d = decode_bush(b);
  emit(o.output, o.format == "dot" ? digraph_to_dot(d) : digraph_to_json(d));
  return 0;
}

int cmd_bush_verify(const Opts& o) {
  Bush b = bush_from_json(read_file(o.input));
  ColoredGraph g = load_graph(read_file(o.graph));
  Formula phi = resolve_formula(o.formula, o.formula_file);
  return report_decode_match(decode_bush(b), interpret(g, phi));
}

int cmd_qbush_build(const Opts& o) {
  ColoredGraph g = load_graph(read_file(o.graph));
  VertexOrder ord = resolve_order(g, o.order);
  QuasiBush qb = build_separator_quasibush(g, ord, o.r);
  if (!o.formula.empty() || !o.formula_file.empty()) {
    Formula phi = resolve_formula(o.formula, o.formula_file);
    qb = label_quasibush(qb, g, phi, o.q);
  }
  emit(o.output, o.format == "dot" ? quasibush_to_dot(qb) : quasibush_to_json(qb));
  return 0;
}

int cmd_qbush_verify(const Opts& o) {
  QuasiBush b = quasibush_from_json(read_file(o.input));
  ColoredGraph g = load_graph(read_file(o.graph));
  Formula phi = resolve_formula(o.formula, o.formula_file);
  return report_decode_match(decode_quasibush(b), interpret(g, phi));
}

int cmd_qbush_stats(const Opts& o) {
  QuasiBush b = quasibush_from_json(read_file(o.input));
  ColoredGraph g = load_graph(read_file(o.graph));
  VertexOrder ord = resolve_order(g, o.order);
  QuasiBushStats st = quasibush_stats(b, g, ord, o.r);
  std::ostringstream out;
  out << "depth = " << st.depth << "\n";
  out << "max_core = " << st.max_m << "\n";
  out << "max_separator = " << st.max_alpha << "\n";
  bool all_hold = true;
  for (const auto& row : st.rows) {
    out << "s=" << row.s << ": wcol_" << row.s << "(tree) = " << row.lhs
        << " <= " << row.rhs << " " << (row.holds ? "ok" : "VIOLATED") << "\n";
    all_hold = all_hold && row.holds;
  }
  std::cout << out.str();
  if (!all_hold) {
    err_json({{"error", "validation"}, {"message", "stats inequality violated"}});
    return 1;
  }
  return 0;
}

int cmd_kernel(const Opts& o) {
  ColoredGraph g = load_graph(read_file(o.graph));
  std::vector<Vertex> a = parse_csv_ints(o.a_csv);
  Formula phi = resolve_formula(o.formula, o.formula_file);
  Kernel k = kernelize(g, a, phi);
  KernelCheck chk = verify_kernel(g, k, a, phi);
  ordered_json ledger;
  ledger["levels"] = ordered_json::array();
  for (const auto& lv : k.levels) {
    ordered_json row;
    row["psi"] = lv.psi;
    row["a_size"] = lv.a_size;
    row["a_psi_size"] = lv.a_psi_size;
    row["types"] = lv.types;
    ledger["levels"].push_back(row);
  }
  ledger["total_size"] = static_cast<int>(k.kept.size());
  ledger["kept"] = k.kept;
  ledger["phi_hat"] = formula_to_string(k.phi_hat);
  ledger["rank"] = k.rank;
  ledger["formula_len"] = k.formula_len;
  ledger["c_value"] = k.c_value;
  ledger["bound"] = k.bound;
  ledger["within_bound"] = k.within_bound;
  ledger["verified"] = chk.ok;
  std::string text = ledger.dump(2) + "\n";
  if (!o.output.empty()) {
    write_file(o.output + ".graph", serialize_graph(k.ghat));
    write_file(o.output + ".formula", formula_to_string(k.phi_hat) + "\n");
    write_file(o.output + ".ledger.json", text);
  }
  std::cout << text;
  if (!chk.ok) {
    err_json({{"error", "kernel-mismatch"}, {"witness", chk.witness}});
    return 1;
  }
  return 0;
}

int cmd_cover(const Opts& o) {
  ColoredGraph g = load_graph(read_file(o.graph));
  CoverFamily fam;
  if (!o.qbush.empty()) {
    QuasiBush b = quasibush_from_json(read_file(o.qbush));
    fam = shrubdepth_cover(g, b, o.p, o.cap_treedepth);
  } else {
    VertexOrder ord = resolve_order(g, o.order);
    fam = low_treedepth_cover(g, ord, o.p, o.cap_treedepth);
  }
  CoverReport rep = verify_cover(g, fam, o.p, o.seed, o.cap_treedepth);
  ordered_json j;
  j["p"] = fam.p;
  j["shrub"] = fam.shrub;
  j["classes"] = ordered_json::array();
  for (const auto& c : fam.classes) {
    ordered_json row;
    row["vertices"] = c.vertices;
    row["certificate"] = {
        {"type", c.uncertified ? "uncertified"
                               : (c.exact ? "treedepth-exact" : "treedepth-bound")},
        {"value", c.treedepth_value}};
    j["classes"].push_back(row);
  }
  j["stats"] = {{"num_colors", fam.num_colors},
                {"node_cover_p", fam.node_cover_p},
                {"family_size", rep.family_size},
                {"max_class_size", rep.max_class_size},
                {"cover_ok", rep.cover_ok},
                {"certificates_ok", rep.certificates_ok},
                {"exhaustive", rep.exhaustive}};
  emit(o.output, j.dump(2) + "\n");
  if (!rep.cover_ok || !rep.certificates_ok) {
    ordered_json e;
    e["error"] = rep.cover_ok ? "certificate-invalid" : "cover-gap";
    if (!rep.cover_ok) e["witness"] = rep.witness;
    err_json(e);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Opts o;
  CLI::App app{"weak-coloring orders, bushes, quasi-bushes, kernels, and covers"};
  app.require_subcommand(1);

  auto add_graph = [&](CLI::App* c) {
    c->add_option("-g,--graph", o.graph, "graph file")->required();
  };
  auto add_order = [&](CLI::App* c) {
    c->add_option("--order", o.order, "order file, csv sequence, or strategy:<name>");
  };
  auto add_formula = [&](CLI::App* c) {
    c->add_option("--formula", o.formula, "formula text");
    c->add_option("--formula-file", o.formula_file, "formula file");
  };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "dot"}));
  };
  auto add_output = [&](CLI::App* c) {
    c->add_option("-o,--output", o.output, "output file (stdout when absent)");
  };

  CLI::App* wcol = app.add_subcommand("wcol", "weak coloring numbers of an order");
  add_graph(wcol);
  add_order(wcol);
  wcol->add_option("-r,--radius", o.r_list, "radius or comma list of radii");
  wcol->add_option("--cap-exact-wcol", o.cap_exact_wcol, "exact-search size cap");

  CLI::App* bush = app.add_subcommand("bush", "equal-depth tree representations");
  bush->require_subcommand(1);
  CLI::App* bb = bush->add_subcommand("build", "build from a graph and formula");
  add_graph(bb);
  add_order(bb);
  bb->add_option("-r,--radius", o.r, "weak reachability radius")->required();
  bb->add_option("-q,--rank", o.q, "type rank for labels")->required();
  add_formula(bb);
  add_format(bb);
  add_output(bb);
  CLI::App* bd = bush->add_subcommand("decode", "decode a stored tree to arcs");
  bd->add_option("-i,--input", o.input, "tree JSON file")->required();
  add_format(bd);
  add_output(bd);
  CLI::App* bv = bush->add_subcommand("verify", "check decode against the formula");
  bv->add_option("-i,--input", o.input, "tree JSON file")->required();
  add_graph(bv);
  add_formula(bv);

  CLI::App* qb = app.add_subcommand("qbush", "pointer-tree representations");
  qb->require_subcommand(1);
  CLI::App* qbb = qb->add_subcommand("build", "build from a graph");
  add_graph(qbb);
  add_order(qbb);
  qbb->add_option("-r,--radius", o.r, "separator radius")->required();
  qbb->add_option("-q,--rank", o.q, "type rank for labels");
  add_formula(qbb);
  add_format(qbb);
  add_output(qbb);
  CLI::App* qbv = qb->add_subcommand("verify", "check decode against the formula");
  qbv->add_option("-i,--input", o.input, "tree JSON file")->required();
  add_graph(qbv);
  add_formula(qbv);
  CLI::App* qbs = qb->add_subcommand("stats", "depth, core, and coloring bounds");
  qbs->add_option("-i,--input", o.input, "tree JSON file")->required();
  add_graph(qbs);
  add_order(qbs);
  qbs->add_option("-r,--radius", o.r, "separator radius")->required();

  CLI::App* kn = app.add_subcommand("kernel", "evaluation-preserving shrink of A");
  add_graph(kn);
  kn->add_option("-A,--set", o.a_csv, "comma list of vertices")->required();
  add_formula(kn);
  add_output(kn);

  CLI::App* cv = app.add_subcommand("cover", "certified low-treedepth covers");
  add_graph(cv);
  add_order(cv);
  cv->add_option("-p", o.p, "cover parameter")->required();
  cv->add_option("--qbush", o.qbush, "quasi-bush JSON for shrub covers");
  cv->add_option("--seed", o.seed, "sampling seed");
  cv->add_option("--cap-treedepth", o.cap_treedepth, "exact solver size cap");
  add_output(cv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*wcol) return cmd_wcol(o);
    if (*bb) return cmd_bush_build(o);
    if (*bd) return cmd_bush_decode(o);
    if (*bv) return cmd_bush_verify(o);
    if (*qbb) return cmd_qbush_build(o);
    if (*qbv) return cmd_qbush_verify(o);
    if (*qbs) return cmd_qbush_stats(o);
    if (*kn) return cmd_kernel(o);
    if (*cv) return cmd_cover(o);
    std::cerr << "no command\n";
    return 2;
  } catch (const AdequacyError& e) {
    err_json({{"error", "adequacy"}, {"message", e.what()}, {"witness", e.witness}});
    return 3;
  } catch (const SeparatorPropertyError& e) {
    err_json({{"error", "separator-property"},
              {"message", e.what()},
              {"witness", e.witness}});
    return 1;
  } catch (const CapError& e) {
    err_json({{"error", "cap"}, {"message", e.what()}});
    return 4;
  } catch (const ResourceError& e) {
    err_json({{"error", "resource"}, {"message", e.what()}});
    return 4;
  } catch (const ParseError& e) {
    err_json({{"error", "parse"}, {"message", e.what()}, {"line", e.line}});
    return 2;
  } catch (const ArityError& e) {
    err_json({{"error", "arity"}, {"message", e.what()}});
    return 2;
  } catch (const ShrubError& e) {
    err_json({{"error", "failure"}, {"message", e.what()}});
    return 1;
  }
}
