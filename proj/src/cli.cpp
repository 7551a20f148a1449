#include "dstk/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "dstk/codings.hpp"
#include "dstk/errors.hpp"
#include "dstk/hierarchy.hpp"
#include "dstk/reduction.hpp"
#include "dstk/selector.hpp"
#include "dstk/testkit.hpp"
#include "dstk/treerel.hpp"

namespace dstk::cli {

namespace {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Test load_test(const std::string& path) {
  if (path.empty()) return Test::canonical();
  std::ifstream in(path);
  if (!in) throw io_error("cannot open test file '" + path + "'");
  return Test::load(in);
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

int verdict(std::ostream& out, bool holds, const std::string& witness) {
  if (holds) return kOk;
  out << "WITNESS: " << witness << '\n';
  return kFail;
}

// --- tests and levels ---------------------------------------------------------

struct TestArgs {
  std::string test_file;
};

void add_test_option(CLI::App* sub, TestArgs& a) {
  sub->add_option("--test", a.test_file, "test file (q<TAB>s<TAB>t lines); canonical test when omitted");
}

int cmd_gen_test(std::ostream& out, std::uint64_t max_q, const std::string& out_file) {
  Test t = build_test(max_q);
  if (out_file.empty()) {
    t.save(out, max_q);
    return kOk;
  }
  std::ofstream f(out_file);
  if (!f) throw io_error("cannot write '" + out_file + "'");
  t.save(f, max_q);
  if (!f) throw io_error("write to '" + out_file + "' failed");
  out << "wrote levels 0.." << max_q << " to " << out_file << '\n';
  return kOk;
}

int cmd_check_test(std::ostream& out, const TestArgs& ta, std::optional<std::uint64_t> max_q, const BBounds& b) {
  Test t = load_test(ta.test_file);
  std::uint64_t top = 0;
  if (max_q) {
    top = *max_q;
  } else if (t.depth()) {
    top = *t.depth();
  } else {
    throw precondition_error("--max-q is required for the canonical test");
  }
  const auto rep = check_def31(t, top, b);
  out << "levels checked: " << rep.levels_checked << '\n';
  out << "(b) instances checked: " << rep.b_checked << '\n';
  out << "valid: " << bool_text(rep.ok) << '\n';
  return verdict(out, rep.ok, std::string("clause ") + rep.clause + " " + rep.witness);
}

int cmd_slice(std::ostream& out, const TestArgs& ta, std::uint64_t p) {
  Test t = load_test(ta.test_file);
  const auto slice = level_slice(t, p);
  for (const auto& e : slice) out << e.s.str() << '\t' << e.t.str() << '\n';
  out << "# " << slice.size() << " pairs\n";
  return kOk;
}

int cmd_graph_dot(std::ostream& out, const TestArgs& ta, std::uint64_t p) {
  Test t = load_test(ta.test_file);
  write_dot(out, level_graph(t, p));
  return kOk;
}

int cmd_check_acyclic(std::ostream& out, const TestArgs& ta, std::uint64_t max_level) {
  Test t = load_test(ta.test_file);
  for (std::uint64_t p = 1; p <= max_level; ++p) {
    const auto g = level_graph(t, p);
    const auto e = cycle_edge(g.graph);
    out << "level " << p << ": " << g.graph.edges.size() << " edges, " << (e ? "cycle" : "acyclic") << '\n';
    if (e)
      return verdict(out, false,
                     "level " + std::to_string(p) + " edge " + Word::from_value(e->left, p).str() + " " +
                         Word::from_value(e->right, p).str());
  }
  return kOk;
}

int cmd_rect_free(std::ostream& out, const TestArgs& ta, std::uint64_t max_level) {
  Test t = load_test(ta.test_file);
  for (std::uint64_t p = 1; p <= max_level; ++p) {
    const auto slice = level_slice(t, p);
    const auto r = find_rectangle(slice);
    out << "level " << p << ": " << (r ? "rectangle" : "rectangle-free") << '\n';
    if (r)
      return verdict(out, false,
                     "level " + std::to_string(p) + " " + r->e0.str() + " " + r->e0b.str() + " " + r->e1.str() + " " +
                         r->e1b.str());
  }
  return kOk;
}

// --- hierarchy ---------------------------------------------------------------

int cmd_rho(std::ostream& out, const std::string& xi_text, const std::string& seq_text, const RhoOptions& opts) {
  const auto xi = OrdinalExpr::parse(xi_text);
  const CertifiedSeq e(EvConstSeq::parse(seq_text));
  const auto r = rho0_pow(xi, e, opts);
  out << r.seq.str() << '\n';
  out << "constant from " << r.cert << '\n';
  return kOk;
}

int cmd_h_member(std::ostream& out, const std::string& xi_text, const std::string& seq_text, const RhoOptions& opts) {
  const auto xi = OrdinalExpr::parse(xi_text);
  const CertifiedSeq e(EvConstSeq::parse(seq_text));
  const auto r = rho0_pow(xi, e, opts);
  const bool member = r.seq == EvConstSeq::constant(0);
  out << bool_text(member) << '\n';
  return verdict(out, member, "rho0^" + xi.str() + " = " + r.seq.str());
}

int cmd_s_member(std::ostream& out, const TestArgs& ta, const std::string& xi_text, const std::string& a_text,
                 const std::string& b_text, const RhoOptions& opts) {
  const auto xi = OrdinalExpr::parse(xi_text);
  const auto alpha = EvConstSeq::parse(a_text);
  const auto beta = EvConstSeq::parse(b_text);
  Test t = load_test(ta.test_file);
  const bool branch = branch_member(alpha, beta, t);
  const bool member = s_member(xi, alpha, beta, t, opts);
  out << bool_text(member) << '\n';
  if (member) return kOk;
  if (!branch) return verdict(out, false, "not a branch");
  const auto d = shift(symdiff(alpha, beta));
  return verdict(out, false, "shifted difference " + d.str() + " lies in H");
}

// --- reduction ---------------------------------------------------------------

VChoice parse_v_choice(const std::string& s) {
  if (s == "auto") return VChoice::automatic;
  if (s == "closed") return VChoice::closed_form;
  if (s == "search") return VChoice::search;
  throw parse_error("--v must be auto, closed or search");
}

int cmd_reduce(std::ostream& out, const TestArgs& ta, const std::string& oracle, std::uint64_t ranks,
               std::uint64_t alpha0_bits, const std::string& v_choice) {
  ReductionOptions opts;
  opts.v_choice = parse_v_choice(v_choice);
  ReductionData rd(load_test(ta.test_file), oracle_by_name(oracle), opts);
  if (ranks > 0) rd.extend_to(ranks - 1);
  out << "rank\tw\tu\tv\tlen\n";
  for (std::uint64_t r = 0; r < ranks; ++r) {
    const auto& s = rd.segment(r);
    std::string v = s.v_bits.size() > 0 ? s.v_bits.str() : "";
    if (!s.v_zeros.is_exact() || s.v_zeros.exact() != 0) v += "0^" + s.v_zeros.str();
    if (v.empty()) v = "-";
    out << r << '\t' << psi(r).str() << '\t' << s.u.str() << '\t' << v << '\t' << s.len.str() << '\n';
  }
  if (alpha0_bits > 0) out << "alpha0 " << alpha0_prefix(rd, alpha0_bits).str() << '\n';
  return kOk;
}

int cmd_verify_l34(std::ostream& out, const TestArgs& ta, const std::string& oracle, std::uint64_t depth,
                   std::uint64_t t_bound, std::uint64_t m_bound, std::uint64_t prefix) {
  ReductionData rd(load_test(ta.test_file), oracle_by_name(oracle));
  const auto rep = verify_lemma34(rd, depth, t_bound, m_bound, default_lemma34_samples(prefix));
  out << "samples " << rep.samples << '\n';
  out << "structural " << rep.structural_checks << '\n';
  out << "a " << rep.a_checks << '\n';
  out << "b(i) " << rep.bi_checks << '\n';
  out << "b(ii) " << rep.bii_checks << '\n';
  out << "holds " << bool_text(rep.ok) << '\n';
  return verdict(out, rep.ok, rep.clause + " " + rep.witness);
}

int cmd_verify_t35(std::ostream& out, const TestArgs& ta, const std::string& oracle, const std::string& xi_text,
                   const std::string& alpha_text, std::uint64_t coords) {
  const auto xi = OrdinalExpr::parse(xi_text);
  const auto alpha = EvConstSeq::parse(alpha_text);
  ReductionData rd(load_test(ta.test_file), oracle_by_name(oracle));
  const bool ok = verify_thm35_identity(rd, xi, alpha, coords);
  out << bool_text(ok) << '\n';
  if (ok) return kOk;
  const auto d = shifted_difference(rd, alpha);
  std::string pos;
  for (const auto& n : d.exceptions) pos += (pos.empty() ? "" : ",") + n.str();
  return verdict(out, false, "alpha " + alpha.str() + " shifted difference ones at {" + pos + "}");
}

// --- selectors ---------------------------------------------------------------

std::string set_text(const SelectorInstance& inst, PointSet s) {
  std::string r = "{";
  bool first = true;
  for (std::uint32_t a = 0; a < inst.x0; ++a)
    for (std::uint32_t b = 0; b < inst.x1; ++b)
      if ((s >> inst.bit({a, b})) & 1U) {
        r += (first ? "(" : " (") + std::to_string(a) + "," + std::to_string(b) + ")";
        first = false;
      }
  return r + "}";
}

std::string selector_text(const PiSelector& sel) {
  std::string r = "psi0=[";
  for (std::size_t i = 0; i < sel.psi0.size(); ++i) r += (i ? "," : "") + std::to_string(sel.psi0[i]);
  r += "] psi1=[";
  for (std::size_t i = 0; i < sel.psi1.size(); ++i) r += (i ? "," : "") + std::to_string(sel.psi1[i]);
  return r + "]";
}

int cmd_selector_demo(std::ostream& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  const std::size_t f0 = pick(1, 4), f1 = pick(1, 4), x0 = pick(1, 3), x1 = pick(1, 3);
  // random forest on F0 + F1
  std::vector<std::size_t> comp(f0 + f1);
  for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = i;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) { return comp[v] == v ? v : comp[v] = root(comp[v]); };
  std::vector<Edge> edges;
  for (std::uint32_t a = 0; a < f0; ++a)
    for (std::uint32_t b = 0; b < f1; ++b) {
      if (pick(0, 2) == 0) continue;
      const auto ra = root(a), rb = root(f0 + b);
      if (ra == rb) continue;
      comp[ra] = rb;
      edges.push_back({a, b});
    }
  const PointSet full = (x0 * x1 == 64) ? ~PointSet{0} : ((PointSet{1} << (x0 * x1)) - 1);
  SetMap phi(f0 * f1, 0), psi_map(f0 * f1, 0);
  for (const auto& e : edges) {
    phi[e.left * f1 + e.right] = full;
    PointSet s = 0;
    while (s == 0) s = std::uniform_int_distribution<PointSet>(0, full)(rng);
    psi_map[e.left * f1 + e.right] = s;
  }
  const auto inst = SelectorInstance::make(f0, f1, x0, x1, edges, psi_map);
  out << "F0=" << f0 << " F1=" << f1 << " X0=" << x0 << " X1=" << x1 << '\n';
  for (const auto& e : inst.edges)
    out << "edge " << e.left << " " << e.right << " psi=" << set_text(inst, inst.psi[inst.index(e)]) << '\n';
  const auto res = lift_selector(inst, phi);
  if (!res.selector) {
    out << "lift: " << to_string(res.failure) << '\n';
    return verdict(out, false, to_string(res.failure) + " at stage " + std::to_string(res.stage));
  }
  out << "selector " << selector_text(*res.selector) << '\n';
  out << "blends " << res.blends << '\n';
  const auto bad = selector_violation(inst, inst.psi, *res.selector);
  out << "valid " << bool_text(!bad) << '\n';
  if (bad) return verdict(out, false, "edge " + std::to_string(bad->left) + " " + std::to_string(bad->right));
  return kOk;
}

// --- tree relations ----------------------------------------------------------

TreeRelation load_relation(const std::string& spec, const std::shared_ptr<const TruncTree>& tree) {
  if (spec == "builtin:extension") return TreeRelation::extension(tree);
  if (spec == "builtin:ones") return TreeRelation::ones_relation(tree);
  if (spec == "builtin:closed-zeros") {
    std::set<std::string> c;
    for (unsigned k = 0; k <= tree->depth(); ++k) c.insert(std::string(k, '0'));
    return TreeRelation::closed_set(tree, c);
  }
  std::ifstream in(spec);
  if (!in) throw io_error("cannot open relation file '" + spec + "'");
  return TreeRelation::load(in, tree);
}

struct RelArgs {
  unsigned alphabet = 2;
  unsigned depth = 4;
  std::vector<std::string> rels;
  std::string top;
  std::optional<std::size_t> eta;
  std::string z;
};

int cmd_rel_check(std::ostream& out, const RelArgs& a) {
  auto tree = std::make_shared<const TruncTree>(a.alphabet, a.depth);
  ResolutionFamily fam;
  for (const auto& r : a.rels) fam.stages.push_back(load_relation(r, tree));
  if (!a.top.empty()) fam.top = load_relation(a.top, tree);
  bool ok = true;
  std::string witness;
  for (std::size_t i = 0; i <= fam.last_index(); ++i) {
    const auto v = tree_relation_violation(fam.at(i));
    out << "stage " << i << (fam.top && i == fam.stages.size() ? " (top)" : "")
        << ": pairs " << fam.at(i).pair_count() << ", tree relation " << bool_text(!v) << '\n';
    if (v && ok) {
      ok = false;
      witness = "stage " + std::to_string(i) + " " + *v;
    }
  }
  if (ok && fam.last_index() > 0) {
    std::optional<std::string> v;
    try {
      v = resolution_family_violation(fam);
    } catch (const precondition_error& e) {
      v = e.what();
    }
    out << "resolution family " << bool_text(!v) << '\n';
    if (v) {
      ok = false;
      witness = *v;
    }
  }
  if (ok && a.eta) {
    const std::vector<std::size_t> eta(a.depth + 1, *a.eta);
    const auto v = uniformity_violation(fam, eta);
    out << "uniform " << bool_text(!v) << '\n';
    if (v) {
      ok = false;
      witness = "uniformity " + *v;
    }
  }
  if (ok && !a.z.empty()) {
    const auto z = parse_word_literal(a.z);
    for (std::size_t rho = 0; rho <= fam.last_index(); ++rho)
      out << "z^" << rho << " = " << word_literal(z_rho(fam, rho, z)) << '\n';
    const auto xe = xi_enumeration(fam, z);
    out << "enumeration";
    for (const auto& [idx, w] : xe.entries) out << " (" << idx << "," << word_literal(w) << ")";
    out << '\n';
    if (!xe.chain_links_hold) {
      ok = false;
      witness = "chain link fails for z=" + word_literal(z);
    }
  }
  return verdict(out, ok, witness);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Descriptive set theory toolkit: tests, hierarchy maps, reductions, selectors, tree relations", "dstk"};
  app.require_subcommand(1);
  std::function<int()> action;

  TestArgs ta;
  BBounds bounds;
  RhoOptions rho_opts;

  std::uint64_t max_q = 0;
  std::optional<std::uint64_t> check_max_q;
  std::string out_file;
  auto* gen = app.add_subcommand("gen-test", "print levels 0..max-q of the canonical test");
  gen->add_option("--max-q", max_q, "highest level")->required();
  gen->add_option("--out", out_file, "write to a file instead of stdout");
  gen->callback([&] { action = [&] { return cmd_gen_test(out, max_q, out_file); }; });

  auto* chk = app.add_subcommand("check-test", "check the test clauses up to a level");
  add_test_option(chk, ta);
  chk->add_option("--max-q", check_max_q, "highest level (defaults to the file depth)");
  chk->add_option("--p-max", bounds.p_max, "largest p in clause (b)");
  chk->add_option("--m-max", bounds.m_max, "largest m in clause (b)");
  chk->add_option("--u-max", bounds.u_len_max, "longest u in clause (b)");
  chk->callback([&] { action = [&] { return cmd_check_test(out, ta, check_max_q, bounds); }; });

  std::uint64_t level = 0;
  auto* sl = app.add_subcommand("slice", "list the pairs of the tree at one level");
  add_test_option(sl, ta);
  sl->add_option("--level,--p", level, "level")->required();
  sl->callback([&] { action = [&] { return cmd_slice(out, ta, level); }; });

  auto* dot = app.add_subcommand("graph-dot", "DOT export of the bipartite graph at one level");
  add_test_option(dot, ta);
  dot->add_option("--level,--p", level, "level")->required();
  dot->callback([&] { action = [&] { return cmd_graph_dot(out, ta, level); }; });

  std::uint64_t max_level = 0;
  auto* acy = app.add_subcommand("check-acyclic", "check every level graph up to a level for cycles");
  add_test_option(acy, ta);
  acy->add_option("--max-level", max_level, "highest level")->required();
  acy->callback([&] { action = [&] { return cmd_check_acyclic(out, ta, max_level); }; });

  auto* rect = app.add_subcommand("rect-free", "check every level slice up to a level for rectangles");
  add_test_option(rect, ta);
  rect->add_option("--max-level", max_level, "highest level")->required();
  rect->callback([&] { action = [&] { return cmd_rect_free(out, ta, max_level); }; });

  std::string xi = "1", seq, alpha, beta;
  auto add_rho_opts = [&](CLI::App* s) {
    s->add_option("--xi", xi, "ordinal: n, omega, or omega:a,b,...")->required();
    s->add_option("--max-stages", rho_opts.max_stages, "limit stages examined for omega");
  };
  auto* rho = app.add_subcommand("rho", "apply the xi-th iterate of rho0 to a sequence");
  add_rho_opts(rho);
  rho->add_option("--seq", seq, "sequence tail:prefix")->required();
  rho->callback([&] { action = [&] { return cmd_rho(out, xi, seq, rho_opts); }; });

  auto* hm = app.add_subcommand("h-member", "membership in H_{1+xi}");
  add_rho_opts(hm);
  hm->add_option("--seq", seq, "sequence tail:prefix")->required();
  hm->callback([&] { action = [&] { return cmd_h_member(out, xi, seq, rho_opts); }; });

  auto* sm = app.add_subcommand("s-member", "membership of (alpha, beta) in S_{1+xi}");
  add_rho_opts(sm);
  add_test_option(sm, ta);
  sm->add_option("--alpha", alpha, "sequence tail:prefix")->required();
  sm->add_option("--beta", beta, "sequence tail:prefix")->required();
  sm->callback([&] { action = [&] { return cmd_s_member(out, ta, xi, alpha, beta, rho_opts); }; });

  std::string oracle = "trivial", v_choice = "auto";
  std::uint64_t ranks = 8, alpha0_bits = 0;
  auto add_oracle = [&](CLI::App* s) {
    s->add_option("--oracle", oracle, "dense open oracle: trivial or one");
    add_test_option(s, ta);
  };
  auto* red = app.add_subcommand("reduce", "build the reduction segments");
  add_oracle(red);
  red->add_option("--ranks", ranks, "number of ranks to build");
  red->add_option("--alpha0", alpha0_bits, "also print this many bits of alpha0");
  red->add_option("--v", v_choice, "v construction: auto, closed or search");
  red->callback([&] { action = [&] { return cmd_reduce(out, ta, oracle, ranks, alpha0_bits, v_choice); }; });

  std::uint64_t depth = 200, t_bound = 3, m_bound = 3, prefix = 6;
  auto* l34 = app.add_subcommand("verify-l34", "verify the reduction clauses");
  add_oracle(l34);
  l34->add_option("--depth", depth, "position bound");
  l34->add_option("--t-bound", t_bound, "largest psi-rank of t");
  l34->add_option("--m-bound", m_bound, "largest m");
  l34->add_option("--prefix", prefix, "sample sequences with prefixes up to this length");
  l34->callback([&] { action = [&] { return cmd_verify_l34(out, ta, oracle, depth, t_bound, m_bound, prefix); }; });

  std::uint64_t coords = 16;
  auto* t35 = app.add_subcommand("verify-t35", "compare rho0^xi of alpha and of the shifted difference");
  add_oracle(t35);
  t35->add_option("--xi", xi, "finite ordinal")->required();
  t35->add_option("--alpha", alpha, "sequence 0:prefix")->required();
  t35->add_option("--coords", coords, "coordinates compared");
  t35->callback([&] { action = [&] { return cmd_verify_t35(out, ta, oracle, xi, alpha, coords); }; });

  std::uint64_t seed = 1;
  auto* sel = app.add_subcommand("selector-demo", "lift a selector on a random acyclic instance");
  sel->add_option("--seed", seed, "instance seed");
  sel->callback([&] { action = [&] { return cmd_selector_demo(out, seed); }; });

  RelArgs ra;
  auto* rel = app.add_subcommand("rel-check", "check tree relations and resolution families");
  rel->add_option("--alphabet", ra.alphabet, "alphabet size")->check(CLI::Range(1, 10));
  rel->add_option("--depth", ra.depth, "tree depth")->check(CLI::Range(0, 8));
  rel->add_option("--rel", ra.rels, "stage: file or builtin:extension|ones|closed-zeros (repeatable)")->required();
  rel->add_option("--top", ra.top, "top stage for a limit index");
  rel->add_option("--eta", ra.eta, "constant eta_k for the uniformity check");
  rel->add_option("--z", ra.z, "word for z^rho and the enumeration");
  rel->callback([&] { action = [&] { return cmd_rel_check(out, ra); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kOk;
    err << app.help();
    return kUsage;
  }

  try {
    return action();
  } catch (const undecided_error& e) {
    out << "undecided\n";
    err << "undecided: " << e.what() << '\n';
    return kUndecided;
  } catch (const search_exhausted& e) {
    out << "undecided\n";
    err << "undecided: " << e.what() << '\n';
    return kUndecided;
  } catch (const io_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const resource_limit& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace dstk::cli
