// Command-line front end: exact SU(2) recoupling symbols, coupling trees,
// quasicharacter algebra, the numeric SU(3) subsystem and the truncated
// lattice Hamiltonian.

#include "CLI11.hpp"
#include "json.hpp"

#include "qc/gauge.hpp"
#include "qc/quasichar.hpp"
#include "qc/su3.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace qc;

namespace {

constexpr const char* kVersion = "1.0.0";

double g_hbar = 1.0;
double g_beta = 1.0;
std::uint64_t g_seed = 1;
bool g_float = false;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

HalfInt jmax_cap() {
  if (const char* env = std::getenv("RECOUPLING_JMAX_CAP")) return parse_half_int(env);
  return HalfInt(20);
}

HalfInt parse_jmax(const std::string& text) {
  const HalfInt j = parse_half_int(text);
  if (j > jmax_cap())
    throw std::runtime_error("jmax " + j.str() + " exceeds the cap " + jmax_cap().str() +
                             " (override with RECOUPLING_JMAX_CAP)");
  return j;
}

std::vector<HalfInt> parse_spins(const std::string& text) {
  std::istringstream is(text);
  std::vector<HalfInt> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_half_int(tok));
  return out;
}

std::string spins_str(const SpinLabelling& spins) {
  std::string out;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (i) out += " ";
    out += spins[i].str();
  }
  return out;
}

std::string value_str(const SurdSum& v) { return g_float ? fmt17(v.to_double()) : v.str(); }

json config_json() {
  return json{{"hbar", g_hbar}, {"beta", g_beta}, {"seed", g_seed},
              {"jmax_cap", jmax_cap().str()}, {"mode", g_float ? "float" : "exact"}};
}

json record(const std::string& command, json payload) {
  return json{{"command", command}, {"config", config_json()},
              {"payload", std::move(payload)}, {"version", kVersion}};
}

json index_json(const QuasicharIndex& q) {
  json alpha = json::array(), alpha_prime = json::array();
  for (HalfInt v : q.alpha) alpha.push_back(v.str());
  for (HalfInt v : q.alpha_prime) alpha_prime.push_back(v.str());
  return json{{"tree", q.tree.str()}, {"alpha", alpha}, {"alpha_prime", alpha_prime}};
}

json expansion_json(const QuasicharExpansion& e) {
  json out = json::array();
  for (const auto& [k, v] : e)
    out.push_back(json{{"index", index_json(k)}, {"coeff", value_str(v)}});
  return out;
}

su3::Irrep parse_su3_label(const std::string& text) {
  std::istringstream is(text);
  int n, m;
  if (!(is >> n >> m) || n < 0 || m < 0)
    throw std::invalid_argument("SU(3) label must be two nonnegative integers, got '" + text + "'");
  return {n, m};
}

int run_selftest() {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  };

  {
    // five-term expansion of tr([a1,a2]^2) over the cherry
    const auto e = expand_invariant(su2_stratum_relation(), 2, CouplingTree::cherry());
    const auto coeff = [&](int a, int b, int c) {
      const SpinLabelling lab{HalfInt::from_twice(a), HalfInt::from_twice(b), HalfInt::from_twice(c)};
      auto it = e.find(QuasicharIndex{CouplingTree::cherry(), lab, lab});
      return it == e.end() ? SurdSum() : it->second;
    };
    report("su2 relation term (1,0,1) -> 1", coeff(2, 0, 2) == SurdSum(Rational(1)));
    report("su2 relation term (0,1,1) -> 1", coeff(0, 2, 2) == SurdSum(Rational(1)));
    report("su2 relation term (1,1,0) -> 3", coeff(2, 2, 0) == SurdSum(Rational(3)));
    report("su2 relation term (1,1,1) -> -2", coeff(2, 2, 2) == SurdSum(Rational(-2)));
    report("su2 relation term (0,0,0) -> -3", coeff(0, 0, 0) == SurdSum(Rational(-3)));
    report("su2 relation support", e.size() == 5);
  }
  {
    // SU(3) 9-lambda quintet, absolute values
    using su3::Irrep;
    const Irrep r20{2, 0}, r01{0, 1}, r21{2, 1}, r00{0, 0}, r10{1, 0};
    const auto w = [&](const Irrep& t1, const Irrep& troot) {
      return std::abs(su3::nine_lambda({{{r20, r20, r21}, {r01, r00, r01}, {t1, r20, troot}}},
                                       {1, 1, 1}, {1, 1, 1}));
    };
    const auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
    report("su3 |W(21,22)| = 1", near(w(r21, Irrep{2, 2}), 1.0));
    report("su3 |W(21,30)| = sqrt(3)/2", near(w(r21, Irrep{3, 0}), std::sqrt(3.0) / 2.0));
    report("su3 |W(21,11)| = sqrt(6)/4", near(w(r21, Irrep{1, 1}), std::sqrt(6.0) / 4.0));
    report("su3 |W(10,30)| = 1/2", near(w(r10, Irrep{3, 0}), 0.5));
    report("su3 |W(10,11)| = sqrt(10)/4", near(w(r10, Irrep{1, 1}), std::sqrt(10.0) / 4.0));
  }
  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasicharacter recoupling calculus"};
  app.require_subcommand(1);
  app.add_flag("--float", g_float, "print floating-point values instead of exact surds");
  app.add_option("--hbar", g_hbar, "scale of the holomorphic inner product");
  app.add_option("--beta", g_beta, "scale of the invariant metric");
  app.add_option("--seed", g_seed, "seed for stochastic subcommands");

  // ---- symbols ----------------------------------------------------------
  auto* symbols = app.add_subcommand("symbols", "cg / 6j / 9j / 9-lambda values");
  std::string symbol_kind;
  std::vector<std::string> symbol_args;
  symbols->add_option("kind", symbol_kind, "cg | sixj | ninej | ninelambda")->required();
  symbols->add_option("spins", symbol_args, "spins as p/q or decimal halves")->required();

  // ---- trees ------------------------------------------------------------
  auto* trees = app.add_subcommand("trees", "coupling-tree utilities");
  std::string trees_verb, trees_tree, trees_leaves, trees_root;
  trees->add_option("verb", trees_verb, "parse | enumerate | count")->required();
  trees->add_option("--tree", trees_tree, "bracketing, e.g. \"((1 2) 3)\"")->required();
  trees->add_option("--leaves", trees_leaves, "leaf spins");
  trees->add_option("--root", trees_root, "root spin");

  // ---- recouple ---------------------------------------------------------
  auto* recouple = app.add_subcommand("recouple", "recoupling coefficients");
  std::string rc_tree, rc_t1, rc_t2, rc_a1, rc_a2, rc_a3, rc_sigma;
  recouple->add_option("--tree", rc_tree, "tree for the factorized R(T)");
  recouple->add_option("--alpha1", rc_a1, "labelling (post-order spins)");
  recouple->add_option("--alpha2", rc_a2, "labelling (post-order spins)");
  recouple->add_option("--alpha3", rc_a3, "labelling for R(T)");
  recouple->add_option("--t1", rc_t1, "tree of the lower labelling");
  recouple->add_option("--t2", rc_t2, "tree of the upper labelling");
  recouple->add_option("--sigma", rc_sigma, "leaf permutation (1-based images)");

  // ---- structprod -------------------------------------------------------
  auto* structprod = app.add_subcommand("structprod", "structure constants of a product");
  std::string sp_tree, sp_a1, sp_a1p, sp_a2, sp_a2p;
  structprod->add_option("--tree", sp_tree)->required();
  structprod->add_option("--alpha1", sp_a1)->required();
  structprod->add_option("--alpha1p", sp_a1p, "defaults to alpha1");
  structprod->add_option("--alpha2", sp_a2)->required();
  structprod->add_option("--alpha2p", sp_a2p, "defaults to alpha2");

  // ---- expand -----------------------------------------------------------
  auto* expand_cmd = app.add_subcommand("expand", "trace polynomial -> quasicharacter basis");
  std::string ex_poly, ex_tree;
  int ex_links = 0;
  expand_cmd->add_option("--poly", ex_poly, "e.g. \"3*tr(1 2 -1 -2) - tr(2 1)\"")->required();
  expand_cmd->add_option("--links", ex_links, "number of links")->required();
  expand_cmd->add_option("--tree", ex_tree, "coupling tree (default: standard)");

  // ---- norms ------------------------------------------------------------
  auto* norms_cmd = app.add_subcommand("norms", "norm of a modified quasicharacter");
  std::string no_tree, no_alpha, no_alphap;
  norms_cmd->add_option("--tree", no_tree)->required();
  norms_cmd->add_option("--alpha", no_alpha)->required();
  norms_cmd->add_option("--alphap", no_alphap, "defaults to alpha");

  // ---- su3 --------------------------------------------------------------
  auto* su3cmd = app.add_subcommand("su3", "numeric SU(3) subsystem (float only)");
  std::string s3_verb, s3_r1, s3_r2, s3_target, s3_dump, s3_import, s3_poly, s3_source, s3_rows;
  int s3_k = 1;
  su3cmd->add_option("verb", s3_verb, "dim | series | cg | ninelambda | expand | row")->required();
  su3cmd->add_option("--r1", s3_r1, "label \"n m\"");
  su3cmd->add_option("--r2", s3_r2, "label \"n m\"");
  su3cmd->add_option("--target", s3_target, "label \"n m\"");
  su3cmd->add_option("--k", s3_k, "multiplicity sector");
  su3cmd->add_option("--dump", s3_dump, "write CG coefficients to a CSV file");
  su3cmd->add_option("--import", s3_import, "override CG coefficients from a CSV file");
  su3cmd->add_option("--poly", s3_poly, "trace polynomial over links 1, 2");
  su3cmd->add_option("--source", s3_source, "quasichar \"n1 m1 n2 m2 n m\"");
  su3cmd->add_option("--rows", s3_rows, "nine labels \"n1 m1 n2 m2 ... n9 m9\"");

  // ---- hamiltonian ------------------------------------------------------
  auto* ham = app.add_subcommand("hamiltonian", "truncated lattice Hamiltonian");
  int ham_links = 1;
  std::vector<std::string> ham_plaquettes;
  double ham_g = 1.0, ham_delta = 1.0;
  std::string ham_jmax = "1", ham_tree, ham_model;
  auto* ham_links_opt = ham->add_option("--links", ham_links);
  auto* ham_plaq_opt = ham->add_option("--plaquette", ham_plaquettes, "signed link word, repeatable");
  ham->add_option("--g", ham_g, "coupling");
  ham->add_option("--delta", ham_delta, "lattice spacing");
  ham->add_option("--jmax", ham_jmax, "spin cutoff");
  ham->add_option("--tree", ham_tree, "coupling tree (default: standard)");
  ham->add_option("--model", ham_model,
                  "JSON model file {n_links, plaquettes, g, delta}; flags override");

  // ---- stratum-op -------------------------------------------------------
  auto* stratum = app.add_subcommand("stratum-op", "N=2 stratum-relation operator matrix");
  std::string st_jmax = "3/2";
  stratum->add_option("--jmax", st_jmax, "spin cutoff");

  // ---- selftest ---------------------------------------------------------
  auto* selftest = app.add_subcommand("selftest", "embedded fixture suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (symbols->parsed()) {
      std::vector<HalfInt> s;
      for (const auto& a : symbol_args) s.push_back(parse_half_int(a));
      SurdSum value;
      if (symbol_kind == "cg") {
        if (s.size() != 6) throw std::invalid_argument("cg needs j1 m1 j2 m2 j m");
        value = cg(s[0], s[1], s[2], s[3], s[4], s[5]);
      } else if (symbol_kind == "sixj") {
        if (s.size() != 6) throw std::invalid_argument("sixj needs six spins");
        value = wigner6j(s[0], s[1], s[2], s[3], s[4], s[5]);
      } else if (symbol_kind == "ninej" || symbol_kind == "ninelambda") {
        if (s.size() != 9) throw std::invalid_argument(symbol_kind + " needs nine spins");
        const NineJ rows{{{s[0], s[1], s[2]}, {s[3], s[4], s[5]}, {s[6], s[7], s[8]}}};
        value = symbol_kind == "ninej" ? wigner9j(rows) : nine_lambda_su2(rows);
      } else {
        throw std::invalid_argument("unknown symbol kind '" + symbol_kind + "'");
      }
      std::cout << value_str(value) << "\n";
      return 0;
    }

    if (trees->parsed()) {
      const CouplingTree t = parse_tree(trees_tree);
      if (trees_verb == "parse") {
        std::cout << t.str() << "\n";
        return 0;
      }
      const std::vector<HalfInt> leaves = parse_spins(trees_leaves);
      std::optional<HalfInt> root;
      if (!trees_root.empty()) root = parse_half_int(trees_root);
      const auto labs = enumerate_spin_labellings(t, leaves, root);
      if (trees_verb == "count") {
        std::cout << labs.size() << "\n";
        return 0;
      }
      if (trees_verb == "enumerate") {
        for (const auto& lab : labs) std::cout << spins_str(lab) << "\n";
        return 0;
      }
      throw std::invalid_argument("unknown trees verb '" + trees_verb + "'");
    }

    if (recouple->parsed()) {
      if (!rc_tree.empty()) {
        const CouplingTree t = parse_tree(rc_tree);
        const SurdSum r = recoupling_R(t, parse_spins(rc_a1), parse_spins(rc_a2), parse_spins(rc_a3));
        std::cout << value_str(r) << "\n";
        return 0;
      }
      const CouplingTree t1 = parse_tree(rc_t1);
      const CouplingTree t2 = parse_tree(rc_t2);
      Permutation sigma = identity_permutation(t1.leaf_count());
      if (!rc_sigma.empty()) {
        sigma.clear();
        std::istringstream is(rc_sigma);
        int v;
        while (is >> v) sigma.push_back(v - 1);
      }
      const SurdSum r = recoupling_coeff(t1, parse_spins(rc_a1), t2, parse_spins(rc_a2), sigma);
      std::cout << value_str(r) << "\n";
      return 0;
    }

    if (structprod->parsed()) {
      const CouplingTree t = parse_tree(sp_tree);
      const auto a1 = parse_spins(sp_a1);
      const auto a2 = parse_spins(sp_a2);
      const auto a1p = sp_a1p.empty() ? a1 : parse_spins(sp_a1p);
      const auto a2p = sp_a2p.empty() ? a2 : parse_spins(sp_a2p);
      const auto sc = structure_constants(make_quasichar(t, a1, a1p), make_quasichar(t, a2, a2p));
      std::cout << record("structprod", expansion_json(sc)).dump(2) << "\n";
      return 0;
    }

    if (expand_cmd->parsed()) {
      const CouplingTree t = ex_tree.empty() ? standard_tree(ex_links) : parse_tree(ex_tree);
      const auto e = expand_invariant(parse_trace_polynomial(ex_poly), ex_links, t);
      std::cout << record("expand", expansion_json(e)).dump(2) << "\n";
      return 0;
    }

    if (norms_cmd->parsed()) {
      const CouplingTree t = parse_tree(no_tree);
      const auto alpha = parse_spins(no_alpha);
      const auto alphap = no_alphap.empty() ? alpha : parse_spins(no_alphap);
      const NormParams p{g_hbar, g_beta};
      std::cout << fmt17(norm(make_quasichar(t, alpha, alphap), p)) << "\n";
      return 0;
    }

    if (su3cmd->parsed()) {
      const NormParams p{g_hbar, g_beta};
      if (!s3_import.empty()) {
        std::ifstream in(s3_import);
        if (!in) throw std::runtime_error("cannot read " + s3_import);
        std::stringstream buffer;
        buffer << in.rdbuf();
        su3::import_cg_csv(buffer.str());
      }
      if (s3_verb == "dim") {
        std::cout << su3::dim(parse_su3_label(s3_r1)) << "\n";
        return 0;
      }
      if (s3_verb == "series") {
        json payload = json::array();
        for (const auto& [r, mult] : su3::cg_series(parse_su3_label(s3_r1), parse_su3_label(s3_r2)))
          payload.push_back(json{{"n", r.n}, {"m", r.m}, {"multiplicity", mult}});
        std::cout << record("su3 series", payload).dump(2) << "\n";
        return 0;
      }
      if (s3_verb == "cg") {
        const auto tensor =
            su3::cg(parse_su3_label(s3_r1), parse_su3_label(s3_r2), parse_su3_label(s3_target), s3_k);
        const std::string csv = su3::cg_to_csv(*tensor);
        if (!s3_dump.empty()) {
          std::ofstream out(s3_dump);
          if (!out) throw std::runtime_error("cannot write " + s3_dump);
          out << csv;
          std::cout << "wrote " << s3_dump << "\n";
        } else {
          std::cout << csv;
        }
        return 0;
      }
      if (s3_verb == "ninelambda") {
        std::istringstream is(s3_rows);
        std::array<std::array<su3::Irrep, 3>, 3> rows;
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c)
            if (!(is >> rows[r][c].n >> rows[r][c].m))
              throw std::invalid_argument("--rows needs nine \"n m\" labels");
        std::cout << fmt17(su3::nine_lambda(rows, {1, 1, 1}, {1, 1, 1})) << "\n";
        return 0;
      }
      if (s3_verb == "expand" || s3_verb == "row") {
        const auto e = su3::expand_invariant(parse_trace_polynomial(s3_poly));
        su3::Expansion out = e;
        std::string name = "su3 expand";
        if (s3_verb == "row") {
          std::istringstream is(s3_source);
          su3::QuasicharKey source;
          if (!(is >> source.r1.n >> source.r1.m >> source.r2.n >> source.r2.m >> source.root.n >>
                source.root.m))
            throw std::invalid_argument("--source needs \"n1 m1 n2 m2 n m\"");
          out = su3::operator_row(e, source, p);
          name = "su3 row";
        }
        json payload = json::array();
        for (const auto& [k, v] : out)
          payload.push_back(json{{"index", k.str()}, {"coeff", fmt17(v)}});
        std::cout << record(name, payload).dump(2) << "\n";
        return 0;
      }
      throw std::invalid_argument("unknown su3 verb '" + s3_verb + "'");
    }

    if (ham->parsed()) {
      LatticeModel model;
      if (!ham_model.empty()) {
        std::ifstream in(ham_model);
        if (!in) throw std::runtime_error("cannot read " + ham_model);
        json doc = json::parse(in);
        model.n_links = doc.at("n_links").get<int>();
        model.g = doc.value("g", 1.0);
        model.delta = doc.value("delta", 1.0);
        for (const auto& word : doc.at("plaquettes"))
          model.plaquettes.push_back(word.get<std::vector<int>>());
      } else if (!*ham_links_opt || !*ham_plaq_opt) {
        throw std::invalid_argument("hamiltonian needs either --model or --links/--plaquette");
      }
      if (*ham_links_opt) model.n_links = ham_links;
      if (*ham_plaq_opt) {
        model.plaquettes.clear();
        for (const auto& word : ham_plaquettes) {
          std::istringstream is(word);
          std::vector<int> w;
          int v;
          while (is >> v) w.push_back(v);
          model.plaquettes.push_back(std::move(w));
        }
      }
      if (ham->count("--g")) model.g = ham_g;
      if (ham->count("--delta")) model.delta = ham_delta;
      const CouplingTree t = ham_tree.empty() ? standard_tree(ham_links) : parse_tree(ham_tree);
      const HalfInt jmax = parse_jmax(ham_jmax);
      const auto sp = assemble_hamiltonian(model, t, jmax);
      const auto spec = spectrum(sp);
      json basis = json::array();
      for (const auto& q : sp.basis) basis.push_back(index_json(q));
      json matrix = json::array();
      for (Eigen::Index r = 0; r < sp.hamiltonian.rows(); ++r)
        for (Eigen::Index c = 0; c < sp.hamiltonian.cols(); ++c)
          matrix.push_back(sp.hamiltonian(r, c));
      json eigenvalues = json::array();
      for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
        eigenvalues.push_back(spec.eigenvalues(i));
      std::cout << record("hamiltonian",
                          json{{"basis", basis},
                               {"matrix", matrix},
                               {"eigenvalues", eigenvalues},
                               {"dropped_couplings", sp.dropped_couplings}})
                       .dump(2)
                << "\n";
      return 0;
    }

    if (stratum->parsed()) {
      const NormParams p{g_hbar, g_beta};
      const HalfInt jmax = parse_jmax(st_jmax);
      const auto triples = n2_triples(jmax);
      const Eigen::MatrixXd m = stratum_operator_su2_n2(p, jmax);
      json basis = json::array();
      for (const auto& tr : triples)
        basis.push_back(json::array({tr.j1.str(), tr.j2.str(), tr.j.str()}));
      json matrix = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) matrix.push_back(m(r, c));
      std::cout << record("stratum-op", json{{"basis", basis}, {"matrix", matrix}}).dump(2) << "\n";
      return 0;
    }

    if (selftest->parsed()) return run_selftest();
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
