// liftcert: exact Kantorovich-style liftings of distances to distributions,
// with synthesis and checking of finite quantitative-equational certificates.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "liftcert/json_io.hpp"
#include "liftcert/lifting.hpp"
#include "liftcert/proofs.hpp"
#include "liftcert/theories.hpp"

namespace {

using namespace liftcert;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw parse_error(std::string("bad JSON in ") + path + ": " + e.what());
  }
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string precision_token() {
  if (const char* env = std::getenv("LIFTCERT_PRECISION")) return env;
  return "1e-12";
}

int cmd_lift(const std::string& op_tok, const std::string& space_path, const std::string& mu_path,
             const std::string& nu_path) {
  LiftOperator op = LiftOperator::from_token(op_tok);
  FuzzyRelation d = fuzzy_from_json(load_json(space_path));
  Distribution mu = distribution_from_json(load_json(mu_path));
  Distribution nu = distribution_from_json(load_json(nu_path));
  LiftResult r = lift(op, d, mu, nu);
  std::cout << "value: " << lift_value_display(r.value) << "\n";
  std::cout << "witness: " << coupling_to_json(r.witness).dump(2) << "\n";
  return 0;
}

int cmd_prove(const std::string& op_tok, const std::string& space_path, const std::string& s_text,
              const std::string& t_text, const std::string& mu_path, const std::string& nu_path,
              const std::string& out_path) {
  LiftOperator op = LiftOperator::from_token(op_tok);
  FuzzyRelation d = fuzzy_from_json(load_json(space_path));
  ConvexTerm s = ConvexTerm::leaf("_"), t = s;
  if (!s_text.empty() && !t_text.empty()) {
    s = parse_term(s_text);
    t = parse_term(t_text);
  } else if (!mu_path.empty() && !nu_path.empty()) {
    s = nary_to_binary(to_nary(distribution_from_json(load_json(mu_path))));
    t = nary_to_binary(to_nary(distribution_from_json(load_json(nu_path))));
  } else {
    throw parse_error("prove needs either --s/--t or --mu/--nu");
  }
  Derivation deriv = prove_lift(op, d, s, t);
  LiftValue value = preroot_to_value(deriv.conclusion.bound->eval(op), default_precision());
  std::cout << "value: " << lift_value_display(value) << "\n";
  Json cert = certificate_to_json(op, deriv, precision_token());
  write_json(out_path, cert);
  std::cout << "certificate: " << out_path << "\n";
  CheckResult self = check(op, deriv, true);
  if (!self.ok) {
    std::cout << "self-check FAILED at " << self.node << ": " << self.reason << "\n";
    return 1;
  }
  std::cout << "self-check: ok\n";
  return 0;
}

int cmd_check(const std::string& cert_path, const std::string& space_path, bool finite) {
  Certificate cert = certificate_from_json(load_json(cert_path));
  if (!space_path.empty()) {
    FuzzyRelation d = fuzzy_from_json(load_json(space_path));
    if (cert.derivation.conclusion.context != d) {
      std::cout << "invalid: root context differs from " << space_path << "\n";
      return 1;
    }
  }
  CheckResult r = check(cert.op, cert.derivation, finite);
  if (!r.ok) {
    std::cout << "invalid at " << r.node << ": " << r.reason << "\n";
    return 1;
  }
  std::cout << "valid";
  if (cert.derivation.conclusion.bound) {
    LiftValue v =
        preroot_to_value(cert.derivation.conclusion.bound->eval(cert.op), cert.precision);
    std::cout << " (bound " << lift_value_display(v) << ")";
  }
  std::cout << "\n";
  return 0;
}

int cmd_oracle(const std::string& op_tok, const std::string& space_path, const std::string& mu_path,
               const std::string& nu_path) {
  LiftOperator op = LiftOperator::from_token(op_tok);
  FuzzyRelation d = fuzzy_from_json(load_json(space_path));
  Distribution mu = distribution_from_json(load_json(mu_path));
  Distribution nu = distribution_from_json(load_json(nu_path));
  LiftResult fast = lift(op, d, mu, nu);

  auto vertices = enumerate_vertices(mu, nu);
  PreRoot best = evaluate_preroot(op, d, vertices[0]);
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    PreRoot v = evaluate_preroot(op, d, vertices[i]);
    if (preroot_cmp(v, best) < 0) best = v;
  }
  std::cout << "vertices: " << vertices.size() << "\n";
  std::cout << "solver:      " << lift_value_display(fast.value) << "\n";
  std::cout << "enumeration: " << lift_value_display(preroot_to_value(best, default_precision()))
            << "\n";
  if (!preroot_eq(fast.value_preroot, best)) {
    std::cout << "MISMATCH\n";
    return 1;
  }
  std::cout << "agree\n";
  return 0;
}

int cmd_satisfies(const std::string& model_path, const std::string& eq_path) {
  Model m = model_from_json(load_json(model_path));
  QuantEquation eq = equation_from_json(load_json(eq_path));
  bool ok = satisfies(m, eq);
  std::cout << (ok ? "satisfied" : "not satisfied") << "\n";
  return ok ? 0 : 1;
}

int cmd_demo_noncompact(unsigned n) {
  if (n < 1 || n > 30) throw parse_error("--grid must be in 1..30");
  std::vector<Rat> grid;
  for (unsigned i = 1; i <= n; ++i) grid.emplace_back(1, Int(1) << i);
  RelationalModel m = two_zeros_model(grid);
  TheoryReport rep = model_respects_finitary_rules(m);

  std::cout << "carrier: {0, 0'} plus " << grid.size() << " grid points 1/2^i, i = 1.." << n
            << "\n";
  for (std::size_t a = 1; a < m.levels.size(); ++a)
    std::cout << "(0,0') in R_" << rat_to_string(m.levels[a]) << ": "
              << (m.related(m.levels[a], 0, 1) ? "yes" : "no") << "\n";
  std::cout << "(0,0') in R_0: " << (m.related(Rat(0), 0, 1) ? "yes" : "no") << "\n";
  std::cout << "weakening inclusions: " << (rep.weakening_ok ? "hold" : "VIOLATED") << "\n";
  std::cout << "self-distance instances: " << (rep.self_distance_ok ? "hold" : "VIOLATED") << "\n";
  std::cout << "symmetry instances: " << (rep.symmetry_ok ? "hold" : "VIOLATED") << "\n";
  std::cout << "triangle instances (" << rep.triangle_instances
            << " checked): " << (rep.triangle_ok ? "hold" : "VIOLATED") << "\n";
  for (auto& v : rep.violations) std::cout << "  " << v << "\n";
  std::cout << "finite-limit witness ((0,0') at every positive level, not at 0): "
            << (rep.noncompact_witness ? "present" : "ABSENT") << "\n";
  return (rep.finitary_ok() && rep.noncompact_witness) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact distance lifting on distributions with proof certificates"};
  app.require_subcommand(1);

  std::string op_tok = "standard", space_path, mu_path, nu_path;
  std::string s_text, t_text, out_path = "cert.json", cert_path, model_path, eq_path;
  bool finite = false;
  unsigned grid_n = 10;

  auto* c_lift = app.add_subcommand("lift", "compute the lifted distance and a witness coupling");
  c_lift->add_option("--op", op_tok, "operator: standard | max | power:<k> | geometric");
  c_lift->add_option("--space", space_path, "fuzzy relation JSON")->required();
  c_lift->add_option("--mu", mu_path, "left distribution JSON")->required();
  c_lift->add_option("--nu", nu_path, "right distribution JSON")->required();

  auto* c_prove = app.add_subcommand("prove", "compute and certify the lifted distance");
  c_prove->add_option("--op", op_tok, "operator token");
  c_prove->add_option("--space", space_path, "fuzzy relation JSON")->required();
  c_prove->add_option("--s", s_text, "left term");
  c_prove->add_option("--t", t_text, "right term");
  c_prove->add_option("--mu", mu_path, "left distribution JSON (alternative to --s)");
  c_prove->add_option("--nu", nu_path, "right distribution JSON (alternative to --t)");
  c_prove->add_option("--out", out_path, "certificate output path");

  auto* c_check = app.add_subcommand("check", "validate a certificate");
  c_check->add_option("--cert", cert_path, "certificate JSON")->required();
  c_check->add_option("--space", space_path, "expected root context (optional)");
  c_check->add_flag("--finite", finite, "reject any use of the infinitary rule");

  auto* c_oracle = app.add_subcommand("oracle", "cross-check the solver against vertex enumeration");
  c_oracle->add_option("--op", op_tok, "operator token");
  c_oracle->add_option("--space", space_path, "fuzzy relation JSON")->required();
  c_oracle->add_option("--mu", mu_path, "left distribution JSON")->required();
  c_oracle->add_option("--nu", nu_path, "right distribution JSON")->required();

  auto* c_sat = app.add_subcommand("satisfies", "finite-model satisfaction of an equation");
  c_sat->add_option("--model", model_path, "model JSON")->required();
  c_sat->add_option("--eq", eq_path, "quantitative equation JSON")->required();

  auto* c_demo = app.add_subcommand("demo-noncompact", "two-zeros countermodel report");
  c_demo->add_option("--grid", grid_n, "grid size: levels 1/2^i for i = 1..N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_lift->parsed()) return cmd_lift(op_tok, space_path, mu_path, nu_path);
    if (c_prove->parsed())
      return cmd_prove(op_tok, space_path, s_text, t_text, mu_path, nu_path, out_path);
    if (c_check->parsed()) return cmd_check(cert_path, space_path, finite);
    if (c_oracle->parsed()) return cmd_oracle(op_tok, space_path, mu_path, nu_path);
    if (c_sat->parsed()) return cmd_satisfies(model_path, eq_path);
    if (c_demo->parsed()) return cmd_demo_noncompact(grid_n);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
