// superwarp: compute connection and curvature tables, run verification
// suites, and classify Einstein warped products.

#include "superwarp/suite.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace superwarp;

namespace {

enum Exit : int {
  kPass = 0,
  kCheckFail = 1,
  kParse = 2,
  kInvariant = 3,
  kUnsupported = 4,
  kDegenerate = 5,
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ParseError("cannot write " + out);
  f << text;
}

std::string index_name(const Chart& c, const std::vector<int>& idx) {
  std::string s = "(";
  for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + c.coord(idx[k]).name;
  return s + ")";
}

void write_tables(std::ostream& os, const Curvature& k) {
  const Connection& conn = k.connection();
  const Chart& c = conn.chart();
  int n = conn.dim();
  os << "[christoffel " << to_string(conn.kind()) << "]\n";
  os << "# Gamma(I,J,K): nabla_{d_I} d_J = sum_K Gamma(I,J,K) d_K\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        if (!conn.gamma(i, j, l).is_zero())
          os << index_name(c, {i, j, l}) << '\t' << conn.gamma(i, j, l).to_string(c) << '\n';
  os << "[riemann " << to_string(conn.kind()) << "]\n";
  os << "# R(I,J,K,L): component along d_L of R(d_I,d_J)d_K\n";
  for (const auto& r : k.riemann_rows()) os << index_name(c, r.indices) << '\t' << r.expression << '\n';
  os << "[ricci " << to_string(conn.kind()) << "]\n";
  for (const auto& r : k.ricci_rows()) os << index_name(c, r.indices) << '\t' << r.expression << '\n';
}

int cmd_compute(const std::string& spec_path, const std::string& connection,
                const std::string& p_text, const std::string& out) {
  LoadedSpec spec = load_spec(spec_path);
  ManifoldSpec m;
  std::optional<VectorField> p;
  if (spec.is_warped()) {
    WarpedProduct w(std::get<WarpedSpec>(spec.spec));
    m = w.product();
    if (w.p_location() != PLocation::none) p = w.p();
  } else {
    m = std::get<ManifoldSpec>(spec.spec);
    p = m.P;
  }
  if (!p_text.empty()) p = parse_field(p_text, m.chart);

  std::ostringstream os;
  os << "# superwarp tables\nversion\t" << kVersion << "\nspec_checksum\t" << spec.checksum
     << "\nmanifold\t" << m.name << '\n';
  if (connection == "lc" || connection == "both") write_tables(os, Curvature(levi_civita(m)));
  if (connection == "ssnm" || connection == "both") {
    if (!p) {
      if (connection == "ssnm") throw ParseError("ssnm needs P: give --P or a [P] table");
    } else {
      os << "P\t" << p->to_string(m.chart) << '\n';
      write_tables(os, Curvature(ssnm_connection(m, *p)));
    }
  }
  emit(os.str(), out);
  return kPass;
}

bool is_statement(const std::string& s) {
  const auto& ids = statement_ids();
  return std::find(ids.begin(), ids.end(), s) != ids.end();
}

bool is_theorem(const std::string& s) {
  const auto& ids = einstein_theorem_ids();
  return std::find(ids.begin(), ids.end(), s) != ids.end();
}

int cmd_verify(const std::string& scope, const std::string& spec_path, std::uint64_t seed,
               const std::string& out) {
  bool given = !spec_path.empty();
  SpecSet specs = given ? spec_set_from(load_spec(spec_path)) : bundled_spec_set();
  VerificationReport rep;
  if (scope == "paper" || scope == "all") {
    rep = check_all(specs, seed);
  } else if (is_statement(scope)) {
    rep = check_warped_statements(specs, scope, given);
  } else if (is_theorem(scope)) {
    rep = check_einstein_theorem(scope, seed);
  } else if (scope == "4.1") {
    rep = check_ricci_warped_line(specs);
  } else if (scope == "4.18") {
    rep = check_flat_r12();
  } else if (scope == "4.25" || scope == "4.26") {
    rep = check_ssnm_r12();
  } else if (scope == "2.7" || scope == "2.8" || scope == "2.9") {
    rep = check_connection_axioms(specs);
  } else if (scope == "2.15") {
    rep = check_curvature_comparison(specs);
  } else if (scope == "properties") {
    rep = check_properties(seed, 100);
  } else {
    throw ParseError("unknown scope '" + scope + "'");
  }
  rep.spec_checksum = specs.checksum;
  if (rep.records.empty()) rep.notes.push_back("no check applies to the selected specs");
  emit(rep.serialize(), out);
  if (!out.empty())
    std::cerr << rep.passed() << " passed, " << rep.failed() << " failed\n";
  return rep.all_pass() ? kPass : kCheckFail;
}

std::optional<Rational> rational_flag(const std::string& s) {
  if (s.empty() || s == "symbolic") return std::nullopt;
  try {
    Rational r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("not a rational number: '" + s + "'");
  }
}

int cmd_classify(const std::string& base, const std::string& conn, int l,
                 const std::string& lambda0, const std::string& c0, const std::string& out) {
  EinsteinProblem p;
  try {
    p.base = parse_base_type(base);
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  p.connection = conn == "lc" ? ConnectionKind::levi_civita : ConnectionKind::ssnm;
  p.l = l;
  p.lambda0 = rational_flag(lambda0);
  p.c0 = rational_flag(c0);
  std::vector<SolutionFamily> fs = classify(p);
  std::ostringstream os;
  os << "# base " << to_string(p.base) << ", connection " << to_string(p.connection)
     << ", q - n = " << l;
  if (p.lambda0) os << ", lambda0 = " << p.lambda0->get_str();
  if (p.c0) os << ", c0 = " << p.c0->get_str();
  os << '\n';
  for (const auto& f : fs) os << f.to_string() << '\n';
  if (fs.empty()) {
    if (p.base == BaseType::R12 && p.connection == ConnectionKind::ssnm)
      os << "no family: q - n + 2 != 0\n";
    else
      os << "no family for these constants\n";
  }
  emit(os.str(), out);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connections, curvature and Einstein warped products on Z2-manifolds"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string spec, connection = "both", p_text, out, scope, base = "R10", conn = "ssnm";
  std::string lambda0, c0;
  std::uint64_t seed = 20240611;
  int l = 1;

  auto* compute = app.add_subcommand("compute", "Christoffel, Riemann and Ricci tables");
  compute->add_option("--spec", spec, "manifold or warped spec (TOML)")->required();
  compute->add_option("--connection", connection, "lc, ssnm or both")
      ->check(CLI::IsMember({"lc", "ssnm", "both"}));
  compute->add_option("--P", p_text, "vector field P, overriding the spec");
  compute->add_option("--out", out, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "run verification checks");
  verify->add_option("scope,--scope", scope,
                     "all (default; alias paper), a statement id such as 3.5, a theorem such as 4.8, "
                     "4.1, 4.18, 4.26, 2.7, 2.15 or properties");
  verify->add_option("--spec", spec, "spec to check instead of the bundled set");
  verify->add_option("--seed", seed, "seed for random checks");
  verify->add_option("--out", out, "report file (default stdout)");

  auto* cls = app.add_subcommand("classify", "Einstein warping functions");
  cls->add_option("--base", base, "R10 or R12");
  cls->add_option("--conn,--connection", conn, "lc or ssnm")->check(CLI::IsMember({"lc", "ssnm"}));
  cls->add_option("--l", l, "q - n of the fiber");
  cls->add_option("--lambda0", lambda0, "rational, or omit for symbolic");
  cls->add_option("--c0", c0, "rational fiber constant, or omit for symbolic");
  cls->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*compute) return cmd_compute(spec, connection, p_text, out);
    if (*verify) {
      if (scope.empty()) scope = "all";
      return cmd_verify(scope, spec, seed, out);
    }
    return cmd_classify(base, conn, l, lambda0, c0, out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate parameter: " << e.what() << '\n';
    return kDegenerate;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis not met: " << e.what() << '\n';
    return kUnsupported;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvariant;
  }
}
