// ryssub: command-line front end for the frame geometry engine.
//
// Exit status: 0 on success (ledgers with mismatches included), 1 on input or
// computation errors, 2 on usage errors.

#include "ryssub/ryssub.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace ryssub;

namespace {

#ifdef RYSSUB_DATA_DIR
const char *kDataDir = RYSSUB_DATA_DIR;
#else
const char *kDataDir = "data";
#endif

std::string vector_text(const FrameVectorField &v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    Scalar c = v[k];
    if (c.is_zero()) continue;
    const bool neg = c.is_rational() && c.sign() < 0;
    if (neg) c = -c;
    const std::string name = "E" + std::to_string(k + 1);
    std::string term = c == Scalar(1) ? name : (c.is_rational() ? to_string(c) : "(" + to_string(c) + ")") + " " + name;
    if (out.empty())
      out = neg ? "-" + term : term;
    else
      out += (neg ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

std::string name_of(const std::vector<std::size_t> &frame, std::size_t local) {
  return "E" + std::to_string(frame.at(local) + 1);
}

void print_matrix(std::ostream &os, const Matrix &m, const std::string &indent = "  ") {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
    os << "]\n";
  }
}

FrameVectorField lift(const CurvaturePackage &p, std::size_t n, const std::function<Scalar(std::size_t)> &comp) {
  FrameVectorField v(n);
  for (std::size_t a = 0; a < p.dim(); ++a) v[p.frame[a]] = comp(a);
  return v;
}

void print_curvature(std::ostream &os, const CurvaturePackage &p, std::size_t n) {
  os << "connection:\n";
  bool any = false;
  for (std::size_t i = 0; i < p.dim(); ++i)
    for (std::size_t j = 0; j < p.dim(); ++j) {
      const auto v = lift(p, n, [&](std::size_t k) { return p.gamma(i, j, k); });
      if (v.is_zero()) continue;
      any = true;
      os << "  nabla_" << name_of(p.frame, i) << " " << name_of(p.frame, j) << " = " << vector_text(v) << "\n";
    }
  if (!any) os << "  all zero\n";
  os << "riemann:\n";
  any = false;
  for (std::size_t i = 0; i < p.dim(); ++i)
    for (std::size_t j = i + 1; j < p.dim(); ++j)
      for (std::size_t k = 0; k < p.dim(); ++k) {
        const auto v = lift(p, n, [&](std::size_t l) { return p.riemann(i, j, k, l); });
        if (v.is_zero()) continue;
        any = true;
        os << "  R(" << name_of(p.frame, i) << "," << name_of(p.frame, j) << ")" << name_of(p.frame, k) << " = "
           << vector_text(v) << "\n";
      }
  if (!any) os << "  all zero\n";
  os << "ricci:\n";
  print_matrix(os, p.ricci);
  os << "scalar: " << to_string(p.scalar) << "\n";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

struct RunOptions {
  std::string alpha = "0";
  std::string beta = "0";
  std::string domain = "total";
  std::string potential;
  std::string xi;
  bool claimed = false;
};

/// Soliton parameters for a command: field names default to the first run on the domain.
SolitonParams params_for(const Manifest &m, const RunOptions &o, Domain d) {
  std::string pot = o.potential, xi = o.xi;
  if (const SolitonRun *r = run_for(m, d)) {
    if (pot.empty()) pot = r->potential;
    if (xi.empty()) xi = r->xi;
  }
  if (pot.empty()) pot = "V";
  if (xi.empty()) xi = "xi";
  return {parse_scalar(o.alpha), parse_scalar(o.beta), field(m, pot), field(m, xi), d};
}

struct Loaded {
  Manifest manifest;
  FrameManifold frame;
  std::optional<SubmersionSplit> split;
};

Loaded load(const std::string &path) {
  Loaded l{load_manifest(path), {}, {}};
  l.frame = build_frame(l.manifest);
  l.split = build_split(l.manifest, l.frame);
  return l;
}

SolitonSystem system_for(const Loaded &l, const RunOptions &o, Domain d) {
  ClaimedTensors claimed;
  if (o.claimed) {
    const auto it = l.manifest.claimed.find(d);
    if (it == l.manifest.claimed.end() || (!it->second.ricci && !it->second.scalar))
      throw Error("--claimed-tensors: the manifest has no claimed ricci or scalar for domain " + to_string(d));
    claimed = it->second.tensors();
  }
  return build_system(l.frame, l.split, params_for(l.manifest, o, d), claimed);
}

const SubmersionSplit &need_split(const Loaded &l) {
  if (!l.split) throw Error("manifest '" + l.manifest.name + "' has no split");
  return *l.split;
}

int cmd_curvature(const std::string &path, bool json) {
  const Loaded l = load(path);
  const CurvaturePackage p = curvature(l.frame);
  const CurvatureAxioms ax = check_curvature_axioms(l.frame, p);
  const auto jac = jacobi_check(l.frame);
  if (json) {
    Json j = report::curvature(p);
    j["axioms"] = report::axioms(ax);
    j["jacobi"] = jac.empty();
    std::cout << dump_report(j);
    return 0;
  }
  std::cout << l.manifest.name << " (dimension " << l.manifest.dimension << ")\n";
  print_curvature(std::cout, p, l.manifest.dimension);
  std::cout << "jacobi: " << yes_no(jac.empty()) << "\n"
            << "axioms: torsion_free " << yes_no(ax.torsion_free) << ", metric_compatible " << yes_no(ax.metric_compatible)
            << ", antisymmetric " << yes_no(ax.antisymmetric) << ", first_bianchi " << yes_no(ax.first_bianchi)
            << ", pair_symmetric " << yes_no(ax.pair_symmetric) << "\n";
  return 0;
}

int cmd_submersion(const std::string &path, bool json) {
  const Loaded l = load(path);
  const SubmersionSplit &split = need_split(l);
  const std::size_t n = l.manifest.dimension;
  const CurvaturePackage total = curvature(l.frame);
  const ONeillTensors t = oneill_tensors(l.frame, total.gamma, split);
  const MeanCurvature mc = mean_curvature(l.frame, t, split);
  const StructuralFlags f = structural_flags(l.frame, total.gamma, split, t);
  const auto residuals = oneill_identity_residuals(l.frame, split);
  std::optional<CurvaturePackage> fiber;
  std::string fiber_error;
  try {
    fiber = fiber_geometry(l.frame, total.gamma, split);
  } catch (const Error &e) {
    fiber_error = e.what();
  }
  const CurvaturePackage base = base_geometry(l.frame, total, t, split);
  const auto all = iota_indices(n);

  if (json) {
    Json j;
    j["T"] = report::sparse(t.T, all);
    j["A"] = report::sparse(t.A, all);
    j["N"] = report::vector(mc.N);
    j["W"] = report::vector(mc.W);
    j["flags"] = report::flags(f);
    Json res = Json::array();
    for (const auto &r : residuals) res.push_back(report::residual(r));
    j["identities"] = std::move(res);
    j["fiber"] = fiber ? report::curvature(*fiber) : Json{{"error", fiber_error}};
    j["base"] = report::curvature(base);
    std::cout << dump_report(j);
    return 0;
  }
  auto indices = [](const std::vector<std::size_t> &v) {
    std::string out;
    for (auto i : v) out += (out.empty() ? "" : ", ") + ("E" + std::to_string(i + 1));
    return out;
  };
  std::cout << l.manifest.name << ": vertical {" << indices(split.vertical()) << "}, horizontal {"
            << indices(split.horizontal()) << "}\n";
  if (!l.manifest.split->map_note.empty()) std::cout << "map: " << l.manifest.split->map_note << "\n";
  auto print_tensor = [&](const char *name, const Tensor3 &x) {
    std::cout << name << ":\n";
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        FrameVectorField v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = x(i, j, k);
        if (v.is_zero()) continue;
        any = true;
        std::cout << "  " << name << "_E" << i + 1 << " E" << j + 1 << " = " << vector_text(v) << "\n";
      }
    if (!any) std::cout << "  all zero\n";
  };
  print_tensor("T", t.T);
  print_tensor("A", t.A);
  std::cout << "N = " << vector_text(mc.N) << "\nW = " << vector_text(mc.W) << "\n";
  std::cout << "flags:\n"
            << "  vertical_parallel " << yes_no(f.vertical_parallel) << "\n"
            << "  horizontal_parallel " << yes_no(f.horizontal_parallel) << "\n"
            << "  horizontal_integrable " << yes_no(f.horizontal_integrable) << "\n"
            << "  vertical_integrable " << yes_no(f.vertical_integrable) << "\n"
            << "  fibers_minimal " << yes_no(f.fibers_minimal) << "\n"
            << "  fibers_totally_umbilical " << yes_no(f.fibers_totally_umbilical) << "\n"
            << "  fibers_totally_geodesic " << yes_no(f.fibers_totally_geodesic) << "\n"
            << "  horizontal_isometry " << yes_no(f.horizontal_isometry) << "\n";
  std::cout << "identities:\n";
  for (const auto &r : residuals) {
    std::cout << "  " << r.identity << " (" << r.reading << "): ";
    if (!r.evaluated)
      std::cout << "not evaluated";
    else if (r.nonzero == 0)
      std::cout << "0 on " << r.tuples << " tuples";
    else
      std::cout << r.nonzero << " of " << r.tuples << " tuples nonzero, max " << to_string(r.max_abs);
    if (!r.note.empty()) std::cout << " [" << r.note << "]";
    std::cout << "\n";
  }
  if (fiber) {
    std::cout << "fiber scalar: " << to_string(fiber->scalar) << "\n";
  } else {
    std::cout << "fiber: " << fiber_error << "\n";
  }
  std::cout << "base scalar: " << to_string(base.scalar) << "\n";
  return 0;
}

int cmd_soliton(const std::string &path, const RunOptions &o, bool json) {
  const Loaded l = load(path);
  const Domain d = parse_domain(o.domain);
  const SolitonSystem sys = system_for(l, o, d);
  const Scalar alpha = parse_scalar(o.alpha), beta = parse_scalar(o.beta);
  const SolitonSolution s = soliton_solve(sys, alpha, beta);
  if (json) {
    Json j = report::solution(s);
    j["domain"] = to_string(d);
    j["alpha"] = to_string(alpha);
    j["beta"] = to_string(beta);
    j["claimed_tensors"] = o.claimed;
    std::cout << dump_report(j);
    return 0;
  }
  std::cout << "lambda = " << to_string(s.lambda) << ", mu = " << to_string(s.mu) << ", "
            << to_string(s.classification) << ", "
            << (s.exact ? "exact" : "least squares, residual " + to_string(s.residual_max)) << "\n";
  if (s.mu_by_convention) std::cout << "mu fixed to 0 on a one-dimensional domain\n";
  return 0;
}

int cmd_affine(const std::string &path, const RunOptions &o, bool json) {
  const Loaded l = load(path);
  const Domain d = parse_domain(o.domain);
  const AffineSolution a = soliton_affine_form(system_for(l, o, d));
  if (json) {
    Json j = report::affine_solution(a);
    j["domain"] = to_string(d);
    j["claimed_tensors"] = o.claimed;
    std::cout << dump_report(j);
    return 0;
  }
  std::cout << "lambda = " << to_string(a.lambda) << "\nmu = " << to_string(a.mu) << "\n"
            << (a.exact ? "exact" : "not exact, worst residual " + to_string(a.worst_residual)) << "\n";
  return 0;
}

std::string value_text(const Json &v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

int cmd_verify(const std::string &path, bool json) {
  const Ledger ledger = run_verify(load_manifest(path));
  if (json) {
    std::cout << dump_report(ledger_to_json(ledger));
    return 0;
  }
  for (const auto &e : ledger.entries) {
    std::cout << (e.match ? "match    " : "MISMATCH ") << e.quantity << ": computed " << value_text(e.computed)
              << ", claimed " << value_text(e.claimed);
    if (!e.note.empty()) std::cout << " (" << e.note << ")";
    std::cout << "\n";
  }
  std::cout << ledger.entries.size() << " entries, " << ledger.matches() << " match, " << ledger.mismatches()
            << " mismatch\n";
  return 0;
}

int cmd_ledger(const std::string &data_dir, const std::string &out) {
  const Json ledger = bundled_ledger(std::filesystem::path(data_dir) / "manifests");
  const std::string text = dump_report(ledger);
  if (out.empty() || out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot write " + out);
  f << text;
  const auto &s = ledger["summary"];
  std::cout << "wrote " << out << ": " << s["entries"].get<std::size_t>() << " entries, "
            << s["matches"].get<std::size_t>() << " match, " << s["mismatches"].get<std::size_t>() << " mismatch\n";
  return 0;
}

int cmd_harmonic(const std::string &path, const RunOptions &o, bool json) {
  const Loaded l = load(path);
  const Domain d = parse_domain(o.domain);
  const SolitonSystem sys = system_for(l, o, d);
  const Scalar alpha = parse_scalar(o.alpha), beta = parse_scalar(o.beta);
  const SolitonSolution s = soliton_solve(sys, alpha, beta);
  const HarmonicReport h = trace_identity(sys, s, alpha, beta);
  const HarmonicClassification hc = harmonic_classification(sys.scalar, sys.dim(), alpha, beta, s.mu);
  if (json) {
    Json j = report::harmonic(h);
    j["domain"] = to_string(d);
    j["solution"] = report::solution(s);
    j["harmonic_lambda"] = to_string(hc.lambda);
    j["harmonic_classification"] = to_string(hc.classification);
    std::cout << dump_report(j);
    return 0;
  }
  std::cout << "lambda = " << to_string(s.lambda) << ", mu = " << to_string(s.mu) << " on " << to_string(d) << " ("
            << sys.dim() << "-dim)\n"
            << "div V = " << to_string(h.divergence_v) << "\n"
            << "trace formula = " << to_string(h.trace_formula_value) << " (" << (h.identity_holds ? "holds" : "fails")
            << ")\n"
            << "short formula = " << to_string(h.short_formula_value) << " (" << (h.match ? "matches" : "differs")
            << ")\n"
            << "harmonic potential: lambda = " << to_string(hc.lambda) << ", " << to_string(hc.classification) << "\n";
  if (!h.warning.empty()) std::cout << "warning: " << h.warning << "\n";
  return 0;
}

int cmd_theorems(const std::string &path, const RunOptions &o, bool json) {
  const Loaded l = load(path);
  const auto checks = theorem_checks(l.frame, need_split(l), params_for(l.manifest, o, Domain::total));
  if (json) {
    Json a = Json::array();
    for (const auto &c : checks) a.push_back(report::theorem(c));
    std::cout << dump_report(a);
    return 0;
  }
  for (const auto &c : checks) {
    std::cout << c.name << ": hypotheses " << (c.hypotheses_hold ? "hold" : "fail") << " (";
    bool first = true;
    for (const auto &[name, ok] : c.hypotheses) {
      std::cout << (first ? "" : ", ") << name << " " << yes_no(ok);
      first = false;
    }
    std::cout << "), conclusion " << (c.conclusion ? (*c.conclusion ? "holds" : "fails") : "not evaluated") << "\n";
    if (!c.detail.empty()) std::cout << "  " << c.detail << "\n";
  }
  return 0;
}

int cmd_canonicalize(const std::string &path, bool in_place) {
  const std::string text = save_manifest(load_manifest(path));
  if (!in_place) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact frame geometry, Riemannian submersions and eta-Ricci-Yamabe solitons"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  std::string path;
  bool json = false;
  RunOptions run;

  auto manifest_arg = [&](CLI::App *c) { c->add_option("manifest", path, "Manifest JSON file")->required(); };
  auto json_flag = [&](CLI::App *c) { c->add_flag("--json", json, "Emit JSON"); };
  auto run_flags = [&](CLI::App *c, bool with_domain, bool need_coefficients) {
    auto *a = c->add_option("--alpha", run.alpha, "alpha literal");
    auto *b = c->add_option("--beta", run.beta, "beta literal");
    if (need_coefficients) {
      a->required();
      b->required();
    }
    if (with_domain) {
      c->add_option("--domain", run.domain, "total, fiber or horizontal")
          ->check(CLI::IsMember({"total", "fiber", "horizontal"}));
      c->add_flag("--claimed-tensors", run.claimed, "Use the manifest's claimed Ricci and scalar");
    }
    c->add_option("--potential", run.potential, "Name of the potential field");
    c->add_option("--xi", run.xi, "Name of the xi field");
  };

  auto *curv = app.add_subcommand("curvature", "Connection, Riemann, Ricci, scalar and axiom checks");
  manifest_arg(curv);
  json_flag(curv);
  auto *sub = app.add_subcommand("submersion", "O'Neill tensors, mean curvature, flags and identity residuals");
  manifest_arg(sub);
  json_flag(sub);
  auto *sol = app.add_subcommand("soliton", "Solve for lambda and mu at given alpha, beta");
  manifest_arg(sol);
  run_flags(sol, true, true);
  json_flag(sol);
  auto *aff = app.add_subcommand("affine", "lambda and mu as affine functions of alpha, beta");
  manifest_arg(aff);
  run_flags(aff, true, false);
  json_flag(aff);
  auto *ver = app.add_subcommand("verify", "Compare computed values against the manifest's claimed values");
  manifest_arg(ver);
  json_flag(ver);
  std::string data_dir = kDataDir, out;
  auto *pap = app.add_subcommand("paper", "Verify every bundled manifest and write the combined ledger");
  pap->add_option("--data-dir", data_dir, "Directory holding manifests/")->capture_default_str();
  pap->add_option("--out", out, "Output file (default: stdout)");
  auto *har = app.add_subcommand("harmonic", "Trace identity and harmonic-potential classification");
  manifest_arg(har);
  run_flags(har, true, true);
  json_flag(har);
  auto *thm = app.add_subcommand("theorems", "Hypothesis and conclusion checks on the split");
  manifest_arg(thm);
  run_flags(thm, false, true);
  json_flag(thm);
  bool in_place = false;
  auto *can = app.add_subcommand("canonicalize", "Print the manifest in canonical form");
  manifest_arg(can);
  can->add_flag("--in-place", in_place, "Rewrite the file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*curv) return cmd_curvature(path, json);
    if (*sub) return cmd_submersion(path, json);
    if (*sol) return cmd_soliton(path, run, json);
    if (*aff) return cmd_affine(path, run, json);
    if (*ver) return cmd_verify(path, json);
    if (*pap) return cmd_ledger(data_dir, out);
    if (*har) return cmd_harmonic(path, run, json);
    if (*thm) return cmd_theorems(path, run, json);
    if (*can) return cmd_canonicalize(path, in_place);
  } catch (const ManifestError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
