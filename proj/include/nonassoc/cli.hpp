#pragma once

// Command-line front end. `run` takes the argument list (without the program
// name) and two streams, so tests can drive it without a process boundary.
//
// Exit codes: 0 all checks pass, 1 a check failed or a verdict is negative,
// 2 usage error.

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nonassoc/io.hpp"
#include "nonassoc/medial.hpp"
#include "nonassoc/models.hpp"

namespace nonassoc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Default seed, overridden by NONASSOC_SEED when it parses as an integer.
inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("NONASSOC_SEED")) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
  }
  return kDefaultSeed;
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline std::string format_scalar(const Complex& z) {
  std::ostringstream os;
  os << std::setprecision(10);
  const double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
  os << re;
  if (im != 0.0) os << (im < 0 ? " - " : " + ") << std::abs(im) << "i";
  return os.str();
}

inline std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

inline std::string format_set(const std::set<std::int64_t>& s) {
  std::string out = "{";
  bool first = true;
  for (auto v : s) {
    out += (first ? "" : ",") + std::to_string(v);
    first = false;
  }
  return out + "}";
}

struct ModelParams {
  std::string name;
  int n = 3;
  int d = 2;
  std::string zeta = "-1";
  std::string base = "f";
  std::string other = "f";
  std::string field = "complex";
  std::uint32_t p = 7;
  std::int64_t big_n = 3;
};

template <FieldScalar F>
Algebra<F> build_named(const std::string& name, int n, const FieldDescriptor& fd) {
  if (name == "f" || name == "field") return build_field<F>(fd);
  if (name == "a2") return build_A2<F>(fd);
  if (name == "cn") return build_Cn<F>(n, fd);
  if (name.size() > 2 && name.rfind("cn", 0) == 0) {
    try {
      return build_Cn<F>(std::stoi(name.substr(2)), fd);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Usage, "bad model name " + name);
    }
  }
  if constexpr (std::same_as<F, Complex>) {
    if (name == "a3") return build_A3();
    if (name == "t") return build_T();
  } else {
    if (name == "a3" || name == "t") throw Error(ErrorCode::Usage, name + " is defined over C only");
  }
  throw Error(ErrorCode::Usage, "unknown base model " + name);
}

template <FieldScalar F>
F parse_zeta(const std::string& z, int d, const FieldDescriptor& fd) {
  if (z == "eps") return primitive_root_of_unity<F>(d, fd);
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(z, &pos);
    if (pos != z.size()) throw std::invalid_argument(z);
    return FieldOps<F>::from_int(v, fd);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::Usage, "zeta must be an integer or 'eps', got " + z);
  }
}

template <FieldScalar F>
Algebra<F> build_model(const ModelParams& mp, const FieldDescriptor& fd) {
  const std::string& m = mp.name;
  if (m == "twisted-double") return twisted_double(build_named<F>(mp.base, mp.n, fd), parse_zeta<F>(mp.zeta, 2, fd));
  if (m == "twisted-power") return twisted_power(build_named<F>(mp.base, mp.n, fd), mp.d, parse_zeta<F>(mp.zeta, mp.d, fd));
  if (m == "product") return direct_product(build_named<F>(mp.base, mp.n, fd), build_named<F>(mp.other, mp.n, fd));
  if (m == "zn-extension") return medial_extension<F>(build_ZN_quasigroup(mp.big_n), fd);
  return build_named<F>(m, mp.n, fd);
}

template <FieldScalar F>
IdempotentSet<F> enumerate_auto(const Algebra<F>& a, const std::string& method, std::uint64_t seed) {
  std::string m = method;
  if (m == "auto") {
    if constexpr (FieldOps<F>::exact) m = "brute";
    else m = is_cyclotomic_model(a) ? "closed-form" : "newton";
  }
  if constexpr (FieldOps<F>::exact) {
    if (m != "brute") throw Error(ErrorCode::Usage, "prime-field algebras support --method brute only");
    return enumerate_brute_force(a);
  } else {
    if (m == "closed-form") {
      if (!is_cyclotomic_model(a)) throw Error(ErrorCode::Usage, "closed-form needs a C_n model file");
      return enumerate_closed_form_Cn(static_cast<int>(a.dim()));
    }
    if (m == "newton") {
      NewtonOptions opt;
      opt.seed = seed;
      return enumerate_newton(a, opt);
    }
    if (m == "brute") throw Error(ErrorCode::Usage, "brute force needs a prime field");
    throw Error(ErrorCode::Usage, "unknown method " + m);
  }
}

/// A3 idempotents listed as c1..c7 of the construction when all are present.
template <FieldScalar F>
void apply_labeling(const Algebra<F>& a, IdempotentSet<F>& idm) {
  if constexpr (std::same_as<F, Complex>) {
    if (!a.tag() || a.tag()->name != "A3" || idm.size() != 7) return;
    IdempotentSet<Complex> out = idm;
    out.elements.clear();
    out.residuals.clear();
    for (const auto& c : a3_labeled_idempotents()) {
      const auto k = find_index(idm, c);
      if (!k) return;
      out.elements.push_back(idm.elements[*k]);
      out.residuals.push_back(idm.residuals[*k]);
    }
    idm = std::move(out);
  }
}

template <FieldScalar F>
IdempotentSet<F> load_or_enumerate(const Algebra<F>& a, const std::string& idm_path, std::uint64_t seed) {
  if (!idm_path.empty()) return idempotents_from_json<F>(read_json_file(idm_path), a.field());
  return enumerate_auto(a, "auto", seed);
}

// ---- verify -------------------------------------------------------------------

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> names = {"medial", "isospectral", "generic", "syzygy", "fusion",
                                                 "bn",     "lxn",         "det-hom", "kaplansky", "theta"};
  return names;
}

struct VerifyContext {
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 100;
  bool sampled = false;
};

template <FieldScalar F>
CheckResult run_check(const std::string& name, const Algebra<F>& a, const IdempotentSet<F>& idm, const VerifyContext& ctx) {
  CheckResult r;
  r.check = name;
  r.seed = ctx.seed;
  try {
    if (name == "medial") {
      const auto m = medial_report(a, 50, ctx.seed);
      const bool sq_verdict = m.squared_identity_residual <= (FieldOps<F>::exact ? 0.0 : 1e-9);
      r.residual = m.basis_quadruple_residual;
      r.samples = 50;
      r.pass = m.verdict && sq_verdict;
      r.detail = "squared identity residual " + sci(m.squared_identity_residual) +
                 (m.verdict == sq_verdict ? "; verdicts agree" : "; verdicts disagree");
      return r;
    }
    if (name == "isospectral") {
      const auto rep = is_isospectral(a, idm, ctx.sampled);
      r.pass = rep.verdict;
      r.samples = idm.size();
      r.detail = rep.witness ? "spectra of idempotents " + std::to_string(rep.witness->first + 1) + " and " +
                                   std::to_string(rep.witness->second + 1) + " differ"
                             : std::to_string(idm.size()) + " idempotents share one spectrum";
      return r;
    }
    if (name == "generic") {
      const auto g = check_generic(a, idm, ctx.seed);
      r.pass = g.verdict;
      r.samples = g.count;
      r.detail = std::to_string(g.count) + " of " + std::to_string(g.expected) + " idempotents" +
                 (g.half_in_spectrum ? "; 1/2 in a spectrum" : "") + (g.nilpotent_found ? "; 2-nilpotent found" : "");
      return r;
    }
    if constexpr (FieldOps<F>::exact) {
      r.pass = false;
      r.detail = "PrimeFieldUnsupported: check runs over C only";
      return r;
    } else {
      if (idm.size() == 0) throw Error(ErrorCode::IncompleteSet, "no idempotents");
      const Vec<Complex>& c = idm.elements.front();
      std::mt19937_64 rng(ctx.seed);
      if (name == "syzygy") {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<Complex> ts;
        for (int i = 0; i < 10; ++i) ts.push_back(std::polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)));
        const double chi = syzygy_charpoly(a, idm, ts);
        const double sum = syzygy_moment<Complex>(a, idm, [](const Vec<Complex>& x) { return x; }, 1);
        r.residual = std::max(chi, sum);
        r.samples = ts.size();
        r.pass = r.residual < 1e-8;
        r.detail = "sum of idempotents " + sci(sum) + "; char-poly identity " + sci(chi);
        return r;
      }
      if (name == "fusion") {
        for (const auto& e : idm.elements) r.residual = std::max(r.residual, fusion_check(a, e));
        r.samples = idm.size();
        r.pass = r.residual < 1e-8;
        return r;
      }
      if (name == "bn") {
        const auto b = verify_Bn(a, c, ctx.samples, ctx.seed);
        r.residual = std::max(b.power_residual, b.multiplicativity_residual);
        r.samples = ctx.samples;
        r.pass = r.residual < 1e-8;
        r.detail = "power " + sci(b.power_residual) + "; multiplicativity " +
                   sci(b.multiplicativity_residual);
        return r;
      }
      if (name == "lxn") {
        r.residual = verify_Lxn_identity(a, c, ctx.samples, ctx.seed);
        r.samples = ctx.samples;
        r.pass = r.residual < 1e-8;
        return r;
      }
      if (name == "det-hom") {
        r.residual = det_homomorphism_check(a, c, ctx.samples, ctx.seed);
        r.samples = ctx.samples;
        r.pass = r.residual < 1e-8;
        return r;
      }
      if (name == "kaplansky") {
        std::size_t used = 0;
        for (const auto& e : idm.elements) {
          if (rank(left_mul_matrix(a, e)) < a.dim()) continue;
          const auto iso = kaplansky_isotope(a, e);
          r.residual = std::max({r.residual, associativity_residual(iso), unit_residual(iso, e)});
          ++used;
        }
        r.samples = used;
        r.pass = used > 0 && r.residual < 1e-10;
        r.detail = std::to_string(used) + " invertible idempotents";
        return r;
      }
      if (name == "theta") {
        const auto n = static_cast<int>(a.dim());
        const Matrix<Complex> u = cyclotomic_eigenbasis(a, c);
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j) {
            const Complex th = theta_projection(a, c, k, u.column(static_cast<std::size_t>(j))).first;
            r.residual = std::max(r.residual, std::abs(th - (k == j ? Complex(n, 0) : Complex{})));
          }
        double recon = 0.0;
        for (std::size_t s = 0; s < 5; ++s) {
          const Vec<Complex> y = random_element(a, rng);
          Vec<Complex> acc = a.zero();
          for (const auto& e : idm.elements) acc = acc + theta_projection(a, e, 0, y).first * e;
          acc = Complex(1.0 / static_cast<double>(idm.size()), 0.0) * acc;
          recon = std::max(recon, distance(acc, y) / norm(y));
        }
        r.residual = std::max(r.residual, recon);
        r.samples = 5;
        r.pass = r.residual < 1e-8;
        r.detail = "reconstruction relative error " + sci(recon);
        return r;
      }
    }
    throw Error(ErrorCode::Usage, "unknown check " + name);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Usage) throw;
    r.pass = false;
    r.detail = e.what();
  }
  return r;
}

template <FieldScalar F>
int cmd_verify(const Algebra<F>& a, const std::string& path, const std::string& idm_path,
               const std::vector<std::string>& checks, const VerifyContext& ctx, std::ostream& out) {
  IdempotentSet<F> idm;
  if (!idm_path.empty()) {
    idm = idempotents_from_json<F>(read_json_file(idm_path), a.field());
  } else if constexpr (std::same_as<F, Complex>) {
    if (ctx.sampled && a.tag() && a.tag()->name == "T") idm = sample_T_idempotents(20, ctx.seed);
    else idm = enumerate_auto(a, "auto", ctx.seed);
  } else {
    idm = enumerate_auto(a, "auto", ctx.seed);
  }
  json report = {{"command", "verify"}, {"algebra", path}, {"checks", json::array()}};
  bool all = true;
  for (const auto& name : checks) {
    const CheckResult r = run_check(name, a, idm, ctx);
    all = all && r.pass;
    report["checks"].push_back(to_json(r));
  }
  report["pass"] = all;
  out << report.dump(2) << '\n';
  return all ? kExitOk : kExitFail;
}

// ---- quasigroup ---------------------------------------------------------------

template <FieldScalar F>
int cmd_quasigroup(const Algebra<F>& a, const std::string& idm_path, const std::vector<std::string>& actions,
                   std::uint64_t seed, std::ostream& out) {
  IdempotentSet<F> idm = load_or_enumerate(a, idm_path, seed);
  apply_labeling(a, idm);
  const QuasigroupTable q = idm_table(a, idm);
  bool ok = true;
  for (const auto& act : actions) {
    if (act == "table") {
      out << format_table(q);
    } else if (act == "latin") {
      const bool l = is_latin(q) && is_commutative_table(q) && is_idempotent_table(q);
      out << "latin: " << (is_latin(q) ? "yes" : "no") << ", commutative: " << (is_commutative_table(q) ? "yes" : "no")
          << ", idempotent: " << (is_idempotent_table(q) ? "yes" : "no") << '\n';
      ok = ok && l;
    } else if (act == "medial") {
      const auto m = is_medial_table(q, seed);
      out << "medial: " << (m.verdict ? "yes" : "no") << " (" << (m.exhaustive ? "exhaustive, " : "sampled, ")
          << m.quadruples << " ordered quadruples)\n";
      ok = ok && m.verdict;
    } else if (act == "cyclic") {
      const GroupTable g = boxplus_group(a, idm, 0);
      const auto gen = find_generator(g);
      if (gen) {
        out << "cyclic of order " << g.order() << ", generator index " << *gen + 1 << '\n';
      } else {
        out << "not cyclic (order " << g.order() << ")\n";
        ok = false;
      }
    } else if (act == "relabel") {
      const auto r = find_relabel_permutation(q);
      if (!r) {
        out << "no relabeling onto Z_" << q.order() << " with x o y = (x + y)/2\n";
        ok = false;
        continue;
      }
      const auto n = static_cast<std::int64_t>(q.order());
      out << "relabeling onto Z_" << n << ":";
      for (std::size_t i = 0; i < q.order(); ++i) out << ' ' << i + 1 << "->" << zn_label(r->phi[i], n);
      out << "\nverified on all " << n * n << " pairs: " << (r->verified ? "yes" : "no") << '\n';
      out << format_zn_table(apply_relabeling(q, r->phi));
      ok = ok && r->verified;
    } else {
      throw Error(ErrorCode::Usage, "unknown action " + act);
    }
  }
  return ok ? kExitOk : kExitFail;
}

inline std::string format_matrix(const Matrix<Complex>& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "  [";
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << format_scalar(m(i, j));
    os << "]\n";
  }
  return os.str();
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Medial and isospectral commutative nonassociative algebras"};
  app.require_subcommand(1);
  std::uint64_t seed = default_seed();

  ModelParams mp;
  std::string out_path;
  auto* model = app.add_subcommand("model", "Build a model algebra and write it as JSON");
  model->add_option("name", mp.name, "f, a2, a3, cn, t, twisted-double, twisted-power, product, zn-extension")->required();
  model->add_option("--n", mp.n, "dimension parameter of C_n");
  model->add_option("--d", mp.d, "exponent of a twisted power");
  model->add_option("--zeta", mp.zeta, "twist: an integer, or eps for the primitive root")->allow_extra_args(false);
  model->add_option("--base", mp.base, "base model: f, a2, a3, t, cn, cnK");
  model->add_option("--other", mp.other, "second factor of a product");
  model->add_option("--field", mp.field, "complex or prime")->check(CLI::IsMember({"complex", "prime"}));
  model->add_option("--p", mp.p, "prime modulus");
  model->add_option("--N", mp.big_n, "order of the Z_N quasigroup for zn-extension");
  model->add_option("-o,--out", out_path, "output file (stdout when omitted)");

  std::string alg_path;
  std::string method = "auto";
  std::string idm_out;
  auto* idem = app.add_subcommand("idempotents", "Enumerate nonzero idempotents");
  idem->add_option("algebra", alg_path)->required();
  idem->add_option("--method", method)->check(CLI::IsMember({"auto", "closed-form", "newton", "brute"}));
  idem->add_option("--seed", seed);
  idem->add_option("-o,--out", idm_out);

  std::string idm_path;
  std::string checks = "all";
  VerifyContext vctx;
  auto* verify = app.add_subcommand("verify", "Run verification checks and print a JSON report");
  verify->add_option("algebra", alg_path)->required();
  verify->add_option("--idm", idm_path, "idempotent set JSON (enumerated when omitted)");
  verify->add_option("--checks", checks, "comma list or all");
  verify->add_flag("--sampled", vctx.sampled, "accept sampled (incomplete) idempotent sets");
  verify->add_option("--seed", seed);
  verify->add_option("--samples", vctx.samples);

  std::string actions = "table";
  auto* quasi = app.add_subcommand("quasigroup", "Analyze the idempotent quasigroup");
  quasi->add_option("algebra", alg_path)->required();
  quasi->add_option("--idm", idm_path);
  quasi->add_option("--actions", actions, "comma list of table, latin, medial, cyclic, relabel");
  quasi->add_option("--seed", seed);

  std::int64_t zn_n = 0;
  std::vector<std::int64_t> orders;
  std::int64_t orbit_x = 0;
  int pset_n = 0;
  auto* zn = app.add_subcommand("zn", "The quasigroup Z_N with x o y = (x + y)/2");
  zn->add_option("--N", zn_n);
  auto* orders_opt = zn->add_option("--orders", orders, "x y: order of y under L_x")->expected(2);
  auto* orbits_opt = zn->add_option("--orbits", orbit_x, "x: cycles of L_x");
  auto* pset_opt = zn->add_option("--pset", pset_n, "n: realized orders for N = 2^n - 1");

  std::vector<std::string> iso_paths;
  auto* iso = app.add_subcommand("iso", "Test two algebras for isomorphism");
  iso->add_option("algebras", iso_paths, "two algebra files")->expected(2)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    err << os.str();
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*model) {
      const FieldDescriptor fd = mp.field == "prime" ? FieldDescriptor::prime(mp.p) : FieldDescriptor::complex();
      const json j = fd.is_complex() ? to_json(build_model<Complex>(mp, fd)) : to_json(build_model<Fp>(mp, fd));
      if (out_path.empty()) {
        out << j.dump(2) << '\n';
      } else {
        write_json_file(out_path, j);
        out << "wrote " << out_path << ": dim=" << j["dim"].get<std::size_t>() << " field=" << fd.name() << '\n';
      }
      return kExitOk;
    }
    if (*idem) {
      const AnyAlgebra any = algebra_from_json(read_json_file(alg_path));
      return std::visit(
          [&](const auto& a) {
            auto s = enumerate_auto(a, method, seed);
            const json j = to_json(s);
            if (idm_out.empty()) out << j.dump(2) << '\n';
            else write_json_file(idm_out, j);
            out << s.size() << " idempotents, " << (s.complete ? "complete" : "complete=false") << '\n';
            if (!s.complete)
              err << "warning: enumeration is not complete"
                  << (s.singular_jacobian ? " (singular Jacobian at a root: non-generic algebra)" : "") << '\n';
            return kExitOk;
          },
          any);
    }
    if (*verify) {
      std::vector<std::string> list = checks == "all" ? all_checks() : split_list(checks);
      for (const auto& c : list)
        if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end()) {
          err << "unknown check " << c << '\n';
          return kExitUsage;
        }
      vctx.seed = seed;
      const AnyAlgebra any = algebra_from_json(read_json_file(alg_path));
      return std::visit([&](const auto& a) { return cmd_verify(a, alg_path, idm_path, list, vctx, out); }, any);
    }
    if (*quasi) {
      const AnyAlgebra any = algebra_from_json(read_json_file(alg_path));
      return std::visit([&](const auto& a) { return cmd_quasigroup(a, idm_path, split_list(actions), seed, out); }, any);
    }
    if (*zn) {
      int rc = kExitOk;
      bool any_action = false;
      if (orders_opt->count() > 0) {
        any_action = true;
        if (zn_n == 0) throw Error(ErrorCode::Usage, "--orders needs --N");
        out << circ_order(orders[0], orders[1], zn_n) << '\n';
      }
      if (orbits_opt->count() > 0) {
        any_action = true;
        if (zn_n == 0) throw Error(ErrorCode::Usage, "--orbits needs --N");
        out << format_orbits(orbits(zn_n, orbit_x), zn_n);
      }
      if (pset_opt->count() > 0) {
        any_action = true;
        const PSet s = p_set(pset_n);
        out << format_set(s.realized) << '\n';
        if (!s.agree) {
          out << "gcd characterization " << format_set(s.gcd_characterized) << " differs\n";
          rc = kExitFail;
        }
      }
      if (!any_action) {
        if (zn_n == 0) throw Error(ErrorCode::Usage, "zn needs --N with an action, or --pset");
        out << format_zn_table(build_ZN_quasigroup(zn_n));
      }
      return rc;
    }
    if (*iso) {
      const AnyAlgebra x = algebra_from_json(read_json_file(iso_paths[0]));
      const AnyAlgebra y = algebra_from_json(read_json_file(iso_paths[1]));
      if (!std::holds_alternative<Algebra<Complex>>(x) || !std::holds_alternative<Algebra<Complex>>(y))
        throw Error(ErrorCode::Usage, "iso compares complex algebras");
      const auto& a = std::get<Algebra<Complex>>(x);
      const auto& b = std::get<Algebra<Complex>>(y);
      try {
        const auto r = are_isomorphic(a, b);
        if (r.matrix) {
          out << "isomorphic\nproduct residual " << r.product_residual << "\nchange of basis:\n"
              << format_matrix(*r.matrix);
          return kExitOk;
        }
        out << "not isomorphic: " << r.mismatch << '\n';
        return kExitFail;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::DimensionMismatch) {
          out << "not isomorphic: dimension mismatch (" << a.dim() << " vs " << b.dim() << ")\n";
          return kExitFail;
        }
        throw;
      }
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    const bool usage = e.code() == ErrorCode::Usage || e.code() == ErrorCode::ParseError ||
                       e.code() == ErrorCode::InvalidField || e.code() == ErrorCode::EvenOrder ||
                       e.code() == ErrorCode::NoRootOfUnity || e.code() == ErrorCode::NotARoot;
    return usage ? kExitUsage : kExitFail;
  }
  return kExitUsage;
}

}  // namespace nonassoc::cli
