// Command-line front end. Every command reads JSON values from file
// arguments (or inline JSON, or standard input) and prints one JSON document.
//
// Exit codes: 0 ok, 1 validation error, 2 convergence failure, 3 suite
// violation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "spdcone/foliation.hpp"
#include "spdcone/json_io.hpp"
#include "spdcone/suites.hpp"

using namespace spdcone;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNoConvergence = 2;
constexpr int kViolation = 3;

// A file path, "-" for standard input, or literal JSON.
Json load(const std::string& source) {
  if (source == "-") return Json::parse(std::cin);
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (source[first] == '{' || source[first] == '[')) return Json::parse(source);
  std::ifstream in(source);
  if (!in) throw UsageError("cannot open " + source);
  return Json::parse(in);
}

// Resolves the positional inputs of a command taking `count` values. With no
// arguments, standard input holds either the single value or an array of
// them.
std::vector<Json> inputs(const std::vector<std::string>& args, std::size_t count) {
  std::vector<Json> out;
  if (args.empty()) {
    Json all = Json::parse(std::cin);
    if (count == 1 && !all.is_array()) {
      out.push_back(std::move(all));
    } else {
      if (!all.is_array()) throw UsageError("standard input must hold an array of " + std::to_string(count) + " values");
      for (auto& v : all) out.push_back(std::move(v));
    }
  } else {
    for (const auto& a : args) out.push_back(load(a));
  }
  if (out.size() != count)
    throw UsageError("expected " + std::to_string(count) + " inputs, got " + std::to_string(out.size()));
  return out;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

struct Args {
  std::vector<std::string> files;
  double t = 0.5;
  std::string manifold;
  std::string kind;
  double lambda = 0.0;
  int k = 0;
  int n = 0;
  int trials = 200;
  std::uint64_t seed = 1;
  std::string opts;
};

TripleSystem manifold_arg(const std::string& text, int n) {
  if (text.empty()) throw UsageError("--manifold is required");
  return system_from_json(load(text), n);
}

ProjectionOptions options_arg(const std::string& text) {
  return text.empty() ? ProjectionOptions{} : options_from_json(load(text));
}

// Matrix input for diag and block: a bare nested array, or the "matrix" field
// of a value (its scalar coordinate is ignored).
Matrix plain_matrix(const Json& j) { return matrix_from_json(j.is_array() ? j : j.at("matrix")); }

int run_project(const Args& a) {
  const Json in = inputs(a.files, 1).front();
  const bool request = in.is_object() && in.contains("point");
  const ConePoint p = point_from_json(request ? in.at("point") : in);
  const TripleSystem m = !a.manifold.empty()
                             ? manifold_arg(a.manifold, p.dim())
                             : (request && in.contains("manifold") ? system_from_json(in.at("manifold"), p.dim())
                                                                   : throw UsageError("no manifold given"));
  ProjectionOptions opts = options_arg(a.opts);
  if (a.opts.empty() && request && in.contains("opts")) opts = options_from_json(in.at("opts"));
  emit(to_json(project(m, p, opts)));
  return kOk;
}

int run_decompose(const Args& a) {
  const Json in = inputs(a.files, 1).front();
  const ProjectionOptions opts = options_arg(a.opts);
  if (a.kind == "mvm") {
    const UnitizedHermitian x = hermitian_from_json(in);
    const TripleSystem m = manifold_arg(a.manifold, x.dim());
    const MvmDecomposition d = decompose_mvm(m, x, opts);
    emit(Json{{"x", to_json(d.x)}, {"v", to_json(d.v)}, {"projection", to_json(d.projection)}});
  } else if (a.kind == "diag") {
    if (!(a.lambda > 0.0)) throw UsageError("--lambda must be positive");
    const DiagDecomposition d = diag_decompose(plain_matrix(in), a.lambda, opts);
    emit(Json{{"d", matrix_to_json(d.d)},
              {"d_squared", matrix_to_json(d.d * d.d)},
              {"w", matrix_to_json(d.w)},
              {"foot_scalar", d.foot_scalar},
              {"iterations", d.projection.iterations}});
  } else if (a.kind == "polar") {
    const UnitizedOperator g = operator_from_json(in);
    const TripleSystem m = manifold_arg(a.manifold, g.dim());
    const RelativePolar d = polar_relative(m, g, opts);
    emit(Json{{"ex", to_json(d.ex.op())}, {"ev", to_json(d.ev.op())}, {"u", to_json(d.u)}});
  } else if (a.kind == "block") {
    const BlockDecomposition d = block_decompose(plain_matrix(in), a.k, opts);
    emit(Json{{"a", matrix_to_json(d.a)},
              {"x", matrix_to_json(d.x)},
              {"y", matrix_to_json(d.y)},
              {"distance", d.distance},
              {"iterations", d.projection.iterations}});
  } else if (a.kind == "blockpolar") {
    const BlockPolar d = full_block_polar(operator_from_json(in), a.k, opts);
    emit(Json{{"lambda", d.lambda}, {"r", matrix_to_json(d.r)}, {"v", to_json(d.v)}, {"u", to_json(d.u)}});
  } else {
    throw UsageError("unknown decomposition kind '" + a.kind + "'");
  }
  return kOk;
}

int run_triple_check(const Args& a) {
  const Json in = inputs(a.files, 1).front();
  std::vector<UnitizedHermitian> basis;
  if (in.is_array()) {
    for (const auto& v : in) basis.push_back(hermitian_from_json(v));
  } else if (in.value("kind", "") == "custom" || in.contains("basis")) {
    for (const auto& v : in.at("basis")) basis.push_back(hermitian_from_json(v));
  } else {
    basis = system_from_json(in, a.n).basis();
  }
  if (basis.empty()) throw UsageError("empty basis");
  const ClosureCheck c = is_triple_system(basis);
  Json out{{"is_triple_system", c.ok}, {"max_residual", c.max_residual}, {"dim", basis.size()}};
  if (c.ok) {
    const BracketAlgebra g = bracket_algebra(TripleSystem(basis));
    out["k_dim"] = g.k_basis.size();
    out["g_dim"] = g.g_dim;
    out["bracket_residual"] = g.max_residual();
  }
  emit(out);
  return kOk;
}

int run_triple_generate(const Args& a) {
  Json desc;
  if (!a.kind.empty()) {
    desc = Json{{"kind", a.kind}, {"n", a.n}};
    if (a.k > 0) desc["k"] = a.k;
    if (a.kind == "commutant" || a.kind == "polynomial") desc[a.kind == "commutant" ? "y" : "a"] = inputs(a.files, 1).front();
  } else {
    desc = inputs(a.files, 1).front();
  }
  emit(system_to_json(system_from_json(desc, a.n)));
  return kOk;
}

int run_suite_cmd(const std::string& name, const Args& a) {
  if (a.n < 1) throw UsageError("--dim must be at least 1");
  if (a.trials < 0) throw UsageError("--trials must be non-negative");
  RandomModel model;
  model.n = a.n;
  model.seed = a.seed;
  const SuiteReport r = run_suite(name, model, a.trials);
  emit(to_json(r));
  std::fprintf(stderr, "%s: %d trials, %ld checks, %zu failures, %.2fs\n", r.name.c_str(), r.trials, r.checks,
               r.failures.size(), r.wall_time);
  return r.passed() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of the positive cone: distances, projections and decompositions"};
  app.require_subcommand(1);
  Args a;
  std::string suite_name, fol_mode, triple_mode;
  std::function<int()> action;

  // Inputs are collected as extra arguments rather than a vector option, so
  // inline JSON arrays reach us verbatim instead of being split on commas.
  auto files = [&](CLI::App* c, const char* what) {
    c->allow_extras();
    c->footer(std::string("Inputs: ") + what + " (files, inline JSON, or an array on standard input)");
  };

  auto* dist = app.add_subcommand("dist", "Geodesic distance between two points");
  files(dist, "p q");
  dist->callback([&] {
    action = [&] {
      const auto in = inputs(a.files, 2);
      emit(Json{{"distance", distance(point_from_json(in[0]), point_from_json(in[1]))}});
      return kOk;
    };
  });

  auto* geo = app.add_subcommand("geodesic", "Point at time t on the geodesic from p to q");
  files(geo, "p q");
  geo->add_option("--t", a.t, "Time parameter")->required();
  geo->callback([&] {
    action = [&] {
      const auto in = inputs(a.files, 2);
      const ConePoint p = point_from_json(in[0]), q = point_from_json(in[1]);
      emit(Json{{"point", to_json(geodesic_eval(p, q, a.t).op())}, {"velocity", to_json(geodesic_velocity(p, q, a.t))}});
      return kOk;
    };
  });

  auto* expm = app.add_subcommand("expmap", "Exp_p(v)");
  files(expm, "p v");
  expm->callback([&] {
    action = [&] {
      const auto in = inputs(a.files, 2);
      emit(Json{{"point", to_json(exp_point(point_from_json(in[0]), hermitian_from_json(in[1])).op())}});
      return kOk;
    };
  });

  auto* logm = app.add_subcommand("logmap", "Exp_p^{-1}(q)");
  files(logm, "p q");
  logm->callback([&] {
    action = [&] {
      const auto in = inputs(a.files, 2);
      emit(Json{{"vector", to_json(log_point(point_from_json(in[0]), point_from_json(in[1])))}});
      return kOk;
    };
  });

  auto* tr = app.add_subcommand("transport", "Parallel transport of w from p to q");
  files(tr, "p q w");
  tr->callback([&] {
    action = [&] {
      const auto in = inputs(a.files, 3);
      emit(Json{{"vector", to_json(parallel_transport(point_from_json(in[0]), point_from_json(in[1]),
                                                      hermitian_from_json(in[2])))}});
      return kOk;
    };
  });

  auto* curv = app.add_subcommand("curvature", "R_p(x, y)z");
  files(curv, "p x y z");
  curv->callback([&] {
    action = [&] {
      const auto in = inputs(a.files, 4);
      emit(Json{{"vector", to_json(curvature(point_from_json(in[0]), hermitian_from_json(in[1]),
                                             hermitian_from_json(in[2]), hermitian_from_json(in[3])))}});
      return kOk;
    };
  });

  auto* sec = app.add_subcommand("sectional", "Sectional curvature of span{x, y} at p");
  files(sec, "p x y");
  sec->callback([&] {
    action = [&] {
      const auto in = inputs(a.files, 3);
      const ConePoint p = point_from_json(in[0]);
      const UnitizedHermitian x = hermitian_from_json(in[1]), y = hermitian_from_json(in[2]);
      emit(Json{{"sectional", sectional(p, x, y)}, {"unnormalized", sectional_unnormalized(p, x, y)}});
      return kOk;
    };
  });

  auto* sym = app.add_subcommand("symmetry", "Geodesic symmetry s_p(q) = p q^{-1} p");
  files(sym, "p q");
  sym->callback([&] {
    action = [&] {
      const auto in = inputs(a.files, 2);
      emit(Json{{"point", to_json(symmetry(point_from_json(in[0]), point_from_json(in[1])).op())}});
      return kOk;
    };
  });

  auto* proj = app.add_subcommand("project", "Nearest point of exp(m)");
  files(proj, "point or {manifold, point, opts} request");
  proj->add_option("--manifold", a.manifold, "Manifold descriptor (file or inline JSON)");
  proj->add_option("--opts", a.opts, "Projection options (file or inline JSON)");
  proj->callback([&] { action = [&] { return run_project(a); }; });

  auto* dec = app.add_subcommand("decompose", "Factorizations built on the projection");
  files(dec, "input value or matrix");
  dec->add_option("--kind", a.kind, "mvm | diag | polar | block | blockpolar")
      ->required()
      ->check(CLI::IsMember({"mvm", "diag", "polar", "block", "blockpolar"}));
  dec->add_option("--manifold", a.manifold, "Manifold descriptor for mvm and polar");
  dec->add_option("--lambda", a.lambda, "Leaf for diag");
  dec->add_option("--k", a.k, "Block size for block and blockpolar");
  dec->add_option("--opts", a.opts, "Projection options");
  dec->callback([&] { action = [&] { return run_decompose(a); }; });

  auto* fol = app.add_subcommand("foliation", "Leaves of the cone");
  fol->add_option("mode", fol_mode, "split | project")->required()->check(CLI::IsMember({"split", "project"}));
  files(fol, "point");
  fol->add_option("--lambda", a.lambda, "Target leaf for project");
  fol->callback([&] {
    action = [&] {
      const ConePoint p = point_from_json(inputs(a.files, 1).front());
      if (fol_mode == "split") {
        const LeafPoint s = split(p);
        emit(Json{{"leaf", s.leaf}, {"point", to_json(s.point.op())}});
      } else {
        emit(Json{{"point", to_json(leaf_project(p, a.lambda).op())}});
      }
      return kOk;
    };
  });

  auto* tri = app.add_subcommand("triple", "Lie triple systems");
  tri->add_option("mode", triple_mode, "check | generate")->required()->check(CLI::IsMember({"check", "generate"}));
  files(tri, "basis, descriptor or parameter value");
  tri->add_option("--kind", a.kind, "Builder for generate");
  tri->add_option("--dim", a.n, "Dimension");
  tri->add_option("--k", a.k, "Block size");
  tri->callback([&] {
    action = [&] { return triple_mode == "check" ? run_triple_check(a) : run_triple_generate(a); };
  });

  auto* suite = app.add_subcommand("suite", "Run a randomized property suite");
  suite->add_option("name", suite_name, "Suite name")->required();
  suite->add_option("--trials", a.trials, "Number of trials");
  suite->add_option("--seed", a.seed, "Seed");
  suite->add_option("--dim", a.n, "Dimension")->required();
  suite->callback([&] { action = [&] { return run_suite_cmd(suite_name, a); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  a.files = app.get_subcommands().front()->remaining();
  for (const auto& f : a.files)
    if (f.size() > 1 && f[0] == '-' && f[1] == '-') {
      std::cerr << "error: unknown option " << f << '\n';
      return kInvalid;
    }

  try {
    return action();
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << " (residual " << e.residual << ")\n";
    return kNoConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kInvalid;
  }
}
