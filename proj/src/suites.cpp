#include "spdcone/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <thread>

#include "spdcone/foliation.hpp"
#include "spdcone/geometry.hpp"
#include "spdcone/json_io.hpp"
#include "spdcone/project.hpp"

namespace spdcone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Recorder {
 public:
  explicit Recorder(std::uint64_t trial) : trial_(trial) {}

  void at_most(const std::string& what, double measured, double bound) { record(what, measured, bound, measured - bound); }
  void at_least(const std::string& what, double measured, double bound) { record(what, measured, bound, bound - measured); }

  void raised(const std::string& what) { record("raised: " + what, kInf, 0.0, kInf); }

  long checks = 0;
  double max_violation = -kInf;
  std::vector<SuiteFailure> failures;

 private:
  void record(const std::string& what, double measured, double bound, double violation) {
    ++checks;
    if (std::isnan(violation)) violation = kInf;
    max_violation = std::max(max_violation, violation);
    if (violation > 0.0) failures.push_back(SuiteFailure{trial_, what, measured, bound});
  }

  std::uint64_t trial_;
};

using TrialFn = std::function<void(Sampler&, Recorder&)>;

double rel(double err, double scale) { return err / std::max(1.0, scale); }

double pair_gap(const UnitizedHermitian& x, const UnitizedHermitian& y) { return rel(hs_norm(x - y), hs_norm(y)); }

double op_gap(const UnitizedOperator& x, const UnitizedOperator& y) { return rel(op_norm(x - y), op_norm(y)); }

double max_normal_leak(const TripleSystem& m, const UnitizedHermitian& v) {
  double worst = 0.0;
  for (const auto& e : m.ortho_basis()) worst = std::max(worst, std::abs(hs_inner(v, e)));
  return worst;
}

// y with eigenvalues repeated in pairs, so its commutant is not abelian.
UnitizedHermitian clustered_hermitian(Sampler& s) {
  const int n = s.n();
  Eigensystem es;
  es.values.resize(n);
  for (int i = 0; i < n; ++i) es.values(i) = static_cast<double>(i / 2);
  es.vectors = s.unitary_matrix();
  return UnitizedHermitian::hermitian_part_of(0.0, spectral_apply(es, [](double v) { return v; }));
}

std::vector<TripleSystem> example_systems(Sampler& s, bool with_polynomial) {
  const int n = s.n();
  std::vector<TripleSystem> out{TripleSystem::diagonal(n), TripleSystem::scalar(n)};
  if (n >= 2) out.push_back(TripleSystem::block(n, n / 2));
  out.push_back(TripleSystem::commutant(clustered_hermitian(s)));
  if (with_polynomial) out.push_back(TripleSystem::polynomial(s.tangent()));
  return out;
}

// ---------------------------------------------------------------------------

void cat0_trial(Sampler& s, Recorder& r) {
  const ConePoint p = s.cone_point();
  const ConePoint q = s.cone_point();
  const ConePoint x = s.cone_point();
  const double dpq = distance(p, q);
  const double dpx = distance(p, x);
  const double dqx = distance(q, x);
  const double ap = angle_at(p, q, x);
  const double aq = angle_at(q, p, x);
  const double ax = angle_at(x, p, q);
  auto cosine_law = [&](const char* at, double a, double b, double c, double angle) {
    const double excess = a * a + b * b - 2.0 * a * b * std::cos(angle) - c * c;
    r.at_most(std::string("cosine law at ") + at + ": a^2 + b^2 - 2ab cos C - c^2", excess, 1e-8);
  };
  cosine_law("p", dpq, dpx, dqx, ap);
  cosine_law("q", dpq, dqx, dpx, aq);
  cosine_law("r", dpx, dqx, dpq, ax);
  r.at_most("angle sum", ap + aq + ax, std::numbers::pi + 1e-8);

  const ConePoint y = s.cone_point();
  const Geodesic g1 = Geodesic::through(p, q);
  const Geodesic g2 = Geodesic::through(x, y);
  std::vector<double> f(21);
  for (int i = 0; i <= 20; ++i) {
    const double t = i / 20.0;
    f[static_cast<std::size_t>(i)] = distance(g1.at(t), g2.at(t));
  }
  double worst = kInf;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) worst = std::min(worst, f[i - 1] - 2.0 * f[i] + f[i + 1]);
  r.at_least("second difference of dist(gamma(t), delta(t))", worst, -1e-7);
}

void minimality_trial(Sampler& s, Recorder& r) {
  const ConePoint p = s.cone_point();
  const ConePoint q = s.cone_point();
  const double d = distance(p, q);
  const std::vector<ConePoint> straight{p, q};
  r.at_most("|length of geodesic - dist|/(1+dist)", std::abs(piecewise_geodesic_length(straight) - d) / (1.0 + d),
            1e-8);

  const std::vector<ConePoint> wild{p, s.cone_point(), s.cone_point(), q};
  r.at_least("length of random 4-waypoint path - dist", piecewise_geodesic_length(wild) - d, -1e-8);

  const Geodesic g = Geodesic::through(p, q);
  const ConePoint w1 = g.at(1.0 / 3.0);
  const ConePoint w2 = g.at(2.0 / 3.0);
  const std::vector<ConePoint> near{p, exp_point(w1, color(w1, s.tangent(0.05))),
                                    exp_point(w2, color(w2, s.tangent(0.05))), q};
  r.at_least("length of perturbed 4-waypoint path - dist", piecewise_geodesic_length(near) - d, -1e-8);
}

void expansive_trial(Sampler& s, Recorder& r) {
  const UnitizedHermitian x = s.tangent();
  const UnitizedHermitian y = s.tangent();
  const ConePoint half = mat_exp(-0.5 * x);
  const double lhs = hs_norm(congruence(half.op(), frechet_exp(x, y)));
  r.at_least("|e^{-x/2} dexp_x(y) e^{-x/2}| - |y|", lhs - hs_norm(y), -1e-9);
  r.at_least("dist(e^x, e^y) - |x - y|", distance(mat_exp(x), mat_exp(y)) - hs_norm(x - y), -1e-9);
  r.at_most("|dist(1, e^x) - |x||", std::abs(distance(ConePoint::identity(s.n()), mat_exp(x)) - hs_norm(x)), 1e-10);
}

void curvature_trial(Sampler& s, Recorder& r) {
  const ConePoint p = s.cone_point();
  r.at_most("sectional curvature of a random plane", sectional(p, s.tangent(), s.tangent()), 1e-12);

  // Whitened directions sharing an eigenbasis commute.
  const Matrix u = s.unitary_matrix();
  auto diag_in_u = [&] {
    Eigensystem es;
    es.values.resize(s.n());
    for (int i = 0; i < s.n(); ++i) es.values(i) = s.uniform(-1.0, 1.0);
    es.vectors = u;
    return UnitizedHermitian::hermitian_part_of(s.uniform(-1.0, 1.0), spectral_apply(es, [](double v) { return v; }));
  };
  const UnitizedHermitian cx = color(p, diag_in_u());
  const UnitizedHermitian cy = color(p, diag_in_u());
  r.at_most("|sectional curvature| of a commuting plane", std::abs(sectional(p, cx, cy)), 1e-12);
  r.at_most("|sectional curvature| of a vertical plane", std::abs(sectional(p, s.tangent(), p.op())), 1e-12);
}

void triple_trial(Sampler& s, Recorder& r) {
  for (const TripleSystem& m : example_systems(s, true)) {
    const std::string tag = " [" + m.kind() + "]";
    const ClosureCheck cc = is_triple_system(m.basis());
    r.at_most("closure residual of [[a,b],c]" + tag, cc.max_residual, 1e-9);
    r.at_most("bracket relations residual" + tag, bracket_algebra(m).max_residual(), 1e-9);

    const ConePoint p = s.point_in(m, 1.5);
    const ConePoint q = s.point_in(m, 1.5);
    const UnitizedOperator qo(q.op());
    const ConePoint qpq((qo * UnitizedOperator(p.op()) * qo).hermitian());
    r.at_most("qpq membership residual" + tag, membership_residual(m, qpq), 1e-8);
    for (double t : {0.25, 0.5, 0.75})
      r.at_most("geodesic membership residual" + tag, membership_residual(m, geodesic_eval(p, q, t)), 1e-7);

    // Transport along a geodesic of M keeps tangent vectors tangent.
    const UnitizedHermitian w = color(p, s.element_of(m, 1.0));
    const UnitizedHermitian tw = parallel_transport(p, q, w);
    r.at_most("transported tangent vector leaves T_qM" + tag, m.span_residual(whiten(q, tw)), 1e-8);
  }
}

std::vector<TripleSystem> projection_systems(Sampler& s) {
  const int n = s.n();
  std::vector<TripleSystem> out{TripleSystem::diagonal(n), TripleSystem::scalar(n)};
  if (n >= 2) out.push_back(TripleSystem::block(n, n / 2));
  out.push_back(TripleSystem::commutant(clustered_hermitian(s)));
  return out;
}

void projection_trial(Sampler& s, Recorder& r) {
  for (const TripleSystem& m : projection_systems(s)) {
    const std::string tag = " [" + m.kind() + "]";
    const ConePoint p = s.cone_point();
    const ConePoint q = s.cone_point();
    const ProjectionResult pp = project(m, p);
    const ProjectionResult pq = project(m, q);
    r.at_most("dist(Pi p, Pi q) - dist(p, q)" + tag, distance(pp.foot, pq.foot) - distance(p, q), 1e-8);
    r.at_most("iterations" + tag, pp.iterations, 200);
    r.at_most("iterations" + tag, pq.iterations, 200);

    ProjectionOptions restart;
    restart.start = s.point_in(m, 2.0);
    const ProjectionResult again = project(m, p, restart);
    r.at_most("foot moved under restart" + tag, distance(again.foot, pp.foot), 1e-6);

    const double dp = distance(pp.foot, p);
    for (int i = 0; i < 3; ++i) {
      const ConePoint x = s.point_in(m, 2.0);
      r.at_least("dist(r, p) - dist(Pi p, p) for r in M" + tag, distance(x, p) - dp, -1e-9);
    }
    r.at_most("dist(Exp_foot(normal), p)" + tag, distance(exp_point(pp.foot, pp.normal), p), 1e-7);
    r.at_most("tangential part of the normal" + tag, max_normal_leak(m, whiten(pp.foot, pp.normal)), 1e-7);
    r.at_most("foot membership residual" + tag, membership_residual(m, pp.foot), 1e-7);
  }
}

void decomposition_trial(Sampler& s, Recorder& r) {
  const int n = s.n();
  std::vector<TripleSystem> systems{TripleSystem::diagonal(n)};
  if (n >= 2) systems.push_back(TripleSystem::block(n, n / 2));
  systems.push_back(TripleSystem::commutant(clustered_hermitian(s)));

  for (const TripleSystem& m : systems) {
    const std::string tag = " [" + m.kind() + "]";
    const UnitizedHermitian a = s.tangent(2.0);
    const MvmDecomposition d = decompose_mvm(m, a);
    const UnitizedOperator ex(mat_exp(d.x).op());
    const UnitizedHermitian rebuilt = (ex * UnitizedOperator(mat_exp(d.v).op()) * ex).hermitian();
    r.at_most("e^x e^v e^x vs e^a" + tag, pair_gap(rebuilt, mat_exp(a).op()), 1e-7);
    r.at_most("x outside m" + tag, m.span_residual(d.x), 1e-8);
    r.at_most("v not orthogonal to m" + tag, max_normal_leak(m, d.v), 1e-8);

    // 2x minimizes y -> dist(e^y, e^a) over m: grid of 41 points on a line.
    const UnitizedHermitian b = s.element_of(m, 1.0);
    const UnitizedHermitian dir = (1.0 / std::max(hs_norm(b), 1e-300)) * b;
    const ConePoint ea = mat_exp(a);
    auto phi = [&](double t) { return distance(mat_exp(2.0 * d.x + t * dir), ea); };
    const double center = phi(0.0);
    double lowest = center;
    for (int i = 0; i <= 40; ++i) lowest = std::min(lowest, phi(-0.1 + 0.005 * i));
    r.at_most("grid minimum below the value at 2x" + tag, center - lowest, 1e-10);

    // Normal bundle roundtrip.
    const ConePoint base = s.point_in(m, 1.5);
    const UnitizedHermitian raw = s.tangent();
    const UnitizedHermitian nv = color(base, raw - m.project(raw));
    const ConePoint img = e_map(m, base, nv);
    const NormalCoords back = nm_coords(m, img);
    r.at_most("nm_coords(e_map(q, v)): base point" + tag, distance(back.q, base), 1e-6);
    r.at_most("nm_coords(e_map(q, v)): normal vector" + tag, norm_at(base, back.v - nv), 1e-6);
    const ConePoint p = s.cone_point();
    const NormalCoords c = nm_coords(m, p);
    r.at_most("e_map(nm_coords(p)) vs p" + tag, distance(e_map(m, c.q, c.v), p), 1e-6);
  }

  // Diagonal decomposition.
  {
    const Matrix a = s.tangent().hs();
    const RealVector ev = eig_hermitian(a).values;
    const double lambda = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1))) + s.uniform(0.1, 1.0);
    const DiagDecomposition dd = diag_decompose(a, lambda);
    const Matrix target = a + lambda * Matrix::Identity(n, n);
    const Matrix rebuilt = dd.d * expm_hermitian(dd.w) * dd.d;
    r.at_most("D e^w D vs lambda + a", rel((rebuilt - target).norm(), target.norm()), 1e-7);
    r.at_most("max |diag(w)|", dd.w.diagonal().cwiseAbs().maxCoeff(), 1e-8);
    r.at_most("|foot scalar - lambda|", std::abs(dd.foot_scalar - lambda) / lambda, 1e-10);
  }

  // Relative polar decomposition with m = diagonal, g = d e^w u.
  {
    const TripleSystem delta = TripleSystem::diagonal(n);
    const UnitizedOperator g = s.invertible();
    const RelativePolar rp = polar_relative(delta, g);
    const UnitizedOperator rebuilt = UnitizedOperator(rp.ex.op()) * UnitizedOperator(rp.ev.op()) * rp.u;
    r.at_most("e^x e^v u vs g", op_gap(rebuilt, g), 1e-7);
    r.at_most("unitarity defect of u", unitarity_defect(rp.u), 1e-9);
    const Matrix em = rp.ex.materialize();
    r.at_most("off-diagonal mass of the diagonal factor", (em - Matrix(em.diagonal().asDiagonal())).norm(), 1e-8);
    r.at_most("log e^v not orthogonal to m", max_normal_leak(delta, mat_log(rp.ev)), 1e-8);
    ProjectionOptions restart;
    restart.start = s.point_in(delta, 2.0);
    const RelativePolar again = polar_relative(delta, g, restart);
    r.at_most("polar factor e^x moved under restart", distance(again.ex, rp.ex), 1e-6);
    r.at_most("polar factor e^v moved under restart", distance(again.ev, rp.ev), 1e-6);
  }

  if (n >= 2) {
    const int k = 1 + static_cast<int>(s.uniform(0.0, n - 1.0));
    const Matrix b = s.tangent(2.0).hs();
    const BlockDecomposition bd = block_decompose(b, std::min(k, n - 1));
    const Matrix eb = expm_hermitian(b);
    r.at_most("block factorization vs e^b", rel((block_reconstruct(bd.a, bd.x, bd.y) - eb).norm(), eb.norm()), 1e-7);
    r.at_most("|dist(P, e^b) - sqrt(8|Y e^{-A/2}|^2 + 4|X|^2)|",
              std::abs(bd.distance - block_distance_formula(bd)) / (1.0 + bd.distance), 1e-8);

    const UnitizedOperator g = s.invertible();
    const BlockPolar bp = full_block_polar(g, std::min(k, n - 1));
    r.at_most("lambda r e^v u vs g", op_gap(block_polar_reconstruct(bp), g), 1e-7);
    r.at_most("unitarity defect of u (block)", unitarity_defect(bp.u), 1e-9);
  }
}

void foliation_trial(Sampler& s, Recorder& r) {
  const ConePoint p = s.cone_point();
  const double alpha = leaf_of(p);
  const ConePoint q = leaf_project(s.cone_point(), alpha);
  const double lambda = std::exp(s.uniform(std::log(0.1), std::log(10.0)));
  r.at_most("leaf projection isometry defect",
            std::abs(distance(leaf_project(p, lambda), leaf_project(q, lambda)) - distance(p, q)), 1e-10);

  const ConePoint x = s.cone_point();
  const LeafPoint sp = split(p);
  const LeafPoint sx = split(x);
  const double d = distance(p, x);
  const double d1 = distance(sp.point, sx.point);
  const double dl = leaf_distance(sp.leaf, sx.leaf);
  r.at_most("|dist^2 - (dist_1^2 + dist_Lambda^2)|", std::abs(d * d - (d1 * d1 + dl * dl)), 1e-8);
  r.at_most("dist(unsplit(split p), p)", distance(unsplit(sp.point, sp.leaf), p), 1e-12);

  r.at_most("|dist(p, Sigma_lambda) - |ln(alpha/lambda)||",
            std::abs(distance(p, leaf_project(p, lambda)) - leaf_distance(alpha, lambda)), 1e-12);

  // Vertical geodesics meet the leaves orthogonally.
  const double t = s.uniform(0.0, 1.0);
  const ConePoint gt = vertical_geodesic(p, lambda, t);
  const UnitizedHermitian gdot = std::log(lambda / alpha) * gt.op();
  const UnitizedHermitian w = UnitizedHermitian::hermitian_part_of(0.0, s.tangent().hs());
  r.at_most("|<gamma', w>| for w tangent to the leaf", std::abs(metric_at(gt, gdot, w)), 1e-9);

  // The normal space of the leaf at p is span(p).
  const UnitizedHermitian z = s.tangent();
  const UnitizedHermitian resid = z - (metric_at(p, z, p.op()) / metric_at(p, p.op(), p.op())) * p.op();
  r.at_most("scalar part of z minus its span(p) component", std::abs(resid.scalar()), 1e-9);

  const UnitizedHermitian v = s.tangent();
  const ConePoint target = leaf_project(p, lambda);
  r.at_most("leaf projection vs parallel transport",
            norm_at(target, parallel_transport(p, target, v) - (lambda / alpha) * v), 1e-9);

  r.at_most("|sectional curvature| of a vertical plane", std::abs(sectional(p, v, p.op())), 1e-12);
}

struct SuiteDef {
  const char* claim;
  TrialFn trial;
};

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> r{
      {"cat0",
       {"the cone is CAT(0): geodesic triangles satisfy c^2 >= a^2 + b^2 - 2ab cos(gamma) with angle sum at "
        "most pi, and the distance between two geodesics is a convex function",
        cat0_trial}},
      {"minimality",
       {"geodesics are minimizing: any piecewise smooth path from p to q is at least dist(p, q) long", minimality_trial}},
      {"expansive",
       {"the exponential map is expansive: |e^{-x/2} dexp_x(y) e^{-x/2}| >= |y|, dist(e^x, e^y) >= |x - y| and "
        "dist(1, e^x) = |x|",
        expansive_trial}},
      {"curvature",
       {"sectional curvature is nonpositive and vanishes exactly on commuting planes and on vertical planes",
        curvature_trial}},
      {"triple",
       {"Mostow-de la Harpe: for a Lie triple system m, exp(m) is closed under p -> q p q and geodesically convex, "
        "and m + [m, m] is a Lie algebra with [m, m] in k, [m, k] in m, [k, k] in k",
        triple_trial}},
      {"projection",
       {"the nearest-point projection onto a closed convex submanifold is unique, reached along a normal geodesic, "
        "and is a contraction for the geodesic distance",
        projection_trial}},
      {"decomposition",
       {"factorizations e^a = e^x e^v e^x with 2x the unique minimizer, g = e^x e^v u, a + lambda = D e^w D, the "
        "block factorization of e^b, g = lambda r e^v u, and the normal bundle NM is diffeomorphic to the cone",
        decomposition_trial}},
      {"foliation",
       {"the leaves Sigma_lambda are parallel: leaf projection is an isometry and a parallel translation, the cone "
        "splits isometrically as Sigma_1 x Lambda, and vertical planes are flat",
        foliation_trial}},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

int thread_budget() {
  if (const char* env = std::getenv("SPDCONE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SuiteReport run_suite(const std::string& name, const RandomModel& model, int trials) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw UsageError("unknown suite \"" + name + "\"");
  if (trials < 0) throw UsageError("trials must be nonnegative");
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<Recorder> results;
  results.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) results.emplace_back(static_cast<std::uint64_t>(t));

  const TrialFn& fn = it->second.trial;
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < trials; t = next++) {
      Recorder& rec = results[static_cast<std::size_t>(t)];
      try {
        Sampler s(model, static_cast<std::uint64_t>(t));
        fn(s, rec);
      } catch (const std::exception& e) {
        rec.raised(e.what());
      }
    }
  };
  const int workers = std::max(1, std::min(thread_budget(), trials));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SuiteReport rep;
  rep.name = name;
  rep.claim = it->second.claim;
  rep.seed = model.seed;
  rep.n = model.n;
  rep.trials = trials;
  rep.max_violation = -kInf;
  for (const Recorder& rec : results) {
    rep.checks += rec.checks;
    rep.max_violation = std::max(rep.max_violation, rec.max_violation);
    rep.failures.insert(rep.failures.end(), rec.failures.begin(), rec.failures.end());
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

nlohmann::json to_json(const SuiteReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"trial", f.trial}, {"description", f.description}, {"measured", num(f.measured)},
                        {"bound", num(f.bound)}});
  return {{"suite", r.name},        {"claim", r.claim},   {"seed", r.seed},
          {"dim", r.n},             {"trials", r.trials}, {"checks", r.checks},
          {"max_violation", num(r.max_violation)}, {"passed", r.passed()}, {"failures", std::move(failures)}};
}

}  // namespace spdcone
