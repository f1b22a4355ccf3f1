#include "spdcone/json_io.hpp"

#include <string>

namespace spdcone {

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw UsageError("expected a number or [re, im], got " + j.dump());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw UsageError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const UnitizedHermitian& x) {
  return Json{{"n", x.dim()}, {"scalar", complex_json(x.scalar())}, {"matrix", matrix_to_json(x.hs())}};
}

Json to_json(const UnitizedOperator& x) {
  return Json{{"n", x.dim()}, {"scalar", complex_json(x.scalar())}, {"matrix", matrix_to_json(x.mat())}};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw UsageError("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw UsageError("matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

UnitizedOperator operator_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("value must be a JSON object");
  Matrix m = matrix_from_json(field(j, "matrix"));
  if (j.contains("n") && int_field(j, "n") != m.rows()) throw DimensionError("\"n\" does not match the matrix size");
  if (!j.contains("scalar")) return UnitizedOperator::from_matrix(m, 1.0);
  return UnitizedOperator(complex_from(j.at("scalar")), std::move(m));
}

UnitizedHermitian hermitian_from_json(const Json& j) {
  const UnitizedOperator x = operator_from_json(j);
  const Complex s = x.scalar();
  if (std::abs(s.imag()) > kHermTol * std::max(1.0, std::abs(s)))
    throw DomainError("self-adjoint value needs a real scalar coordinate");
  return UnitizedHermitian(s.real(), x.mat());
}

ConePoint point_from_json(const Json& j) { return ConePoint(hermitian_from_json(j)); }

TripleSystem system_from_json(const Json& j, int default_n) {
  if (!j.is_object()) throw UsageError("manifold descriptor must be a JSON object");
  const Json& kind_j = field(j, "kind");
  if (!kind_j.is_string()) throw UsageError("\"kind\" must be a string");
  const std::string kind = kind_j.get<std::string>();
  auto dim = [&] {
    const int n = j.contains("n") ? int_field(j, "n") : default_n;
    if (n < 1) throw UsageError("descriptor needs a positive \"n\"");
    return n;
  };
  if (kind == "diagonal") return TripleSystem::diagonal(dim());
  if (kind == "scalar") return TripleSystem::scalar(dim());
  if (kind == "full") return TripleSystem::full(dim());
  if (kind == "block") return TripleSystem::block(dim(), int_field(j, "k"));
  if (kind == "commutant") return TripleSystem::commutant(hermitian_from_json(field(j, "y")));
  if (kind == "polynomial") return TripleSystem::polynomial(hermitian_from_json(field(j, "a")));
  if (kind == "custom") {
    const Json& b = field(j, "basis");
    if (!b.is_array() || b.empty()) throw UsageError("\"basis\" must be a non-empty array");
    std::vector<UnitizedHermitian> basis;
    for (const Json& v : b) basis.push_back(hermitian_from_json(v));
    return TripleSystem(std::move(basis));
  }
  throw UsageError("unknown manifold kind \"" + kind + "\"");
}

Json system_to_json(const TripleSystem& m) {
  Json basis = Json::array();
  for (const auto& b : m.basis()) basis.push_back(to_json(b));
  Json out{{"kind", m.kind()}, {"n", m.n()}, {"dim", m.dim()}, {"basis", std::move(basis)}};
  if (m.block_size() > 0) out["k"] = m.block_size();
  return out;
}

ProjectionOptions options_from_json(const Json& j) {
  ProjectionOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw UsageError("\"opts\" must be a JSON object");
  auto num = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw UsageError(std::string("option \"") + key + "\" must be a number");
    out = j.at(key).get<double>();
  };
  num("tol", o.tol);
  num("armijo_c", o.armijo_c);
  num("shrink", o.shrink);
  num("initial_step", o.initial_step);
  if (j.contains("max_iter")) o.max_iter = int_field(j, "max_iter");
  if (j.contains("start")) o.start = point_from_json(j.at("start"));
  return o;
}

Json to_json(const ProjectionResult& r) {
  return Json{{"foot", to_json(r.foot.op())},
              {"normal", to_json(r.normal)},
              {"iterations", r.iterations},
              {"residual", r.residual}};
}

}  // namespace spdcone
