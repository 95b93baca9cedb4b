#include "intertwine/io.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>

namespace intertwine::io {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

Json to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  throw std::invalid_argument("expected a rational string or an integer");
}

Json to_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const ValueVector& v) {
  Json values = Json::array();
  for (const auto& x : v.values) values.push_back(to_string(x));
  return Json{{"offset", v.offset}, {"values", std::move(values)}};
}

Json to_json(const Poly& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(to_string(c));
  return coeffs;
}

Json to_json(const FiniteKernel& k) {
  return Json{{"rowOffset", k.row_offset()}, {"colOffset", k.col_offset()}, {"entries", to_json(k.entries())}};
}

FiniteKernel kernel_from_json(const Json& j) {
  const auto& entries = j.at("entries");
  const std::size_t rows = entries.size();
  const std::size_t cols = rows == 0 ? 0 : entries.at(0).size();
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (entries.at(i).size() != cols) throw std::invalid_argument("kernel_from_json: ragged entries");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rational_from_json(entries.at(i).at(c));
  }
  return {j.at("rowOffset").get<long>(), j.at("colOffset").get<long>(), std::move(m)};
}

Json to_json(const RowWitness& w) { return Json{{"y", w.y}, {"x0", to_string(w.x0)}, {"value", to_string(w.value)}}; }

Json to_json(const FeasibilityReport& r) {
  Json j;
  j["member"] = r.member;
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  j["parityViolation"] = r.parity_violation ? Json(*r.parity_violation) : Json(nullptr);
  return j;
}

Json to_json(const KernelPolytope& p) {
  Json j;
  j["rowOffset"] = p.row_offset;
  j["colOffset"] = p.col_offset;
  j["method"] = p.method == KernelPolytope::Method::VertexEnumeration ? "vertex-enumeration" : "linear-programming";
  j["freeDimension"] = p.free_dimension();
  j["feasible"] = p.feasible;
  j["unique"] = p.unique;
  j["nontrivial"] = p.nontrivial;
  j["particular"] = to_json(p.particular);
  Json basis = Json::array();
  for (const auto& b : p.basis) basis.push_back(to_json(b));
  j["basis"] = std::move(basis);
  j["feasiblePoint"] = p.feasible_point ? to_json(*p.feasible_point) : Json(nullptr);
  if (p.method == KernelPolytope::Method::VertexEnumeration) {
    Json vertices = Json::array();
    for (const auto& v : p.vertices) vertices.push_back(to_json(v));
    j["vertices"] = std::move(vertices);
  }
  j["nontrivialWitness"] = p.nontrivial_witness ? to_json(*p.nontrivial_witness) : Json(nullptr);
  return j;
}

void write_trajectories_csv(std::ostream& out, std::span<const Trajectory> trajectories) {
  out << "time,x,y\n";
  std::string line;
  for (const auto& traj : trajectories) {
    for (const auto& e : traj.events) {
      line = format_double(e.time);
      line += ',';
      line += std::to_string(e.state.x);
      line += ',';
      line += std::to_string(e.state.y);
      line += '\n';
      out << line;
    }
  }
}

}  // namespace intertwine::io
