#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "intertwine/coupling.hpp"
#include "intertwine/feasibility.hpp"
#include "intertwine/kernels.hpp"

namespace intertwine::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

Json to_json(const Rational& r);
/// Accepts "p/q" strings, decimal strings and JSON integers.
Rational rational_from_json(const Json& j);

Json to_json(const RatMatrix& m);
Json to_json(const ValueVector& v);
Json to_json(const Poly& p);
Json to_json(const FiniteKernel& k);
FiniteKernel kernel_from_json(const Json& j);
Json to_json(const RowWitness& w);
Json to_json(const FeasibilityReport& r);
Json to_json(const KernelPolytope& p);

/// Columns time,x,y; each trajectory starts again at time 0.
void write_trajectories_csv(std::ostream& out, std::span<const Trajectory> trajectories);

}  // namespace intertwine::io
