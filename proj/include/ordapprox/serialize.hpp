#pragma once

// JSON encoding shared by the CLI and the ApproxSet file format. Integers and
// rationals are decimal strings; counts and indices are JSON numbers.

#include <json.hpp>
#include <string>

#include "ordapprox/conic.hpp"

namespace ordapprox {

using Json = nlohmann::ordered_json;

/// rat:p/q | quad:P,e,D,Q | dec:digits[±err]  ("+-" accepted for ±)
RealTarget parse_target(const std::string& text);

Json to_json(const BigInt& x);
Json to_json(const BigRat& x);
Json to_json(const QuadIrr& x);
Json to_json(const RatInterval& x);
Json to_json(const RealTarget& x);
Json to_json(const Coefficient& c);
Json to_json(const Affine& a);
Json to_json(const ConicForm& f);
Json to_json(const DecayReport& r);
Json to_json(const ApproxSet& s);

BigInt int_from_json(const Json& j);
BigRat rat_from_json(const Json& j);
RealTarget target_from_json(const Json& j);
Coefficient coefficient_from_json(const Json& j);
std::vector<Pair> pairs_from_json(const Json& j);
ApproxSet approx_set_from_json(const Json& j);

}  // namespace ordapprox
