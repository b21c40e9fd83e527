#pragma once

#include "cmk3/k3_oracle.hpp"

#include <json.hpp>

namespace cmk3 {

using Json = nlohmann::ordered_json;

Json to_json(const AbelianField& f);
Json to_json(const CyclotomicElement& x);
Json to_json(const MatI& gram);
Json to_json(const FiniteQuadraticForm& f);
Json to_json(const WittClass& w);
Json to_json(const DiscriminantIdeal& d);
Json to_json(const TraceLattice& l);
Json to_json(const PrimeSplitting& s);
Json to_json(const DiscVerdict& v);
Json to_json(const ExistenceVerdict& v);
Json to_json(const PicardVerdict& v);
Json to_json(const K3SurfaceRecord& r);

MatI gram_from_json(const Json& j);

}  // namespace cmk3
