#pragma once

#include "perfhom/chain.hpp"
#include "perfhom/minima.hpp"
#include "perfhom/voronoi.hpp"

#include <json.hpp>

#include <string>

namespace perfhom {

using json = nlohmann::ordered_json;

// Rationals serialize as a plain integer when the denominator is 1 and as
// the string "p/q" otherwise; both are accepted on input.
json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);

json form_to_json(const SymForm& A);
SymForm form_from_json(const json& j);

json minvecs_to_json(const MinVecSet& mv);

json record_to_json(const PerfectFormRecord& rec);

json complex_to_json(const ChainComplexZ& cc);
ChainComplexZ complex_from_json(const json& j);

// Sparse integer chain complex, one stanza per degree:
//   k rows cols nnz
//   i j value            (1-based row/column indices, nnz lines)
std::string complex_to_text(const ChainComplexZ& cc);
ChainComplexZ complex_from_text(const std::string& text);

// Reads either serialization, sniffing the leading character.
ChainComplexZ load_complex(const std::string& path);

} // namespace perfhom
