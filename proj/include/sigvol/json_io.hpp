#ifndef SIGVOL_JSON_IO_HPP
#define SIGVOL_JSON_IO_HPP

#include <json.hpp>

#include "sigvol/tensor_poly.hpp"
#include "sigvol/trunc_sig.hpp"

namespace sigvol {

// { "alphabet_dim": d, "terms": [ {"word": "221", "num": 3, "den": 10}, ... ] }
nlohmann::json tensor_poly_to_json(const TensorPoly& p);
TensorPoly tensor_poly_from_json(const nlohmann::json& j);

// { "alphabet_dim": d, "level": N, "entries": [{"word": "...", "value": ...}] }
// listing nonzero entries in graded-lex order.
nlohmann::json trunc_sig_to_json(const TruncSig& s);

}  // namespace sigvol

#endif
