#pragma once

#include <string>

#include "signac/value.hpp"

namespace signac {

// Canonical text of one binary64 value. Shortest decimal digit string that
// round-trips, presented deterministically:
//   - fixed notation when the decimal exponent is in [-4, 15], always with
//     a fraction part ("1.0", "2000.0", "0.001"),
//   - scientific otherwise, with a bare exponent ("1e100", "1.5e-10").
// The result is never confusable with canonical integer text, so 1 and 1.0
// stay distinct under hashing. Throws ValidationError for NaN/Inf.
std::string canonical_float_text(double value);

// Canonical UTF-8 byte serialization of a state point: keys sorted
// lexicographically at every level, no whitespace, integers and floats
// rendered per the canonical scalar rules. Equal state points yield
// byte-identical output regardless of input key order.
//
// The input must be a valid state point (see validate_statepoint);
// violations raise ValidationError. These bytes exist for hashing only and
// are never written to disk as a document.
std::string canonicalize(const Value& statepoint);
std::string canonicalize(const OrderedValue& statepoint);

}  // namespace signac
