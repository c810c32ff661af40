#pragma once

#include <nlohmann/json.hpp>

namespace signac {

// The JSON value domain shared by state points, job documents, filters and
// index records: null, bool, integer, float, string, array, object.
// Integers and floats are distinct types throughout; 1 and 1.0 are different
// values for identity purposes (queries bridge them, hashing does not).
using Value = nlohmann::json;

// Insertion-ordered variant, used where key order of the *input* matters
// (canonicalization tests feed deliberately shuffled objects).
using OrderedValue = nlohmann::ordered_json;

}  // namespace signac
