#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "signac/value.hpp"

namespace signac {

// One violated state point invariant, located by its dotted key path
// (empty path refers to the root value).
struct Violation {
    std::string path;
    std::string message;
};

// Checks the state point invariants: the root is a mapping, every key at
// every level is a non-empty string without ".", and every float is finite.
// Returns an empty vector when the state point is valid.
std::vector<Violation> validate_statepoint(const Value& statepoint);
std::vector<Violation> validate_statepoint(const OrderedValue& statepoint);

inline bool is_valid_statepoint(const Value& statepoint) {
    return validate_statepoint(statepoint).empty();
}

// The content address of a state point: 32 lowercase hex characters,
// the first 128 bits of SHA-256 over the canonical serialization.
class JobId {
public:
    JobId() = default;

    // Parses and checks the 32-char lowercase hex shape; throws
    // ValidationError otherwise.
    static JobId parse(std::string_view text);
    static bool is_valid(std::string_view text);

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    auto operator<=>(const JobId&) const = default;

private:
    explicit JobId(std::string value) : value_(std::move(value)) {}
    std::string value_;

    friend JobId compute_id(const Value&);
    friend JobId compute_id(const OrderedValue&);
};

// Hashes the canonical serialization of a state point. Deterministic across
// processes and machines; independent of key order and workspace location.
JobId compute_id(const Value& statepoint);
JobId compute_id(const OrderedValue& statepoint);

}  // namespace signac
