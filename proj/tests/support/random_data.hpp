#pragma once

// Seeded generators for state points, documents and filters. Everything is
// deterministic under a fixed seed so failures reproduce.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "signac/query.hpp"
#include "signac/value.hpp"

namespace testsupport {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::mt19937_64& engine() { return engine_; }

    int uniform(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }
    bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(engine_) < p; }

    double real() {
        switch (uniform(0, 4)) {
            case 0: return std::uniform_real_distribution<double>(-10, 10)(engine_);
            case 1: return std::uniform_real_distribution<double>(-1e-6, 1e-6)(engine_);
            case 2: return std::uniform_real_distribution<double>(-1e18, 1e18)(engine_);
            case 3: {
                // exercise the full exponent range of the canonical grammar
                const double mant = std::uniform_real_distribution<double>(1, 10)(engine_);
                const int exp = uniform(-300, 300);
                return mant * std::pow(10.0, exp);
            }
            default: {
                static const double interesting[] = {0.0,   -0.0,  0.1,    1.0,   10.0,
                                                     1e15,  1e16,  1e-4,   1e-5,  0.5,
                                                     -2.5,  1e100, 5e-324, 2000.0};
                return interesting[static_cast<std::size_t>(
                    uniform(0, static_cast<int>(std::size(interesting)) - 1))];
            }
        }
    }

    std::int64_t integer() {
        switch (uniform(0, 3)) {
            case 0: return uniform(-20, 20);
            case 1: return std::uniform_int_distribution<std::int64_t>(-1000000, 1000000)(engine_);
            case 2: return std::uniform_int_distribution<std::int64_t>(
                       std::numeric_limits<std::int64_t>::min(),
                       std::numeric_limits<std::int64_t>::max())(engine_);
            default: return 1000;
        }
    }

    std::string word(int min_len = 1, int max_len = 8) {
        static constexpr char charset[] = "abcdefghijklmnopqrstuvwxyzABCXYZ0189_- $";
        const int len = uniform(min_len, max_len);
        std::string out;
        for (int i = 0; i < len; ++i) {
            out.push_back(charset[static_cast<std::size_t>(
                uniform(0, static_cast<int>(sizeof charset) - 2))]);
        }
        return out;
    }

    // valid, query-addressable key: non-empty, no '.', no leading '$'
    std::string key() {
        static const char* pool[] = {"p", "N", "kT", "seed", "epsilon", "sigma", "r_cut",
                                     "a",  "b", "c",  "tag",  "deep",    "x",     "y"};
        if (chance(0.7)) {
            return pool[static_cast<std::size_t>(
                uniform(0, static_cast<int>(std::size(pool)) - 1))];
        }
        std::string k = word();
        std::erase(k, '.');
        while (!k.empty() && k.front() == '$') k.erase(k.begin());
        return k.empty() ? "k" : k;
    }

private:
    std::mt19937_64 engine_;
};

inline signac::Value random_scalar(Rng& rng) {
    switch (rng.uniform(0, 5)) {
        case 0: return rng.integer();
        case 1: return rng.real();
        case 2: return rng.word(0, 12);
        case 3: return rng.chance(0.5);
        case 4: return nullptr;
        default: return rng.uniform(0, 100);
    }
}

inline signac::Value random_value(Rng& rng, int depth) {
    if (depth <= 0 || rng.chance(0.6)) return random_scalar(rng);
    if (rng.chance(0.5)) {
        signac::Value arr = signac::Value::array();
        const int n = rng.uniform(0, 3);
        for (int i = 0; i < n; ++i) arr.push_back(random_value(rng, depth - 1));
        return arr;
    }
    signac::Value obj = signac::Value::object();
    const int n = rng.uniform(0, 3);
    for (int i = 0; i < n; ++i) obj[rng.key()] = random_value(rng, depth - 1);
    return obj;
}

// A valid state point / document: mapping with 1..6 keys, nesting <= 3.
inline signac::Value random_statepoint(Rng& rng) {
    signac::Value sp = signac::Value::object();
    const int n = rng.uniform(1, 6);
    for (int i = 0; i < n; ++i) sp[rng.key()] = random_value(rng, 3);
    return sp;
}

// JSON text of `v` with object keys emitted in random order; scalars are
// delegated to the library dump (they re-parse identically).
inline std::string shuffled_json_text(const signac::Value& v, Rng& rng) {
    if (v.is_object()) {
        std::vector<std::string> keys;
        for (auto it = v.begin(); it != v.end(); ++it) keys.push_back(it.key());
        std::shuffle(keys.begin(), keys.end(), rng.engine());
        std::string out = "{";
        bool first = true;
        for (const auto& k : keys) {
            if (!first) out += ",";
            first = false;
            out += signac::Value(k).dump();
            out += ":";
            out += shuffled_json_text(v.at(k), rng);
        }
        return out + "}";
    }
    if (v.is_array()) {
        std::string out = "[";
        bool first = true;
        for (const auto& item : v) {
            if (!first) out += ",";
            first = false;
            out += shuffled_json_text(item, rng);
        }
        return out + "]";
    }
    return v.dump();
}

// Random dotted path, biased toward keys that actually occur in documents.
inline std::string random_path(Rng& rng) {
    std::string path = rng.key();
    while (rng.chance(0.3)) path += "." + rng.key();
    return path;
}

inline signac::Value random_ordering_operand(Rng& rng) {
    if (rng.chance(0.5)) return rng.chance(0.5) ? signac::Value(rng.integer())
                                                : signac::Value(rng.real());
    return rng.word(0, 6);
}

inline signac::FilterExpr random_filter(Rng& rng, int depth) {
    using signac::CmpOp;
    if (depth > 0 && rng.chance(0.3)) {
        const int kind = rng.uniform(0, 2);
        if (kind == 2) return make_not(random_filter(rng, depth - 1));
        std::vector<signac::FilterExpr> children;
        const int n = rng.uniform(1, 3);
        for (int i = 0; i < n; ++i) children.push_back(random_filter(rng, depth - 1));
        return kind == 0 ? make_and(std::move(children)) : make_or(std::move(children));
    }
    const std::string path = random_path(rng);
    switch (rng.uniform(0, 8)) {
        case 0: return make_cmp(path, CmpOp::eq, random_value(rng, 1));
        case 1: return make_cmp(path, CmpOp::ne, random_value(rng, 1));
        case 2: return make_cmp(path, CmpOp::gt, random_ordering_operand(rng));
        case 3: return make_cmp(path, CmpOp::gte, random_ordering_operand(rng));
        case 4: return make_cmp(path, CmpOp::lt, random_ordering_operand(rng));
        case 5: return make_cmp(path, CmpOp::lte, random_ordering_operand(rng));
        case 6: {
            signac::Value arr = signac::Value::array();
            const int n = rng.uniform(0, 4);
            for (int i = 0; i < n; ++i) arr.push_back(random_scalar(rng));
            return make_cmp(path, rng.chance(0.5) ? CmpOp::in : CmpOp::nin, arr);
        }
        default: return make_cmp(path, CmpOp::exists, rng.chance(0.5));
    }
}

}  // namespace testsupport
