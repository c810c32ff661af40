#pragma once

#include <filesystem>
#include <functional>
#include <optional>

#include "signac/value.hpp"

namespace signac {

// Test-only injection point: invoked after the temporary file is fully
// written and before the rename. A hook that throws simulates a crash at
// the most dangerous moment.
using WriteFaultHook = std::function<void()>;

// Writes `doc` as pretty-printed JSON to `path` via a uniquely named
// temporary sibling followed by an atomic rename. Readers never observe a
// torn file, and no lock file is ever created. On failure the pre-existing
// file, if any, is left untouched.
void write_document_atomic(const std::filesystem::path& path, const Value& doc,
                           const WriteFaultHook& fault_hook = {});

// Parses the JSON document at `path`. Returns nullopt when the file does
// not exist; throws CorruptionError when it exists but does not parse.
std::optional<Value> read_document(const std::filesystem::path& path);

// Dotted-path access into a document. Leaf keys may not contain ".", so a
// dotted path is unambiguous. set creates intermediate objects as needed
// and throws ValidationError when a non-object value is in the way or a
// segment is empty.
const Value* document_lookup(const Value& doc, std::string_view dotted_key);
void document_set(Value& doc, std::string_view dotted_key, Value value);

}  // namespace signac
