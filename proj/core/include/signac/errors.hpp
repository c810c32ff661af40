#pragma once

#include <stdexcept>
#include <string>

namespace signac {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A state point failed validation where a valid one was required.
class ValidationError final : public Error {
public:
    using Error::Error;
};

// A file exists but its contents are not what the layout promises
// (unparseable JSON, or a state point whose hash does not match its
// directory name).
class CorruptionError final : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure (permissions, disk full, rename failure).
class IoError final : public Error {
public:
    using Error::Error;
};

// No project config found in the directory or any of its ancestors.
class NotAProjectError final : public Error {
public:
    using Error::Error;
};

// An operation would overwrite or contradict existing state: re-init with
// a different project name, or moving a job onto an existing id.
class ConflictError final : public Error {
public:
    using Error::Error;
};

// A job id that does not exist in the workspace.
class UnknownIdError final : public Error {
public:
    using Error::Error;
};

// A filter document or CLI filter token sequence that does not parse.
class FilterParseError final : public Error {
public:
    using Error::Error;
};

// Malformed workflow definition or configuration file.
class ParseError final : public Error {
public:
    using Error::Error;
};

// A command template placeholder that cannot be resolved against a job.
class TemplateError final : public Error {
public:
    using Error::Error;
};

// A file named by an index record has vanished since the crawl.
class StaleIndexError final : public Error {
public:
    using Error::Error;
};

// A resource key the target scheduler dialect has no directive for.
class ScriptError final : public Error {
public:
    using Error::Error;
};

// Benchmark harness misuse: missing corpus, non-empty target directory,
// or a report that cannot support the requested scaling assertion.
class BenchError final : public Error {
public:
    using Error::Error;
};

}  // namespace signac
