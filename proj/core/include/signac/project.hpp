#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "signac/query.hpp"
#include "signac/statepoint.hpp"
#include "signac/value.hpp"

namespace signac {

namespace detail {
struct ProjectState;
}

struct ProjectConfig {
    std::string project_name;
    std::filesystem::path root;           // absolute
    std::filesystem::path workspace_dir;  // absolute, default <root>/workspace
};

// Names of the on-disk artifacts. The layout is bit-exact:
//   <root>/signac.rc
//   <root>/workspace/<32-hex-id>/signac_statepoint.json
//   <root>/workspace/<32-hex-id>/signac_job_document.json
inline constexpr std::string_view kConfigFileName = "signac.rc";
inline constexpr std::string_view kStatepointFileName = "signac_statepoint.json";
inline constexpr std::string_view kDocumentFileName = "signac_job_document.json";

class Project;

// Handle for one data point: a state point, its content address, and the
// workspace directory derived from it. Copies are cheap; the handle shares
// the owning project's session cache.
class Job {
public:
    const JobId& id() const { return id_; }
    const Value& statepoint() const { return statepoint_; }
    const std::filesystem::path& workspace_path() const { return workspace_; }

    // Creates the workspace directory and the statepoint file; idempotent.
    // An existing statepoint file is verified against this job's id and
    // left untouched.
    void init() const;
    bool initialized() const;

    // Joins a relative file name onto the workspace path. Absolute names
    // and ".." segments are rejected.
    std::filesystem::path fn(std::string_view name) const;
    // True iff the named regular file exists inside the workspace.
    bool isfile(std::string_view name) const;

    // The job document: a lightweight persistent JSON mapping stored next
    // to the data. Reading an absent document yields an empty mapping;
    // writes are atomic and initialize the job if needed.
    Value document() const;
    void set_document(const Value& doc) const;
    std::optional<Value> document_value(std::string_view dotted_key) const;
    void set_document_value(std::string_view dotted_key, Value value) const;

private:
    friend class Project;
    friend Job move_job(const Job&, Project&);
    Job(std::shared_ptr<detail::ProjectState> state, JobId id, Value statepoint);

    std::shared_ptr<detail::ProjectState> state_;
    JobId id_;
    Value statepoint_;
    std::filesystem::path workspace_;
};

// A workspace subdirectory that could not be interpreted as a job.
struct ScanIssue {
    std::string directory;
    std::string message;
};

struct FsckIssue {
    std::string directory;
    std::string kind;  // missing_statepoint | parse_error | bad_name | id_mismatch | invalid_statepoint
    std::string message;
};

struct FsckReport {
    std::size_t directories_checked = 0;
    std::size_t jobs_ok = 0;
    std::vector<FsckIssue> issues;
    bool clean() const { return issues.empty(); }
};

// A named data space rooted at a config file. Copies share one session
// cache; the handle is safe for concurrent readers.
class Project {
public:
    // Creates (or idempotently re-opens) a project at `root`. A config
    // with a different name raises ConflictError.
    static Project init(const std::string& name, const std::filesystem::path& root);

    // Walks from `cwd` upward to the nearest directory containing a config
    // file. Raises NotAProjectError when none is found.
    static Project open(const std::filesystem::path& cwd);

    const ProjectConfig& config() const;
    const std::filesystem::path& root() const;
    const std::filesystem::path& workspace_dir() const;

    // Job handle for a state point; validates but does not touch the disk.
    Job open_job(const Value& statepoint) const;

    // Loads the job whose directory is named by `id`, verifying that the
    // stored state point hashes back to the directory name. O(1) in the
    // number of jobs.
    Job open_job_by_id(const JobId& id) const;

    // All jobs whose metadata matches the filter, ascending by id. An
    // absent filter matches everything. Filters may address job documents
    // via the "doc." path prefix; document files are only read when the
    // filter requires them.
    std::vector<Job> find_jobs(const std::optional<FilterExpr>& filter = std::nullopt) const;
    std::vector<Job> all_jobs() const;

    // Number of workspace directories holding a consistent statepoint
    // file. Directories that fail to parse are reported via scan_issues(),
    // never silently dropped.
    std::size_t num_jobs() const;
    std::vector<ScanIssue> scan_issues() const;

    // Re-reads every statepoint file and verifies the directory-name/hash
    // association. Never mutates anything.
    FsckReport fsck() const;

    // Drops the session metadata cache; the next access re-reads the
    // workspace.
    void refresh() const;

private:
    explicit Project(std::shared_ptr<detail::ProjectState> state);
    std::shared_ptr<detail::ProjectState> state_;

    friend Job move_job(const Job&, Project&);
};

// Relocates an initialized job into another project's workspace. The id
// (and therefore the directory name) is preserved; a same-id job already
// present at the destination raises ConflictError and nothing moves.
Job move_job(const Job& job, Project& destination);

// Restores the previous working directory on destruction.
class CwdGuard {
public:
    explicit CwdGuard(const std::filesystem::path& to)
        : previous_(std::filesystem::current_path()) {
        std::filesystem::current_path(to);
    }
    ~CwdGuard() {
        std::error_code ec;
        std::filesystem::current_path(previous_, ec);
    }
    CwdGuard(const CwdGuard&) = delete;
    CwdGuard& operator=(const CwdGuard&) = delete;

private:
    std::filesystem::path previous_;
};

// Runs `action` with the current working directory set to the job's
// workspace; the previous directory is restored afterwards, also on
// exceptions. The working directory is process-global state, so nested
// scopes compose but concurrent use from multiple threads does not.
template <class F>
auto with_job_dir(const Job& job, F&& action) -> decltype(action()) {
    if (!job.initialized()) {
        job.init();
    }
    CwdGuard guard(job.workspace_path());
    return action();
}

}  // namespace signac
