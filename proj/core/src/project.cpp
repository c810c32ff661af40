#include "signac/project.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <system_error>

#include "signac/atomic_io.hpp"
#include "signac/canonical.hpp"
#include "signac/errors.hpp"

namespace signac {

namespace fs = std::filesystem;

namespace detail {

struct ProjectState {
    ProjectConfig config;

    mutable std::mutex mutex;
    mutable bool scanned = false;
    mutable std::map<JobId, Value> statepoints;  // ascending-id session cache
    mutable std::vector<ScanIssue> issues;
};

}  // namespace detail

namespace {

using detail::ProjectState;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

ProjectConfig parse_config_file(const fs::path& config_path) {
    std::ifstream in(config_path);
    if (!in.is_open()) {
        throw IoError("cannot read project config " + config_path.string());
    }
    ProjectConfig config;
    config.root = config_path.parent_path();
    std::string workspace = "workspace";
    std::string line;
    while (std::getline(in, line)) {
        const std::string entry = trim(line);
        if (entry.empty() || entry.front() == '#') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw CorruptionError("malformed line in " + config_path.string() + ": " + entry);
        }
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (key == "project") {
            config.project_name = value;
        } else if (key == "workspace_dir") {
            workspace = value;
        }
        // unknown keys are tolerated for forward compatibility
    }
    if (config.project_name.empty()) {
        throw CorruptionError("project config " + config_path.string() +
                              " does not define a project name");
    }
    fs::path ws(workspace);
    config.workspace_dir = ws.is_absolute() ? ws : config.root / ws;
    return config;
}

void throw_if_invalid(const Value& statepoint) {
    const auto violations = validate_statepoint(statepoint);
    if (violations.empty()) return;
    std::string msg = "invalid state point:";
    for (const auto& v : violations) {
        msg += " [" + (v.path.empty() ? std::string("<root>") : v.path) + "] " + v.message + ";";
    }
    throw ValidationError(msg);
}

fs::path statepoint_path(const fs::path& workspace) {
    return workspace / kStatepointFileName;
}

// Full workspace scan; fills the session cache. Directories that cannot be
// interpreted as jobs become issues instead of cache entries.
void ensure_scan(const ProjectState& state) {
    std::scoped_lock lock(state.mutex);
    if (state.scanned) return;
    state.statepoints.clear();
    state.issues.clear();
    if (fs::is_directory(state.config.workspace_dir)) {
        for (const auto& entry : fs::directory_iterator(state.config.workspace_dir)) {
            if (!entry.is_directory()) continue;
            const std::string name = entry.path().filename().string();
            const fs::path spfile = statepoint_path(entry.path());
            if (!fs::exists(spfile)) {
                state.issues.push_back({name, "no statepoint file"});
                continue;
            }
            if (!JobId::is_valid(name)) {
                state.issues.push_back({name, "directory name is not a job id"});
                continue;
            }
            try {
                const auto doc = read_document(spfile);
                if (!doc) {
                    state.issues.push_back({name, "statepoint file vanished during scan"});
                    continue;
                }
                const JobId computed = compute_id(*doc);
                if (computed.str() != name) {
                    state.issues.push_back(
                        {name, "statepoint hashes to " + computed.str() + ", not the directory name"});
                    continue;
                }
                state.statepoints.emplace(computed, *doc);
            } catch (const Error& e) {
                state.issues.push_back({name, e.what()});
            }
        }
    }
    state.scanned = true;
}

void note_job_on_disk(const ProjectState& state, const JobId& id, const Value& statepoint) {
    std::scoped_lock lock(state.mutex);
    state.statepoints.insert_or_assign(id, statepoint);
}

void forget_job(const ProjectState& state, const JobId& id) {
    std::scoped_lock lock(state.mutex);
    state.statepoints.erase(id);
}

}  // namespace

// ---------------------------------------------------------------------------
// Job

Job::Job(std::shared_ptr<detail::ProjectState> state, JobId id, Value statepoint)
    : state_(std::move(state)),
      id_(std::move(id)),
      statepoint_(std::move(statepoint)),
      workspace_(state_->config.workspace_dir / id_.str()) {}

void Job::init() const {
    const fs::path spfile = statepoint_path(workspace_);
    if (fs::exists(spfile)) {
        const auto on_disk = read_document(spfile);
        if (!on_disk || compute_id(*on_disk) != id_) {
            throw CorruptionError("existing statepoint file in " + workspace_.string() +
                                  " does not match job id " + id_.str());
        }
        note_job_on_disk(*state_, id_, statepoint_);
        return;
    }
    std::error_code ec;
    fs::create_directories(workspace_, ec);
    if (ec) {
        throw IoError("cannot create workspace directory " + workspace_.string() + ": " +
                      ec.message());
    }
    write_document_atomic(spfile, statepoint_);
    note_job_on_disk(*state_, id_, statepoint_);
}

bool Job::initialized() const { return fs::exists(statepoint_path(workspace_)); }

std::filesystem::path Job::fn(std::string_view name) const {
    const fs::path rel(name);
    if (rel.empty() || rel.is_absolute()) {
        throw ValidationError("job file name must be a relative path: '" + std::string(name) + "'");
    }
    for (const auto& part : rel) {
        if (part == "..") {
            throw ValidationError("job file name may not contain '..': '" + std::string(name) + "'");
        }
    }
    return workspace_ / rel;
}

bool Job::isfile(std::string_view name) const { return fs::is_regular_file(fn(name)); }

Value Job::document() const {
    const auto doc = read_document(workspace_ / kDocumentFileName);
    return doc ? *doc : Value::object();
}

void Job::set_document(const Value& doc) const {
    if (!doc.is_object()) {
        throw ValidationError("job document root must be a mapping");
    }
    throw_if_invalid(doc);  // same key rules as state points
    if (!initialized()) init();
    write_document_atomic(workspace_ / kDocumentFileName, doc);
}

std::optional<Value> Job::document_value(std::string_view dotted_key) const {
    const Value doc = document();
    const Value* v = document_lookup(doc, dotted_key);
    if (v == nullptr) return std::nullopt;
    return std::optional<Value>(std::in_place, *v);
}

void Job::set_document_value(std::string_view dotted_key, Value value) const {
    Value doc = document();
    document_set(doc, dotted_key, std::move(value));
    set_document(doc);
}

// ---------------------------------------------------------------------------
// Project

Project::Project(std::shared_ptr<detail::ProjectState> state) : state_(std::move(state)) {}

Project Project::init(const std::string& name, const fs::path& root) {
    if (name.empty()) {
        throw ValidationError("project name must be non-empty");
    }
    const fs::path abs_root = fs::absolute(root).lexically_normal();
    if (!fs::is_directory(abs_root)) {
        throw IoError("project root does not exist: " + abs_root.string());
    }
    const fs::path config_path = abs_root / kConfigFileName;
    if (fs::exists(config_path)) {
        ProjectConfig existing = parse_config_file(config_path);
        if (existing.project_name != name) {
            throw ConflictError("directory already belongs to project '" + existing.project_name +
                                "', refusing to re-initialize as '" + name + "'");
        }
        auto state = std::make_shared<detail::ProjectState>();
        state->config = std::move(existing);
        return Project(std::move(state));
    }
    {
        std::ofstream out(config_path);
        if (!out.is_open()) {
            throw IoError("cannot create " + config_path.string());
        }
        out << "project=" << name << "\n";
        out << "workspace_dir=workspace\n";
    }
    auto state = std::make_shared<detail::ProjectState>();
    state->config.project_name = name;
    state->config.root = abs_root;
    state->config.workspace_dir = abs_root / "workspace";
    return Project(std::move(state));
}

Project Project::open(const fs::path& cwd) {
    fs::path p = fs::absolute(cwd).lexically_normal();
    while (true) {
        const fs::path config_path = p / kConfigFileName;
        if (fs::exists(config_path)) {
            auto state = std::make_shared<detail::ProjectState>();
            state->config = parse_config_file(config_path);
            return Project(std::move(state));
        }
        const fs::path parent = p.parent_path();
        if (parent == p) break;
        p = parent;
    }
    throw NotAProjectError("no project config found in '" + fs::absolute(cwd).string() +
                           "' or any parent directory");
}

const ProjectConfig& Project::config() const { return state_->config; }
const fs::path& Project::root() const { return state_->config.root; }
const fs::path& Project::workspace_dir() const { return state_->config.workspace_dir; }

Job Project::open_job(const Value& statepoint) const {
    throw_if_invalid(statepoint);
    return Job(state_, compute_id(statepoint), statepoint);
}

Job Project::open_job_by_id(const JobId& id) const {
    {
        std::scoped_lock lock(state_->mutex);
        const auto it = state_->statepoints.find(id);
        if (it != state_->statepoints.end()) {
            return Job(state_, id, it->second);
        }
    }
    const fs::path dir = state_->config.workspace_dir / id.str();
    const fs::path spfile = statepoint_path(dir);
    if (!fs::exists(spfile)) {
        throw UnknownIdError("no job with id " + id.str() + " in workspace " +
                             state_->config.workspace_dir.string());
    }
    const auto doc = read_document(spfile);
    if (!doc) {
        throw UnknownIdError("no job with id " + id.str());
    }
    const JobId computed = compute_id(*doc);
    if (computed != id) {
        throw CorruptionError("statepoint file in " + dir.string() + " hashes to " +
                              computed.str() + ", not the directory name");
    }
    note_job_on_disk(*state_, id, *doc);
    return Job(state_, id, *doc);
}

std::vector<Job> Project::all_jobs() const {
    ensure_scan(*state_);
    std::vector<Job> jobs;
    {
        std::scoped_lock lock(state_->mutex);
        jobs.reserve(state_->statepoints.size());
        for (const auto& [id, sp] : state_->statepoints) {
            jobs.push_back(Job(state_, id, sp));
        }
    }
    return jobs;
}

std::vector<Job> Project::find_jobs(const std::optional<FilterExpr>& filter) const {
    std::vector<Job> jobs = all_jobs();
    if (!filter) return jobs;

    const bool needs_document = references_document(*filter);
    std::vector<Job> selected;
    for (auto& job : jobs) {
        Value view = job.statepoint();
        if (needs_document) {
            view["doc"] = job.document();
        }
        if (matches(*filter, view)) {
            selected.push_back(std::move(job));
        }
    }
    return selected;
}

std::size_t Project::num_jobs() const {
    ensure_scan(*state_);
    std::scoped_lock lock(state_->mutex);
    return state_->statepoints.size();
}

std::vector<ScanIssue> Project::scan_issues() const {
    ensure_scan(*state_);
    std::scoped_lock lock(state_->mutex);
    return state_->issues;
}

void Project::refresh() const {
    std::scoped_lock lock(state_->mutex);
    state_->scanned = false;
    state_->statepoints.clear();
    state_->issues.clear();
}

FsckReport Project::fsck() const {
    FsckReport report;
    if (!fs::is_directory(state_->config.workspace_dir)) return report;
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(state_->config.workspace_dir)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        ++report.directories_checked;
        const std::string name = dir.filename().string();
        const fs::path spfile = statepoint_path(dir);
        if (!fs::exists(spfile)) {
            report.issues.push_back({name, "missing_statepoint", "no statepoint file"});
            continue;
        }
        Value sp;
        try {
            const auto doc = read_document(spfile);
            if (!doc) {
                report.issues.push_back({name, "missing_statepoint", "statepoint file vanished"});
                continue;
            }
            sp = *doc;
        } catch (const CorruptionError& e) {
            report.issues.push_back({name, "parse_error", e.what()});
            continue;
        }
        if (!JobId::is_valid(name)) {
            report.issues.push_back({name, "bad_name", "directory name is not a job id"});
            continue;
        }
        try {
            const JobId computed = compute_id(sp);
            if (computed.str() != name) {
                report.issues.push_back(
                    {name, "id_mismatch", "statepoint hashes to " + computed.str()});
                continue;
            }
        } catch (const ValidationError& e) {
            report.issues.push_back({name, "invalid_statepoint", e.what()});
            continue;
        }
        ++report.jobs_ok;
    }
    return report;
}

// ---------------------------------------------------------------------------

Job move_job(const Job& job, Project& destination) {
    if (!job.initialized()) {
        throw Error("cannot move job " + job.id().str() + ": not initialized on disk");
    }
    const fs::path target = destination.workspace_dir() / job.id().str();
    if (fs::exists(target)) {
        throw ConflictError("destination already has a job with id " + job.id().str());
    }
    std::error_code ec;
    fs::create_directories(destination.workspace_dir(), ec);
    if (ec) {
        throw IoError("cannot create destination workspace: " + ec.message());
    }
    fs::rename(job.workspace_path(), target, ec);
    if (ec) {
        // cross-device fallback: copy then remove
        std::error_code copy_ec;
        fs::copy(job.workspace_path(), target, fs::copy_options::recursive, copy_ec);
        if (copy_ec) {
            std::error_code cleanup;
            fs::remove_all(target, cleanup);
            throw IoError("cannot move job directory: " + ec.message());
        }
        fs::remove_all(job.workspace_path());
    }
    forget_job(*job.state_, job.id());
    note_job_on_disk(*destination.state_, job.id(), job.statepoint());
    return Job(destination.state_, job.id(), job.statepoint());
}

}  // namespace signac
