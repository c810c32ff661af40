// signac - command line interface to the project/workspace data model.
//
// Exit codes: 0 ok, 1 environment/state error, 2 usage/parse error,
// 3 not found. Payload goes to stdout, diagnostics to stderr.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "signac/errors.hpp"
#include "signac/flow.hpp"
#include "signac/index.hpp"
#include "signac/project.hpp"
#include "signac/query.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kStateError = 1;
constexpr int kUsageError = 2;
constexpr int kNotFound = 3;

struct JobArgs {
    std::string statepoint_text;
    bool print_workspace = false;
    bool create = false;
};

struct DocumentArgs {
    std::string id;
    std::string action;
    std::string key;
    std::string value_text;
};

struct FlowArgs {
    std::string workflow_file;
    bool as_json = false;
    bool pretend = false;
    bool to_completion = false;
    int parallelism = 1;
    std::size_t bundle_size = 1;
    bool parallel_bundles = false;
    std::string scheduler_name;
    std::vector<std::string> op_names;
};

signac::Project open_project_here() { return signac::Project::open(fs::current_path()); }

signac::flow::WorkflowProject load_workflow(const FlowArgs& args) {
    signac::Project project = open_project_here();
    const fs::path file = args.workflow_file.empty()
                              ? project.root() / signac::flow::kWorkflowFileName
                              : fs::path(args.workflow_file);
    return signac::flow::load_workflow_file(std::move(project), file);
}

int cmd_init(const std::string& name) {
    const signac::Project project = signac::Project::init(name, fs::current_path());
    std::cout << project.root().string() << "\n";
    return kOk;
}

int cmd_job(const JobArgs& args) {
    std::string text = args.statepoint_text;
    if (text == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        text = buffer.str();
    }
    const signac::Value sp = signac::Value::parse(text, nullptr, false);
    if (sp.is_discarded() || !sp.is_object()) {
        std::cerr << "signac job: the state point must be a JSON object\n";
        return kUsageError;
    }
    const signac::Project project = open_project_here();
    const signac::Job job = project.open_job(sp);
    if (args.create) {
        job.init();
    }
    if (args.print_workspace) {
        std::cout << job.workspace_path().string() << "\n";
    } else {
        std::cout << job.id().str() << "\n";
    }
    return kOk;
}

int cmd_find(const std::vector<std::string>& tokens) {
    const auto filter = signac::parse_cli_tokens(tokens);
    const signac::Project project = open_project_here();
    for (const auto& job : project.find_jobs(filter)) {
        std::cout << job.id().str() << "\n";
    }
    return kOk;
}

int cmd_document(const DocumentArgs& args) {
    const signac::Project project = open_project_here();
    const signac::Job job = project.open_job_by_id(signac::JobId::parse(args.id));
    if (args.action == "get") {
        const auto value = job.document_value(args.key);
        if (!value) {
            std::cerr << "signac document: no key '" << args.key << "' in document of "
                      << args.id << "\n";
            return kNotFound;
        }
        std::cout << value->dump() << "\n";
        return kOk;
    }
    // set
    signac::Value value = signac::Value::parse(args.value_text, nullptr, false);
    if (value.is_discarded()) {
        std::cerr << "signac document: value is not valid JSON: " << args.value_text << "\n";
        return kUsageError;
    }
    job.set_document_value(args.key, std::move(value));
    return kOk;
}

int cmd_index(const std::string& output) {
    const signac::Project project = open_project_here();
    const auto records = signac::index::crawl_workspace(project);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!output.empty()) {
        file.open(output, std::ios::binary | std::ios::trunc);
        if (!file.is_open()) {
            std::cerr << "signac index: cannot open " << output << " for writing\n";
            return kStateError;
        }
        out = &file;
    }
    signac::index::NdjsonSink sink(*out);
    const auto result = signac::index::export_records(records, sink);
    if (result.error) {
        std::cerr << "signac index: export aborted after " << result.written
                  << " records: " << *result.error << "\n";
        return kStateError;
    }
    return kOk;
}

int cmd_fsck() {
    const signac::Project project = open_project_here();
    const auto report = project.fsck();
    for (const auto& issue : report.issues) {
        std::cout << issue.directory << "\t" << issue.kind << "\t" << issue.message << "\n";
    }
    std::cerr << "checked " << report.directories_checked << " directories, " << report.jobs_ok
              << " jobs ok, " << report.issues.size() << " issues\n";
    return report.clean() ? kOk : kStateError;
}

int cmd_status(const FlowArgs& args) {
    const auto wf = load_workflow(args);
    const auto table = wf.status();
    if (args.as_json) {
        std::cout << table.to_json().dump(4) << "\n";
    } else {
        std::cout << table.to_text();
    }
    return kOk;
}

int cmd_run(const FlowArgs& args) {
    auto wf = load_workflow(args);
    signac::flow::RunOptions options;
    options.op_names = args.op_names;
    options.pretend = args.pretend;
    options.to_completion = args.to_completion;
    options.parallelism = args.parallelism;
    options.echo = args.pretend ? &std::cout : nullptr;
    const auto report = wf.run(options);
    if (!args.pretend) {
        for (const auto& exec : report.executions) {
            std::cout << exec.jo_id << ": exit " << exec.exit_code << "\n";
        }
    }
    if (report.cycle_guard_tripped) {
        std::cerr << "signac run: cycle guard tripped before reaching a fixed point\n";
    }
    return kOk;
}

int cmd_submit(const FlowArgs& args) {
    auto wf = load_workflow(args);
    const fs::path spool = wf.project().root() / signac::flow::kScriptSpoolDirName;
    std::optional<std::string> override_name;
    if (!args.scheduler_name.empty()) override_name = args.scheduler_name;
    const auto scheduler =
        signac::flow::detect_scheduler(signac::flow::default_probe_table(spool), override_name,
                                       spool);

    signac::flow::SubmitOptions options;
    options.bundle_size = args.bundle_size;
    options.mode = args.parallel_bundles ? signac::flow::BundleMode::parallel
                                         : signac::flow::BundleMode::serial;
    options.op_names = args.op_names;
    const auto report = wf.submit(*scheduler, options);
    for (const auto& id : report.cluster_job_ids) {
        std::cout << id << "\n";
    }
    std::cout << report.submitted_pairs << " submitted\n";
    if (report.error) {
        std::cerr << "signac submit: submission aborted: " << *report.error << "\n";
        return kStateError;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"signac: content-addressed, searchable management of file-based data spaces"};
    app.require_subcommand(1);

    std::string init_name;
    auto* init = app.add_subcommand("init", "initialize a project in the current directory");
    init->add_option("name", init_name, "project name")->required();

    JobArgs job_args;
    auto* job = app.add_subcommand("job", "map a state point to its job id or workspace path");
    job->add_option("statepoint", job_args.statepoint_text,
                    "state point as JSON (or '-' to read stdin)")
        ->required();
    job->add_flag("-w,--workspace", job_args.print_workspace, "print the workspace path");
    job->add_flag("-c,--create", job_args.create, "initialize the job on disk");

    std::vector<std::string> find_tokens;
    auto* find = app.add_subcommand("find", "print ids of jobs matching a filter");
    find->add_option("tokens", find_tokens,
                     "filter as path/value token pairs (path may carry a .$op suffix) or one "
                     "JSON document");

    DocumentArgs doc_args;
    auto* document = app.add_subcommand("document", "read or write a job document value");
    document->add_option("id", doc_args.id, "job id")->required();
    document->add_option("action", doc_args.action, "get | set")
        ->required()
        ->check(CLI::IsMember({"get", "set"}));
    document->add_option("key", doc_args.key, "dotted document key")->required();
    document->add_option("value", doc_args.value_text, "JSON value (set only)");

    std::string index_output;
    auto* index = app.add_subcommand("index", "export the workspace index as NDJSON");
    index->add_option("--output", index_output, "write to a file instead of stdout");

    auto* fsck = app.add_subcommand("fsck", "verify the statepoint/directory association");

    FlowArgs status_args;
    auto* status = app.add_subcommand("status", "workflow progress per job and operation");
    status->add_option("-f,--workflow", status_args.workflow_file, "workflow definition file");
    status->add_flag("--json", status_args.as_json, "machine-readable output");

    FlowArgs run_args;
    auto* run = app.add_subcommand("run", "execute the next eligible operation per job");
    run->add_option("-f,--workflow", run_args.workflow_file, "workflow definition file");
    run->add_flag("--pretend", run_args.pretend, "print commands without executing");
    run->add_flag("--to-completion", run_args.to_completion,
                  "repeat passes until no operation is eligible");
    run->add_option("--parallelism", run_args.parallelism,
                    "concurrent child processes (distinct jobs)")
        ->check(CLI::PositiveNumber);
    run->add_option("operations", run_args.op_names, "restrict to these operations");

    FlowArgs submit_args;
    auto* submit = app.add_subcommand("submit", "bundle eligible job-operations and submit them");
    submit->add_option("-f,--workflow", submit_args.workflow_file, "workflow definition file");
    submit->add_option("--bundle", submit_args.bundle_size, "job-operations per bundle")
        ->check(CLI::PositiveNumber);
    submit->add_flag("--parallel", submit_args.parallel_bundles,
                     "run bundle members in parallel within the script");
    submit->add_option("--scheduler", submit_args.scheduler_name,
                       "simulated | slurm | torque (default: probe, fall back to simulated)");
    submit->add_option("operations", submit_args.op_names, "restrict to these operations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (init->parsed()) return cmd_init(init_name);
        if (job->parsed()) return cmd_job(job_args);
        if (find->parsed()) return cmd_find(find_tokens);
        if (document->parsed()) {
            if (doc_args.action == "set" && doc_args.value_text.empty()) {
                std::cerr << "signac document set: missing JSON value\n";
                return kUsageError;
            }
            return cmd_document(doc_args);
        }
        if (index->parsed()) return cmd_index(index_output);
        if (fsck->parsed()) return cmd_fsck();
        if (status->parsed()) return cmd_status(status_args);
        if (run->parsed()) return cmd_run(run_args);
        if (submit->parsed()) return cmd_submit(submit_args);
    } catch (const signac::FilterParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    } catch (const signac::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    } catch (const signac::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    } catch (const signac::TemplateError& e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
    } catch (const signac::Error& e) {
        std::cerr << e.what() << "\n";
        return kStateError;
    }
    return kUsageError;
}
