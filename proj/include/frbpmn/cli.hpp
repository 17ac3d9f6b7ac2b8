#pragma once

// The frbpmn command line: subcommands over files, exit codes
//   0 success or clean, 1 Error findings or IoCs present, 2 usage or input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "frbpmn/bpmn_io.hpp"
#include "frbpmn/conformance.hpp"
#include "frbpmn/report.hpp"
#include "frbpmn/risk_analysis.hpp"
#include "frbpmn/risk_register.hpp"
#include "frbpmn/simulate.hpp"
#include "frbpmn/trace.hpp"
#include "frbpmn/validator.hpp"

namespace frbpmn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;

/// ANSI color is used only on a terminal and unless FRBPMN_COLOR=off.
inline bool color_enabled(bool stdout_is_tty, const char* env_value) {
    return stdout_is_tty && !(env_value && std::string_view(env_value) == "off");
}

namespace detail {

inline void write_output(const std::string& path, const std::string& bytes, std::ostream& out) {
    if (path == "-") {
        out << bytes;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << bytes;
    if (!f) throw ConfigError("failed writing '" + path + "'");
}

inline void print_json(std::ostream& out, const report::Json& j) { out << j.dump(2) << '\n'; }

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false) {
    CLI::App app{"Forensic-ready BPMN toolkit", "frbpmn"};
    app.require_subcommand(1);

    std::string model_path, other_path, risks_path, trace_path, output_path, attack_name, instance, data, asserted;
    bool json = false;
    std::uint64_t runs = 1, seed = 0;

    auto* validate_cmd = app.add_subcommand("validate", "Check the notation rules");
    validate_cmd->add_option("model", model_path, "BPMN model")->required();
    validate_cmd->add_flag("--json", json, "JSON output");

    auto* coverage_cmd = app.add_subcommand("coverage", "Risk coverage by evidence contexts");
    coverage_cmd->add_option("--risks", risks_path, "Risk register (JSON)")->required();
    coverage_cmd->add_option("model", model_path, "BPMN model")->required();
    coverage_cmd->add_flag("--json", json, "JSON output");

    auto* diff_cmd = app.add_subcommand("diff", "Evidence contexts added and removed between two models");
    diff_cmd->add_option("before", model_path, "Earlier model")->required();
    diff_cmd->add_option("after", other_path, "Later model")->required();
    diff_cmd->add_flag("--json", json, "JSON output");

    auto* simulate_cmd = app.add_subcommand("simulate", "Emit an evidence trace by token-game simulation");
    simulate_cmd->add_option("--runs", runs, "Process instances")->required();
    simulate_cmd->add_option("--seed", seed, "Generator seed")->required();
    simulate_cmd->add_option("--attack", attack_name, "Attack to inject");
    simulate_cmd->add_option("model", model_path, "BPMN model")->required();
    simulate_cmd->add_option("-o,--output", output_path, "Trace file, '-' for stdout")->required();

    auto* check_cmd = app.add_subcommand("check-trace", "Conformance of a trace against the model");
    check_cmd->add_option("--trace", trace_path, "Trace (.jsonl)")->required();
    check_cmd->add_option("model", model_path, "BPMN model")->required();
    check_cmd->add_flag("--json", json, "JSON output");

    auto* resolve_cmd = app.add_subcommand("resolve", "Decide a dispute claim from hardened evidence");
    resolve_cmd->add_option("--trace", trace_path, "Trace (.jsonl)")->required();
    resolve_cmd->add_option("--instance", instance, "Process instance")->required();
    resolve_cmd->add_option("--data", data, "Data object id")->required();
    resolve_cmd->add_option("--asserted", asserted, "present or absent")
        ->required()
        ->check(CLI::IsMember({"present", "absent"}));
    resolve_cmd->add_option("model", model_path, "BPMN model")->required();
    resolve_cmd->add_flag("--json", json, "JSON output");

    auto* doc_cmd = app.add_subcommand("doc", "Markdown evidence map for investigators");
    doc_cmd->add_option("model", model_path, "BPMN model")->required();
    doc_cmd->add_option("-o,--output", output_path, "Report file, '-' for stdout")->required();
    doc_cmd->add_option("--risks", risks_path, "Risk register, adds covered risks");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (validate_cmd->parsed()) {
            auto findings = validate(load_bpmn_file(model_path));
            if (json)
                detail::print_json(out, report::findings_json(findings));
            else
                out << report::findings_text(findings, color);
            return count_severity(findings, Severity::Error) ? kExitFindings : kExitOk;
        }
        if (coverage_cmd->parsed()) {
            auto model = load_bpmn_file(model_path);
            auto findings = validate(model);
            if (count_severity(findings, Severity::Error)) {
                err << "model has Error findings; coverage needs a valid model\n" << report::findings_text(findings);
                return kExitFindings;
            }
            auto cov = coverage(model, parse_risk_register(read_file(risks_path)));
            if (json)
                detail::print_json(out, report::coverage_json(cov));
            else
                out << report::coverage_text(cov, color);
            return kExitOk;
        }
        if (diff_cmd->parsed()) {
            auto d = evidence_diff(load_bpmn_file(model_path), load_bpmn_file(other_path));
            if (json)
                detail::print_json(out, report::diff_json(d));
            else
                out << report::diff_text(d, color);
            return kExitOk;
        }
        if (simulate_cmd->parsed()) {
            SimConfig config{runs, seed, std::nullopt};
            if (!attack_name.empty()) config.attack = parse_attack(attack_name);
            auto trace = simulate(load_bpmn_file(model_path), config);
            detail::write_output(output_path, write_trace(trace), out);
            if (output_path != "-")
                err << "wrote " << trace.size() << " record(s) of " << runs << " run(s) to " << output_path << '\n';
            return kExitOk;
        }
        if (check_cmd->parsed()) {
            auto model = load_bpmn_file(model_path);
            auto trace = parse_trace(read_file(trace_path));
            auto rep = check_trace(model, trace);
            std::size_t checked = trace.instances().size();
            if (json)
                detail::print_json(out, report::conformance_json(rep, checked));
            else
                out << report::conformance_text(rep, checked, color);
            return rep.empty() ? kExitOk : kExitFindings;
        }
        if (resolve_cmd->parsed()) {
            auto model = load_bpmn_file(model_path);
            DisputeClaim claim{instance, data, parse_assertion(asserted)};
            auto verdict = resolve_claim(model, parse_trace(read_file(trace_path)), claim);
            if (json)
                detail::print_json(out, report::verdict_json(claim, verdict));
            else
                out << report::verdict_text(claim, verdict);
            return kExitOk;
        }
        if (doc_cmd->parsed()) {
            auto model = load_bpmn_file(model_path);
            std::optional<std::vector<RiskCase>> risks;
            if (!risks_path.empty()) risks = parse_risk_register(read_file(risks_path));
            detail::write_output(output_path, report::evidence_map_markdown(model, risks ? &*risks : nullptr), out);
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace frbpmn::cli
