#pragma once

// Command-line frontend. Subcommands:
//
//   eval        belief values for queries under a chosen policy
//   bounds      sharpest derivable probability bounds for queries
//   merge       envelope merge of expert assessments
//   extensions  default-logic extensions, optionally with rule audits
//   laplace     possibility ratios along the growing causal chain
//   table1      accuracy/reliability tradeoff on the two-marginal domain
//   simulate    Monte Carlo scenarios (two-experts, reliability-audit)
//
// Every subcommand accepts --format text|json|csv with the same content in
// each format. Exit codes: 0 success, 1 domain error (infeasible system,
// invalid partition, ...), 2 usage or parse error. Output is plain text;
// no ANSI escapes are emitted, so NO_COLOR needs no special handling.

#include <charconv>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ipw/credal.hpp"
#include "ipw/defaults.hpp"
#include "ipw/errors.hpp"
#include "ipw/kb.hpp"
#include "ipw/logic.hpp"
#include "ipw/parse.hpp"
#include "ipw/policy.hpp"
#include "ipw/rational.hpp"
#include "ipw/simulate.hpp"

namespace ipw::cli {

using Json = nlohmann::ordered_json;

enum class Format { Text, Json, Csv };

namespace detail {

// Full-precision, round-trippable decimal.
inline std::string full_number(double v) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, result.ptr);
}

// Text mode prints 6 significant digits.
inline std::string short_number(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

inline void emit_json(const Json& payload, std::ostream& out) {
    out << payload.dump(2) << "\n";
}

inline std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    return line;
}

struct KbOptions {
    std::string path;
};

inline WorldSet certain_worlds(const KnowledgeBase& kb) {
    return models(conjunction(kb.vocab, kb.axioms)) &
           models(conjunction(kb.vocab, kb.facts));
}

// ---- eval -----------------------------------------------------------------

inline int run_eval(const std::string& kb_path, const std::string& policy,
                    const std::vector<std::string>& queries, Format format,
                    std::ostream& out) {
    const KnowledgeBase kb = load_kb(kb_path);
    const PolicyTag tag = policy == "ratio"      ? PolicyTag::Ratio
                          : policy == "reliable" ? PolicyTag::Reliable
                                                 : PolicyTag::Point;
    BeliefReport report;
    std::vector<std::string> exact;  // per entry; empty for floating-point policies
    for (const auto& text : queries) {
        const Formula query = parse_formula(text, kb.vocab);
        if (tag == PolicyTag::Ratio) {
            const Rational r = possibility_ratio(certain_worlds(kb), query);
            report.entries.push_back(BeliefEntry{query, to_double(r), tag});
            exact.push_back(to_fraction_string(r));
        } else if (tag == PolicyTag::Reliable) {
            if (!kb.partition)
                throw DomainError(
                    "the reliable policy needs a partition declaration in the "
                    "knowledge base");
            report.entries.push_back(BeliefEntry{
                query, reliable_belief(certain_worlds(kb), *kb.partition, query), tag});
            exact.emplace_back();
        } else {
            const WorldSet worlds = models(conjunction(kb.vocab, kb.axioms));
            const Formula given = conjunction(kb.vocab, kb.facts);
            const auto bounds = query_bounds(worlds, kb.constraints, query, given);
            if (bounds.hi - bounds.lo > Rational(1, 1000000000))
                throw DomainError("P(" + query.render() + ") is not point-determined; " +
                                  "derivable bounds are [" + to_fraction_string(bounds.lo) +
                                  ", " + to_fraction_string(bounds.hi) + "]");
            report.entries.push_back(BeliefEntry{query, to_double(bounds.lo), tag});
            exact.push_back(to_fraction_string(bounds.lo));
        }
    }

    if (format == Format::Json) {
        Json payload;
        payload["command"] = "eval";
        payload["policy"] = policy;
        payload["results"] = Json::array();
        for (std::size_t i = 0; i < report.entries.size(); ++i) {
            const auto& entry = report.entries[i];
            Json item;
            item["query"] = queries[i];
            item["statement"] = entry.statement.render();
            item["belief"] = entry.belief;
            if (!exact[i].empty()) item["exact"] = exact[i];
            payload["results"].push_back(std::move(item));
        }
        emit_json(payload, out);
    } else if (format == Format::Csv) {
        out << "query,statement,policy,belief,exact\n";
        for (std::size_t i = 0; i < report.entries.size(); ++i)
            out << csv_join({queries[i], report.entries[i].statement.render(),
                             to_string(report.entries[i].policy),
                             full_number(report.entries[i].belief), exact[i]})
                << "\n";
    } else {
        out << "policy: " << policy << "\n";
        for (std::size_t i = 0; i < report.entries.size(); ++i) {
            out << "belief(" << report.entries[i].statement.render() << ") = ";
            if (!exact[i].empty())
                out << exact[i] << " (~" << short_number(report.entries[i].belief) << ")";
            else
                out << short_number(report.entries[i].belief);
            out << "\n";
        }
    }
    return 0;
}

// ---- bounds ---------------------------------------------------------------

inline int run_bounds(const std::string& kb_path, const std::vector<std::string>& queries,
                      const std::string& given_text, Format format, std::ostream& out) {
    const KnowledgeBase kb = load_kb(kb_path);
    const WorldSet worlds = models(conjunction(kb.vocab, kb.axioms));
    Formula given = conjunction(kb.vocab, kb.facts);
    if (!given_text.empty()) given = given & parse_formula(given_text, kb.vocab);

    struct Row {
        std::string query;
        ProbabilityInterval interval;
    };
    std::vector<Row> rows;
    for (const auto& text : queries) {
        const Formula query = parse_formula(text, kb.vocab);
        rows.push_back(Row{query.render(),
                           query_bounds(worlds, kb.constraints, query, given)});
    }
    const std::string given_render = given.render();

    if (format == Format::Json) {
        Json payload;
        payload["command"] = "bounds";
        payload["given"] = given_render;
        payload["results"] = Json::array();
        for (const auto& row : rows) {
            Json item;
            item["query"] = row.query;
            item["lo"] = to_double(row.interval.lo);
            item["hi"] = to_double(row.interval.hi);
            item["lo_exact"] = to_fraction_string(row.interval.lo);
            item["hi_exact"] = to_fraction_string(row.interval.hi);
            payload["results"].push_back(std::move(item));
        }
        emit_json(payload, out);
    } else if (format == Format::Csv) {
        out << "query,given,lo,hi,lo_exact,hi_exact\n";
        for (const auto& row : rows)
            out << csv_join({row.query, given_render,
                             full_number(to_double(row.interval.lo)),
                             full_number(to_double(row.interval.hi)),
                             to_fraction_string(row.interval.lo),
                             to_fraction_string(row.interval.hi)})
                << "\n";
    } else {
        for (const auto& row : rows) {
            out << "P(" << row.query;
            if (given_render != "true") out << " | " << given_render;
            out << ") in [" << short_number(to_double(row.interval.lo)) << ", "
                << short_number(to_double(row.interval.hi)) << "]  (exact ["
                << to_fraction_string(row.interval.lo) << ", "
                << to_fraction_string(row.interval.hi) << "])\n";
        }
    }
    return 0;
}

// ---- merge ----------------------------------------------------------------

inline int run_merge(const std::string& kb_path, Format format, std::ostream& out) {
    const KnowledgeBase kb = load_kb(kb_path);
    if (kb.experts.empty())
        throw DomainError("the knowledge base declares no expert assessments");
    const auto merged = merge_experts(kb.experts);

    if (format == Format::Json) {
        Json payload;
        payload["command"] = "merge";
        payload["experts"] = Json::array();
        for (const auto& e : kb.experts) payload["experts"].push_back(e.id);
        payload["constraints"] = Json::array();
        for (const auto& c : merged) {
            Json item;
            item["statement"] = c.target().render();
            item["lo"] = to_double(c.lo());
            item["hi"] = to_double(c.hi());
            item["lo_exact"] = to_fraction_string(c.lo());
            item["hi_exact"] = to_fraction_string(c.hi());
            payload["constraints"].push_back(std::move(item));
        }
        emit_json(payload, out);
    } else if (format == Format::Csv) {
        out << "statement,lo,hi,lo_exact,hi_exact\n";
        for (const auto& c : merged)
            out << csv_join({c.target().render(), full_number(to_double(c.lo())),
                             full_number(to_double(c.hi())),
                             to_fraction_string(c.lo()), to_fraction_string(c.hi())})
                << "\n";
    } else {
        out << "merged common knowledge of " << kb.experts.size() << " experts:\n";
        for (const auto& c : merged)
            out << "  P(" << c.target().render() << ") in ["
                << to_fraction_string(c.lo()) << ", " << to_fraction_string(c.hi())
                << "]\n";
    }
    return 0;
}

// ---- laplace ----------------------------------------------------------------

inline int run_laplace(std::uint64_t observations, std::uint64_t free_atoms,
                       Format format, std::ostream& out) {
    const auto ratios = laplace_sequence(observations, free_atoms);

    if (format == Format::Json) {
        Json payload;
        payload["command"] = "laplace";
        payload["free_atoms"] = free_atoms;
        payload["ratios"] = Json::array();
        for (std::size_t n = 0; n < ratios.size(); ++n) {
            Json item;
            item["observations"] = n;
            item["ratio"] = to_fraction_string(ratios[n]);
            item["value"] = to_double(ratios[n]);
            payload["ratios"].push_back(std::move(item));
        }
        emit_json(payload, out);
    } else if (format == Format::Csv) {
        out << "observations,ratio,value\n";
        for (std::size_t n = 0; n < ratios.size(); ++n)
            out << csv_join({std::to_string(n), to_fraction_string(ratios[n]),
                             full_number(to_double(ratios[n]))})
                << "\n";
    } else {
        for (std::size_t n = 0; n < ratios.size(); ++n) {
            if (n) out << ", ";
            out << to_fraction_string(ratios[n]);
        }
        out << "\n";
    }
    return 0;
}

// ---- table1 -----------------------------------------------------------------

inline int run_table1(Format format, std::ostream& out) {
    const auto vocab = Vocabulary::create({"a", "b"});
    const Formula a = Formula::atom(vocab, "a");
    const Formula b = Formula::atom(vocab, "b");
    const WorldSet worlds = WorldSet::all(vocab);
    const double pa = 0.8, pb = 0.6;
    const std::vector<std::pair<Formula, double>> truth = {{a, pa}, {b, pb}};

    struct Row {
        double belief_a, belief_b, error;
        const char* reliability;
    };
    const Partition on_a{{{a, pa}, {!a, 1 - pa}}};
    const Partition on_b{{{b, pb}, {!b, 1 - pb}}};
    const Partition trivial = Partition::trivial(vocab);

    std::vector<Row> rows;
    rows.push_back(Row{pa, pb, 0, "none guaranteed"});  // point values on both marginals
    rows.push_back(Row{reliable_belief(worlds, on_a, a), reliable_belief(worlds, on_a, b),
                       0, "provably reliable"});
    rows.push_back(Row{reliable_belief(worlds, on_b, a), reliable_belief(worlds, on_b, b),
                       0, "provably reliable"});
    rows.push_back(Row{reliable_belief(worlds, trivial, a),
                       reliable_belief(worlds, trivial, b), 0, "precisely reliable"});
    for (auto& row : rows)
        row.error = expected_error({{a, row.belief_a}, {b, row.belief_b}}, truth);

    if (format == Format::Json) {
        Json payload;
        payload["command"] = "table1";
        payload["prob_a"] = pa;
        payload["prob_b"] = pb;
        payload["rows"] = Json::array();
        for (const auto& row : rows) {
            Json item;
            item["belief_a"] = row.belief_a;
            item["belief_b"] = row.belief_b;
            item["expected_error"] = row.error;
            item["reliability"] = row.reliability;
            payload["rows"].push_back(std::move(item));
        }
        emit_json(payload, out);
    } else if (format == Format::Csv) {
        out << "belief_a,belief_b,expected_error,reliability\n";
        for (const auto& row : rows)
            out << csv_join({full_number(row.belief_a), full_number(row.belief_b),
                             full_number(row.error), row.reliability})
                << "\n";
    } else {
        out << "belief values under p(a) = 0.8, p(b) = 0.6\n";
        out << std::left << std::setw(10) << "b(a)" << std::setw(10) << "b(b)"
            << std::setw(16) << "expected error" << "reliability\n";
        for (const auto& row : rows)
            out << std::left << std::setw(10) << short_number(row.belief_a)
                << std::setw(10) << short_number(row.belief_b) << std::setw(16)
                << short_number(row.error) << row.reliability << "\n";
    }
    return 0;
}

// ---- extensions -------------------------------------------------------------

inline std::vector<std::string> literal_summary(const VocabularyPtr& vocab,
                                                const Extension& extension) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < vocab->size(); ++i) {
        const Formula atom = Formula::atom(vocab, i);
        if (entails(extension.believed, atom))
            out.push_back(vocab->name(i));
        else if (entails(extension.believed, !atom))
            out.push_back("!" + vocab->name(i));
    }
    return out;
}

inline std::string rule_text(const DefaultRule& rule) {
    return rule.prerequisite().render() + " : " + rule.justification().render() + " / " +
           rule.consequent().render();
}

inline int run_extensions(const std::string& kb_path, bool audit,
                          const std::string& mode_name, int rule_filter,
                          const std::string& tau_justify, const std::string& tau_believe,
                          Format format, std::ostream& out) {
    const KnowledgeBase kb = load_kb(kb_path);
    const DefaultTheory theory(kb.vocab, kb.facts, kb.axioms, kb.defaults);
    const auto extensions = compute_extensions(theory);

    const AuditMode mode =
        mode_name == "introspective" ? AuditMode::Introspective : AuditMode::Standard;
    AuditConfig config;
    config.tau_justify = rational_from_decimal(tau_justify);
    config.tau_believe = rational_from_decimal(tau_believe);

    std::vector<AuditVerdict> verdicts;
    if (audit) {
        std::vector<std::size_t> targets;
        if (rule_filter >= 0) {
            targets.push_back(static_cast<std::size_t>(rule_filter));
        } else {
            for (std::size_t j = 0; j < theory.defaults().size(); ++j) {
                const bool applied_somewhere =
                    std::any_of(extensions.begin(), extensions.end(),
                                [&](const Extension& e) { return e.applied.count(j); });
                if (applied_somewhere) targets.push_back(j);
            }
        }
        for (auto j : targets) verdicts.push_back(audit_rule(theory, j, mode, config));
    }

    if (format == Format::Json) {
        Json payload;
        payload["command"] = "extensions";
        payload["extensions"] = Json::array();
        for (std::size_t i = 0; i < extensions.size(); ++i) {
            Json item;
            item["index"] = i;
            item["applied"] = Json::array();
            for (auto j : extensions[i].applied) item["applied"].push_back(j);
            item["literals"] = literal_summary(kb.vocab, extensions[i]);
            payload["extensions"].push_back(std::move(item));
        }
        if (audit) {
            payload["mode"] = to_string(mode);
            payload["tau_justify"] = to_double(config.tau_justify);
            payload["tau_believe"] = to_double(config.tau_believe);
            payload["audits"] = Json::array();
            for (const auto& v : verdicts) {
                Json item;
                item["rule"] = v.rule_index;
                item["rule_text"] = rule_text(theory.defaults()[v.rule_index]);
                item["verdict"] = to_string(v.outcome);
                item["upper_bound"] = to_double(v.upper_bound);
                item["upper_bound_exact"] = to_fraction_string(v.upper_bound);
                item["evidence"] = v.evidence.render();
                payload["audits"].push_back(std::move(item));
            }
        }
        emit_json(payload, out);
    } else if (format == Format::Csv) {
        out << "record,index,applied,literals\n";
        for (std::size_t i = 0; i < extensions.size(); ++i) {
            std::string applied, literals;
            for (auto j : extensions[i].applied) {
                if (!applied.empty()) applied += ' ';
                applied += std::to_string(j);
            }
            for (const auto& lit : literal_summary(kb.vocab, extensions[i])) {
                if (!literals.empty()) literals += ' ';
                literals += lit;
            }
            out << csv_join({"extension", std::to_string(i), applied, literals}) << "\n";
        }
        if (audit) {
            out << "record,rule,mode,verdict,upper_bound,upper_bound_exact,evidence\n";
            for (const auto& v : verdicts)
                out << csv_join({"audit", std::to_string(v.rule_index), to_string(v.mode),
                                 to_string(v.outcome),
                                 full_number(to_double(v.upper_bound)),
                                 to_fraction_string(v.upper_bound),
                                 v.evidence.render()})
                    << "\n";
        }
    } else {
        out << extensions.size() << (extensions.size() == 1 ? " extension\n"
                                                            : " extensions\n");
        for (std::size_t i = 0; i < extensions.size(); ++i) {
            out << "  [" << i << "] applied {";
            bool first = true;
            for (auto j : extensions[i].applied) {
                if (!first) out << ", ";
                out << j << ": " << rule_text(theory.defaults()[j]);
                first = false;
            }
            out << "}  literals:";
            for (const auto& lit : literal_summary(kb.vocab, extensions[i]))
                out << " " << lit;
            out << "\n";
        }
        if (audit) {
            out << "audit (" << to_string(mode)
                << ", tau_justify = " << to_fraction_string(config.tau_justify)
                << ", tau_believe = " << to_fraction_string(config.tau_believe) << ")\n";
            for (const auto& v : verdicts)
                out << "  rule " << v.rule_index << " ("
                    << rule_text(theory.defaults()[v.rule_index])
                    << "): " << to_string(v.outcome) << ", upper bound "
                    << to_fraction_string(v.upper_bound) << " on P("
                    << theory.defaults()[v.rule_index].consequent().render() << " | "
                    << v.evidence.render() << ")\n";
        }
    }
    return 0;
}

// ---- simulate ---------------------------------------------------------------

inline Json report_to_json(const CalibrationReport& report) {
    Json item;
    item["policy"] = report.policy;
    item["bins"] = Json::array();
    for (const auto& bin : report.bins) {
        Json b;
        b["lo"] = bin.lo;
        b["hi"] = bin.hi;
        b["count"] = bin.count;
        b["mean_belief"] = bin.mean_belief;
        b["truth_fraction"] = bin.truth_fraction;
        item["bins"].push_back(std::move(b));
    }
    item["calibration_error"] = report.calibration_error;
    item["brier"] = report.brier;
    return item;
}

inline void report_to_csv(const CalibrationReport& report, std::ostream& out) {
    for (const auto& bin : report.bins)
        out << csv_join({report.policy, full_number(bin.lo), full_number(bin.hi),
                         std::to_string(bin.count), full_number(bin.mean_belief),
                         full_number(bin.truth_fraction)})
            << "\n";
    out << csv_join({report.policy, "calibration_error",
                     full_number(report.calibration_error)})
        << "\n";
    out << csv_join({report.policy, "brier", full_number(report.brier)}) << "\n";
}

inline void report_to_text(const CalibrationReport& report, std::ostream& out) {
    out << "policy: " << report.policy << "\n";
    out << "  " << std::left << std::setw(14) << "bin" << std::setw(12) << "count"
        << std::setw(14) << "mean_belief" << "truth_fraction\n";
    for (const auto& bin : report.bins) {
        std::ostringstream range;
        range << "[" << short_number(bin.lo) << "," << short_number(bin.hi) << "]";
        out << "  " << std::left << std::setw(14) << range.str() << std::setw(12)
            << bin.count << std::setw(14) << short_number(bin.mean_belief)
            << short_number(bin.truth_fraction) << "\n";
    }
    out << "  calibration_error = " << short_number(report.calibration_error) << "\n";
    out << "  brier = " << short_number(report.brier) << "\n";
}

struct SimulateOptions {
    std::string scenario;
    std::uint64_t trials = 0;  // 0 keeps the scenario default
    std::uint64_t seed = 1;
    int bins = 10;
    std::uint64_t min_bin_count = 30;
    unsigned threads = 0;
    // two-experts
    double quality1 = 0.9;
    double quality2 = 0.7;
    double rho = 0.0;
    double base_rate = 0.5;
    // reliability-audit
    std::size_t vocab_size = 4;
    double axiom_density = 0.5;
    std::string partition_source = "single-marginal";
};

inline int run_simulate(const SimulateOptions& options, Format format,
                        std::ostream& out) {
    std::vector<CalibrationReport> reports;
    Json config_echo;
    if (options.scenario == "two-experts") {
        TwoExpertsConfig config;
        config.trials = options.trials ? options.trials : 100000;
        config.seed = options.seed;
        config.quality1 = options.quality1;
        config.quality2 = options.quality2;
        config.redundancy = options.rho;
        config.base_rate = options.base_rate;
        config.bins = options.bins;
        config.min_bin_count = options.min_bin_count;
        config.threads = options.threads;
        reports = run_two_experts(config);
        config_echo = {{"trials", config.trials},      {"seed", config.seed},
                       {"quality1", config.quality1},  {"quality2", config.quality2},
                       {"rho", config.redundancy},     {"base_rate", config.base_rate},
                       {"bins", config.bins}};
    } else {
        ReliabilityAuditConfig config;
        config.trials = options.trials ? options.trials : 10000;
        config.seed = options.seed;
        config.vocab_size = options.vocab_size;
        config.axiom_density = options.axiom_density;
        config.partition_source = options.partition_source == "none"
                                      ? PartitionSource::None
                                      : PartitionSource::SingleMarginal;
        config.bins = options.bins;
        config.min_bin_count = options.min_bin_count;
        config.threads = options.threads;
        reports.push_back(reliability_audit(config));
        config_echo = {{"trials", config.trials},
                       {"seed", config.seed},
                       {"vocab_size", config.vocab_size},
                       {"axiom_density", config.axiom_density},
                       {"partition_source", to_string(config.partition_source)},
                       {"bins", config.bins}};
    }

    if (format == Format::Json) {
        Json payload;
        payload["command"] = "simulate";
        payload["scenario"] = options.scenario;
        payload["config"] = std::move(config_echo);
        payload["reports"] = Json::array();
        for (const auto& report : reports)
            payload["reports"].push_back(report_to_json(report));
        emit_json(payload, out);
    } else if (format == Format::Csv) {
        out << "policy,lo,hi,count,mean_belief,truth_fraction\n";
        for (const auto& report : reports) report_to_csv(report, out);
    } else {
        for (const auto& report : reports) report_to_text(report, out);
    }
    return 0;
}

}  // namespace detail

// Runs the tool on `args` (without the program name); returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"possible-worlds inference workbench"};
    app.require_subcommand(1);

    static const std::map<std::string, Format> format_names{
        {"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};

    struct Shared {
        Format format = Format::Text;
    };

    auto add_format = [&](CLI::App* cmd, Shared& shared) {
        cmd->add_option("--format", shared.format, "output format")
            ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case))
            ->default_val("text");
    };

    // eval
    Shared eval_shared;
    detail::KbOptions eval_kb;
    std::string eval_policy = "ratio";
    std::vector<std::string> eval_queries;
    auto* eval_cmd = app.add_subcommand("eval", "belief values for queries");
    eval_cmd->add_option("--kb", eval_kb.path, "knowledge base file")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--policy", eval_policy, "belief policy")
        ->check(CLI::IsMember({"ratio", "reliable", "point"}));
    eval_cmd->add_option("--query", eval_queries, "formula to evaluate (repeatable)")
        ->required();
    add_format(eval_cmd, eval_shared);

    // bounds
    Shared bounds_shared;
    detail::KbOptions bounds_kb;
    std::vector<std::string> bounds_queries;
    std::string bounds_given;
    auto* bounds_cmd = app.add_subcommand("bounds", "derivable probability bounds");
    bounds_cmd->add_option("--kb", bounds_kb.path, "knowledge base file")
        ->required()
        ->check(CLI::ExistingFile);
    bounds_cmd->add_option("--query", bounds_queries, "formula to bound (repeatable)")
        ->required();
    bounds_cmd->add_option("--given", bounds_given, "extra conditioning formula");
    add_format(bounds_cmd, bounds_shared);

    // merge
    Shared merge_shared;
    detail::KbOptions merge_kb;
    auto* merge_cmd = app.add_subcommand("merge", "merge expert assessments");
    merge_cmd->add_option("--kb", merge_kb.path, "knowledge base file")
        ->required()
        ->check(CLI::ExistingFile);
    add_format(merge_cmd, merge_shared);

    // extensions
    Shared ext_shared;
    detail::KbOptions ext_kb;
    bool ext_audit = false;
    std::string ext_mode = "standard";
    int ext_rule = -1;
    std::string ext_tau_justify = "0.9";
    std::string ext_tau_believe = "0.9";
    auto* ext_cmd = app.add_subcommand("extensions", "default-logic extensions");
    ext_cmd->add_option("--kb", ext_kb.path, "knowledge base file")
        ->required()
        ->check(CLI::ExistingFile);
    ext_cmd->add_flag("--audit", ext_audit, "audit rule justifications");
    ext_cmd->add_option("--mode", ext_mode, "audit mode")
        ->check(CLI::IsMember({"standard", "introspective"}));
    ext_cmd->add_option("--rule", ext_rule, "audit only this rule index");
    ext_cmd->add_option("--tau-justify", ext_tau_justify,
                        "justification strength (decimal)");
    ext_cmd->add_option("--tau-believe", ext_tau_believe,
                        "belief threshold (decimal)");
    add_format(ext_cmd, ext_shared);

    // laplace
    Shared laplace_shared;
    std::uint64_t laplace_observations = 3;
    std::uint64_t laplace_free = 0;
    auto* laplace_cmd = app.add_subcommand("laplace", "causal-chain induction ratios");
    laplace_cmd->add_option("--observations", laplace_observations,
                            "number of observations");
    laplace_cmd->add_option("--free-atoms", laplace_free, "extra unconstrained atoms");
    add_format(laplace_cmd, laplace_shared);

    // table1
    Shared table1_shared;
    auto* table1_cmd =
        app.add_subcommand("table1", "accuracy/reliability tradeoff table");
    add_format(table1_cmd, table1_shared);

    // simulate
    Shared sim_shared;
    detail::SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo scenarios");
    sim_cmd->add_option("--scenario", sim.scenario, "scenario name")
        ->required()
        ->check(CLI::IsMember({"two-experts", "reliability-audit"}));
    sim_cmd->add_option("--trials", sim.trials, "number of trials");
    sim_cmd->add_option("--seed", sim.seed, "random seed");
    sim_cmd->add_option("--bins", sim.bins, "calibration bins");
    sim_cmd->add_option("--min-bin-count", sim.min_bin_count,
                        "bins below this count are ignored for the error");
    sim_cmd->add_option("--threads", sim.threads, "worker threads (0 = hardware)");
    sim_cmd->add_option("--quality1", sim.quality1, "expert1 signal accuracy");
    sim_cmd->add_option("--quality2", sim.quality2, "expert2 signal accuracy");
    sim_cmd->add_option("--rho", sim.rho, "probability expert2 copies expert1");
    sim_cmd->add_option("--base-rate", sim.base_rate, "prior truth probability");
    sim_cmd->add_option("--vocab-size", sim.vocab_size, "atoms in the random domain");
    sim_cmd->add_option("--axiom-density", sim.axiom_density, "random axiom density");
    sim_cmd->add_option("--partition-source", sim.partition_source, "partition source")
        ->check(CLI::IsMember({"none", "single-marginal"}));
    add_format(sim_cmd, sim_shared);

    // Parse via argc/argv to keep CLI11's ordering conventions out of the way.
    std::vector<const char*> argv;
    argv.push_back("ipw");
    for (const auto& arg : args) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (eval_cmd->parsed())
            return detail::run_eval(eval_kb.path, eval_policy, eval_queries,
                                    eval_shared.format, out);
        if (bounds_cmd->parsed())
            return detail::run_bounds(bounds_kb.path, bounds_queries, bounds_given,
                                      bounds_shared.format, out);
        if (merge_cmd->parsed())
            return detail::run_merge(merge_kb.path, merge_shared.format, out);
        if (ext_cmd->parsed())
            return detail::run_extensions(ext_kb.path, ext_audit, ext_mode, ext_rule,
                                          ext_tau_justify, ext_tau_believe,
                                          ext_shared.format, out);
        if (laplace_cmd->parsed())
            return detail::run_laplace(laplace_observations, laplace_free,
                                       laplace_shared.format, out);
        if (table1_cmd->parsed()) return detail::run_table1(table1_shared.format, out);
        if (sim_cmd->parsed()) return detail::run_simulate(sim, sim_shared.format, out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const KbError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ipw::cli
