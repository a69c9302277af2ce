#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pwlward/analysis.hpp"
#include "pwlward/chase.hpp"
#include "pwlward/normalize.hpp"
#include "pwlward/rewriter.hpp"
#include "pwlward/solver.hpp"
#include "pwlward/textio.hpp"
#include "pwlward/tiling.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

// Exit codes: 0 success/true verdict, 1 false verdict, 2 usage/parse error,
// 3 precondition (classification) error, 4 budget exhausted / inconclusive.
enum ExitCode { kOk = 0, kFalse = 1, kUsage = 2, kPrecondition = 3, kInconclusive = 4 };

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::vector<pwlward::Term> parse_tuple(const std::string& csv) {
    std::vector<pwlward::Term> out;
    if (csv.empty()) return out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(pwlward::Term::constant(item));
    return out;
}

int run(int argc, char** argv) {
    using namespace pwlward;

    CLI::App app{"Reasoning engine for existential rules: classification, chase, "
                 "proof-tree query answering, and Datalog rewriting"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Optional config file (flag names as keys)");
    app.require_subcommand(1);

    unsigned long long seed = 0;
    app.add_option("--seed", seed, "Seed for generation commands")
        ->envname("PWLWARD_SEED");

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "Fragment membership report");
    std::string classify_prog;
    classify_cmd->add_option("program", classify_prog, "Rule file (.tgd)")->required();

    // normalize
    auto* norm_cmd = app.add_subcommand("normalize", "Rewrite rules into normal forms");
    std::string norm_prog, norm_out;
    bool norm_single = false, norm_level = false;
    norm_cmd->add_option("program", norm_prog, "Rule file (.tgd)")->required();
    norm_cmd->add_flag("--single-head", norm_single, "Split multi-atom heads");
    norm_cmd->add_flag("--level-nf", norm_level, "Pad bodies into level-wise normal form");
    norm_cmd->add_option("-o,--output", norm_out, "Output file (default: stdout)");

    // chase
    auto* chase_cmd = app.add_subcommand("chase", "Run the bounded chase");
    std::string chase_prog, chase_db, chase_dot;
    std::size_t max_steps = 10000, max_depth = SIZE_MAX;
    bool oblivious = false;
    chase_cmd->add_option("program", chase_prog)->required();
    chase_cmd->add_option("database", chase_db)->required();
    chase_cmd->add_option("--max-steps", max_steps, "Trigger budget")
        ->envname("PWLWARD_MAX_STEPS");
    chase_cmd->add_option("--max-depth", max_depth, "Fact depth cutoff")
        ->envname("PWLWARD_MAX_DEPTH");
    chase_cmd->add_flag("--oblivious", oblivious, "Fire satisfied triggers too");
    chase_cmd->add_option("--dot", chase_dot, "Write the chase graph as DOT");

    // answer
    auto* ans_cmd = app.add_subcommand("answer", "Certain-answer query answering");
    std::string ans_engine = "auto", ans_prog, ans_db, ans_query, ans_trace;
    std::string ans_tuple;
    bool ans_all = false;
    ans_cmd->add_option("--engine", ans_engine, "prooftree|andor|chase|auto")
        ->check(CLI::IsMember({"prooftree", "andor", "chase", "auto"}))
        ->envname("PWLWARD_ENGINE");
    ans_cmd->add_option("program", ans_prog)->required();
    ans_cmd->add_option("database", ans_db)->required();
    ans_cmd->add_option("query", ans_query)->required();
    // expected(0, 1) lets "--tuple=" pass the empty tuple for Boolean queries.
    auto* ans_tuple_opt =
        ans_cmd->add_option("--tuple", ans_tuple,
                            "Comma-separated constants; decides one candidate tuple")
            ->expected(0, 1);
    ans_cmd->add_flag("--all", ans_all, "Enumerate the full answer set as JSON");
    ans_cmd->add_option("--trace", ans_trace, "Write the accepting step chain");

    // rewrite
    auto* rw_cmd = app.add_subcommand("rewrite", "Compile into piece-wise linear Datalog");
    std::string rw_prog, rw_query, rw_out, rw_query_out, rw_verify_dir;
    rw_cmd->add_option("program", rw_prog)->required();
    rw_cmd->add_option("query", rw_query)->required();
    rw_cmd->add_option("-o,--output", rw_out, "Output rule file")->required();
    rw_cmd->add_option("--query-out", rw_query_out, "Output query file")->required();
    rw_cmd->add_option("--verify", rw_verify_dir, "Directory of .facts files to verify on");

    // tiling
    auto* tiling_cmd = app.add_subcommand("tiling", "Tiling-reduction instances");
    auto* gen_cmd = tiling_cmd->add_subcommand("gen", "Emit database/rules/query files");
    std::string gen_spec, gen_dir;
    gen_cmd->add_option("spec", gen_spec, "Tiling system (JSON)")->required();
    gen_cmd->add_option("-o,--output", gen_dir, "Output directory")->required();
    auto* check_cmd = tiling_cmd->add_subcommand("check", "Brute force vs. chase");
    std::string check_spec;
    std::size_t check_n = 4, check_m = 4, check_budget = 2000;
    check_cmd->add_option("spec", check_spec)->required();
    check_cmd->add_option("--max-n", check_n, "Max grid width");
    check_cmd->add_option("--max-m", check_m, "Max grid height");
    check_cmd->add_option("--budget", check_budget, "Chase trigger budget")
        ->envname("PWLWARD_BUDGET");
    tiling_cmd->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (*classify_cmd) {
        Program p = textio::parse_program(slurp(classify_prog));
        std::cout << classify(p).to_json().dump(2) << "\n";
        return kOk;
    }

    if (*norm_cmd) {
        Program p = textio::parse_program(slurp(norm_prog));
        if (norm_single || norm_level) p = to_single_head(p).first;
        if (norm_level) p = to_levelwise_nf(p).first;
        std::string text = textio::serialize_program(p);
        if (norm_out.empty())
            std::cout << text;
        else
            spill(norm_out, text);
        return kOk;
    }

    if (*chase_cmd) {
        Program p = textio::parse_program(slurp(chase_prog));
        Database d = textio::parse_database(slurp(chase_db));
        ChaseBudget budget{max_steps, max_depth};
        ChaseResult result = bounded_chase(
            d, p, budget, oblivious ? ChasePolicy::Oblivious : ChasePolicy::Restricted);
        for (const Atom& a : result.instance.sorted_facts())
            std::cout << a.to_string() << ".\n";
        if (!chase_dot.empty())
            spill(chase_dot, export_chase_graph(result, d, p).to_dot());
        std::cerr << "steps: " << result.budget_spent
                  << (result.terminated ? " (saturated)" : " (budget exhausted)") << "\n";
        return result.terminated ? kOk : kInconclusive;
    }

    if (*ans_cmd) {
        Program p = textio::parse_program(slurp(ans_prog));
        Database d = textio::parse_database(slurp(ans_db));
        CQ q = textio::parse_query(slurp(ans_query), &p);

        if (ans_engine == "auto") {
            Program single = to_single_head(p).first;
            if (is_warded(single).warded)
                ans_engine = is_pwl(single) ? "prooftree" : "andor";
            else {
                ans_engine = "chase";
                std::cerr << "note: program is not warded; falling back to the chase "
                             "(completeness is budget-limited)\n";
            }
        }

        if (ans_tuple_opt->count() > 0) {
            std::vector<Term> tuple = parse_tuple(ans_tuple);
            bool verdict;
            std::vector<std::string> trace;
            if (ans_engine == "prooftree")
                verdict = decide_pwl_warded(d, p, q, tuple, nullptr,
                                            ans_trace.empty() ? nullptr : &trace);
            else if (ans_engine == "andor")
                verdict = decide_warded(d, p, q, tuple);
            else {
                CertainAnswers ca = certain_answers_via_chase(d, p, q);
                verdict = ca.answers.count(tuple) != 0;
                if (!verdict && !ca.complete) return kInconclusive;
            }
            if (!ans_trace.empty() && verdict) {
                std::string text;
                for (const std::string& line : trace) text += line + "\n";
                spill(ans_trace, text);
            }
            std::cout << (verdict ? "true" : "false") << "\n";
            return verdict ? kOk : kFalse;
        }

        Engine engine = ans_engine == "prooftree" ? Engine::ProofTree
                        : ans_engine == "andor"   ? Engine::AndOr
                                                  : Engine::Chase;
        auto answers = all_answers(d, p, q, engine);
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& tuple : answers) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (const Term& t : tuple) row.push_back(t.to_string());
            j.push_back(row);
        }
        std::cout << j.dump(2) << "\n";
        (void)ans_all;
        return kOk;
    }

    if (*rw_cmd) {
        Program p = textio::parse_program(slurp(rw_prog));
        CQ q = textio::parse_query(slurp(rw_query), &p);
        RewriteResult result = rewrite_to_pwl_datalog(p, q);
        spill(rw_out, textio::serialize_program(result.datalog));
        spill(rw_query_out, textio::serialize_query(result.query));
        std::cerr << "states: " << result.states << ", rules: " << result.datalog.size()
                  << ", width bound: " << result.bound << "\n";
        if (!rw_verify_dir.empty()) {
            std::vector<Database> corpus;
            namespace fs = std::filesystem;
            std::vector<fs::path> paths;
            for (const auto& entry : fs::directory_iterator(rw_verify_dir))
                if (entry.path().extension() == ".facts") paths.push_back(entry.path());
            std::sort(paths.begin(), paths.end());
            for (const auto& path : paths)
                corpus.push_back(textio::parse_database(slurp(path.string())));
            VerifyReport report = verify_rewriting(p, q, corpus);
            for (const std::string& m : report.mismatches) std::cerr << "mismatch: " << m << "\n";
            std::cerr << "verified on " << report.databases << " database(s): "
                      << (report.ok() ? "ok" : "MISMATCH") << "\n";
            if (!report.ok()) return kFalse;
        }
        return kOk;
    }

    if (*gen_cmd) {
        TilingSystem t = TilingSystem::from_json(nlohmann::json::parse(slurp(gen_spec)));
        TilingEncoding enc = encode_tiling(t);
        std::filesystem::create_directories(gen_dir);
        auto in_dir = [&](const char* name) {
            return (std::filesystem::path(gen_dir) / name).string();
        };
        spill(in_dir("tiling.facts"), textio::serialize_database(enc.db));
        spill(in_dir("tiling.tgd"), textio::serialize_program(enc.program));
        spill(in_dir("tiling.cq"), textio::serialize_query(enc.query));
        return kOk;
    }

    if (*check_cmd) {
        TilingSystem t = TilingSystem::from_json(nlohmann::json::parse(slurp(check_spec)));
        CrossCheckReport report = cross_check(t, check_budget, check_n, check_m);
        std::cout << report.summary << "\n";
        if (!report.conclusive) return kInconclusive;
        if (!report.agree) return kFalse;
        return report.witness || report.chase_accepted ? kOk : kFalse;
    }

    return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pwlward::textio::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const pwlward::PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
