// varbound: tight lower bounds on sums of observable variances over qudit states.
//
// Subcommands:
//   bound     compute m and the attaining state for an observable set
//   verify    run the built-in golden suites (qubit, qutrit, table, ht, all)
//   dump      emit generator / structure-constant data as JSON
//   oracle    independent projected-descent minimizer (referee for `bound`)
//   entangle  variance-based entanglement tests on a bipartite state
//
// Exit codes: 0 success (for `entangle`, regardless of verdict), 2 parse error,
// 3 non-Hermitian input, 4 solver failure, 1 other failures (incl. failed verify).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <varbound/bloch.hpp>
#include <varbound/entanglement.hpp>
#include <varbound/json_io.hpp>
#include <varbound/oracle.hpp>
#include <varbound/selftest.hpp>
#include <varbound/su_generators.hpp>
#include <varbound/variance_qp.hpp>

namespace {

using nlohmann::json;
using namespace varbound;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("VARBOUND_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return 0;
}

struct TimedBlock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t0)
            .count();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(what + ": not valid JSON");
    return j;
}

void emit(const json& doc, const std::string& json_out) {
    const std::string text = doc.dump(2) + "\n";
    if (json_out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(json_out, std::ios::binary);
        if (!out) throw ParseError("cannot write " + json_out);
        out << text;
    }
}

json config_echo(const SolverConfig& cfg) {
    return json{{"seed", cfg.seed},
                {"grid_N", cfg.grid_N},
                {"samples_per_slice", cfg.samples_per_slice},
                {"restarts", cfg.restarts},
                {"polish_tol", cfg.polish_tol},
                {"max_polish_iters", cfg.max_polish_iters},
                {"threads", cfg.threads}};
}

json diagnostics_json(const Diagnostics& d) {
    return json{{"samples", d.samples},
                {"polish_iterations", d.polish_iterations},
                {"epsilon", d.epsilon},
                {"constraint_residual", d.constraint_residual},
                {"restarts_used", d.restarts_used},
                {"direct_variance_sum", d.direct_variance_sum}};
}

int cmd_bound(const std::string& path, const SolverConfig& cfg, const std::string& json_out) {
    const std::string text = slurp(path);
    const ObservableFile file = parse_observable_file(parse_json_text(text, path));
    TimedBlock timer;
    const BoundResult res = solve_general(file.observables, cfg);
    json doc{{"input",
              {{"path", path},
               {"digest", fnv1a_hex(text)},
               {"n", file.n},
               {"observables", file.observables.size()}}},
             {"config", config_echo(cfg)},
             {"m", res.m},
             {"ell", res.ell},
             {"r_min", real_vector_to_json(res.r_min)},
             {"rho_min", complex_matrix_to_json(res.rho_min)},
             {"stratum", stratum_name(res.stratum)},
             {"diagnostics", diagnostics_json(res.diag)},
             {"wall_ms", timer.ms()}};
    emit(doc, json_out);
    return 0;
}

int cmd_oracle(const std::string& path, int restarts, std::uint64_t seed,
               const std::string& json_out) {
    const std::string text = slurp(path);
    const ObservableFile file = parse_observable_file(parse_json_text(text, path));
    TimedBlock timer;
    const OracleResult res = oracle_min(file.observables, restarts, seed);
    json psi = json::array();
    for (Eigen::Index i = 0; i < res.psi.size(); ++i)
        psi.push_back({res.psi[i].real(), res.psi[i].imag()});
    json doc{{"input", {{"path", path}, {"digest", fnv1a_hex(text)}, {"n", file.n}}},
             {"restarts", restarts},
             {"seed", seed},
             {"value", res.value},
             {"psi", psi},
             {"restarts_used", res.restarts_used},
             {"converged", res.converged},
             {"wall_ms", timer.ms()}};
    emit(doc, json_out);
    return 0;
}

int cmd_verify(const std::string& suite, const SolverConfig& cfg, std::uint64_t seed) {
    std::vector<selftest::Report> reports;
    if (suite == "qubit") {
        reports.push_back(selftest::qubit_suite(seed));
    } else if (suite == "qutrit") {
        reports.push_back(selftest::qutrit_suite(cfg));
    } else if (suite == "table") {
        reports.push_back(selftest::table_suite(cfg));
    } else if (suite == "ht") {
        reports.push_back(selftest::ht_suite(cfg));
    } else {
        reports = selftest::all_suites(cfg, seed);
    }
    bool all_ok = true;
    for (const auto& rep : reports) {
        int passed = 0;
        for (const auto& c : rep.checks) {
            std::printf("[%s] %-26s expected % .10f  computed % .10f  %s\n",
                        rep.suite.c_str(), c.name.c_str(), c.expected, c.computed,
                        c.pass ? "pass" : "FAIL");
            if (c.pass) ++passed;
        }
        std::printf("suite %-6s %d/%zu passed in %.2fs\n", rep.suite.c_str(), passed,
                    rep.checks.size(), rep.total_seconds());
        all_ok = all_ok && rep.ok();
    }
    return all_ok ? 0 : 1;
}

int cmd_dump(const std::string& what, int n, const std::string& json_out) {
    if (n < 2) throw ParseError("dump: n must be at least 2");
    const GeneratorSet gens = build_generators(n);
    json doc{{"n", n}, {"what", what}};
    json matrices = json::array();
    if (what == "generators") {
        for (const auto& G : gens.generators) matrices.push_back(complex_matrix_to_json(G));
    } else if (what == "dtensor") {
        for (const auto& slice : gens.d) matrices.push_back(real_matrix_to_json(slice));
    } else {
        const StarTensor st = build_star_tensor(gens);
        for (const auto& D : st.D) matrices.push_back(real_matrix_to_json(D));
    }
    doc["matrices"] = matrices;
    emit(doc, json_out);
    return 0;
}

int cmd_entangle(const std::string& state_path, const std::string& obs_path,
                 const std::string& mode, const SolverConfig& cfg,
                 const std::string& json_out) {
    const std::string state_text = slurp(state_path);
    const BipartiteState state = parse_state_file(parse_json_text(state_text, state_path));
    const std::string obs_text = slurp(obs_path);
    const json obs_json = parse_json_text(obs_text, obs_path);

    TimedBlock timer;
    Verdict verdict;
    if (mode == "sum") {
        const auto [p1, p2] = parse_pairs_file(obs_json);
        if (p1.A.rows() != state.dim_a || p1.B.rows() != state.dim_b)
            throw ParseError("entangle: pair dimensions do not match the state");
        verdict = test_separability_violation(state, p1, p2, cfg);
    } else {
        const ObservableFile file = parse_observable_file(obs_json);
        if (file.observables.size() != 2)
            throw ParseError("entangle --mode ppt: exactly two observables required");
        if (file.n != state.dim_a * state.dim_b)
            throw ParseError("entangle: observable dimension does not match the state");
        verdict = test_ppt_variance(state, file.observables[0], file.observables[1], cfg);
    }
    json doc{{"state", {{"path", state_path}, {"digest", fnv1a_hex(state_text)}}},
             {"observables", {{"path", obs_path}, {"digest", fnv1a_hex(obs_text)}}},
             {"mode", mode},
             {"config", config_echo(cfg)},
             {"entangled", verdict.entangled},
             {"variance_sum", verdict.variance_sum},
             {"bound", verdict.bound},
             {"margin", verdict.margin},
             {"wall_ms", timer.ms()}};
    emit(doc, json_out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variance-sum lower bounds for qudit observables"};
    app.require_subcommand(1);

    SolverConfig cfg;
    cfg.seed = default_seed();
    std::string json_out;
    const auto add_solver_flags = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "RNG seed (default: VARBOUND_SEED or 0)");
        sub->add_option("--grid-N", cfg.grid_N, "radial slices for the qutrit search")
            ->check(CLI::PositiveNumber);
        sub->add_option("--samples", cfg.samples_per_slice, "Gaussian samples per slice")
            ->check(CLI::PositiveNumber);
        sub->add_option("--restarts", cfg.restarts, "descent restarts (n >= 4 path)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--polish-tol", cfg.polish_tol, "local-polish stopping tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--threads", cfg.threads, "worker cap for slice sampling")
            ->check(CLI::PositiveNumber);
        sub->add_option("--json-out", json_out, "write the JSON document here instead of stdout");
    };

    std::string input_path;
    auto* bound = app.add_subcommand("bound", "compute the variance-sum lower bound");
    bound->add_option("input", input_path, "observable file (JSON)")->required();
    add_solver_flags(bound);

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run the built-in golden suites");
    verify->add_option("--suite", suite, "qubit | qutrit | table | ht | all")
        ->check(CLI::IsMember({"qubit", "qutrit", "table", "ht", "all"}));
    std::uint64_t verify_seed = default_seed();
    verify->add_option("--seed", verify_seed, "seed for the randomized qubit suite");

    std::string what;
    int dump_n = 3;
    auto* dump = app.add_subcommand("dump", "emit basis data as JSON");
    dump->add_option("--what", what, "generators | dtensor | startensor")
        ->required()
        ->check(CLI::IsMember({"generators", "dtensor", "startensor"}));
    dump->add_option("--n", dump_n, "dimension (default 3)");
    dump->add_option("--json-out", json_out, "write the JSON document here instead of stdout");

    int oracle_restarts = 32;
    std::uint64_t oracle_seed = default_seed();
    auto* oracle = app.add_subcommand("oracle", "independent pure-state minimizer");
    oracle->add_option("input", input_path, "observable file (JSON)")->required();
    oracle->add_option("--restarts", oracle_restarts, "descent restarts")
        ->check(CLI::PositiveNumber);
    oracle->add_option("--seed", oracle_seed, "RNG seed");
    oracle->add_option("--json-out", json_out, "write the JSON document here instead of stdout");

    std::string state_path, obs_path, mode = "sum";
    auto* entangle = app.add_subcommand("entangle", "variance-based entanglement tests");
    entangle->add_option("--state", state_path, "bipartite state file (JSON)")->required();
    entangle->add_option("--obs", obs_path, "observable pairs / composite observables (JSON)")
        ->required();
    entangle->add_option("--mode", mode, "sum | ppt")
        ->check(CLI::IsMember({"sum", "ppt"}));
    add_solver_flags(entangle);

    try {
        app.parse(argc, argv);
        if (bound->parsed()) return cmd_bound(input_path, cfg, json_out);
        if (verify->parsed()) {
            cfg.seed = verify_seed;
            return cmd_verify(suite, cfg, verify_seed);
        }
        if (dump->parsed()) return cmd_dump(what, dump_n, json_out);
        if (oracle->parsed())
            return cmd_oracle(input_path, oracle_restarts, oracle_seed, json_out);
        if (entangle->parsed())
            return cmd_entangle(state_path, obs_path, mode, cfg, json_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const HermiticityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
