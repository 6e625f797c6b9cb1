// Command-line front end: evaluate the series, run verification sweeps, and
// fit reduction identities. Exit codes: 0 pass, 1 verification failure,
// 2 usage/parse error, 3 numeric/domain error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mzv/mzv.hpp"

using nlohmann::json;

namespace {

struct GlobalOptions {
    long N = 1000000;
    double tol = 0.0;  // 0 = per-suite default
    double guard = 1e-3;
    std::string format = "text";
    std::string out_path;
    unsigned threads = 0;
    unsigned seed = 0;
    std::string table_path = "data/ohno_table_w6.txt";

    mzv::EvalConfig eval_config() const {
        mzv::EvalConfig cfg;
        cfg.truncation_N = N;
        cfg.lambda_guard = guard;
        return cfg;
    }
};

json report_to_json(const mzv::VerificationReport& r) {
    json j;
    j["id"] = r.id;
    j["samples"] = r.samples;
    j["residuals"] = r.residuals;
    j["budgets"] = r.budgets;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["time_ms"] = r.time_ms;
    return j;
}

void emit_reports(const GlobalOptions& g, const std::string& suite,
                  const std::vector<mzv::VerificationReport>& reports, const json& config) {
    size_t passed = 0;
    double worst = 0;
    for (auto& r : reports) {
        passed += r.pass ? 1 : 0;
        worst = std::max(worst, r.max_residual());
    }
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!g.out_path.empty()) {
        file.open(g.out_path);
        if (!file) throw std::runtime_error("cannot open output file " + g.out_path);
        os = &file;
    }
    if (g.format == "json") {
        json j;
        j["suite"] = suite;
        j["config"] = config;
        j["results"] = json::array();
        for (auto& r : reports) j["results"].push_back(report_to_json(r));
        j["summary"] = {{"total", reports.size()},
                        {"passed", passed},
                        {"failed", reports.size() - passed},
                        {"max_residual", worst}};
        *os << j.dump(2) << "\n";
    } else if (g.format == "csv") {
        *os << "id,sample,residual,budget,pass\n";
        for (auto& r : reports)
            for (size_t i = 0; i < r.residuals.size(); ++i)
                *os << '"' << r.id << "\"," << (i < r.samples.size() ? r.samples[i] : 0.0) << ','
                    << r.residuals[i] << ',' << (i < r.budgets.size() ? r.budgets[i] : 0.0) << ','
                    << (r.pass ? 1 : 0) << "\n";
    } else {
        for (auto& r : reports)
            *os << (r.pass ? "[pass] " : "[FAIL] ") << r.id << "  max residual "
                << r.max_residual() << "  (tol " << r.tolerance << ", " << r.time_ms << " ms)\n";
        *os << "summary: " << passed << "/" << reports.size() << " passed, max residual " << worst
            << "\n";
    }
    if (passed != reports.size()) std::exit(1);
}

std::vector<double> parse_lambda_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string piece;
    while (std::getline(is, piece, ',')) out.push_back(std::stod(piece));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiple zeta value relation toolkit"};
    app.require_subcommand(1);

    GlobalOptions g;
    if (const char* env = std::getenv("MZV_DEFAULT_N")) g.N = std::atol(env);
    app.add_option("--N", g.N, "series truncation bound");
    app.add_option("--tol", g.tol, "override pass tolerance");
    app.add_option("--guard", g.guard, "minimum distance of lambda from positive integers");
    app.add_option("--format", g.format, "output format: text, json, csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", g.out_path, "write the report to this file");
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--seed", g.seed, "seed for randomized sample selection");
    app.add_option("--table", g.table_path, "identity table file");

    // dual
    auto* dual_cmd = app.add_subcommand("dual", "print the dual of an admissible index");
    std::string dual_index;
    dual_cmd->add_option("index", dual_index, "index, e.g. \"(3)\"")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate zeta, li, f, g, F, G or Psi");
    std::string eval_kind, eval_arg;
    double eval_lambda = 0.0, eval_z = 0.5, eval_tol = 1e-9;
    eval_cmd->add_option("kind", eval_kind, "zeta|li|f|g|F|G|Psi")
        ->required()
        ->check(CLI::IsMember({"zeta", "li", "f", "g", "F", "G", "Psi"}));
    eval_cmd->add_option("arg", eval_arg, "index \"(2,1)\" or pair composition \"((2,1),(1,2))\"")
        ->required();
    eval_cmd->add_option("--lambda", eval_lambda, "lambda for f/g/F/G");
    eval_cmd->add_option("--z", eval_z, "z for li/Psi");
    eval_cmd->add_option("--eval-tol", eval_tol, "target absolute tolerance");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    int max_weight = 0;
    int samples = 0;
    std::string lambda_list;
    verify_cmd->add_option("suite", suite, "ohno|reduced|duality|sum|landen|table|difference|lemma")
        ->required()
        ->check(CLI::IsMember(
            {"ohno", "reduced", "duality", "sum", "landen", "table", "difference", "lemma"}));
    verify_cmd->add_option("--max-weight", max_weight, "weight bound (suite default otherwise)");
    verify_cmd->add_option("--samples", samples, "number of randomized lambda samples");
    verify_cmd->add_option("--lambdas", lambda_list, "comma-separated lambda samples");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit reduction coefficients for a pair composition");
    std::string fit_pc;
    int fit_samples = 0;
    int fit_max_weight = 0;
    std::int64_t snap_den = 64;
    bool no_snap = false;
    fit_cmd->add_option("pc", fit_pc, "pair composition, e.g. \"((2,2))\"")->required();
    fit_cmd->add_option("--max-weight", fit_max_weight, "largest zeta-index weight in the ansatz");
    fit_cmd->add_option("--samples", fit_samples, "number of lambda samples");
    fit_cmd->add_option("--snap-den", snap_den, "largest snap denominator");
    fit_cmd->add_flag("--no-snap", no_snap, "report raw least-squares coefficients only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        mzv::EvalConfig cfg = g.eval_config();
        if (dual_cmd->parsed()) {
            mzv::Index k = mzv::parse_index(dual_index);
            if (!k.empty() && !mzv::admissible(k)) {
                std::cerr << "error: non-admissible index " << mzv::to_string(k) << "\n";
                return 3;
            }
            std::cout << mzv::to_string(mzv::dual(k)) << "\n";
            return 0;
        }
        if (eval_cmd->parsed()) {
            cfg.target_abs_tol = eval_tol;
            mzv::detail::Stopwatch sw;
            mzv::Eval v;
            if (eval_kind == "zeta") {
                v = mzv::eval_mzv(mzv::parse_index(eval_arg), cfg);
            } else if (eval_kind == "li") {
                v = mzv::eval_mpl(mzv::parse_index(eval_arg), eval_z, cfg);
            } else if (eval_kind == "f") {
                v = mzv::eval_f(mzv::parse_pair_composition(eval_arg), eval_lambda, cfg);
            } else if (eval_kind == "g") {
                v = mzv::eval_g(mzv::parse_pair_composition(eval_arg), eval_lambda, cfg);
            } else if (eval_kind == "F") {
                v = mzv::eval_F(mzv::parse_index(eval_arg), eval_lambda, cfg);
            } else if (eval_kind == "G") {
                v = mzv::eval_G(mzv::parse_index(eval_arg), eval_lambda, cfg);
            } else {
                v = mzv::eval_Psi(mzv::parse_index(eval_arg), eval_z, cfg);
            }
            double ms = sw.ms();
            if (g.format == "json") {
                json j = {{"kind", eval_kind}, {"arg", eval_arg},     {"value", v.value},
                          {"error_estimate", v.abs_err},              {"N", cfg.truncation_N},
                          {"time_ms", ms}};
                if (eval_kind == "f" || eval_kind == "g" || eval_kind == "F" || eval_kind == "G")
                    j["lambda"] = eval_lambda;
                if (eval_kind == "li" || eval_kind == "Psi") j["z"] = eval_z;
                std::cout << j.dump(2) << "\n";
            } else {
                std::printf("%.12f +- %.2e  (N=%ld, %.1f ms)\n", v.value, v.abs_err,
                            cfg.truncation_N, ms);
            }
            return 0;
        }
        if (verify_cmd->parsed()) {
            mzv::EvalCache cache(cfg);
            std::vector<double> lambdas = mzv::default_lambda_samples();
            if (!lambda_list.empty()) lambdas = parse_lambda_list(lambda_list);
            if (samples > 0) {
                std::mt19937 rng(g.seed);
                std::uniform_real_distribution<double> dist(-0.8, 0.85);
                lambdas.clear();
                while (static_cast<int>(lambdas.size()) < samples) {
                    double lam = dist(rng);
                    if (std::fabs(lam - std::round(lam)) < g.guard) continue;
                    if (std::fabs(lam - 1.0 - std::round(lam - 1.0)) < g.guard) continue;
                    lambdas.push_back(lam);
                }
            }
            json config = {{"N", cfg.truncation_N}, {"suite", suite}, {"seed", g.seed}};
            config["lambdas"] = lambdas;
            std::vector<mzv::VerificationReport> reports;
            if (suite == "ohno") {
                int w = max_weight ? max_weight : 6;
                double tol = g.tol > 0 ? g.tol : 1e-6;
                reports = mzv::sweep_ohno(w, lambdas, cache, tol, g.threads);
            } else if (suite == "reduced") {
                int w = max_weight ? max_weight : 5;
                double tol = g.tol > 0 ? g.tol : 1e-6;
                reports = mzv::sweep_reduced(w, lambdas, cache, tol, g.threads);
            } else if (suite == "duality") {
                int w = max_weight ? max_weight : 8;
                double tol = g.tol > 0 ? g.tol : 1e-8;
                reports = mzv::sweep_duality(w, cache, tol, g.threads);
            } else if (suite == "sum") {
                int w = max_weight ? max_weight : 7;
                double tol = g.tol > 0 ? g.tol : 1e-7;
                reports = mzv::sweep_sum_formula(w, cache, tol, g.threads);
            } else if (suite == "landen") {
                int w = max_weight ? max_weight : 5;
                double tol = g.tol > 0 ? g.tol : 1e-8;
                reports = mzv::sweep_landen(w, 3, {0.2, 0.4}, cache, tol, true, g.threads);
                config["z_samples"] = {0.2, 0.4};
            } else if (suite == "table") {
                double tol = g.tol > 0 ? g.tol : 1e-6;
                auto table = mzv::load_identity_table(g.table_path);
                if (max_weight) {
                    std::vector<mzv::LinearIdentity> keep;
                    for (auto& id : table)
                        if (id.weight() <= max_weight) keep.push_back(id);
                    table = std::move(keep);
                }
                reports = mzv::verify_table(table, lambdas, cache, tol, g.threads);
            } else if (suite == "difference") {
                int w = max_weight ? max_weight : 5;
                double tol = g.tol > 0 ? g.tol : 1e-6;
                std::vector<double> diff_lams = samples > 0 || !lambda_list.empty()
                                                    ? lambdas
                                                    : std::vector<double>{0.45, -0.35};
                reports = mzv::sweep_difference(w, diff_lams, cache, tol, g.threads);
            } else {  // lemma
                int w = max_weight ? max_weight : 5;
                double tol = g.tol > 0 ? g.tol : 1e-6;
                double lam = lambdas.empty() ? 0.4 : lambdas.front();
                if (samples == 0 && lambda_list.empty()) lam = 0.4;
                reports = mzv::sweep_lemma(w, lam, cache, tol, g.threads);
            }
            emit_reports(g, suite, reports, config);
            return 0;
        }
        if (fit_cmd->parsed()) {
            mzv::EvalCache cache(cfg);
            mzv::PairComposition pc = mzv::parse_pair_composition(fit_pc);
            if (!pc.canonical()) {
                std::cerr << "error: pair composition must be canonical\n";
                return 3;
            }
            auto ansatz = mzv::auto_ansatz(pc);
            if (fit_max_weight > 0) {
                std::vector<std::pair<mzv::Index, mzv::Composition>> keep;
                for (auto& term : ansatz)
                    if (term.first.weight() <= fit_max_weight) keep.push_back(term);
                ansatz = std::move(keep);
            }
            std::vector<std::pair<mzv::Index, mzv::Composition>> dropped;
            ansatz = mzv::dedup_ansatz(ansatz, cache, &dropped);
            std::vector<double> lambdas;
            if (fit_samples > 0) lambdas = mzv::default_fit_lambdas(fit_samples);
            auto fit = mzv::fit_reduction(pc, ansatz, lambdas, cache, snap_den);
            mzv::LinearIdentity id;
            id.lhs = pc;
            for (size_t j = 0; j < fit.ansatz.size(); ++j) {
                if (!no_snap && fit.snapped[j].num == 0) continue;
                mzv::IdentityTerm t;
                t.coeff = fit.snapped[j];
                t.zeta_index = fit.ansatz[j].first;
                t.F_arg = fit.ansatz[j].second;
                id.terms.push_back(std::move(t));
            }
            if (g.format == "json") {
                json j;
                j["identity"] = mzv::identity_to_line(id);
                j["held_out_residual"] = fit.held_out_residual;
                j["condition_number"] = fit.condition_number;
                j["rank"] = fit.rank;
                j["rank_deficient"] = fit.rank_deficient;
                j["residual_norm"] = fit.residual_norm;
                json terms = json::array();
                for (size_t jx = 0; jx < fit.ansatz.size(); ++jx)
                    terms.push_back({{"zeta", mzv::to_string(fit.ansatz[jx].first)},
                                     {"F", mzv::to_string(fit.ansatz[jx].second)},
                                     {"coefficient", fit.coeffs[jx]},
                                     {"snapped", std::to_string(fit.snapped[jx].num) + "/" +
                                                     std::to_string(fit.snapped[jx].den)}});
                j["terms"] = terms;
                json dropped_j = json::array();
                for (auto& d : dropped)
                    dropped_j.push_back({{"zeta", mzv::to_string(d.first)},
                                         {"F", mzv::to_string(d.second)}});
                j["dropped_duplicates"] = dropped_j;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << mzv::identity_to_line(id) << "\n";
                std::printf("# held-out residual %.2e, condition %.2e, rank %d/%zu%s\n",
                            fit.held_out_residual, fit.condition_number, fit.rank,
                            fit.ansatz.size(), fit.rank_deficient ? " (rank deficient)" : "");
                for (auto& d : dropped)
                    std::printf("# dropped duplicate column z%s F%s\n",
                                mzv::to_string(d.first).c_str(), mzv::to_string(d.second).c_str());
            }
            if (fit.held_out_residual > (g.tol > 0 ? g.tol : 1e-6)) return 1;
            return 0;
        }
    } catch (const mzv::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
