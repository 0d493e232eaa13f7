// Command line front end: analyze / solve / verify pipelines over a problem
// file. Exit codes: 0 all requested checks pass, 1 a check failed, 2 input
// error.

#include <CLI11.hpp>
#include <ibvp/ibvp.hpp>

#include <iostream>

namespace {

struct CommonFlags {
    std::string file;
    std::string out;
    std::string rho;
    std::string pattern;
    int grid_n = 0;
    double tol = 0;
    bool exact_mode = false;
    bool numeric_mode = false;
};

void apply_overrides(ibvp::ProblemSpec& p, const CommonFlags& f) {
    if (!f.rho.empty()) {
        p.analysis.rho.clear();
        std::stringstream ss(f.rho);
        std::string tok;
        while (std::getline(ss, tok, ',')) p.analysis.rho.push_back(ibvp::parse_rational(tok));
    }
    if (!f.pattern.empty()) {
        static const std::map<std::string, ibvp::Pattern> names = {
            {"S1", ibvp::Pattern::S1}, {"S2", ibvp::Pattern::S2}, {"S3", ibvp::Pattern::S3},
            {"S4", ibvp::Pattern::S4}, {"S5", ibvp::Pattern::S5}, {"S6", ibvp::Pattern::S6}};
        auto it = names.find(f.pattern);
        if (it == names.end()) throw ibvp::ValidationError({{"--pattern", "schema",
                                                             "pattern must be one of S1..S6"}});
        p.analysis.pattern = it->second;
    }
    if (f.grid_n > 0) p.solver.n = f.grid_n;
    if (f.tol > 0) p.solver.tol = f.tol;
}

void emit(const ibvp::json& report, const std::string& out) {
    std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open output file: " + out);
        f << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certificate analysis and numerical solution of coupled impulsive "
                 "boundary value problems with nonlocal Sturm-Liouville conditions"};
    app.require_subcommand(1);

    CommonFlags fa, fs, fv;
    std::string csv_base = "solution.csv";
    std::string solution_path;

    auto* analyze = app.add_subcommand("analyze", "compute constants, check index conditions, "
                                                  "emit a multiplicity certificate");
    analyze->add_option("file", fa.file, "problem file (JSON)")->required();
    analyze->add_option("--out", fa.out, "write the JSON report here instead of stdout");
    analyze->add_option("--rho", fa.rho, "override the radius ladder, e.g. \"1/8,1,11\"");
    analyze->add_option("--pattern", fa.pattern, "override the pattern (S1..S6)");
    analyze->add_option("--grid-n", fa.grid_n, "override panels per smooth piece");
    analyze->add_option("--tol", fa.tol, "override the solver tolerance");
    analyze->add_flag("--exact", fa.exact_mode, "fail unless every constant is exact");
    analyze->add_flag("--numeric", fa.numeric_mode, "drop exact values, report decimals only");

    auto* solve = app.add_subcommand("solve", "solve the integral system by damped Picard "
                                              "iteration and export solution curves");
    solve->add_option("file", fs.file, "problem file (JSON)")->required();
    solve->add_option("--out", fs.out, "write the JSON report here instead of stdout");
    solve->add_option("--csv", csv_base, "base path for solution CSV files");
    solve->add_option("--grid-n", fs.grid_n, "override panels per smooth piece");
    solve->add_option("--tol", fs.tol, "override the solver tolerance");

    auto* verify = app.add_subcommand("verify", "check residuals and cone membership of an "
                                                "exported solution CSV");
    verify->add_option("file", fv.file, "problem file (JSON)")->required();
    verify->add_option("--solution", solution_path, "solution CSV to verify")->required();
    verify->add_option("--out", fv.out, "write the JSON report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            ibvp::ProblemSpec p = ibvp::load_problem(fa.file);
            apply_overrides(p, fa);
            ibvp::AnalyzeOptions opt;
            if (fa.exact_mode) opt.mode = ibvp::ValueMode::Exact;
            if (fa.numeric_mode) opt.mode = ibvp::ValueMode::Numeric;
            ibvp::AnalyzeResult res = ibvp::run_analyze(p, opt);
            emit(res.report, fa.out);
            return res.pass ? 0 : 1;
        }
        if (solve->parsed()) {
            ibvp::ProblemSpec p = ibvp::load_problem(fs.file);
            apply_overrides(p, fs);
            ibvp::SolveResult res = ibvp::run_solve(p);
            for (size_t k = 0; k < res.solutions.size(); ++k) {
                std::string path = csv_base;
                if (k > 0) {
                    auto dot = path.rfind('.');
                    std::string suffix = "-" + std::to_string(k + 1);
                    path = dot == std::string::npos ? path + suffix
                                                    : path.substr(0, dot) + suffix +
                                                          path.substr(dot);
                }
                ibvp::write_solution_csv(path, res.solutions[k]);
                res.report["solutions"][k]["csv"] = path;
            }
            emit(res.report, fs.out);
            return res.pass ? 0 : 1;
        }
        if (verify->parsed()) {
            ibvp::ProblemSpec p = ibvp::load_problem(fv.file);
            std::ifstream in(solution_path);
            if (!in) throw std::runtime_error("cannot open solution CSV: " + solution_path);
            ibvp::LoadedSolution sol = ibvp::read_solution_csv(in, p);
            ibvp::VerifyResult res = ibvp::run_verify(p, std::move(sol));
            emit(res.report, fv.out);
            return res.pass ? 0 : 1;
        }
    } catch (const ibvp::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
