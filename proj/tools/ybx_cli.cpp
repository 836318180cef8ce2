// ybx: build R-matrices and their factors, run verification suites, render
// reports.
//
//   ybx build  --model rational --n 1 --m 1 --u 3/2
//   ybx build  --model trig --factor M --m 2 --u 0.3
//   ybx build  --model elliptic --factor V --n 1 --u 0.2
//   ybx verify --suite ybe --model rational --seed 7
//   ybx report --in reports.json
//
// Exit codes: 0 all-pass, 1 check failure, 2 config error, 3 numerical guard.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ybx/json_io.hpp"
#include "ybx/suite.hpp"

using namespace ybx;

namespace {

Cplx parse_cplx(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) return Cplx(std::stod(s), 0.0);
    return Cplx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

// Plain key=value config support: splice the file's entries in right after the
// subcommand token, so explicit flags (parsed later, TakeLast) win.
std::vector<std::string> splice_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(f, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto e = s.find_last_not_of(" \t\r");
            return e == std::string::npos ? std::string() : s.substr(0, e + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (!key.empty()) extra.push_back("--" + key + "=" + val);
    }
    if (args.empty()) return args;
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("cannot open output path " + out_path);
        f << j.dump(2) << "\n";
    }
}

struct BuildOptions {
    std::string model, factor = "R", u = "0", z = "0.2,0.1", out;
    std::string ell, s_generic;
    int n = 1, m = 1, m2 = 1, n2 = 1, trunc = 8;
    std::string mode = "auto";
    std::string omega = "0.5,0.5", tau = "0,1", eta = "0.17,0.11";
};

int cmd_build(const BuildOptions& o) {
    MatrixMeta meta;
    meta.model = o.model;
    meta.u = o.u;
    if (o.model == "rational") {
        if (o.mode == "float")
            throw ConfigError("rational builds are exact; float mode exists only for "
                              "the generating-identity check");
        Rat u = Rat::parse(o.u);
        meta.shift_convention = SpectralConvention<Rat>::description();
        if (o.factor == "R") {
            if (!o.ell.empty()) {
                RationalSpinPair pair =
                    RationalSpinPair::generic_pair(o.n, Rat::parse(o.ell), o.trunc);
                meta.spins = {o.n, -1};
                emit(blockop_to_json(build_R_factorized(pair, u), meta), o.out);
            } else {
                meta.spins = {o.n, o.m};
                emit(matrix_to_json(restrict_second(o.n, o.m, u), meta), o.out);
            }
        } else if (o.factor == "Z" || o.factor == "D") {
            auto inner = BasisDescriptor::monomial(o.n + 2);
            meta.spins = {o.n};
            auto b = o.factor == "Z" ? build_Z(o.n, mult_by_coordinate<Rat>(inner))
                                     : build_Dmat(o.n, derivative<Rat>(inner));
            emit(blockop_to_json(b, meta), o.out);
        } else if (o.factor == "Uplus" || o.factor == "Uminus") {
            meta.spins = {o.n};
            auto d = uminus_eigenvalues(o.n, u);
            BasisDescriptor bd = BasisDescriptor::monomial(o.n);
            LinOp<Rat> U(bd, bd);
            for (int k = 0; k <= o.n; ++k)
                U.at(k, k) = o.factor == "Uminus" ? d[k] : d[o.n - k];
            emit(matrix_to_json(U, meta), o.out);
        } else {
            throw ConfigError("unknown rational factor " + o.factor);
        }
    } else if (o.model == "trig") {
        ModularParams par(parse_cplx(o.omega));
        Cplx u = parse_cplx(o.u);
        if (o.factor == "R") {
            if (!o.s_generic.empty()) {
                TrigSpinPair pair =
                    TrigSpinPair::generic_pair(o.m, parse_cplx(o.s_generic), 2 * o.m + 6);
                meta.spins = {o.m, -1};
                meta.shift_convention = TrigSpectral::description();
                emit(blockop_to_json(build_R_trig_factorized(pair, u, par), meta), o.out);
            } else {
                meta.spins = {o.m, o.m2};
                meta.shift_convention = trig_shift_description();
                emit(matrix_to_json(restrict_second_trig(o.m, o.m2, u, par), meta), o.out);
            }
        } else if (o.factor == "M") {
            meta.spins = {o.m};
            meta.shift_convention = "M evaluated at u + m omega'";
            auto Mv = build_M(o.m, u + double(o.m) * par.omega_prime, par);
            BasisDescriptor bd = BasisDescriptor::laurent(o.m, (o.m % 2 == 0)
                                                                   ? Parity::Even
                                                                   : Parity::Odd);
            LinOp<Cplx> M(bd, bd);
            M.a = Mv;
            emit(matrix_to_json(M, meta), o.out);
        } else {
            throw ConfigError("unknown trig factor " + o.factor);
        }
    } else if (o.model == "elliptic") {
        EllipticParams par(parse_cplx(o.tau), parse_cplx(o.eta));
        Cplx u = parse_cplx(o.u);
        if (o.factor == "R") {
            meta.spins = {o.n, o.n2};
            meta.shift_convention = elliptic_shift_description();
            emit(matrix_to_json(restrict_second_elliptic(o.n, o.n2, u, par).op, meta),
                 o.out);
        } else if (o.factor == "V") {
            meta.spins = {o.n};
            Cplx shift(0, 0);
            if (o.n == 1) shift = par.tau / 4.0;
            if (o.n == 2) shift = -par.eta / 2.0 + par.tau / 4.0;
            meta.shift_convention =
                "V evaluated at the displayed argument shift for n = 1, 2";
            VMatrix V(o.n, u + shift, par);
            Cplx z = parse_cplx(o.z);
            BasisDescriptor bd = BasisDescriptor::theta_plus(o.n);
            LinOp<Cplx> M(bd, bd);
            M.a = V.eval(z);
            json j = matrix_to_json(M, meta);
            j["z"] = json::array({z.real(), z.imag()});
            emit(j, o.out);
        } else if (o.factor == "beta") {
            meta.spins = {o.n};
            meta.shift_convention = "shift coefficients of the intertwiner M(n eta)";
            auto M = build_intertwiner(o.n, par);
            CollocationGrid grid = CollocationGrid::for_theta_plus(o.n);
            BasisDescriptor rowb = BasisDescriptor::theta_plus(o.n);
            BasisDescriptor colb = BasisDescriptor::monomial(int(grid.points.size()) - 1);
            LinOp<Cplx> tab(colb, rowb);
            json zpts = json::array();
            for (size_t s = 0; s < grid.points.size(); ++s) {
                auto bet = M.beta(grid.points[s]);
                for (int l = 0; l <= o.n; ++l) tab.at(l, int(s)) = bet[l];
                zpts.push_back(json::array(
                    {grid.points[s].real(), grid.points[s].imag()}));
            }
            json j = matrix_to_json(tab, meta);
            j["grid"] = zpts;
            emit(j, o.out);
        } else {
            throw ConfigError("unknown elliptic factor " + o.factor);
        }
    } else {
        throw ConfigError("unknown model " + o.model);
    }
    return 0;
}

int cmd_verify(SuiteConfig cfg, const std::string& out_path) {
    auto reports = run_suite(cfg);
    json j = reports_to_json(reports, cfg.seed, convention_ledger());
    emit(j, out_path);
    for (const auto& r : reports)
        if (!r.passed) return 1;
    return 0;
}

int cmd_report(const std::string& in_path) {
    std::ifstream f(in_path);
    if (!f) throw ConfigError("cannot open report file " + in_path);
    json j;
    f >> j;
    std::printf("%-36s %6s %12s %12s %10s\n", "check", "pass", "max_abs", "relative",
                "runtime");
    for (const auto& rj : j.at("reports")) {
        ResidualReport r = report_from_json(rj);
        std::printf("%-36s %6s %12.3e %12.3e %9.2fs\n", r.name.c_str(),
                    r.passed ? "yes" : "NO", r.max_abs, r.relative,
                    r.runtime_ms / 1000.0);
        if (!r.passed && !r.context.empty())
            std::printf("    context: %s\n", r.context.c_str());
    }
    if (j.contains("conventions")) {
        std::printf("\nconventions:\n");
        for (const auto& c : j["conventions"])
            std::printf("  %s\n", c.get<std::string>().c_str());
    }
    if (j.contains("seed"))
        std::printf("\nseed: %llu\n", (unsigned long long)j["seed"].get<uint64_t>());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Yang-Baxter R-matrix construction and verification"};
    app.require_subcommand(1);

    BuildOptions bo;
    auto* build = app.add_subcommand("build", "emit a matrix or factor as JSON");
    build->add_option("--model", bo.model, "rational | trig | elliptic")->required();
    build->add_option("--factor", bo.factor, "R | Z | D | Uplus | Uminus | M | V | beta");
    build->add_option("--n", bo.n, "first spin (rational n, elliptic n)");
    build->add_option("--m", bo.m, "second spin (rational) / first spin (trig)");
    build->add_option("--m2", bo.m2, "trig second spin");
    build->add_option("--n2", bo.n2, "elliptic second spin");
    build->add_option("--u", bo.u, "spectral parameter: p/q (rational) or re[,im]");
    build->add_option("--z", bo.z, "evaluation point for V (re[,im])");
    build->add_option("--ell", bo.ell, "generic rational second spin p/q");
    build->add_option("--s", bo.s_generic, "generic trig second spin re[,im]");
    build->add_option("--trunc", bo.trunc, "generic-mode truncation degree");
    build->add_option("--mode", bo.mode, "exact | float");
    build->add_option("--omega", bo.omega, "modular omega re,im");
    build->add_option("--tau", bo.tau, "elliptic tau re,im");
    build->add_option("--eta", bo.eta, "elliptic eta re,im");
    build->add_option("--out", bo.out, "output path (default stdout)");

    SuiteConfig vc;
    std::string v_out, v_models, v_omega = "0.5,0.5", v_tau = "0,1", v_eta = "0.17,0.11";
    int v_theta = 30, v_gamma = 40;
    double v_tol = 1e-12;
    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--suite", vc.suite, "identities | factorization | ybe | algebra | all");
    verify->add_option("--model", v_models, "comma-separated model filter");
    verify->add_option("--seed", vc.seed, "random seed (YBX_SEED overrides the default)");
    verify->add_option("--omega", v_omega, "modular omega re,im");
    verify->add_option("--tau", v_tau, "elliptic tau re,im");
    verify->add_option("--eta", v_eta, "elliptic eta re,im");
    verify->add_option("--theta-terms", v_theta, "theta series cut");
    verify->add_option("--gamma-terms", v_gamma, "gamma product cut");
    verify->add_option("--target-tol", v_tol, "truncation target tolerance");
    verify->add_option("--out", v_out, "report output path (default stdout)");

    std::string r_in;
    auto* report = app.add_subcommand("report", "render a report file as a table");
    report->add_option("--in", r_in, "report JSON path")->required();

    if (const char* env = std::getenv("YBX_SEED"))
        vc.seed = std::strtoull(env, nullptr, 10);

    for (auto* sub : {build, verify, report})
        for (auto* opt : sub->get_options())
            if (opt->get_expected_min() > 0)
                opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    try {
        std::vector<std::string> args = splice_config(argc, argv);
        std::vector<const char*> cargv = {"ybx"};
        for (const auto& a : args) cargv.push_back(a.c_str());
        app.parse(int(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (build->parsed()) return cmd_build(bo);
        if (verify->parsed()) {
            if (!v_models.empty()) {
                vc.models.clear();
                std::stringstream ss(v_models);
                std::string tok;
                while (std::getline(ss, tok, ',')) vc.models.insert(tok);
            }
            vc.omega = parse_cplx(v_omega);
            vc.tau = parse_cplx(v_tau);
            vc.eta = parse_cplx(v_eta);
            vc.trunc = TruncationConfig(v_theta, v_gamma, v_tol);
            return cmd_verify(vc, v_out);
        }
        if (report->parsed()) return cmd_report(r_in);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalGuard& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
