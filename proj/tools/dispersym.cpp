// dispersym: command-line front end.
//   conditions   -- wellposedness condition integrands (theorem or corollary form)
//   recursion    -- conjugated-adjoint coefficient table P_{k-2-m; l, j}
//   verify       -- stage identities and self-adjoint reductions
//   check        -- Hoelder conditions on sampled coefficients
//   simulate     -- pseudospectral runs (single / sweep / probe)
//   dump-symbols -- deterministic dumps of stage symbols
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "dispersym/gauge.hpp"
#include "dispersym/json_io.hpp"
#include "dispersym/modderiv.hpp"
#include "dispersym/stages.hpp"
#include "dispersym/taramanum.hpp"

using namespace dispersym;
using nlohmann::json;

namespace {

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

int run_conditions(int k, bool gauged, const std::string& format) {
    ConditionSet cs;
    if (gauged) {
        cs = corollary_conditions(k);
    } else {
        cs = necessary_conditions(k);
        for (auto& e : cs.entries) e.integrand = letter_names(e.integrand, k);
    }
    if (format == "text") {
        std::cout << (gauged ? "corollary" : "theorem") << " conditions, k = " << k << "\n";
        for (std::size_t idx = 0; idx < cs.entries.size(); ++idx) {
            const auto& e = cs.entries[idx];
            std::cout << "  (" << idx + 1 << ")  | int Im[.] | <= C |x-y|^" << e.exponent.str()
                      << "   integrand: " << e.integrand.str() << "\n";
        }
        return 0;
    }
    emit(to_json(cs));
    return 0;
}

int run_recursion(int k, int m, const std::string& out_path, const std::string& format) {
    RecursionState state = RecursionState::base_case(k);
    while (state.level() < m) state = state.advance();
    json j = recursion_table_json(state);
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << j.dump(2) << "\n";
        std::cout << "wrote " << out_path << std::endl;
        return 0;
    }
    emit(j);
    return 0;
}

int run_verify(int k, int stage, bool all, bool appendix_a, const std::string& format) {
    json results = json::array();
    bool ok = true;
    if (appendix_a) {
        for (int kk : {5, 6}) {
            ResidualReport rep = verify_selfadjoint_reduction(kk);
            ok = ok && rep.pass;
            results.push_back(to_json(rep, 0));
        }
    } else {
        int stages = k == 4 ? 2 : (k == 5 ? 3 : 4);
        std::vector<int> which;
        if (all)
            for (int i = 1; i <= stages; ++i) which.push_back(i);
        else
            which.push_back(stage);
        for (int i : which) {
            if (i < 1 || i > stages) throw CLI::ValidationError("stage out of range");
            StageSpec spec = build_stage(k, i);
            ResidualReport rep = verify_identity(spec);
            ok = ok && rep.pass;
            results.push_back(to_json(rep, i));
        }
    }
    if (format == "text") {
        for (const auto& r : results)
            std::cout << r["name"].get<std::string>() << ": "
                      << (r["pass"].get<bool>() ? "pass" : "FAIL") << " ("
                      << r["elapsed_ms"].get<double>() << " ms)\n";
    } else {
        emit(results);
    }
    return ok ? 0 : 1;
}

int run_check(int k, const std::string& coeff_path, bool gauged,
              const std::vector<std::string>& overrides, const std::string& format) {
    std::ifstream is(coeff_path);
    if (!is) throw CLI::ValidationError("cannot open " + coeff_path);
    json file = json::parse(is);
    auto coeffs = coefficients_from_json(file);
    std::map<std::size_t, Rational> theta_overrides;
    for (const auto& ov : overrides) {
        auto colon = ov.find(':');
        auto slash = ov.find('/', colon);
        if (colon == std::string::npos || slash == std::string::npos)
            throw CLI::ValidationError("theta override must be index:num/den");
        theta_overrides[std::stoul(ov.substr(0, colon))] =
            Rational(std::stoll(ov.substr(colon + 1, slash - colon - 1)),
                     std::stoll(ov.substr(slash + 1)));
    }
    ConditionCheckReport rep = check_conditions(k, coeffs, gauged, theta_overrides);
    if (format == "text") {
        std::cout << "condition check, k = " << k << (gauged ? " (gauged)" : "") << "\n";
        for (std::size_t idx = 0; idx < rep.entries.size(); ++idx) {
            const auto& e = rep.entries[idx];
            std::cout << "  (" << idx + 1 << ") theta=" << e.exponent.str();
            if (e.symbolically_zero)
                std::cout << "  integrand vanishes symbolically (sup = 0)\n";
            else
                std::cout << "  sup ratio = " << e.report.sup_ratio << "\n";
        }
        return 0;
    }
    emit(to_json(rep));
    return 0;
}

int run_simulate(const std::string& config_path, const std::string& csv_path,
                 const std::string& format) {
    std::ifstream is(config_path);
    if (!is) throw CLI::ValidationError("cannot open " + config_path);
    json file = json::parse(is);
    SimConfig config = sim_config_from_json(file);

    json experiment = file.value("experiment", json{{"type", "single"}});
    std::string type = experiment.value("type", "single");
    json out;
    if (type == "single") {
        WavepacketSpec spec;
        spec.xi0 = experiment.value("xi0", 8.0);
        spec.x1 = experiment.value("x1", M_PI * config.R);
        spec.m = experiment.value("m", 0);
        cvec u0;
        if (experiment.value("initial", std::string("wavepacket")) == "wavepacket")
            u0 = wavepacket(config, spec);
        else {
            CoeffExpr e = CoeffExpr::parse(experiment.at("initial").get<std::string>());
            u0.resize(config.N);
            for (std::size_t m = 0; m < config.N; ++m) u0[m] = e.eval(config.x_at(m));
        }
        SimResult res = evolve(config, u0);
        out = to_json(res);
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path);
            csv << "t,l2_norm\n";
            for (std::size_t t = 0; t < res.times.size(); ++t)
                csv << res.times[t] << ',' << res.l2_norms[t] << "\n";
        }
    } else if (type == "sweep") {
        std::vector<double> xis = experiment.value("xis", std::vector<double>{8, 16, 24, 32});
        int m = experiment.value("m", 0);
        auto rows = frequency_sweep(config, xis, m);
        json jr = json::array();
        for (const auto& r : rows) jr.push_back({{"xi", r.xi}, {"growth", r.growth}});
        out = {{"type", "sweep"}, {"rows", jr}};
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path);
            csv << "xi,growth\n";
            for (const auto& r : rows) csv << r.xi << ',' << r.growth << "\n";
        }
    } else if (type == "probe") {
        WavepacketSpec spec;
        spec.xi0 = experiment.value("xi0", 8.0);
        spec.x1 = experiment.value("x1", M_PI * config.R);
        spec.m = experiment.value("m", 1);
        int m = experiment.value("recursion_m", 1);
        DualityProbeResult res = duality_probe(config, m, spec.xi0, spec);
        out = {{"type", "probe"},
               {"no_packet", res.no_packet},
               {"xi", res.xi},
               {"residual_ratio", res.residual_ratio},
               {"predicted_power", res.predicted_power}};
    } else {
        throw CLI::ValidationError("experiment type must be single, sweep or probe");
    }
    emit(out);
    return 0;
}

int run_dump(int k, int stage, const std::string& format) {
    StageSpec spec = build_stage(k, stage);
    if (format == "text") {
        std::cout << "stage " << stage << " (k = " << k << ")\n";
        std::cout << "source coefficients:\n";
        for (const auto& [j, p] : spec.source)
            std::cout << "  D^" << j << ": " << p.str() << "\n";
        std::cout << "target coefficients:\n";
        for (const auto& [j, p] : spec.target)
            std::cout << "  D^" << j << ": " << p.str() << "\n";
        std::cout << "bracket:\n" << spec.algebra->dump(spec.bracket) << "\n";
        return 0;
    }
    json j{{"k", k},
           {"stage", stage},
           {"bracket", spec.algebra->dump(spec.bracket)},
           {"source", json::object()},
           {"target", json::object()}};
    for (const auto& [jj, p] : spec.source) j["source"][std::to_string(jj)] = p.str();
    for (const auto& [jj, p] : spec.target) j["target"][std::to_string(jj)] = p.str();
    emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic and numerical laboratory for variable-coefficient dispersive operators"};
    app.require_subcommand(1);
    std::string format = "json";
    app.add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    auto* conditions = app.add_subcommand("conditions", "wellposedness condition integrands");
    int ck = 5;
    bool gauged = false;
    conditions->add_option("--k", ck)->required()->check(CLI::Range(3, 8));
    conditions->add_flag("--gauged", gauged, "apply the gauge transform first (k in 5,6)");

    auto* recursion = app.add_subcommand("recursion", "conjugated-adjoint coefficient table");
    int rk = 5, rm = 0;
    std::string out_path;
    recursion->add_option("--k", rk)->required()->check(CLI::Range(2, 8));
    recursion->add_option("--m", rm)->check(CLI::Range(0, 6));
    recursion->add_option("--out", out_path);

    auto* verify = app.add_subcommand("verify", "stage identity verification");
    int vk = 5, vstage = 1;
    bool all = false, appendix_a = false;
    verify->add_option("--k", vk)->check(CLI::IsMember({4, 5, 6}));
    verify->add_option("--stage", vstage);
    verify->add_flag("--all", all);
    verify->add_flag("--appendix-a", appendix_a);

    auto* check = app.add_subcommand("check", "Hoelder conditions on sampled coefficients");
    int hk = 5;
    bool hgauged = false;
    std::string coeff_path;
    std::vector<std::string> overrides;
    check->add_option("--k", hk)->required()->check(CLI::Range(3, 8));
    check->add_option("--coeffs", coeff_path)->required();
    check->add_flag("--gauged", hgauged);
    check->add_option("--theta-override", overrides);

    auto* simulate = app.add_subcommand("simulate", "pseudospectral runs");
    std::string config_path, csv_path;
    simulate->add_option("--config", config_path)->required();
    simulate->add_option("--csv", csv_path);

    auto* dump = app.add_subcommand("dump-symbols", "deterministic stage symbol dumps");
    int dk = 5, dstage = 1;
    dump->add_option("--k", dk)->check(CLI::IsMember({4, 5, 6}));
    dump->add_option("--stage", dstage);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (conditions->parsed()) return run_conditions(ck, gauged, format);
        if (recursion->parsed()) return run_recursion(rk, rm, out_path, format);
        if (verify->parsed()) return run_verify(vk, vstage, all, appendix_a, format);
        if (check->parsed()) return run_check(hk, coeff_path, hgauged, overrides, format);
        if (simulate->parsed()) return run_simulate(config_path, csv_path, format);
        if (dump->parsed()) return run_dump(dk, dstage, format);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 2;
}
