#include "dispersym/json_io.hpp"

namespace dispersym {

using nlohmann::json;

namespace {

std::string rational_str(const Rational& r) { return r.str(); }

}  // namespace

json to_json(const ConditionSet& cs) {
    json entries = json::array();
    for (const auto& e : cs.entries) {
        entries.push_back({{"integrand", e.integrand.str()},
                           {"exponent", rational_str(e.exponent)},
                           {"source_stage", e.source_stage}});
    }
    return {{"k", cs.k}, {"gauged", cs.gauged}, {"entries", entries}};
}

json to_json(const StructureReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"m", c.m}, {"what", c.what}, {"pass", c.pass}});
    return {{"k", rep.k}, {"all_pass", rep.all_pass()}, {"checks", checks}};
}

json to_json(const ResidualReport& rep, int stage_index) {
    json j{{"stage", stage_index},
           {"pass", rep.pass},
           {"elapsed_ms", rep.elapsed_ms},
           {"name", rep.name}};
    if (rep.pass)
        j["residual_order"] = nullptr;
    else
        j["residual_order"] = rep.residual_order;
    if (!rep.detail.empty()) j["detail"] = rep.detail;
    return j;
}

json to_json(const HoelderReport& rep) {
    json profile = json::array();
    for (const auto& [sep, ratio] : rep.profile)
        profile.push_back({{"separation", sep}, {"max_ratio", ratio}});
    return {{"theta", rational_str(rep.theta)},
            {"sup_ratio", rep.sup_ratio},
            {"argmax", {{"x", rep.argmax_x}, {"y", rep.argmax_y}}},
            {"profile", profile}};
}

json to_json(const ConditionCheckReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries) {
        json row{{"exponent", rational_str(e.exponent)},
                 {"integrand", e.integrand},
                 {"symbolically_zero", e.symbolically_zero}};
        if (!e.symbolically_zero) row["hoelder"] = to_json(e.report);
        entries.push_back(std::move(row));
    }
    return {{"k", rep.k}, {"gauged", rep.gauged}, {"entries", entries}};
}

json to_json(const TaramaSweepReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"xi", r.xi},
                        {"bracket", r.bracket},
                        {"max_H", r.max_H},
                        {"max_defect", r.max_defect}});
    return {{"q", rep.q},
            {"ell", rep.ell},
            {"rows", rows},
            {"slope_H", rep.slope_H},
            {"slope_defect", rep.slope_defect}};
}

json to_json(const SimResult& res) {
    return {{"times", res.times},
            {"l2_norms", res.l2_norms},
            {"hs_norms", res.hs_norms},
            {"growth_factor", res.growth_factor}};
}

json recursion_table_json(const RecursionState& state) {
    json cells = json::array();
    for (const auto& [key, p] : state.table().cells())
        cells.push_back({{"l", key.first}, {"j", key.second}, {"poly", p.str()}});
    return {{"k", state.k()}, {"m", state.level()}, {"cells", cells}};
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig c;
    if (!j.contains("k")) throw std::invalid_argument("config needs k");
    c.k = j.at("k").get<int>();
    c.R = j.value("R", 1.0);
    c.N = j.value("N", std::size_t(256));
    c.dt = j.value("dt", 1e-3);
    c.T = j.value("T", 1.0);
    if (j.contains("integrator")) {
        std::string name = j.at("integrator").get<std::string>();
        if (name == "rk4")
            c.integrator = Integrator::rk4_if;
        else if (name == "splitting")
            c.integrator = Integrator::strang_cayley;
        else
            throw std::invalid_argument("integrator must be rk4 or splitting");
    }
    c.dealias = j.value("dealias", true);
    c.stability_constant = j.value("stability_constant", 0.5);
    c.record_every = j.value("record_every", std::size_t(1));
    if (j.contains("hs_norm_s")) c.hs_norm_s = j.at("hs_norm_s").get<double>();
    if (j.contains("coeffs")) {
        for (const auto& [name, val] : j.at("coeffs").items()) {
            int order;
            if (name.size() >= 2 && name[0] == 'b' && std::isdigit((unsigned char)name[1]))
                order = std::stoi(name.substr(1));
            else if (name.size() == 1 && name[0] >= 'a' && name[0] <= 'f')
                order = c.k - 1 - (name[0] - 'a');
            else
                throw std::invalid_argument("coefficient name must be b<j> or a..f");
            c.coeffs[order] = CoeffExpr::parse(val.get<std::string>());
        }
    }
    c.validate();
    return c;
}

std::map<std::string, SampledFunction> coefficients_from_json(const json& j) {
    if (!j.contains("grid")) throw std::invalid_argument("coefficient file needs grid");
    const json& g = j.at("grid");
    SampledFunction base;
    base.x0 = g.value("x0", 0.0);
    base.dx = g.contains("dx") ? g.at("dx").get<double>() : 0.0;
    std::size_t n = g.at("n").get<std::size_t>();
    if (base.dx <= 0.0 && g.contains("length")) base.dx = g.at("length").get<double>() / double(n);
    base.values.assign(n, 0.0);

    std::map<std::string, SampledFunction> out;
    for (const auto& [name, val] : j.at("coeffs").items()) {
        SampledFunction f = base;
        if (val.is_string()) {
            CoeffExpr e = CoeffExpr::parse(val.get<std::string>());
            for (std::size_t m = 0; m < n; ++m) f.values[m] = e.eval(f.x_at(m));
        } else {
            std::vector<double> re = val.value("re", std::vector<double>{});
            std::vector<double> im = val.value("im", std::vector<double>{});
            if (re.size() != n || (!im.empty() && im.size() != n))
                throw std::invalid_argument("sample arrays must match the grid size");
            for (std::size_t m = 0; m < n; ++m)
                f.values[m] = {re[m], im.empty() ? 0.0 : im[m]};
        }
        out[name] = std::move(f);
    }
    return out;
}

}  // namespace dispersym
