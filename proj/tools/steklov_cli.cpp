#include "steklov/steklov.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

enum class Kind { Int, Real, Text, Bool, IntList, RealList, Atoms };

struct Key {
    const char* name;
    Kind kind;
    const char* help;
};

struct Sub {
    const char* name;
    const char* help;
    const char* columns;
    std::vector<Key> keys;
};

const Key k_source{"source", Kind::Text, "measure source: lebesgue | atomic | small-delta | decoupling"};
const Key k_grid{"grid", Kind::Int, "grid size (power of two); 0 picks the default"};
const Key k_delta{"delta", Kind::Real, "Steklov constant"};
const Key k_atoms{"atoms", Kind::Atoms, "atoms as angle:mass,angle:mass,..."};
const Key k_n{"n", Kind::Int, "order"};
const Key k_nlist{"n", Kind::IntList, "orders, comma separated"};
const Key k_m{"m", Kind::Real, "atom mass"};
const Key k_alpha{"alpha", Kind::Real, "exponent alpha in (1/2, 1)"};
const Key k_rho{"rho", Kind::Real, "pole weight rho"};
const Key k_delta1{"delta1", Kind::Real, "proportion delta1 (m = floor(delta1 n))"};
const Key k_seed{"seed", Kind::Int, "random seed"};
const Key k_stamp{"stamp", Kind::Bool, "add a wallclock column"};

const std::vector<Sub>& subs()
{
    static const std::vector<Sub> s{
        {"moments", "Trigonometric moments s_j of a measure", "j,re,im",
         {{"order", Kind::Int, "highest moment"}, k_source, k_grid, k_delta, k_atoms, k_n, k_m, k_alpha, k_rho,
          k_delta1}},
        {"verblunsky", "Verblunsky coefficients by the Levinson recursion", "k,re,im,abs,rho",
         {{"order", Kind::Int, "number of coefficients"}, k_source, k_grid, k_delta, k_atoms, k_n, k_m, k_alpha,
          k_rho, k_delta1}},
        {"small-delta", "Point-mass construction with delta/(2 pi) background",
         "n,delta,m,phi_at_1,pipeline_phi_at_1,bound_sqrt,ratio,Phi_at_1,norm_sq,orthogonality_residual",
         {k_n, k_delta, {"m", Kind::RealList, "atom masses, comma separated"}, k_grid}},
        {"decouple", "Decoupling construction and its condition report",
         "n,m,growth_ratio,f1_minus_2Q1,min_re_f,min_re_f_over_Q,normalization_integral,C_n,C_tilde,zero_free,"
         "min_root_modulus,norma_residual,norka_residual,mean_value_residual,c5,c5_argmax_scaled,"
         "cancellation_residual,schur_remainder",
         {k_nlist, k_alpha, k_rho, k_delta1, k_grid, {"C1", Kind::Real, "constant for condition 5 (0: report only)"},
          {"quadrature", Kind::Bool, "adaptive check of the normalization integral"}}},
        {"assemble", "Assembled Steklov density of the decoupling construction",
         "n,tail_order,tail_energy,delta_realized,path_agreement,mass_grid,mass_adaptive,mass_error,peaks,"
         "evaluations,outer_consistency,steklov_equivalence,phi_at_1,bound_sqrt,cd_average_max,round_trip",
         {k_nlist, k_alpha, k_rho, k_delta1, k_grid, {"tail_order", Kind::Int, "tail order (0: automatic)"},
          {"tail_tol", Kind::Real, "tail energy threshold"}, {"path_b", Kind::Bool, "compare against the Bernstein-Szego path"},
          {"round_trip", Kind::Bool, "recover the coefficients from the density"},
          {"samples", Kind::Int, "density samples in the JSON bundle"},
          {"cd_check", Kind::Bool, "check the averaged Christoffel-Darboux bound"}}},
        {"bounds", "|phi_n(1)| against the two upper bounds",
         "n,delta,achieved,bound_sqrt,bound_l1,achieved_over_bound_sqrt[,wallclock]",
         {{"construction", Kind::Text, "lebesgue | atomic | small-delta | decoupling"}, k_n, k_delta, k_m, k_atoms,
          k_grid, k_alpha, k_rho, k_delta1, k_stamp}},
        {"search", "Multi-start search over delta/(2 pi) plus atoms",
         "n,delta,achieved,bound_sqrt,bound_l1,evaluations,budget_exhausted,max_bound_ratio[,wallclock]",
         {k_n, k_delta, {"budget", Kind::Int, "objective evaluations"}, {"starts", Kind::Int, "random starts"},
          {"atoms", Kind::Int, "atom count (0: n)"}, k_seed, {"angle_samples", Kind::Int, "line search samples"},
          k_stamp}},
        {"localize", "Localization inequality on agreeing weight pairs",
         "trial,n,eps,lhs,rhs,tail_integral,slack,holds",
         {{"mode", Kind::Text, "random | peak"}, k_grid, {"trials", Kind::Int, "random pairs"},
          {"n", Kind::Int, "order (largest order in random mode)"}, k_seed, k_delta,
          {"width", Kind::Real, "peak width"}, {"eps", Kind::RealList, "agreement radii (peak mode)"}}},
        {"iterate", "Iterated perturbation with growth at several orders",
         "step,j,k,phi_abs,threshold,eps,tau,delta0,norm_p,floor,floor_required,deviation_p",
         {k_delta, {"beta", Kind::RealList, "thresholds beta_k; the last one extends"},
          {"K", Kind::Int, "steps (at most 4)"}, {"p", Kind::Real, "L^p exponent"},
          {"C_tilde", Kind::Real, "norm ceiling"}, k_grid, {"orders", Kind::IntList, "candidate orders"},
          {"eps_halvings", Kind::Int, "eps search depth"}, k_alpha, k_rho, k_delta1}},
        {"real-line", "Orthonormal polynomials on [-1, 1] at x = 0 from a symmetric circle measure",
         "k,P_k_at_0 | n,k,P_k_at_0,ratio,phi_circle,line_floor,gamma_imag_max",
         {{"source", Kind::Text, "lebesgue | decoupling"}, {"k", Kind::Int, "highest line order"}, k_grid, k_nlist,
          k_alpha, k_rho, k_delta1}},
        {"entropy", "Polynomial entropy and its logarithmic fit", "n,omega,sup_phi,norm_sq,trivial_bound,evaluations",
         {{"source", Kind::Text, "decoupling | lebesgue"}, k_nlist, k_grid, k_alpha, k_rho, k_delta1}},
        {"appendix-checks", "Bounded-ratio, tail, phase and root-location checks",
         "check,kind,parameter,low,high,bound_low,bound_high,passed",
         {{"orders", Kind::IntList, "orders"}, {"theta_min", Kind::Real, "smallest angle"},
          {"upsilon", Kind::Real, "largest angle"}, {"theta_samples", Kind::Int, "angles per order"},
          {"tail_n", Kind::Int, "order of the tail check"}, {"phase_m", Kind::IntList, "orders of the phase check"},
          {"noli_instances", Kind::Int, "random root-location instances"}, k_seed}},
    };
    return s;
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty())
            out.push_back(item);
    return out;
}

double to_real(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw UsageError("--" + key + ": not a number: " + v);
    }
}

json to_integer(const std::string& key, const std::string& v)
{
    const double d = to_real(key, v);
    if (d != static_cast<double>(static_cast<long long>(d)))
        throw UsageError("--" + key + ": not an integer: " + v);
    return static_cast<long long>(d);
}

json convert(const Key& k, const std::string& v)
{
    switch (k.kind) {
    case Kind::Int:
        return to_integer(k.name, v);
    case Kind::Real:
        return to_real(k.name, v);
    case Kind::Text:
        return v;
    case Kind::Bool:
        if (v == "true" || v == "1" || v == "yes")
            return true;
        if (v == "false" || v == "0" || v == "no")
            return false;
        throw UsageError(std::string("--") + k.name + ": expected true or false");
    case Kind::IntList: {
        json a = json::array();
        for (const auto& x : split(v, ','))
            a.push_back(to_integer(k.name, x));
        return a;
    }
    case Kind::RealList: {
        json a = json::array();
        for (const auto& x : split(v, ','))
            a.push_back(to_real(k.name, x));
        return a;
    }
    case Kind::Atoms: {
        json a = json::array();
        for (const auto& x : split(v, ',')) {
            const auto pr = split(x, ':');
            if (pr.size() != 2)
                throw UsageError("--atoms: expected angle:mass pairs");
            a.push_back({to_real("atoms", pr[0]), to_real("atoms", pr[1])});
        }
        return a;
    }
    }
    return nullptr;
}

std::string flag_of(const char* key)
{
    std::string f = key;
    for (auto& c : f)
        if (c == '_')
            c = '-';
    return "--" + f;
}

std::string cell(const json& v)
{
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
    }
    if (v.is_null())
        return "";
    return v.dump();
}

std::string timestamp()
{
    const std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_csv(std::ostream& os, const json& report, bool stamp)
{
    os << "# steklov " << steklov_version() << " " << report.at("command").get<std::string>() << "\n";
    os << "# config " << report.at("config").dump() << "\n";
    if (stamp)
        os << "# stamp " << timestamp() << "\n";
    const auto& cols = report.at("columns");
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i].get<std::string>();
    os << "\n";
    for (const auto& row : report.at("rows")) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << cell(row[i]);
        os << "\n";
    }
}

json read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("config file is not JSON: " + std::string(e.what()));
    }
    if (!j.is_object())
        throw UsageError("config file must hold a JSON object");
    return j;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Orthogonal polynomials on the unit circle in the Steklov class: experiment driver"};
    app.require_subcommand(1);
    app.fallthrough();
    app.footer("Exit codes: 0 ok, 1 failed assertion or numerical failure, 2 usage error.\n"
               "STEKLOV_GRID sets the smallest default grid size.");

    std::string config_path, out_path, json_path;
    bool stamp = false;
    app.add_option("--config", config_path, "JSON file with parameters; flags override it");
    app.add_option("-o,--out", out_path, "CSV output (default: stdout)");
    app.add_option("--json", json_path, "full JSON report");
    app.add_flag("--stamp", stamp, "timestamp in headers and wallclock columns");

    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, bool> lebesgue;
    std::map<std::string, CLI::App*> apps;
    for (const auto& s : subs()) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->footer(std::string("CSV columns: ") + s.columns);
        apps[s.name] = sub;
        for (const auto& k : s.keys) {
            auto* opt = sub->add_option(flag_of(k.name), values[s.name][k.name], k.help);
            if (k.kind == Kind::Bool)
                opt->expected(0, 1)->default_str("true");
        }
        if (std::string(s.name) == "moments" || std::string(s.name) == "verblunsky")
            sub->add_flag("--lebesgue", lebesgue[s.name], "shorthand for --source lebesgue");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const Sub* chosen = nullptr;
    for (const auto& s : subs())
        if (apps[s.name]->parsed())
            chosen = &s;

    json config = json::object();
    try {
        if (!config_path.empty()) {
            config = read_config(config_path);
            if (config.contains("command")) {
                if (config["command"] != chosen->name)
                    throw UsageError("config file is for command " + config["command"].dump());
                config.erase("command");
            }
        }
        CLI::App* sub = apps[chosen->name];
        for (const auto& k : chosen->keys) {
            auto* opt = sub->get_option(flag_of(k.name));
            if (opt->count() == 0)
                continue;
            const std::string v = values[chosen->name][k.name];
            config[k.name] = convert(k, k.kind == Kind::Bool && v.empty() ? "true" : v);
        }
        if (lebesgue[chosen->name])
            config["source"] = "lebesgue";
        if (stamp && (std::string(chosen->name) == "bounds" || std::string(chosen->name) == "search"))
            config["stamp"] = true;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    char* raw = nullptr;
    const std::string cfg = config.dump();
    const int status = steklov_run(chosen->name, cfg.c_str(), &raw);
    if (status != STEKLOV_OK) {
        std::cerr << chosen->name << ": " << steklov_last_error() << "\n";
        return status == STEKLOV_INVALID_ARGUMENT ? 2 : 1;
    }
    json report = json::parse(raw);
    steklov_string_free(raw);

    if (out_path.empty()) {
        write_csv(std::cout, report, stamp);
    } else {
        std::ofstream os(out_path);
        if (!os) {
            std::cerr << "cannot write " << out_path << "\n";
            return 1;
        }
        write_csv(os, report, stamp);
    }
    if (!json_path.empty()) {
        if (stamp)
            report["stamp"] = timestamp();
        std::ofstream os(json_path);
        if (!os) {
            std::cerr << "cannot write " << json_path << "\n";
            return 1;
        }
        os << report.dump(2) << "\n";
    }
    bool ok = report.at("passed").get<bool>();
    for (const auto& a : report.at("assertions"))
        if (!a.at("passed").get<bool>())
            std::cerr << "assertion failed: " << a.at("name").get<std::string>() << " "
                      << a.at("detail").get<std::string>() << "\n";
    return ok ? 0 : 1;
}
