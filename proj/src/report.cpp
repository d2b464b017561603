#include "steklov/report.hpp"

#include "steklov/fft.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace steklov {

json to_json(const Poly& p)
{
    json a = json::array();
    for (const auto& c : p.c)
        a.push_back({c.real(), c.imag()});
    return a;
}

json to_json(const Verblunsky& g)
{
    json a = json::array();
    for (const auto& c : g.gamma)
        a.push_back({c.real(), c.imag()});
    return a;
}

json to_json(const Measure& mu, bool with_density)
{
    json j;
    j["grid"] = mu.grid_size();
    j["total_mass"] = mu.total_mass;
    j["min_density"] = mu.min_density();
    if (with_density)
        j["density"] = mu.density;
    json atoms = json::array();
    for (const auto& a : mu.atoms)
        atoms.push_back({a.angle, a.mass});
    j["atoms"] = atoms;
    return j;
}

json to_json(const TaylorPoly& t)
{
    return {{"kind", t.kind == TaylorKind::A ? "A" : "B"}, {"beta", t.beta}, {"n", t.n}, {"coeffs", t.coeffs},
            {"tail", t.tail}};
}

json to_json(const TrigPolynomial& t)
{
    json a = json::array();
    for (const auto& c : t.c)
        a.push_back({c.real(), c.imag()});
    return {{"d", t.d}, {"real_valued", t.real_valued}, {"coeffs", a}};
}

json to_json(const ConditionReport& r)
{
    return {{"zero_free", r.zero_free},
            {"zero_method", r.zero_method},
            {"min_root_modulus", r.min_root_modulus},
            {"zero_count_resolved", r.zero_count_resolved},
            {"norma_residual", r.norma_residual},
            {"norma_quadrature", r.norma_quadrature},
            {"norma_evaluations", r.norma_evaluations},
            {"growth_ratio", r.growth_ratio},
            {"min_re_F", r.min_re_F},
            {"norka_residual", r.norka_residual},
            {"mean_value_residual", r.mean_value_residual},
            {"c5", r.c5},
            {"c5_argmax", r.c5_argmax},
            {"c5_argmax_scaled", r.c5_argmax_scaled},
            {"C1", r.C1},
            {"c5_within_C1", r.c5_within_C1},
            {"cancellation_residual", r.cancellation_residual}};
}

json to_json(const BoundReport& r)
{
    return {{"n", r.n},
            {"delta", r.delta},
            {"achieved", r.achieved},
            {"bound_sqrt", r.bound_sqrt},
            {"bound_l1", r.bound_l1}};
}

json to_json(const AtomicSteklovMeasure& mu)
{
    json atoms = json::array();
    for (const auto& a : mu.atoms)
        atoms.push_back({a.angle, a.mass});
    return {{"delta", mu.delta}, {"atoms", atoms}};
}

namespace {

CVec cvec_from_json(const json& j)
{
    CVec v;
    try {
        for (const auto& e : j) {
            if (e.is_number())
                v.emplace_back(e.get<double>(), 0.0);
            else
                v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
        }
    } catch (const json::exception& ex) {
        throw Error(Status::invalid_argument, std::string("malformed coefficient list: ") + ex.what());
    }
    return v;
}

} // namespace

Poly poly_from_json(const json& j) { return Poly(cvec_from_json(j)); }

Verblunsky verblunsky_from_json(const json& j) { return Verblunsky(cvec_from_json(j)); }

Measure measure_from_json(const json& j)
{
    try {
        RVec w = j.contains("density") ? j.at("density").get<RVec>() : RVec{};
        std::vector<Atom> atoms;
        if (j.contains("atoms"))
            for (const auto& a : j.at("atoms"))
                atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
        Measure mu = Measure::from_density(std::move(w), std::move(atoms));
        mu.validate();
        return mu;
    } catch (const json::exception& ex) {
        throw Error(Status::invalid_argument, std::string("malformed measure: ") + ex.what());
    }
}

json construction_bundle(const DecouplingConstruction& c, const ConditionReport* cond, const AssembledMeasure* am)
{
    json j;
    j["parameters"] = {{"n", c.params.n},
                       {"alpha", c.params.alpha},
                       {"rho", c.params.rho},
                       {"delta1", c.params.delta1},
                       {"grid", c.grid},
                       {"m", c.m},
                       {"eps", c.eps}};
    j["A"] = to_json(c.A);
    j["B"] = to_json(c.B);
    j["Q"] = to_json(c.Q);
    j["P"] = to_json(c.P);
    j["f"] = to_json(c.f);
    j["gamma"] = to_json(c.gamma);
    j["C_n"] = c.C_n;
    j["C_tilde"] = c.C_tilde;
    j["normalization_integral"] = c.normalization_integral;
    j["schur_remainder"] = c.schur_remainder;
    j["factorization"] = {{"method", c.factorization.method},
                          {"residual", c.factorization.residual},
                          {"truncation_error", c.factorization.truncation_error},
                          {"grid", c.factorization.grid}};
    j["min_re_f"] = c.min_re_f;
    j["argmin_re_f"] = c.argmin_re_f;
    j["min_re_f_over_Q"] = c.min_re_f_over_Q;
    j["argmin_re_f_over_Q"] = c.argmin_re_f_over_Q;
    j["growth_ratio"] = c.growth_ratio;
    if (cond)
        j["conditions"] = to_json(*cond);
    if (am) {
        j["assembled"] = {{"tail_order", am->tail_order},
                          {"tail_energy", am->tail_energy},
                          {"delta_realized", am->delta_realized},
                          {"path_agreement", am->path_agreement},
                          {"mass_adaptive", am->mass_adaptive},
                          {"mass_error", am->mass_error},
                          {"steklov_equivalence", am->steklov_equivalence},
                          {"gamma_full", to_json(am->gamma_full)}};
    }
    return j;
}

namespace {

// Reads typed parameters with defaults, echoes the resolved values, rejects unknown keys.
class Params {
public:
    explicit Params(const json& cfg) : cfg_(cfg.is_null() ? json::object() : cfg)
    {
        if (!cfg_.is_object())
            throw Error(Status::invalid_argument, "configuration must be a JSON object");
    }

    template <class T>
    T get(const std::string& key, T def)
    {
        used_.insert(key);
        T v = def;
        if (cfg_.contains(key)) {
            const json& x = cfg_.at(key);
            if constexpr (std::is_same_v<T, bool>) {
                if (!x.is_boolean())
                    throw type_error(key);
            } else if constexpr (std::is_arithmetic_v<T>) {
                if (!x.is_number())
                    throw type_error(key);
                if constexpr (std::is_integral_v<T>)
                    if (x.is_number_float() && std::floor(x.get<double>()) != x.get<double>())
                        throw type_error(key);
                if constexpr (std::is_unsigned_v<T>)
                    if (x.get<double>() < 0.0)
                        throw type_error(key);
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!x.is_string())
                    throw type_error(key);
            }
            try {
                if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>)
                    v = static_cast<T>(x.get<double>());
                else
                    v = x.get<T>();
            } catch (const json::exception&) {
                throw type_error(key);
            }
        }
        echo_[key] = v;
        return v;
    }

    // a scalar is accepted as a one-element list
    template <class T>
    std::vector<T> list(const std::string& key, std::vector<T> def)
    {
        used_.insert(key);
        std::vector<T> v = def;
        if (cfg_.contains(key)) {
            const json& x = cfg_.at(key);
            try {
                if (x.is_number()) {
                    v = {static_cast<T>(x.get<double>())};
                } else if (x.is_array()) {
                    v.clear();
                    for (const auto& e : x) {
                        if (!e.is_number())
                            throw type_error(key);
                        if constexpr (std::is_integral_v<T>)
                            if (std::floor(e.get<double>()) != e.get<double>())
                                throw type_error(key);
                        v.push_back(static_cast<T>(e.get<double>()));
                    }
                } else {
                    throw type_error(key);
                }
            } catch (const json::exception&) {
                throw type_error(key);
            }
        }
        echo_[key] = v;
        return v;
    }

    json raw(const std::string& key, json def)
    {
        used_.insert(key);
        json v = cfg_.contains(key) ? cfg_.at(key) : def;
        echo_[key] = v;
        return v;
    }

    void finish() const
    {
        for (const auto& item : cfg_.items())
            if (!used_.count(item.key()))
                throw Error(Status::invalid_argument, "unknown parameter '" + item.key() + "'");
    }

    void set(const std::string& key, json v) { echo_[key] = std::move(v); }
    const json& echo() const { return echo_; }

private:
    static Error type_error(const std::string& key)
    {
        return Error(Status::invalid_argument, "parameter '" + key + "' has the wrong type");
    }

    json cfg_;
    json echo_ = json::object();
    std::set<std::string> used_;
};

class Result {
public:
    explicit Result(std::string command) { j_["command"] = std::move(command); }

    void columns(std::vector<std::string> c) { j_["columns"] = std::move(c); }
    void row(json r) { rows_.push_back(std::move(r)); }
    void check(const std::string& name, bool ok, const std::string& detail = {})
    {
        checks_.push_back({{"name", name}, {"passed", ok}, {"detail", detail}});
        passed_ = passed_ && ok;
    }
    json& bundle() { return bundle_; }

    json finish(const Params& p)
    {
        j_["config"] = p.echo();
        j_["rows"] = rows_;
        j_["bundle"] = bundle_;
        j_["assertions"] = checks_;
        j_["passed"] = passed_;
        return std::move(j_);
    }

private:
    json j_ = json::object();
    json rows_ = json::array();
    json checks_ = json::array();
    json bundle_ = json::object();
    bool passed_ = true;
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

DecouplingParams decoupling_params(Params& p, int n)
{
    DecouplingParams d;
    d.n = n;
    d.alpha = p.get("alpha", d.alpha);
    d.rho = p.get("rho", d.rho);
    d.delta1 = p.get("delta1", d.delta1);
    d.grid = p.get<std::size_t>("grid", 0);
    return d;
}

std::vector<Atom> atoms_from(const json& a)
{
    std::vector<Atom> out;
    if (!a.is_array())
        throw Error(Status::invalid_argument, "parameter 'atoms' must be a list of [angle, mass] pairs");
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw Error(Status::invalid_argument, "parameter 'atoms' must be a list of [angle, mass] pairs");
        out.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return out;
}

struct Source {
    Measure mu;
    double delta = 1.0;
    std::string label;
};

// lebesgue | atomic | small-delta | decoupling
Source measure_source(Params& p, int order)
{
    const std::string kind = p.get<std::string>("source", "lebesgue");
    Source s;
    s.label = kind;
    if (kind == "lebesgue") {
        std::size_t G = p.get<std::size_t>("grid", 0);
        if (!G)
            G = default_grid_size(static_cast<std::size_t>(order));
        s.mu = Measure::lebesgue(G);
        s.delta = 1.0;
    } else if (kind == "atomic") {
        AtomicSteklovMeasure a;
        a.delta = p.get("delta", 0.5);
        a.atoms = atoms_from(p.raw("atoms", json::array()));
        a.validate(1e-9);
        std::size_t G = p.get<std::size_t>("grid", 0);
        if (!G)
            G = default_grid_size(static_cast<std::size_t>(order));
        s.mu = a.to_measure(G);
        s.delta = a.delta;
    } else if (kind == "small-delta") {
        const int n = p.get("n", 10);
        const double delta = p.get("delta", 0.1);
        const double m = p.get("m", 1e6);
        s.mu = build_small_delta(n, delta, m, p.get<std::size_t>("grid", 0)).sigma;
        s.delta = delta;
    } else if (kind == "decoupling") {
        const DecouplingConstruction c = build_decoupling(decoupling_params(p, p.get("n", 256)));
        AssembleOptions ao;
        ao.path_b = false;
        const AssembledMeasure am = assemble_measure(c, ao);
        s.mu = am.measure();
        s.delta = am.delta_realized;
    } else {
        throw Error(Status::invalid_argument, "unknown source '" + kind + "'");
    }
    return s;
}

json cmd_moments(Params& p)
{
    Result r("moments");
    const int N = p.get("order", 3);
    if (N < 0)
        throw Error(Status::invalid_argument, "order must be nonnegative");
    const Source src = measure_source(p, N);
    const MomentSequence s = compute_moments(src.mu, N);
    r.columns({"j", "re", "im"});
    for (int j = 0; j <= N; ++j)
        r.row({j, s.s[j].real(), s.s[j].imag()});
    r.check("s0_real_positive", s.s[0].real() > 0.0 && s.s[0].imag() == 0.0);
    r.check("s0_equals_mass", std::abs(s.s[0].real() - src.mu.total_mass) <= 1e-12 * src.mu.total_mass);
    return r.finish(p);
}

json cmd_verblunsky(Params& p)
{
    Result r("verblunsky");
    const int N = p.get("order", 8);
    if (N < 1)
        throw Error(Status::invalid_argument, "order must be positive");
    const Source src = measure_source(p, N);
    const Verblunsky g = verblunsky_from_moments(compute_moments(src.mu, N));
    r.columns({"k", "re", "im", "abs", "rho"});
    bool inside = true;
    for (int k = 0; k < N; ++k) {
        const double a = std::abs(g.gamma[k]);
        inside = inside && a < 1.0;
        r.row({k, g.gamma[k].real(), g.gamma[k].imag(), a, std::sqrt(std::max(0.0, 1.0 - a * a))});
    }
    r.check("inside_unit_disk", inside);
    return r.finish(p);
}

json cmd_small_delta(Params& p)
{
    Result r("small-delta");
    const int n = p.get("n", 10);
    const double delta = p.get("delta", 0.1);
    const RVec ms = p.list<double>("m", {1e1, 1e2, 1e3, 1e4, 1e5, 1e6});
    const std::size_t G = p.get<std::size_t>("grid", 0);
    r.columns({"n", "delta", "m", "phi_at_1", "pipeline_phi_at_1", "bound_sqrt", "ratio", "Phi_at_1", "norm_sq",
               "orthogonality_residual"});
    double prev = -1.0;
    bool monotone = true, ortho = true, below = true, agree = true;
    for (double m : ms) {
        const SmallDeltaConstruction c = build_small_delta(n, delta, m, G);
        const MomentSequence s = compute_moments(c.sigma, n);
        const double pipe = phi_at_one(s, n) / std::sqrt(s.s[0].real());
        const double bs = bound_sqrt(n, delta);
        r.row({n, delta, m, c.phi_at_1, pipe, bs, c.phi_at_1 / bs, c.Phi_at_1, c.norm_sq, c.orthogonality_residual});
        monotone = monotone && c.phi_at_1 > prev;
        prev = c.phi_at_1;
        ortho = ortho && c.orthogonality_residual <= 1e-8;
        below = below && c.phi_at_1 <= bs * (1.0 + 1e-6);
        agree = agree && std::abs(pipe - c.phi_at_1) <= 1e-6 * c.phi_at_1;
    }
    r.check("orthogonality", ortho);
    r.check("below_bound_sqrt", below);
    r.check("closed_form_matches_pipeline", agree);
    if (std::is_sorted(ms.begin(), ms.end()))
        r.check("monotone_in_m", monotone);
    return r.finish(p);
}

json cmd_decouple(Params& p)
{
    Result r("decouple");
    const std::vector<int> ns = p.list<int>("n", {256});
    const double C1 = p.get("C1", 0.0);
    const bool quad = p.get("quadrature", true);
    r.columns({"n", "m", "growth_ratio", "f1_minus_2Q1", "min_re_f", "min_re_f_over_Q", "normalization_integral",
               "C_n", "C_tilde", "zero_free", "min_root_modulus", "norma_residual", "norka_residual",
               "mean_value_residual", "c5", "c5_argmax_scaled", "cancellation_residual", "schur_remainder"});
    json list = json::array();
    for (int n : ns) {
        const DecouplingConstruction c = build_decoupling(decoupling_params(p, n));
        const ConditionReport cr = check_decoupling_conditions(c, C1, quad);
        r.row({n, c.m, c.growth_ratio, c.f1_minus_2Q1, c.min_re_f, c.min_re_f_over_Q, c.normalization_integral, c.C_n,
               c.C_tilde, cr.zero_free, cr.min_root_modulus, cr.norma_residual, cr.norka_residual,
               cr.mean_value_residual, cr.c5, cr.c5_argmax_scaled, cr.cancellation_residual, c.schur_remainder});
        const std::string tag = "n=" + std::to_string(n);
        r.check("zero_free_closed_disk " + tag, cr.zero_free, cr.zero_method);
        r.check("re_f_over_Q_positive " + tag, c.min_re_f_over_Q > 0.0, fmt(c.min_re_f_over_Q));
        if (quad)
            r.check("norma " + tag, cr.norma_residual <= 1e-8, fmt(cr.norma_residual));
        r.check("norka " + tag, cr.norka_residual <= 1e-9, fmt(cr.norka_residual));
        r.check("mean_value " + tag, cr.mean_value_residual <= 1e-9, fmt(cr.mean_value_residual));
        r.check("cancellation " + tag, cr.cancellation_residual <= 1e-12, fmt(cr.cancellation_residual));
        r.check("f1_equals_2Q1 " + tag, c.f1_minus_2Q1 <= 1e-12 * std::abs(c.Q(1.0)), fmt(c.f1_minus_2Q1));
        if (C1 > 0.0)
            r.check("condition5_within_C1 " + tag, cr.c5_within_C1, fmt(cr.c5));
        list.push_back(construction_bundle(c, &cr));
    }
    r.bundle()["constructions"] = list;
    return r.finish(p);
}

json cmd_assemble(Params& p)
{
    Result r("assemble");
    const std::vector<int> ns = p.list<int>("n", {256});
    AssembleOptions ao;
    ao.tail_order = p.get("tail_order", 0);
    ao.tail_tol = p.get("tail_tol", ao.tail_tol);
    ao.path_b = p.get("path_b", true);
    ao.round_trip = p.get("round_trip", false);
    const int samples = p.get("samples", 0);
    const bool cd = p.get("cd_check", true);
    r.columns({"n", "tail_order", "tail_energy", "delta_realized", "path_agreement", "mass_grid", "mass_adaptive",
               "mass_error", "peaks", "evaluations", "outer_consistency", "steklov_equivalence", "phi_at_1",
               "bound_sqrt", "cd_average_max", "round_trip"});
    json list = json::array();
    for (int n : ns) {
        const DecouplingConstruction c = build_decoupling(decoupling_params(p, n));
        const AssembledMeasure am = assemble_measure(c, ao);
        const double phi1 = std::abs(c.phi_star(1.0));
        const double bs = bound_sqrt(n, am.delta_realized);
        double cdmax = -1.0;
        if (cd) {
            const RVec K = christoffel_diagonal_on_grid(am.gamma_full, n, std::size_t(1) << 14);
            cdmax = *std::max_element(K.begin(), K.end()) / (n + 1.0);
        }
        r.row({n, am.tail_order, am.tail_energy, am.delta_realized, am.path_agreement, am.mass_grid, am.mass_adaptive,
               am.mass_error, am.peaks, am.evaluations, am.outer_consistency, am.steklov_equivalence, phi1, bs, cdmax,
               am.round_trip});
        const std::string tag = "n=" + std::to_string(n);
        r.check("unit_mass " + tag, std::abs(am.mass_adaptive - 1.0) <= 1e-8, fmt(am.mass_adaptive));
        r.check("positive_density " + tag, am.delta_realized > 0.0, fmt(am.delta_realized));
        if (ao.path_b)
            r.check("paths_agree " + tag, am.path_agreement <= 1e-5, fmt(am.path_agreement));
        r.check("below_bound_sqrt " + tag, phi1 <= bs * (1.0 + 1e-6));
        r.check("steklov_equivalence " + tag, am.steklov_equivalence <= 1.0 + 1e-6, fmt(am.steklov_equivalence));
        if (cd)
            r.check("cd_average " + tag, cdmax <= 1.0 / am.delta_realized + 1e-6, fmt(cdmax));
        if (ao.round_trip)
            r.check("round_trip " + tag, am.round_trip <= 1e-7, fmt(am.round_trip));
        json b = construction_bundle(c, nullptr, &am);
        if (samples > 0) {
            const std::size_t G = am.sigma_prime.size();
            const std::size_t stride = std::max<std::size_t>(1, G / static_cast<std::size_t>(samples));
            json th = json::array(), v = json::array();
            for (std::size_t k = 0; k < G; k += stride) {
                th.push_back(am.sigma_prime.theta(k));
                v.push_back(am.sigma_prime.values[k].real());
            }
            b["sigma_prime"] = {{"theta", th}, {"value", v}};
        }
        list.push_back(b);
    }
    r.bundle()["constructions"] = list;
    return r.finish(p);
}

json cmd_bounds(Params& p)
{
    Result r("bounds");
    const std::string kind = p.get<std::string>("construction", "small-delta");
    const bool stamp = p.get("stamp", false);
    std::vector<std::string> cols{"n", "delta", "achieved", "bound_sqrt", "bound_l1", "achieved_over_bound_sqrt"};
    if (stamp)
        cols.push_back("wallclock");
    r.columns(cols);
    const auto t0 = std::chrono::steady_clock::now();
    BoundReport b;
    if (kind == "small-delta") {
        const int n = p.get("n", 10);
        const double delta = p.get("delta", 0.1);
        const double m = p.get("m", 1e6);
        const SmallDeltaConstruction c = build_small_delta(n, delta, m, p.get<std::size_t>("grid", 0));
        b.n = n;
        b.delta = delta;
        b.achieved = c.phi_at_1;
    } else if (kind == "atomic") {
        AtomicSteklovMeasure a;
        a.delta = p.get("delta", 0.5);
        a.atoms = atoms_from(p.raw("atoms", json::array()));
        a.validate(1e-9);
        b = evaluate_candidate(a, p.get("n", 10));
    } else if (kind == "lebesgue") {
        b = evaluate_candidate(AtomicSteklovMeasure{1.0, {}}, p.get("n", 10));
    } else if (kind == "decoupling") {
        const DecouplingConstruction c = build_decoupling(decoupling_params(p, p.get("n", 256)));
        AssembleOptions ao;
        ao.path_b = false;
        const AssembledMeasure am = assemble_measure(c, ao);
        b.n = c.params.n;
        b.delta = am.delta_realized;
        b.achieved = std::abs(c.phi_star(1.0));
    } else {
        throw Error(Status::invalid_argument, "unknown construction '" + kind + "'");
    }
    b.bound_sqrt = bound_sqrt(b.n, b.delta);
    b.bound_l1 = bound_l1(b.n, b.delta);
    json row{b.n, b.delta, b.achieved, b.bound_sqrt, b.bound_l1, b.achieved / b.bound_sqrt};
    if (stamp)
        row.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    r.row(row);
    r.check("within_bounds", b.within(1e-6), fmt(b.achieved / b.bound()));
    return r.finish(p);
}

json cmd_search(Params& p)
{
    Result r("search");
    const int n = p.get("n", 4);
    const double delta = p.get("delta", 0.5);
    SearchOptions o;
    o.budget = p.get("budget", o.budget);
    o.starts = p.get("starts", o.starts);
    o.atoms = p.get("atoms", o.atoms);
    o.seed = p.get("seed", o.seed);
    o.angle_samples = p.get("angle_samples", o.angle_samples);
    const bool stamp = p.get("stamp", false);
    std::vector<std::string> cols{"n", "delta", "achieved", "bound_sqrt", "bound_l1", "evaluations",
                                  "budget_exhausted", "max_bound_ratio"};
    if (stamp)
        cols.push_back("wallclock");
    r.columns(cols);
    const auto t0 = std::chrono::steady_clock::now();
    const SearchResult s = search_extremal(n, delta, o);
    json row{n, delta, s.report.achieved, s.report.bound_sqrt, s.report.bound_l1, s.evaluations, s.budget_exhausted,
             s.max_bound_ratio};
    if (stamp)
        row.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    r.row(row);
    r.bundle()["best"] = to_json(s.best);
    r.bundle()["local_maxima"] = s.local_maxima;
    r.check("within_bounds", s.max_bound_ratio <= 1.0 + 1e-6, fmt(s.max_bound_ratio));
    return r.finish(p);
}

json cmd_localize(Params& p)
{
    Result r("localize");
    const std::string mode = p.get<std::string>("mode", "random");
    const std::size_t G = p.get<std::size_t>("grid", std::size_t(1) << 12);
    r.columns({"trial", "n", "eps", "lhs", "rhs", "tail_integral", "slack", "holds"});
    bool all = true;
    if (mode == "random") {
        const int trials = p.get("trials", 100);
        const int nmax = p.get("n", 64);
        const std::uint64_t seed = p.get<std::uint64_t>("seed", 1);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> nd(1, nmax);
        std::uniform_real_distribution<double> ed(0.05, 1.0);
        for (int t = 0; t < trials; ++t) {
            const double eps = ed(rng);
            const WeightPair pair = random_agreeing_pair(rng, G, eps);
            const int n = nd(rng);
            const LocalizationReport lr = localization_bound(pair, n, eps);
            r.row({t, n, eps, lr.lhs, lr.rhs, lr.tail_integral, lr.slack, lr.holds});
            all = all && lr.holds;
        }
    } else if (mode == "peak") {
        const int n = p.get("n", 32);
        const double delta = p.get("delta", 0.1);
        const double width = p.get("width", 0.02);
        const RVec epss = p.list<double>("eps", {0.05, 0.1, 0.2, 0.4, 0.8});
        int t = 0;
        double prev_tail = std::numeric_limits<double>::infinity();
        bool shrinking = true;
        for (double eps : epss) {
            const LocalizationReport lr = localization_bound(peak_pair(G, delta, width, eps), n, eps);
            r.row({t++, n, eps, lr.lhs, lr.rhs, lr.tail_integral, lr.slack, lr.holds});
            all = all && lr.holds;
            shrinking = shrinking && lr.tail_integral <= prev_tail;
            prev_tail = lr.tail_integral;
        }
        r.bundle()["tail_monotone_in_eps"] = std::is_sorted(epss.begin(), epss.end()) && shrinking;
    } else {
        throw Error(Status::invalid_argument, "unknown mode '" + mode + "'");
    }
    r.check("localization_inequality", all);
    return r.finish(p);
}

json cmd_iterate(Params& p)
{
    Result r("iterate");
    const double delta = p.get("delta", 0.5);
    const RVec beta = p.list<double>("beta", {0.1});
    const int K = p.get("K", 3);
    IterationOptions o;
    o.p = p.get("p", o.p);
    o.C_tilde = p.get("C_tilde", o.C_tilde);
    o.grid = p.get("grid", o.grid);
    o.orders = p.list<int>("orders", o.orders);
    o.eps_halvings = p.get("eps_halvings", o.eps_halvings);
    o.donor.alpha = p.get("alpha", o.donor.alpha);
    o.donor.rho = p.get("rho", o.donor.rho);
    o.donor.delta1 = p.get("delta1", o.donor.delta1);
    const IterationResult res = iterate_growth(delta, beta, K, o);
    r.columns({"step", "j", "k", "phi_abs", "threshold", "eps", "tau", "delta0", "norm_p", "floor", "floor_required",
               "deviation_p"});
    for (std::size_t s = 0; s < res.steps.size(); ++s) {
        const IterationStep& st = res.steps[s];
        for (std::size_t j = 0; j < st.k.size(); ++j) {
            const int k = st.k[j];
            const double b = beta[std::min<std::size_t>(static_cast<std::size_t>(k) - 1, beta.size() - 1)];
            r.row({s + 1, j + 1, k, st.phi_abs[j], b * std::sqrt(static_cast<double>(k)), st.eps, st.tau, st.delta0,
                   st.norm_p, st.floor, st.floor_required, st.deviation_p});
        }
    }
    r.check("growth_verified", res.verified);
    return r.finish(p);
}

json cmd_real_line(Params& p)
{
    Result r("real-line");
    const std::string kind = p.get<std::string>("source", "lebesgue");
    if (kind == "lebesgue") {
        const int k = p.get("k", 10);
        std::size_t G = p.get<std::size_t>("grid", 0);
        if (!G)
            G = default_grid_size(2 * static_cast<std::size_t>(k));
        const LineTransplant lt = circle_to_line(Measure::lebesgue(G), k);
        r.columns({"k", "P_k_at_0"});
        bool parity = true;
        for (int j = 0; j <= k; ++j) {
            r.row({j, lt.P0_all[j]});
            if (j % 2 == 1)
                parity = parity && std::abs(lt.P0_all[j]) <= 1e-12;
        }
        r.check("odd_orders_vanish", parity);
        r.bundle()["line_floor"] = lt.line.floor;
        r.bundle()["line_mass"] = lt.line.mass;
    } else if (kind == "decoupling") {
        const std::vector<int> ns = p.list<int>("n", {32, 64, 128});
        r.columns({"n", "k", "P_k_at_0", "ratio", "phi_circle", "line_floor", "gamma_imag_max"});
        double cmin = std::numeric_limits<double>::infinity();
        for (int n : ns) {
            const DecouplingConstruction c = build_decoupling(decoupling_params(p, n));
            AssembleOptions ao;
            ao.path_b = false;
            ao.quadrature = false;
            const AssembledMeasure am = assemble_measure(c, ao);
            const SymmetricTransplant st = symmetric_transplant(c, am.delta_realized);
            r.row({n, st.k, st.P0, st.ratio, st.phi_circle, st.line_floor, st.gamma_imag_max});
            cmin = std::min(cmin, st.ratio);
        }
        r.bundle()["min_ratio"] = cmin;
        r.check("growth_constant_positive", cmin > 0.0, fmt(cmin));
    } else {
        throw Error(Status::invalid_argument, "unknown source '" + kind + "'");
    }
    return r.finish(p);
}

json cmd_entropy(Params& p)
{
    Result r("entropy");
    const std::string kind = p.get<std::string>("source", "decoupling");
    const std::vector<int> ns = p.list<int>("n", {64, 128, 256, 512, 1024});
    r.columns({"n", "omega", "sup_phi", "norm_sq", "trivial_bound", "evaluations"});
    RVec om;
    bool nonneg = true, below = true, unit = true;
    for (int n : ns) {
        EntropyEntry e;
        if (kind == "lebesgue") {
            std::size_t G = p.get<std::size_t>("grid", 0);
            if (!G)
                G = default_grid_size(static_cast<std::size_t>(n));
            e = polynomial_entropy(Measure::lebesgue(G), n);
        } else if (kind == "decoupling") {
            e = polynomial_entropy(build_decoupling(decoupling_params(p, n)));
        } else {
            throw Error(Status::invalid_argument, "unknown source '" + kind + "'");
        }
        const double triv = std::log(std::max(e.sup_phi, 1.0)) * e.norm_sq;
        r.row({n, e.omega, e.sup_phi, e.norm_sq, triv, e.evaluations});
        om.push_back(e.omega);
        nonneg = nonneg && e.omega >= 0.0;
        below = below && e.omega <= triv * (1.0 + 1e-9) + 1e-15;
        unit = unit && std::abs(e.norm_sq - 1.0) <= 1e-8;
    }
    r.check("nonnegative", nonneg);
    r.check("trivial_upper_bound", below);
    r.check("unit_norm", unit);
    if (kind == "lebesgue")
        r.check("lebesgue_zero", std::all_of(om.begin(), om.end(), [](double v) { return v == 0.0; }));
    if (kind == "decoupling" && ns.size() >= 3) {
        const EntropyFit f = fit_entropy(ns, om);
        r.bundle()["fit"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}};
        r.check("log_growth", f.slope > 0.0 && f.residual < 0.1, fmt(f.slope) + " " + fmt(f.residual));
    }
    return r.finish(p);
}

json cmd_appendix(Params& p)
{
    Result r("appendix-checks");
    AppendixOptions o;
    o.orders = p.list<int>("orders", o.orders);
    o.theta_min = p.get("theta_min", o.theta_min);
    o.upsilon = p.get("upsilon", o.upsilon);
    o.theta_samples = p.get("theta_samples", o.theta_samples);
    o.tail_n = p.get("tail_n", o.tail_n);
    o.phase_m = p.list<int>("phase_m", o.phase_m);
    o.noli_instances = p.get("noli_instances", o.noli_instances);
    o.seed = p.get("seed", o.seed);
    const AppendixReport a = appendix_checks(o);
    r.columns({"check", "kind", "parameter", "low", "high", "bound_low", "bound_high", "passed"});
    for (const auto& s : a.ratios) {
        const std::string k = s.kind == TaylorKind::A ? "A" : "B";
        r.row({"ratio", k, s.beta, s.min, s.max, s.c1, s.c2, s.passed});
        r.check("ratio " + k + " beta=" + fmt(s.beta), s.passed);
    }
    for (const auto& s : a.derivatives) {
        const std::string k = s.kind == TaylorKind::A ? "A" : "B";
        const double sup = *std::max_element(s.sup.begin(), s.sup.end());
        r.row({"derivative", k, s.beta, 0.0, sup, 0.0, s.C, s.passed});
        r.check("derivative " + k + " beta=" + fmt(s.beta), s.passed);
    }
    for (const auto& t : a.tails) {
        r.row({"tail", "A", t.beta, t.value, t.value, 0.9, 1.1, t.passed});
        r.check("tail beta=" + fmt(t.beta), t.passed);
    }
    r.row({"phase", "Q", o.phase_alpha, *std::min_element(a.phase.ratio.begin(), a.phase.ratio.end()),
           *std::max_element(a.phase.ratio.begin(), a.phase.ratio.end()), 0.0, o.phase_spread, a.phase.passed});
    r.check("phase_bound", a.phase.passed, fmt(a.phase.spread));
    r.row({"roots_on_circle", "D", a.noli.instances, 0.0, a.noli.max_deviation, 0.0, o.noli_tol, a.noli.passed});
    r.check("roots_on_circle", a.noli.passed, fmt(a.noli.max_deviation));
    r.row({"cosine_integral", "trifle", a.trifle.gammas.size(), a.trifle.min_value, a.trifle.min_value, 0.0, 0.0,
           a.trifle.passed});
    r.check("cosine_integral_positive", a.trifle.passed, fmt(a.trifle.min_value));
    return r.finish(p);
}

using Handler = std::function<json(Params&)>;

struct Command {
    Handler run;
    std::vector<std::string> keys;
};

const std::vector<std::string> source_keys{"source", "grid", "delta", "atoms", "n", "m", "alpha", "rho", "delta1"};

std::vector<std::string> with_source(std::vector<std::string> k)
{
    k.insert(k.end(), source_keys.begin(), source_keys.end());
    return k;
}

const std::map<std::string, Command>& commands()
{
    static const std::map<std::string, Command> h{
        {"moments", {cmd_moments, with_source({"order"})}},
        {"verblunsky", {cmd_verblunsky, with_source({"order"})}},
        {"small-delta", {cmd_small_delta, {"n", "delta", "m", "grid"}}},
        {"decouple", {cmd_decouple, {"n", "alpha", "rho", "delta1", "grid", "C1", "quadrature"}}},
        {"assemble",
         {cmd_assemble,
          {"n", "alpha", "rho", "delta1", "grid", "tail_order", "tail_tol", "path_b", "round_trip", "samples",
           "cd_check"}}},
        {"bounds",
         {cmd_bounds, {"construction", "n", "delta", "m", "atoms", "grid", "alpha", "rho", "delta1", "stamp"}}},
        {"search", {cmd_search, {"n", "delta", "budget", "starts", "atoms", "seed", "angle_samples", "stamp"}}},
        {"localize", {cmd_localize, {"mode", "grid", "trials", "n", "seed", "delta", "width", "eps"}}},
        {"iterate",
         {cmd_iterate,
          {"delta", "beta", "K", "p", "C_tilde", "grid", "orders", "eps_halvings", "alpha", "rho", "delta1"}}},
        {"real-line", {cmd_real_line, {"source", "k", "grid", "n", "alpha", "rho", "delta1"}}},
        {"entropy", {cmd_entropy, {"source", "n", "grid", "alpha", "rho", "delta1"}}},
        {"appendix-checks",
         {cmd_appendix,
          {"orders", "theta_min", "upsilon", "theta_samples", "tail_n", "phase_m", "noli_instances", "seed"}}},
    };
    return h;
}

} // namespace

const std::vector<std::string>& experiment_commands()
{
    static const std::vector<std::string> names{"moments", "verblunsky", "small-delta", "decouple",
                                                "assemble", "bounds", "search", "localize",
                                                "iterate", "real-line", "entropy", "appendix-checks"};
    return names;
}

json run_experiment(const std::string& command, const json& config)
{
    const auto& h = commands();
    auto it = h.find(command);
    if (it == h.end())
        throw Error(Status::invalid_argument, "unknown command '" + command + "'");
    if (config.is_object())
        for (const auto& item : config.items())
            if (std::find(it->second.keys.begin(), it->second.keys.end(), item.key()) == it->second.keys.end())
                throw Error(Status::invalid_argument, "unknown parameter '" + item.key() + "' for " + command);
    Params p(config);
    json out = it->second.run(p);
    p.finish();
    out["config"] = p.echo();
    return out;
}

} // namespace steklov
