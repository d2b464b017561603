#include "steklov/steklov.h"

#include "steklov/report.hpp"

#include <cstring>
#include <new>
#include <string>

struct steklov_measure {
    steklov::Measure mu;
};

struct steklov_construction {
    steklov::DecouplingConstruction c;
};

struct steklov_assembled {
    steklov::AssembledMeasure a;
};

namespace {

thread_local std::string last_error;

template <class F>
int guard(F&& f)
{
    try {
        f();
        last_error.clear();
        return STEKLOV_OK;
    } catch (const steklov::Error& e) {
        last_error = e.what();
        return static_cast<int>(e.code());
    } catch (const nlohmann::json::exception& e) {
        last_error = e.what();
        return STEKLOV_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return STEKLOV_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return STEKLOV_INTERNAL;
    }
}

void require(bool ok, const char* what)
{
    if (!ok)
        throw steklov::Error(steklov::Status::invalid_argument, what);
}

char* dup(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* steklov_version(void) { return "1.0.0"; }

const char* steklov_status_name(int status)
{
    if (status == STEKLOV_INTERNAL)
        return "internal";
    if (status < 0 || status > STEKLOV_IO)
        return "unknown";
    return steklov::status_name(static_cast<steklov::Status>(status));
}

const char* steklov_last_error(void) { return last_error.c_str(); }

void steklov_string_free(char* s) { std::free(s); }

int steklov_measure_lebesgue(size_t grid, steklov_measure** out)
{
    return guard([&] {
        require(out != nullptr, "null output");
        require(steklov::is_pow2(grid), "grid must be a power of two");
        *out = new steklov_measure{steklov::Measure::lebesgue(grid)};
    });
}

int steklov_measure_create(const double* density, size_t grid, const double* angles, const double* masses,
                           size_t atoms, steklov_measure** out)
{
    return guard([&] {
        require(out != nullptr, "null output");
        require(grid == 0 || density != nullptr, "null density");
        require(atoms == 0 || (angles != nullptr && masses != nullptr), "null atom arrays");
        steklov::RVec w(density, density + grid);
        std::vector<steklov::Atom> a;
        for (size_t i = 0; i < atoms; ++i) {
            require(i == 0 || angles[i] > angles[i - 1], "atom angles must be strictly increasing");
            a.push_back({angles[i], masses[i]});
        }
        steklov::Measure mu = steklov::Measure::from_density(std::move(w), std::move(a));
        mu.validate();
        *out = new steklov_measure{std::move(mu)};
    });
}

int steklov_measure_small_delta(int n, double delta, double m, size_t grid, steklov_measure** out)
{
    return guard([&] {
        require(out != nullptr, "null output");
        *out = new steklov_measure{steklov::build_small_delta(n, delta, m, grid).sigma};
    });
}

int steklov_measure_total_mass(const steklov_measure* mu, double* out)
{
    return guard([&] {
        require(mu && out, "null argument");
        *out = mu->mu.total_mass;
    });
}

void steklov_measure_free(steklov_measure* mu) { delete mu; }

int steklov_moments(const steklov_measure* mu, int order, double* re, double* im)
{
    return guard([&] {
        require(mu && re && im, "null argument");
        const steklov::MomentSequence s = steklov::compute_moments(mu->mu, order);
        for (int j = 0; j <= order; ++j) {
            re[j] = s.s[j].real();
            im[j] = s.s[j].imag();
        }
    });
}

int steklov_verblunsky(const double* s_re, const double* s_im, int order, double* g_re, double* g_im)
{
    return guard([&] {
        require(s_re && s_im && g_re && g_im, "null argument");
        require(order >= 1, "order must be positive");
        steklov::MomentSequence s;
        for (int j = 0; j <= order; ++j)
            s.s.emplace_back(s_re[j], s_im[j]);
        const steklov::Verblunsky g = steklov::verblunsky_from_moments(s);
        for (int k = 0; k < order; ++k) {
            g_re[k] = g.gamma[k].real();
            g_im[k] = g.gamma[k].imag();
        }
    });
}

int steklov_szego(const double* g_re, const double* g_im, int n, double* phi_re, double* phi_im, double* star_re,
                  double* star_im)
{
    return guard([&] {
        require(n >= 0, "negative order");
        require(n == 0 || (g_re && g_im), "null coefficients");
        require(phi_re && phi_im && star_re && star_im, "null output");
        steklov::Verblunsky g;
        for (int k = 0; k < n; ++k)
            g.gamma.emplace_back(g_re[k], g_im[k]);
        const steklov::PolyPair pp = steklov::szego_recurse(g, n);
        for (int j = 0; j <= n; ++j) {
            phi_re[j] = pp.p.coeff(j).real();
            phi_im[j] = pp.p.coeff(j).imag();
            star_re[j] = pp.p_star.coeff(j).real();
            star_im[j] = pp.p_star.coeff(j).imag();
        }
    });
}

int steklov_phi_at_one(const steklov_measure* mu, int n, double* out)
{
    return guard([&] {
        require(mu && out, "null argument");
        *out = steklov::phi_at_one(steklov::compute_moments(mu->mu, n), n);
    });
}

int steklov_bounds(int n, double delta, double* bound_sqrt, double* bound_l1)
{
    return guard([&] {
        require(bound_sqrt && bound_l1, "null output");
        require(n >= 0 && delta > 0.0 && delta <= 1.0, "need n >= 0 and delta in (0, 1]");
        *bound_sqrt = steklov::bound_sqrt(n, delta);
        *bound_l1 = steklov::bound_l1(n, delta);
    });
}

int steklov_decoupling_build(int n, double alpha, double rho, double delta1, size_t grid, steklov_construction** out)
{
    return guard([&] {
        require(out != nullptr, "null output");
        steklov::DecouplingParams p;
        p.n = n;
        p.alpha = alpha;
        p.rho = rho;
        p.delta1 = delta1;
        p.grid = grid;
        *out = new steklov_construction{steklov::build_decoupling(p)};
    });
}

int steklov_construction_growth(const steklov_construction* c, double* ratio)
{
    return guard([&] {
        require(c && ratio, "null argument");
        *ratio = c->c.growth_ratio;
    });
}

int steklov_construction_bundle(const steklov_construction* c, char** json)
{
    return guard([&] {
        require(c && json, "null argument");
        *json = dup(steklov::construction_bundle(c->c).dump());
    });
}

void steklov_construction_free(steklov_construction* c) { delete c; }

int steklov_assemble(const steklov_construction* c, int tail_order, int path_b, steklov_assembled** out)
{
    return guard([&] {
        require(c && out, "null argument");
        steklov::AssembleOptions o;
        o.tail_order = tail_order;
        o.path_b = path_b != 0;
        *out = new steklov_assembled{steklov::assemble_measure(c->c, o)};
    });
}

size_t steklov_assembled_grid(const steklov_assembled* a) { return a ? a->a.sigma_prime.size() : 0; }

int steklov_assembled_summary(const steklov_assembled* a, double* delta_realized, double* mass, double* path_agreement)
{
    return guard([&] {
        require(a != nullptr, "null argument");
        if (delta_realized)
            *delta_realized = a->a.delta_realized;
        if (mass)
            *mass = a->a.mass_adaptive;
        if (path_agreement)
            *path_agreement = a->a.path_agreement;
    });
}

int steklov_assembled_density(const steklov_assembled* a, double* out, size_t grid)
{
    return guard([&] {
        require(a && out, "null argument");
        require(grid == a->a.sigma_prime.size(), "grid size mismatch");
        for (size_t k = 0; k < grid; ++k)
            out[k] = a->a.sigma_prime.values[k].real();
    });
}

void steklov_assembled_free(steklov_assembled* a) { delete a; }

size_t steklov_command_count(void) { return steklov::experiment_commands().size(); }

const char* steklov_command_name(size_t i)
{
    const auto& c = steklov::experiment_commands();
    return i < c.size() ? c[i].c_str() : nullptr;
}

int steklov_run(const char* command, const char* config_json, char** report_json)
{
    return guard([&] {
        require(command && report_json, "null argument");
        steklov::json cfg = steklov::json::object();
        if (config_json && *config_json) {
            try {
                cfg = steklov::json::parse(config_json);
            } catch (const steklov::json::parse_error& e) {
                throw steklov::Error(steklov::Status::invalid_argument, std::string("config is not JSON: ") + e.what());
            }
        }
        *report_json = dup(steklov::run_experiment(command, cfg).dump());
    });
}

} // extern "C"
