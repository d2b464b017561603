#include "steklov/steklov.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                                                                   \
    do {                                                                                                               \
        if (!(cond)) {                                                                                                 \
            fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond);                             \
            ++failures;                                                                                                \
        }                                                                                                              \
    } while (0)

static void test_measures(void)
{
    steklov_measure* mu = NULL;
    double re[4], im[4], mass = 0.0;
    EXPECT(steklov_measure_lebesgue(1024, &mu) == STEKLOV_OK);
    EXPECT(steklov_moments(mu, 3, re, im) == STEKLOV_OK);
    EXPECT(fabs(re[0] - 1.0) < 1e-14);
    EXPECT(fabs(re[1]) < 1e-14 && fabs(im[2]) < 1e-14);
    EXPECT(steklov_measure_total_mass(mu, &mass) == STEKLOV_OK && fabs(mass - 1.0) < 1e-14);
    steklov_measure_free(mu);

    EXPECT(steklov_measure_lebesgue(1000, &mu) == STEKLOV_INVALID_ARGUMENT);
    EXPECT(strlen(steklov_last_error()) > 0);
    EXPECT(strcmp(steklov_status_name(STEKLOV_INVALID_ARGUMENT), "invalid_argument") == 0);

    double w[256];
    for (int k = 0; k < 256; ++k)
        w[k] = 0.5 / (2.0 * 3.14159265358979323846);
    double angles[2] = {-2.0, 1.0}, masses[2] = {0.25, 0.25};
    EXPECT(steklov_measure_create(w, 256, angles, masses, 2, &mu) == STEKLOV_OK);
    double phi = 0.0;
    EXPECT(steklov_phi_at_one(mu, 2, &phi) == STEKLOV_OK && phi > 0.0);
    steklov_measure_free(mu);

    double bad_angles[2] = {1.0, -2.0};
    mu = NULL;
    EXPECT(steklov_measure_create(w, 256, bad_angles, masses, 2, &mu) == STEKLOV_INVALID_ARGUMENT);
    EXPECT(mu == NULL);
    steklov_measure_free(NULL);
}

static void test_recursions(void)
{
    double s_re[3] = {1.0, 0.3, 0.0}, s_im[3] = {0.0, 0.1, 0.0};
    double g_re[2], g_im[2];
    EXPECT(steklov_verblunsky(s_re, s_im, 2, g_re, g_im) == STEKLOV_OK);
    /* gamma_0 = -conj(Phi_1(0)) = conj(s_1)/s_0 */
    EXPECT(fabs(g_re[0] - 0.3) < 1e-14 && fabs(g_im[0] + 0.1) < 1e-14);

    double p_re[3], p_im[3], q_re[3], q_im[3];
    EXPECT(steklov_szego(g_re, g_im, 2, p_re, p_im, q_re, q_im) == STEKLOV_OK);
    EXPECT(p_re[2] > 0.0 && fabs(q_re[0] - p_re[2]) < 1e-14);

    double bs = 0.0, bl = 0.0;
    EXPECT(steklov_bounds(10, 0.1, &bs, &bl) == STEKLOV_OK);
    EXPECT(fabs(bs - sqrt(110.0)) < 1e-12);
    EXPECT(steklov_bounds(10, 0.0, &bs, &bl) == STEKLOV_INVALID_ARGUMENT);

    double bad_re[2] = {1.0, 2.0}, bad_im[2] = {0.0, 0.0};
    EXPECT(steklov_verblunsky(bad_re, bad_im, 1, g_re, g_im) == STEKLOV_INDEFINITE_MOMENTS);
}

static void test_construction(void)
{
    steklov_construction* c = NULL;
    EXPECT(steklov_decoupling_build(64, 0.75, 0.05, 1.0 / 16, 1u << 16, &c) == STEKLOV_OK);
    double ratio = 0.0;
    EXPECT(steklov_construction_growth(c, &ratio) == STEKLOV_OK && ratio > 0.0);
    char* bundle = NULL;
    EXPECT(steklov_construction_bundle(c, &bundle) == STEKLOV_OK);
    EXPECT(bundle && strstr(bundle, "\"C_n\"") != NULL);
    steklov_string_free(bundle);

    steklov_assembled* a = NULL;
    EXPECT(steklov_assemble(c, 0, 0, &a) == STEKLOV_OK);
    size_t G = steklov_assembled_grid(a);
    EXPECT(G == (1u << 16));
    double dr = 0.0, mass = 0.0;
    EXPECT(steklov_assembled_summary(a, &dr, &mass, NULL) == STEKLOV_OK);
    EXPECT(dr > 0.0 && fabs(mass - 1.0) < 1e-8);
    double* dens = malloc(G * sizeof(double));
    EXPECT(steklov_assembled_density(a, dens, G) == STEKLOV_OK);
    double mn = dens[0];
    for (size_t k = 1; k < G; ++k)
        mn = dens[k] < mn ? dens[k] : mn;
    EXPECT(fabs(2.0 * 3.14159265358979323846 * mn - dr) < 1e-12);
    EXPECT(steklov_assembled_density(a, dens, G / 2) == STEKLOV_INVALID_ARGUMENT);
    free(dens);
    steklov_assembled_free(a);
    steklov_construction_free(c);

    EXPECT(steklov_decoupling_build(64, 0.3, 0.05, 1.0 / 16, 0, &c) == STEKLOV_INVALID_ARGUMENT);
}

static void test_driver(void)
{
    EXPECT(steklov_command_count() == 12);
    EXPECT(steklov_command_name(100) == NULL);
    int found = 0;
    for (size_t i = 0; i < steklov_command_count(); ++i)
        found += strcmp(steklov_command_name(i), "decouple") == 0;
    EXPECT(found == 1);

    char* out = NULL;
    EXPECT(steklov_run("moments", "{\"source\":\"lebesgue\",\"order\":3}", &out) == STEKLOV_OK);
    EXPECT(out && strstr(out, "\"passed\":true") != NULL);
    steklov_string_free(out);
    out = NULL;
    EXPECT(steklov_run("moments", "{\"bogus\":1}", &out) == STEKLOV_INVALID_ARGUMENT);
    EXPECT(out == NULL);
    EXPECT(steklov_run("moments", "{not json", &out) == STEKLOV_INVALID_ARGUMENT);
    EXPECT(steklov_run(NULL, NULL, &out) == STEKLOV_INVALID_ARGUMENT);
}

int main(void)
{
    test_measures();
    test_recursions();
    test_construction();
    test_driver();
    if (failures) {
        fprintf(stderr, "%d failures\n", failures);
        return 1;
    }
    puts("all C API checks passed");
    return 0;
}
