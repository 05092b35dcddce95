/* Plain C client of the shared library. */
#include "nlslab/nlslab.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: EXPECT(%s) failed (%s)\n", __FILE__, \
                    __LINE__, #cond, nlslab_last_error());             \
            ++failures;                                                \
        }                                                              \
    } while (0)

static int warnings = 0;
static void count_warning(const char* msg, void* user) {
    (void)msg;
    ++*(int*)user;
}

static const char* kConfig =
    "schema_version = 1\n"
    "[spec]\nd = 3\na = -0.1\nalpha = 2\nmu = -1\n"
    "[grid]\nN = 512\nR_max = 20\n"
    "[groundstate]\nN = 512\nR_max = 20\ntol = 5e-3\n"
    "[integrator]\ndt = 1e-2\nt_end = 0.1\nsample_every = 0.05\n"
    "[initial]\nkind = groundstate\nc = 0.8\n";

int main(void) {
    char root[256];
    snprintf(root, sizeof root, "/tmp/nlslab-capi-%d", (int)getpid());
    char cmd[512];
    snprintf(cmd, sizeof cmd, "rm -rf %s", root);
    if (system(cmd) != 0) return 1;

    EXPECT(strlen(nlslab_version()) > 0);
    EXPECT(nlslab_exit_code(NLSLAB_OK) == 0);
    EXPECT(nlslab_exit_code(NLSLAB_ERR_CONFIG) == 1);
    EXPECT(nlslab_exit_code(NLSLAB_ERR_REGIME) == 1);
    EXPECT(nlslab_exit_code(NLSLAB_ERR_DIMENSION) == 1);
    EXPECT(nlslab_exit_code(NLSLAB_ERR_NUMERICAL) == 2);
    EXPECT(strcmp(nlslab_status_name(NLSLAB_ERR_NUMERICAL), "") != 0);

    char* js = NULL;
    int ok = -1;
    EXPECT(nlslab_regime(3, -0.2, 2, -1, &js, &ok) == NLSLAB_OK);
    EXPECT(ok == 1);
    EXPECT(js && strstr(js, "main_theorem_ok"));
    nlslab_string_free(js);
    EXPECT(nlslab_regime(3, -0.25, 2, -1, NULL, &ok) == NLSLAB_OK);
    EXPECT(ok == 0);
    EXPECT(nlslab_regime(7, 0, 1, -1, NULL, NULL) == NLSLAB_ERR_DIMENSION);
    EXPECT(strstr(nlslab_last_error(), "d=7") != NULL);

    nlslab_config* cfg = NULL;
    EXPECT(nlslab_config_parse("schema_version = 3\n", &cfg) == NLSLAB_ERR_CONFIG);
    EXPECT(cfg == NULL);
    EXPECT(nlslab_config_parse(NULL, &cfg) == NLSLAB_ERR_ARGUMENT);
    EXPECT(nlslab_config_load("/nonexistent.toml", &cfg) == NLSLAB_ERR_CONFIG);
    EXPECT(nlslab_config_parse(kConfig, &cfg) == NLSLAB_OK);
    EXPECT(nlslab_config_set(cfg, "bogus", "1") == NLSLAB_ERR_CONFIG);

    char dir[300];
    snprintf(dir, sizeof dir, "%s/run", root);
    EXPECT(nlslab_config_set(cfg, "output.dir", dir) == NLSLAB_OK);
    EXPECT(nlslab_config_check(cfg) == NLSLAB_OK);
    EXPECT(nlslab_config_to_json(cfg, &js) == NLSLAB_OK);
    EXPECT(strstr(js, "\"schema_version\"") != NULL);
    nlslab_string_free(js);

    char cdir[300];
    snprintf(cdir, sizeof cdir, "%s/cache", root);
    nlslab_cache* cache = NULL;
    EXPECT(nlslab_cache_open(cdir, &cache) == NLSLAB_OK);
    EXPECT(strcmp(nlslab_cache_dir(cache), cdir) == 0);

    nlslab_set_warning_handler(count_warning, &warnings);
    EXPECT(nlslab_classify(cfg, cache, &js) == NLSLAB_OK);
    EXPECT(strstr(js, "Scatter") != NULL);
    nlslab_string_free(js);

    EXPECT(nlslab_run(cfg, cache, &js) == NLSLAB_OK);
    EXPECT(strstr(js, "\"ok\": true") != NULL);
    nlslab_string_free(js);

    char path[400];
    snprintf(path, sizeof path, "%s/final_field.csv", dir);
    nlslab_field* f = NULL;
    EXPECT(nlslab_field_read(path, &f) == NLSLAB_OK);
    EXPECT(nlslab_field_size(f) == 512);
    EXPECT(nlslab_field_dimension(f) == 3);
    double* re = malloc(512 * sizeof(double));
    EXPECT(nlslab_field_values(f, NULL, re, NULL) == NLSLAB_OK);
    EXPECT(re[0] > 0 && isfinite(re[0]));
    free(re);
    nlslab_field_free(f);
    EXPECT(nlslab_field_read("/nonexistent.csv", &f) == NLSLAB_ERR_IO);

    EXPECT(nlslab_report(dir, &js) == NLSLAB_OK);
    nlslab_string_free(js);

    const char* values[] = {"0.5", "0.7"};
    snprintf(dir, sizeof dir, "%s/sweep", root);
    nlslab_config_set(cfg, "output.dir", dir);
    EXPECT(nlslab_sweep(cfg, cache, "c", values, 2, 2, &js) == NLSLAB_OK);
    EXPECT(js && js[0] == '[');
    nlslab_string_free(js);

    /* ground state leaking through a tiny box: numerical, exit code 2 */
    nlslab_config_set(cfg, "groundstate.R_max", "3");
    nlslab_config_set(cfg, "groundstate.N", "256");
    nlslab_status s = nlslab_groundstate(cfg, cache, NULL, &js);
    EXPECT(s == NLSLAB_ERR_NUMERICAL);
    EXPECT(nlslab_exit_code(s) == 2);
    nlslab_set_warning_handler(NULL, NULL);

    nlslab_cache_free(cache);
    nlslab_config_free(cfg);
    nlslab_config_free(NULL);
    nlslab_string_free(NULL);
    if (system(cmd) != 0) ++failures;

    if (failures) {
        fprintf(stderr, "%d failure(s)\n", failures);
        return 1;
    }
    printf("capi: all checks passed\n");
    return 0;
}
