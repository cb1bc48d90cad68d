#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "wsvd.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        enum WsvdStatus s_ = (call);                                       \
        if (s_ != WSVD_STATUS_OK) {                                        \
            fprintf(stderr, "%s failed (%d): %s\n", #call, (int)s_,        \
                    wsvd_last_error());                                    \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    WsvdRule *rule = NULL;
    WsvdBasis *basis = NULL;
    WsvdApproximant *approx = NULL;
    size_t n = 0;

    CHECK(wsvd_rule_new("lens", NULL, 120, &rule));
    CHECK(wsvd_rule_len(rule, &n));
    double *xy = malloc(2 * n * sizeof(double));
    double *samples = malloc(n * sizeof(double));
    CHECK(wsvd_rule_nodes(rule, xy, 2 * n));
    for (size_t i = 0; i < n; i++) {
        samples[i] = cos(xy[2 * i]) * xy[2 * i + 1];
    }

    CHECK(wsvd_basis_new("imq", 3.0, rule, &basis));
    CHECK(wsvd_approx_project(basis, samples, n, &approx));
    double value = 0.0;
    CHECK(wsvd_approx_eval(approx, xy[0], xy[1], &value));
    if (fabs(value - samples[0]) > 1e-6) {
        fprintf(stderr, "node residual %g\n", value - samples[0]);
        return 1;
    }
    if (wsvd_basis_new("nope", 1.0, rule, &basis) != WSVD_STATUS_INVALID_ARGUMENT) {
        return 1;
    }

    wsvd_approx_free(approx);
    wsvd_basis_free(basis);
    wsvd_rule_free(rule);
    free(xy);
    free(samples);
    printf("ok %zu nodes\n", n);
    return 0;
}
