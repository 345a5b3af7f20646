#include <stdio.h>
#include "dfra.h"

int main(void) {
    DfraAlgebra *alg = NULL;
    char *out = NULL;
    if (dfra_algebra_new(3, false, &alg) != DFRA_STATUS_OK) {
        fprintf(stderr, "%s\n", dfra_last_error());
        return 1;
    }
    if (dfra_algebra_eval(alg, "[x[1], x[2]]", &out) != DFRA_STATUS_OK) {
        fprintf(stderr, "%s\n", dfra_last_error());
        return 1;
    }
    printf("%s\n", out);
    dfra_string_free(out);
    dfra_algebra_free(alg);

    DfraOscillatorConfig cfg = {1.0, 1.0, 1.0, 1.0, 3};
    double t2 = 0.0;
    dfra_oscillator_theta2(cfg, &t2);
    printf("%g\n", t2);
    return 0;
}
