#include <math.h>
#include <stdio.h>
#include "lpft.h"

int main(void) {
    LpftFunction *g = NULL;
    if (lpft_function_new("gauss", NULL, &g) != LPFT_STATUS_OK) {
        return 10;
    }
    double re, im, err;
    if (lpft_fourier_transform(g, 1.0, 1e-10, &re, &im, &err) != LPFT_STATUS_OK) {
        return 11;
    }
    if (fabs(re - exp(-M_PI)) > 1e-9 || fabs(im) > 1e-9) {
        return 12;
    }
    LpftFunction *bad = NULL;
    LpftStatus s = lpft_function_new("nosuch", NULL, &bad);
    if (s != LPFT_STATUS_UNKNOWN_FUNCTION || bad != NULL || lpft_last_error() == NULL) {
        return 13;
    }
    printf("%s %.17g\n", lpft_status_name(s), re);
    lpft_function_free(g);
    return 0;
}
