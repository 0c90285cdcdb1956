#include <stdio.h>
#include <string.h>
#include "homcalc.h"

int main(void) {
    HcComplex *c = NULL;
    if (hc_complex_from_recipe("klein", &c) != HC_STATUS_OK) return 10;
    char *out = NULL;
    if (hc_homology(c, 1, 0, &out) != HC_STATUS_OK) return 11;
    int ok = strstr(out, "\"free_rank\":1") != NULL;
    hc_string_free(out);
    int64_t chain[1] = {1};
    if (hc_bockstein(c, 2, 3, chain, 1, &out) != HC_STATUS_MATH) return 12;
    if (strlen(hc_last_error()) == 0) return 13;
    hc_complex_free(c);
    printf("%s\n", hc_version());
    return ok ? 0 : 14;
}
