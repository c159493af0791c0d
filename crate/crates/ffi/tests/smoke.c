#include <stdio.h>
#include <string.h>
#include "ririg.h"

static const char *G3ID =
    "{\"size\":3,\"zero\":0,\"one\":2,"
    "\"join\":[[0,1,2],[1,1,2],[2,2,2]],"
    "\"prod\":[[0,0,0],[0,1,1],[0,1,2]],"
    "\"modals\":{\"m1\":[0,1,2]}}";

int main(void) {
    RirigAlgebra *a = NULL;
    if (ririg_algebra_from_json(G3ID, &a) != RIRIG_STATUS_OK) {
        fprintf(stderr, "load: %s\n", ririg_last_error());
        return 1;
    }
    size_t count = 0;
    bool simple = true, si = false;
    uint64_t mask = 0;
    size_t seed[1] = {1};
    if (ririg_count_ifilters(a, &count) != RIRIG_STATUS_OK) return 2;
    if (ririg_is_simple(a, &simple) != RIRIG_STATUS_OK) return 3;
    if (ririg_is_si(a, &si) != RIRIG_STATUS_OK) return 4;
    if (ririg_generate_filter(a, seed, 1, &mask) != RIRIG_STATUS_OK) return 5;
    size_t out = 0;
    if (ririg_lambda(a, 9, &out) != RIRIG_STATUS_OUT_OF_RANGE) return 6;
    printf("filters=%zu simple=%d si=%d mask=%llu\n", count, simple, si, (unsigned long long)mask);
    ririg_algebra_free(a);
    return 0;
}
