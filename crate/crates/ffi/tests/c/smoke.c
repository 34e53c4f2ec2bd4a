#include <stdio.h>
#include <string.h>
#include "logderham.h"

static const char *THREE_LINES =
    "{\"variables\": [\"x\", \"y\"], \"hyperplanes\": [[1, 0], [0, 1], [1, 1]]}";

int main(void) {
    LdhArrangement *arr = NULL;
    if (ldh_arrangement_from_json(THREE_LINES, &arr) != LDH_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", ldh_last_error());
        return 1;
    }
    uint64_t betti[8];
    size_t n = 0;
    if (ldh_os_betti(arr, betti, 8, &n) != LDH_STATUS_OK || n != 3) return 2;
    printf("os %llu %llu %llu\n", (unsigned long long)betti[0],
           (unsigned long long)betti[1], (unsigned long long)betti[2]);

    const char *w[] = {"1/3", "1/3", "1/3"};
    bool certified = false;
    if (ldh_twisted_betti(arr, w, 3, betti, 8, &n, &certified) != LDH_STATUS_OK) return 3;
    printf("twisted %llu %llu %llu %d\n", (unsigned long long)betti[0],
           (unsigned long long)betti[1], (unsigned long long)betti[2], certified);

    char *json = NULL;
    if (ldh_lattice_json(arr, &json) != LDH_STATUS_OK) return 4;
    printf("json %s\n", strstr(json, "\"poincare\":[1,3,2]") ? "ok" : json);
    ldh_string_free(json);
    ldh_arrangement_free(arr);

    if (ldh_arrangement_from_json("{", &arr) != LDH_STATUS_INVALID_INPUT) return 5;
    printf("error %s\n", ldh_last_error() ? "set" : "missing");
    return 0;
}
