#include <stdio.h>
#include <string.h>

#include "rnsym.h"

int main(int argc, char **argv) {
    if (argc < 2) {
        return 10;
    }
    FILE *f = fopen(argv[1], "rb");
    if (!f) {
        return 11;
    }
    static char buf[1 << 16];
    size_t len = fread(buf, 1, sizeof buf - 1, f);
    fclose(f);
    buf[len] = '\0';

    RnsProblem *p = NULL;
    RnsStatus st = rns_problem_from_json(buf, &p);
    if (st != RNS_STATUS_OK) {
        fprintf(stderr, "%s\n", rns_last_error());
        return 12;
    }
    char *report = NULL;
    st = rns_run(p, "{\"command\": \"lift\", \"mode\": \"strict\"}", &report);
    printf("%s %d\n", rns_status_name(st), strstr(report, "\"pass\": true") != NULL);
    rns_string_free(report);

    st = rns_run(p, "{\"command\": \"lift\", \"mode\": 7}", &report);
    printf("%s %d\n", rns_status_name(st), report == NULL);
    rns_problem_free(p);
    return 0;
}
