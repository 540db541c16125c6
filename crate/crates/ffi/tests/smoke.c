#include <stdio.h>
#include <string.h>
#include "clausen.h"

#define CHECK(c) do { if (!(c)) { fprintf(stderr, "failed: %s (%s)\n", #c, clausen_last_error()); return 1; } } while (0)

int main(void) {
    double re = 0, im = 0;
    CHECK(clausen_hyp2f1(0.5, 0.5, 1.0, 0.5, 0.0, &re, &im) == CLAUSEN_OK);
    CHECK(re > 1.18034059901609 && re < 1.18034059901610);
    CHECK(clausen_hyp2f1(1.0, 1.0, -2.0, 0.5, 0.0, &re, &im) == CLAUSEN_ERR_DOMAIN);
    CHECK(strlen(clausen_last_error()) > 0);
    CHECK(clausen_period(1, 1, 1, 0, 1, 0.3, 0.0, &re, &im) == CLAUSEN_OK);
    CHECK(re > 6.8555 && re < 6.8556);

    ClausenReport *rep = NULL;
    CHECK(clausen_verify_identity(0.5, 0.5, 0.2, 0.9, &rep) == CLAUSEN_OK);
    uint64_t total = 0, passed = 0;
    CHECK(clausen_report_counts(rep, &total, &passed) == CLAUSEN_OK);
    CHECK(total == 1 && passed == 1);
    CHECK(strstr(clausen_report_json(rep), "\"multivariate_clausen\"") != NULL);
    clausen_report_free(rep);

    CHECK(clausen_verify_suite("mirror", 1, 1, &rep) == CLAUSEN_OK);
    CHECK(clausen_report_counts(rep, &total, &passed) == CLAUSEN_OK);
    CHECK(total == 4 && passed == 4);
    clausen_report_free(rep);
    CHECK(clausen_verify_suite("nope", 1, 1, &rep) == CLAUSEN_ERR_ARGUMENT);
    CHECK(rep == NULL);
    CHECK(clausen_verify_identity(0.5, 0.5, 0.2, 0.9, NULL) == CLAUSEN_ERR_NULL);
    clausen_report_free(NULL);
    printf("ok %s\n", clausen_version());
    return 0;
}
