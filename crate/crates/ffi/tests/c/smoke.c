#include <stdio.h>
#include <string.h>

#include "qfactor.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    const size_t r3[9] = {0, 2, 1, 2, 1, 0, 1, 0, 2};
    QfQuandle *q = NULL;
    CHECK(qf_quandle_from_table(3, r3, &q) == QF_STATUS_OK);

    size_t order = 0;
    CHECK(qf_quandle_inn_order(q, &order) == QF_STATUS_OK && order == 6);

    const size_t point_table[1] = {0};
    QfQuandle *point = NULL;
    CHECK(qf_quandle_from_table(1, point_table, &point) == QF_STATUS_OK);

    const size_t id[3] = {0, 1, 2}, zero[3] = {0, 0, 0};
    QfHom *identity = NULL, *collapse = NULL;
    CHECK(qf_hom_new(q, q, id, 3, &identity) == QF_STATUS_OK);
    CHECK(qf_hom_new(q, point, zero, 3, &collapse) == QF_STATUS_OK);

    size_t phi[3];
    CHECK(qf_factor(collapse, identity, phi, 3) == QF_STATUS_OK && phi[2] == 0);
    CHECK(qf_factor(identity, collapse, phi, 3) == QF_STATUS_NO_FACTORIZATION);
    CHECK(strstr(qf_last_error(), "KernelNotContained") != NULL);

    char *json = NULL;
    CHECK(qf_quandle_to_json(q, &json) == QF_STATUS_OK && strstr(json, "\"size\": 3") != NULL);
    qf_string_free(json);

    qf_hom_free(identity);
    qf_hom_free(collapse);
    qf_quandle_free(point);
    qf_quandle_free(q);
    puts("ok");
    return 0;
}
