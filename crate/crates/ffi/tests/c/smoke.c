#include <stdio.h>
#include <string.h>

#include "hnstrata.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,    \
                    __LINE__, #cond);                                 \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    HnsLattice *lattice = NULL;
    CHECK(hns_lattice_from_json("{\"degrees\":[2,2,0,-1]}", &lattice) == HNS_STATUS_OK);
    CHECK(hns_lattice_len(lattice) == 16);

    HnsType *ty = NULL;
    CHECK(hns_lattice_hn_type(lattice, &ty) == HNS_STATUS_OK);
    CHECK(hns_type_len(ty) == 3);
    char *text = NULL;
    CHECK(hns_type_to_json(ty, &text) == HNS_STATUS_OK);
    CHECK(strcmp(text, "[[\"6\",\"2\"],[\"7\",\"3\"],[\"7\",\"4\"]]") == 0);
    hns_string_free(text);

    HnsType *bad = NULL;
    CHECK(hns_type_from_json("[[\"0\",\"1\"],[\"0\",\"2\"]]", &bad) == HNS_STATUS_INVALID_TYPE);
    CHECK(bad == NULL);
    CHECK(strcmp(hns_last_error_kind(), "Condition3Violation") == 0);

    HnsFamily *family = NULL;
    CHECK(hns_family_from_json(
              "{\"points\":[\"g\",\"s\"],\"specializes\":[[\"g\",\"s\"]],"
              "\"fibers\":{\"g\":{\"degrees\":[1,-1]},\"s\":{\"degrees\":[0,0]}}}",
              &family) == HNS_STATUS_OK);
    bool ok = true;
    char *witness = NULL;
    CHECK(hns_family_check_semicontinuity(family, &ok, &witness) == HNS_STATUS_OK);
    CHECK(!ok && witness != NULL);
    hns_string_free(witness);
    CHECK(hns_family_stratify_json(family, &text) == HNS_STATUS_NOT_SEMICONTINUOUS);

    hns_family_free(family);
    hns_type_free(ty);
    hns_lattice_free(lattice);
    printf("ok %s\n", hns_version());
    return 0;
}
