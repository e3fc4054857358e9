#include <assert.h>
#include <stdio.h>
#include <string.h>
#include "lampwalk.h"

int main(void) {
    LwGroup *g = NULL;
    assert(lw_group_new("zwrz", &g) == LW_STATUS_OK);
    LwElement *e = NULL, *id = NULL, *inv = NULL, *prod = NULL;
    assert(lw_element_parse(g, "wreath{2:3|cursor=5}", &e) == LW_STATUS_OK);
    assert(lw_element_identity(g, &id) == LW_STATUS_OK);
    uint64_t d = 0;
    assert(lw_wreath_distance_exact(g, e, id, &d) == LW_STATUS_OK);
    printf("d = %llu\n", (unsigned long long)d);
    assert(d == 8); /* 3 lamp steps + travel 0 -> 5 passing site 2 */
    assert(lw_inverse(g, e, &inv) == LW_STATUS_OK);
    char *s = lw_element_print(inv);
    printf("inverse = %s\n", s);
    assert(strcmp(s, "wreath{-3:-3|cursor=-5}") == 0);
    lw_string_free(s);
    assert(lw_multiply(g, e, inv, &prod) == LW_STATUS_OK);
    assert(lw_element_equal(prod, id) == 1);
    double alpha = 0;
    assert(lw_compose_alpha(1.0, 1.0, 2.0, &alpha) == LW_STATUS_OK);
    printf("alpha = %.10f\n", alpha);
    lw_element_free(prod); lw_element_free(inv); lw_element_free(id); lw_element_free(e);
    lw_group_free(g);
    LwGroup *bad = NULL;
    assert(lw_group_new("nope", &bad) == LW_STATUS_PARSE_ERROR);
    char *msg = lw_last_error_message();
    printf("error: %s\n", msg);
    lw_string_free(msg);
    printf("smoke ok\n");
    return 0;
}
