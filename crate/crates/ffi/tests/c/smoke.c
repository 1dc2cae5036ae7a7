#include <stdio.h>
#include <string.h>

#include "preempt_inbox.h"

static const char *TRACE =
    "0 SETPRIO 5554 HIGH\n"
    "0 TASK fg 100 10\n"
    "4 SMS 5554 hello\n";

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    PiSimulation *sim = NULL;
    CHECK(pi_simulate(TRACE, &sim) == PI_STATUS_OK);

    char *report = NULL;
    CHECK(pi_simulation_report(sim, &report) == PI_STATUS_OK);
    CHECK(strstr(report, "t=4 PREEMPT fg by flash:1\n") != NULL);
    fputs(report, stdout);
    pi_string_free(report);

    PiStore *store = NULL;
    CHECK(pi_simulation_store(sim, &store) == PI_STATUS_OK);
    size_t n = 0;
    CHECK(pi_store_len(store, PI_INBOX_PRIORITY, &n) == PI_STATUS_OK && n == 1);
    char *text = NULL;
    CHECK(pi_store_read(store, PI_INBOX_PRIORITY, 0, &text) == PI_STATUS_OK);
    CHECK(strcmp(text, "5554 :hello") == 0);
    pi_string_free(text);
    CHECK(pi_store_read(store, PI_INBOX_PRIORITY, 5, &text) == PI_STATUS_INDEX_OUT_OF_RANGE);
    char *err = pi_last_error_message();
    CHECK(err != NULL);
    pi_string_free(err);

    PiRegistry *reg = pi_registry_new();
    PiLevel level = PI_LEVEL_HIGH;
    CHECK(pi_registry_get(reg, "5554", &level) == PI_STATUS_OK && level == PI_LEVEL_DEFAULT);
    CHECK(pi_registry_set(reg, "55x", PI_LEVEL_HIGH) == PI_STATUS_INVALID_ADDRESS);

    pi_registry_free(reg);
    pi_store_free(store);
    pi_simulation_free(sim);
    return 0;
}
