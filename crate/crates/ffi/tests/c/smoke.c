#include <stdio.h>
#include <string.h>
#include "tt.h"

int main(int argc, char **argv) {
    TtScript *s = NULL;
    TtReport *r = NULL;
    const char *text = "base A;\nconst a : A;\ncheck |- (lam (x : A) . x) a = a : A;\n";
    if (tt_script_parse("smoke.tt", text, &s) != TT_STATUS_OK) return 10;
    if (tt_script_check_count(s) != 1) return 11;
    if (tt_check(s, false, &r) != TT_STATUS_OK) return 12;
    if (strstr(tt_report_text(r), "RESULT PASS") == NULL) return 13;
    tt_report_free(r);
    tt_script_free(s);
    if (tt_script_parse("bad.tt", "check |- y : A;", &s) != TT_STATUS_INPUT_ERROR) return 14;
    if (s != NULL || tt_last_error() == NULL) return 15;
    if (tt_modelcheck("nope", 0, 3, &r) != TT_STATUS_INPUT_ERROR) return 16;
    tt_report_free(r);
    printf("ok %s\n", tt_version());
    return 0;
}
