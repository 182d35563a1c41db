#include "qlga.h"
#include <stdio.h>
#include <assert.h>

int main(void) {
    QlgaParams *params = NULL;
    QlgaField *field = NULL;
    QlgaStepper *stepper = NULL;
    double center[3] = {0.0, 0.0, 32.0};
    double k[3] = {0.0, 0.0, 0.4};
    double pol_re[4] = {1.0, 0.0, 0.0, 0.0};
    double pol_im[4] = {0.0, 0.0, 0.0, 0.0};
    double norm = 0.0;

    assert(qlga_params_new(1, 1, 64, 1.0 / 64.0, 1.0, QLGA_ORDERING_RELATIVISTIC, &params) == QLGA_STATUS_OK);
    assert(qlga_field_new_gaussian(1, 1, 64, center, 4.0, k, pol_re, pol_im, &field) == QLGA_STATUS_OK);
    assert(qlga_stepper_new(QLGA_VARIANT_BASIC, params, &stepper) == QLGA_STATUS_OK);
    assert(qlga_stepper_run(stepper, field, 128) == QLGA_STATUS_OK);
    assert(qlga_field_total_norm(field, &norm) == QLGA_STATUS_OK);
    printf("norm after 128 steps: %.15f (%s)\n", norm, qlga_status_name(QLGA_STATUS_OK));
    assert(norm > 0.9999999 && norm < 1.0000001);
    qlga_stepper_free(stepper);
    qlga_field_free(field);
    qlga_params_free(params);
    return 0;
}
