#include <math.h>
#include <stdio.h>

#include "maxent.h"

int main(void) {
    const double u[2] = {0.0, 1.0};
    const double r[2] = {0.75, 0.25};
    MaxentSolution *sol = NULL;
    MaxentStatus status = maxent_solve_ml(u, r, 2, NULL, &sol);
    if (status != MAXENT_STATUS_OK) {
        fprintf(stderr, "solve_ml: %s\n", maxent_status_name(status));
        return 1;
    }
    double lambda[1], pmf[2];
    maxent_solution_copy_lambda(sol, lambda, maxent_solution_lambda_len(sol));
    maxent_solution_copy_pmf(sol, pmf, maxent_solution_pmf_len(sol));
    maxent_solution_free(sol);
    if (fabs(lambda[0] - log(3.0)) > 1e-12 || fabs(pmf[0] - 0.75) > 1e-12) {
        fprintf(stderr, "bad solution %.17g %.17g\n", lambda[0], pmf[0]);
        return 1;
    }

    const double x[2] = {0.0, 1.0};
    const double y[1] = {1.5};
    status = maxent_solve_inverse(x, 1, 2, y, NULL, &sol);
    if (status != MAXENT_STATUS_INFEASIBLE_TARGET || sol != NULL || maxent_last_error() == NULL) {
        fprintf(stderr, "expected infeasible target\n");
        return 1;
    }
    printf("%.17g %s\n", lambda[0], maxent_last_error());
    return 0;
}
