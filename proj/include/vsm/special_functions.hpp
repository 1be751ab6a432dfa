#pragma once

namespace vsm {

// Regularised incomplete beta function I_x(a, b), x in [0,1], a,b > 0.
double regularized_incomplete_beta(double x, double a, double b);

// Two-sided p-value of a Student-t statistic with `dof` degrees of freedom:
// I_{dof/(dof+t^2)}(dof/2, 1/2).
double student_t_two_sided_p(double t, double dof);

} // namespace vsm
