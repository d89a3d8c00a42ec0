#pragma once

namespace triadyn {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation with
// the symmetry switch at x = (a+1)/(a+b+2). Absolute accuracy ~1e-14.
double reg_inc_beta(double a, double b, double x);

// Regularized upper incomplete gamma Q(a, x): series for x < a+1, continued
// fraction otherwise.
double reg_gamma_q(double a, double x);

// Two-sided tail of Student's t with nu degrees of freedom.
double student_t_two_sided_p(double t, double nu);

// Upper tail (survival function) of the F distribution with d1, d2 dof.
double f_sf(double f, double d1, double d2);

// Upper tail of the chi-square distribution with k dof.
double chi2_sf(double x, double k);

}  // namespace triadyn
