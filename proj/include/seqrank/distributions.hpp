#pragma once

// CDFs and quantiles for the reference distributions used by the hypothesis
// tests. Student t and F are evaluated through the regularized incomplete
// beta function (Lentz continued fraction); quantiles by safeguarded
// bisection/Newton on the CDF.

namespace seqrank::dist {

// I_x(a, b), a > 0, b > 0, x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

double normal_cdf(double x);

// Real-valued degrees of freedom are allowed (Welch-Satterthwaite).
double student_t_cdf(double t, double dof);
double student_t_quantile(double p, double dof);

double fisher_f_cdf(double x, double dof1, double dof2);
double fisher_f_quantile(double p, double dof1, double dof2);

}  // namespace seqrank::dist
