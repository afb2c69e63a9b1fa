#pragma once

#include "divstat/errors.hpp"

namespace divstat {

// log of the multivariate gamma function of order m over the algebra with
// real dimension beta:
//   Gamma_m(a) = pi^(m(m-1)beta/4) * prod_{i=1..m} Gamma(a - (i-1) beta/2).
// Defined for a > (m-1) beta/2; outside that a DomainError names the first
// factor whose argument is nonpositive.
double log_mgamma(int beta, int m, double a);

// Same formula with beta any positive real; the expression is analytic in
// beta and the spectral densities accept that generality.
double log_mgamma_general(double beta, int m, double a);

// log of the multivariate beta function,
//   B_m(a, b) = Gamma_m(a) Gamma_m(b) / Gamma_m(a + b).
double log_mbeta(int beta, int m, double a, double b);

double log_mbeta_general(double beta, int m, double a, double b);

// log volume of the compact manifold of m orthonormal n-vectors over the
// algebra (m <= n):
//   vol = 2^m pi^(m n beta / 2) / Gamma_m(n beta / 2).
double log_stiefel_volume(int beta, int m, int n);

// Integer constant tau from the conventional table: 0 for beta=1 and
// -m*beta/2 for beta in {2,4,8}.  Spectral densities do not use this table
// directly; see log_pi_tau.
int tau_table(int beta, int m);

// log(pi^tau) in the form that makes the joint eigenvalue/singular value
// densities integrate to one for every beta:
//   tau log pi = -(m beta / 2) log pi + m log Gamma(beta / 2).
// Identical to tau_table(beta, m) * log(pi) for beta in {1,2,4}; at beta=8
// the tabulated integer is off by m*log(6) and this form is the correct one.
double log_pi_tau(int beta, int m);

double log_pi_tau_general(double beta, int m);

}  // namespace divstat
