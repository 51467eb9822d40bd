#pragma once

namespace ks2 {

double erfc(double x);

// Regularized upper incomplete gamma Q(s, x), s > 0, x >= 0.
double igamc(double s, double x);

// Survival function of the Kolmogorov distribution,
// Q(t) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 t^2), clamped to [0,1].
double kolmogorov_sf(double t);

// Critical value K(alpha) = sqrt(-(1/2) ln(alpha/2)).
double ks_boundary(double alpha);

}
