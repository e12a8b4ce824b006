#pragma once

namespace fracbvp {

/// Gamma function for x > 0 (Lanczos approximation, g = 7 with 9
/// coefficients; relative error below 1e-13 on the working range).
/// Throws std::domain_error for x <= 0.
double gamma_fn(double x);

/// log(Gamma(x)) for x > 0.
double log_gamma(double x);

/// Gamma(a) / Gamma(b), evaluated through log_gamma so large arguments
/// do not overflow.
double gamma_ratio(double a, double b);

/// Euler Beta function B(a, b), a, b > 0.
double beta_fn(double a, double b);

}  // namespace fracbvp
