#pragma once

// Selberg trace formula test functions and length-spectrum functionals for
// prime geodesic theorem error analysis on synthetic data.

#include "wpvol/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wpvol {

/// Unoriented primitive closed geodesics as (length, multiplicity), sorted.
struct LengthSpectrum {
  int genus = 2;
  std::vector<std::pair<double, std::int64_t>> entries;

  void validate() const;  // ascending positive lengths, positive multiplicities
  double systole() const;
  // Oriented primitive geodesics with lo < length <= hi.
  std::int64_t oriented_count(double lo, double hi) const;

  // {"genus": g, "entries": [["length", m], ...]} with decimal strings.
  nlohmann::json to_json() const;
  static LengthSpectrum from_json(const nlohmann::json& j);
};

struct SpectralData {
  std::vector<double> small_eigs;                // each in (0, 1/4]
  std::optional<std::vector<double>> full_eigs;  // ascending, all eigenvalues to a cutoff

  void validate() const;
  std::vector<double> exponents() const;  // s_j = 1/2 + sqrt(1/4 - lambda_j)
  // r = sqrt(lambda - 1/4) for lambda > 1/4, i sqrt(1/4 - lambda) otherwise.
  static std::complex<double> spectral_parameter(double lambda);

  nlohmann::json to_json() const;
  static SpectralData from_json(const nlohmann::json& j);
};

/// eta(x) = A exp(1 - 1/(1 - (x/rho)^2)) on |x| < rho.
class BumpFamily {
 public:
  BumpFamily(double rho, double amplitude);
  // Amplitude 2 and unit mass, so rho = 1/(2 C0) < 1/2.
  static BumpFamily counting();
  // Support (-1, 1) and unit mass.
  static BumpFamily smoothing();
  // C0 = e * int_{-1}^{1} exp(-1/(1-u^2)) du
  static double normalization_constant();

  double rho() const { return rho_; }
  double amplitude() const { return amplitude_; }
  double mass() const { return amplitude_ * rho_ * normalization_constant(); }

  double operator()(double x) const;
  double scaled(double x, double eps) const { return (*this)(x / eps) / eps; }
  // Second derivative, used for the tail bound |eta_hat(s)| <= ||eta''||_1 / s^2.
  double second_derivative(double x) const;
  double second_derivative_l1() const;

  // int eta(t) e^{-i t r} dt for real r.
  double hat(double r, double tol = 1e-10) const;
  // eta_hat(i y) = int eta(t) cosh(y t) dt.
  double hat_imag(double y, double tol = 1e-10) const;

 private:
  double rho_;
  double amplitude_;
};

// f_eps = eta_eps * eta_eps, supported in (-2 rho eps, 2 rho eps).
double f_eps(const BumpFamily& eta, double x, double eps);
// 1/2 (f(x-L) + f(x+L)) + sign f(x), sign = +1 or -1.
double phi_pm(const BumpFamily& eta, double x, double L, double eps, int sign);
// (cos(L r) + sign) eta_hat(eps r)^2
double phi_pm_hat(const BumpFamily& eta, double r, double L, double eps, int sign);

// 2 cosh(x/2) 1_{[-T,T]}(x) and its closed-form transform.
double cosh_window(double x, double T);
double cosh_window_hat(double r, double T);
double cosh_window_hat_imag(double y, double T);  // at r = i y
// Direct quadrature of the defining integral, for cross-checks.
double cosh_window_hat_quadrature(double r, double T, double tol = 1e-12);
// phi_T * eta_eps and its transform.
double smoothed_window(const BumpFamily& eta, double x, double T, double eps);
double smoothed_window_hat(const BumpFamily& eta, double r, double T, double eps);
double smoothed_window_hat_imag(const BumpFamily& eta, double y, double T, double eps);

struct GeometricSums {
  double H = 0.0;
  double psi = 0.0;
  double nu = 0.0;
};
GeometricSums geometric_sums(const LengthSpectrum& spec, double T);

struct CountIdentity {
  std::int64_t exact_count = 0;
  double integral_value = 0.0;
  double error_estimate = 0.0;
};
// Requires L > 1 and 0 < eps < 0.01.
CountIdentity count_identity(const BumpFamily& eta, const LengthSpectrum& spec, double L, double eps, int sign);

struct PgtError {
  double pi_t = 0.0;
  double li_t = 0.0;
  double small_sum = 0.0;
  double er = 0.0;
  double er_minus_small = 0.0;
  double envelope_3_4 = 0.0;  // g t^{3/4} / ln t, display only
  double envelope_5_6 = 0.0;  // g t^{5/6} / ln t, display only
};
PgtError pgt_error(const LengthSpectrum& spec, const SpectralData& sd, double t);

struct PAResult {
  bool holds = true;
  double worst_T = 0.0;      // maximizer of count / (A g (1 + T))
  double worst_ratio = 0.0;  // that maximum
  std::int64_t worst_count = 0;
};
// #{lambda_k in (1/4, 1/4 + T]} <= A g (1 + T) for every T in [0, max Tgrid].
PAResult condition_PA(const SpectralData& sd, int g, double A, const std::vector<double>& Tgrid);

struct TraceBalance {
  double spectral = 0.0;
  double spectral_tail_bound = 0.0;  // Weyl-law density past the last eigenvalue
  double identity = 0.0;
  double geometric = 0.0;
  double residual = 0.0;
  std::vector<std::string> warnings;
};
// Uses phi_T^eps built from eta (normally BumpFamily::smoothing()). With
// enabled = false the test function is identically zero.
TraceBalance trace_balance(const SpectralData& sd, const LengthSpectrum& spec, int g, double T, double eps,
                           const BumpFamily& eta, bool enabled = true);
// (g-1) int r tanh(pi r) phi_hat(r) dr for phi = phi_T^eps.
QuadResult identity_term(const BumpFamily& eta, int g, double T, double eps, double tol = 1e-10);
double geometric_side(const LengthSpectrum& spec, const BumpFamily& eta, double T, double eps);

struct SandwichResult {
  bool holds = true;
  std::size_t points = 0;
  std::size_t violations = 0;
  double min_upper_gap = 0.0;  // min of phi^eps_{T+eps} - phi_T
  double min_lower_gap = 0.0;  // min of phi_T - phi^eps_{T-eps}/cosh(eps/2)
};
SandwichResult check_sandwich(const BumpFamily& eta, double T, double eps, std::size_t points = 200);

struct SyntheticOptions {
  int genus = 2;
  double min_length = 1.0;
  double max_length = 6.0;
  double bin_width = 0.01;
  std::uint64_t seed = 1;
};
// Poisson counts per bin with unoriented intensity e^l / (2 l) dl; each
// geodesic gets a uniform position inside its bin. Labeled synthetic.
LengthSpectrum synthetic_spectrum(const SyntheticOptions& opt);
// Oriented primitive count up to L against (g-1) e^{L+7}.
bool within_count_bound(const LengthSpectrum& spec, double L);

}  // namespace wpvol
