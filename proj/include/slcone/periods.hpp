#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slcone/exec.hpp"
#include "slcone/family.hpp"
#include "slcone/grid.hpp"
#include "slcone/rational.hpp"

namespace slcone {

struct PeriodVector {
  double sigma = 0.0;
  double tau = 0.0;
};

struct PeriodLattice {
  std::vector<PeriodVector> basis;  // 0, 1 or 2 vectors
  bool rectangular = false;
  double basic_period_T = 0.0;
  R3 holonomy{};          // theta_j(T) - theta_j(0), sign flips included for J = 0
  int theta_sum_multiple = 0;  // n with sum_j holonomy_j = n pi
  int tau_multiple = 0;        // tau of the second basis vector in units of T
};

enum class ClosureKind { none, one_period, two_periods };

const char* to_string(ClosureKind k);

struct ClosureResult {
  ClosureKind kind = ClosureKind::none;
  PeriodLattice lattice;
  std::optional<Rational> alpha;
  std::optional<Rational> beta;  // (alpha theta_1(T) - theta_2(T)) / 2 pi
  // The period sigma = -2N theta_1(T) / lambda_1, tau = 2N T built from the
  // denominator N of beta; it lies in the lattice but need not be primitive.
  std::optional<PeriodVector> recipe_period;
  std::string status;
};

// Rationality test of alpha and beta by continued fractions at tolerance tol,
// followed by construction of a lattice basis. Pass exact_alpha when alpha is
// known as a fraction so that only beta is tolerance-detected.
ClosureResult closure_test(const ConeImmersion& im, double tol,
                           std::optional<Rational> exact_alpha = std::nullopt);

// Basis of the full period lattice for alpha = p/q and beta = M/N, given the
// holonomy over one basic period: omega_1 = (2 pi q, 0), omega_2 = (sigma*, m0 T)
// with m0 the least admissible multiple of T.
PeriodLattice lattice_from_holonomy(Rational alpha, Rational beta, const R3& holonomy,
                                    double T);

struct TorusSpec {
  int m = 1;
  int n = 1;
  bool mn_even = false;
  bool degenerate = false;  // m = n = 1: flat Clifford torus
  PeriodLattice lattice;
  EllipticData elliptic;
};

// J = 0 torus T_{m,n} with alpha = m/n.
TorusSpec torus_lattice(int m, int n);

// max over an ns x nt grid on [0, 2 pi) x [0, T) of |u(s + sigma, t + tau) - u(s, t)|.
double period_defect(const ConeImmersion& im, PeriodVector w, int ns = 64, int nt = 64);

struct MinimalityReport {
  bool minimal = true;
  // Smallest value, over all candidate vectors inside the fundamental cell, of
  // max_j |exp(i(lambda_j sigma + m theta_j(T))) - 1|; zero would mean a
  // period missing from the basis.
  double min_defect = 0.0;
  std::size_t candidates = 0;
};

// Checks that no vector (sigma, m T) with 0 <= m < m0 and sigma in [0, 2 pi q),
// other than the origin, satisfies the three unit-modulus conditions.
MinimalityReport check_minimality(const PeriodLattice& lattice, const SymmetryAxis& axis,
                                  double tol = 1e-6);

struct ProximityPair {
  std::size_t a = 0;
  std::size_t b = 0;
  double ambient = 0.0;
  double param = 0.0;
};

struct EmbeddednessReport {
  double eps = 0.0;
  double param_threshold = 0.0;
  std::size_t points = 0;
  std::vector<ProximityPair> pairs;

  // Number of distinct samples that appear in some reported pair.
  std::size_t flagged_points() const;
};

// Smallest R^6 distance between grid-adjacent samples.
double min_neighbor_distance(const SurfaceGrid& g);

// Reports pairs of samples closer than eps in R^6 whose parameter distance in
// R^2 / lattice exceeds param_threshold (default 2 max(hs, ht)). eps <= 0 selects
// half the minimal neighbour distance. The grid must be periodic and cover the
// rectangle [s0, s0 + |omega_1|) x [t0, t0 + covolume / |omega_1|).
EmbeddednessReport embeddedness_scan(const TorusSpec& spec, const SurfaceGrid& grid,
                                     double eps = 0.0, Exec exec = Exec::parallel,
                                     double param_threshold = 0.0);

// theta_2(T) at alpha = 0.
double theta2_of_J(double J);

struct SearchResult {
  double J = 0.0;
  double value = 0.0;     // theta_2(T) / 2 pi at J
  double residual = 0.0;  // |value - target|
  int iterations = 0;
};

// Monotone bisection in J at alpha = 0 for theta_2(T) / 2 pi = target.
// Throws DomainError when target lies outside the attainable range.
SearchResult search_closing_J(Rational target, double tol = 1e-10);

// Range of theta_2(T) / 2 pi over J in [J_lo, J_hi] at alpha = 0.
std::pair<double, double> theta2_range(double J_lo, double J_hi);

// Sampled theta_2(T) over a J grid, evaluated in parallel.
std::vector<double> theta2_sweep(const std::vector<double>& J, Exec exec = Exec::parallel);

// Basic period from the integrated flow: second sign change of gamma' located by
// bracketing and refined with a bracketed root finder.
double basic_period_from_flow(const ConeParameters& p, double tol = 1e-12);

}  // namespace slcone
