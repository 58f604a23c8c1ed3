#pragma once

#include "nlfb/kernel.hpp"

#include <vector>

namespace nlfb {

/// Principal eigenproblem of  phi -> d (int_I J(x-y) phi(y) dy - phi) + theta0 phi
/// on the interval I = (left, right), discretized by trapezoid collocation on n
/// uniform nodes.
struct EigenProblem {
    double d = 1.0;
    double theta0 = 0.0;
    double left = 0.0;
    double right = 1.0;
    int n = 64;
    Kernel kernel = make_kernel(KernelFamily::Tent, 1.0);

    double length() const noexcept { return right - left; }
    double spacing() const noexcept { return length() / static_cast<double>(n - 1); }
};

struct EigenOptions {
    double tolerance = 1e-12;      // sup-norm change of the normalized iterate
    int max_iterations = 100000;
    double residual_tolerance = 1e-8;
};

struct EigenResult {
    double lambda_p = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> eigenfunction;  // positive, max = 1
    double residual = 0.0;              // sup |A phi - lambda phi|
    int iterations = 0;
};

/// Smallest node count that keeps the spacing strictly below max_spacing (and n >= 8).
int nodes_for_spacing(double length, double max_spacing);

/// Perron eigenpair by shifted inverse iteration on the entrywise nonnegative matrix
/// d * w_j J(x_i - x_j) / M_h (mass-normalized trapezoid, see uniform_stencil);
/// the constant part theta0 - d is added back afterwards, so constant shifts of
/// theta0 move lambda_p by exactly the shift.
/// Throws Error(Resolution) when the spacing does not resolve the kernel
/// (spacing >= R/4), ConvergenceError when the iteration cap is hit.
EigenResult lambda_p(const EigenProblem& prob, const EigenOptions& opts = {});

/// Weighted Rayleigh quotient  <phi, A phi>_w / <phi, phi>_w  for the problem's matrix.
double rayleigh_quotient(const EigenProblem& prob, const std::vector<double>& phi);

/// Applies the discrete operator A = d (K_w - I) + theta0 I.
std::vector<double> apply_operator(const EigenProblem& prob, const std::vector<double>& phi);

/// Extends a discrete eigenfunction to arbitrary x by the Nystrom formula
/// phi(x) = d sum_j w_j J(x - x_j) phi_j / (M_h (lambda - theta0 + d)), which
/// reproduces phi at the nodes.
double nystrom_extend(const EigenProblem& prob, const EigenResult& res, double x);

struct CriticalLengthOptions {
    double max_spacing_fraction = 0.01;  // node spacing target as a fraction of R
    double initial_upper = 0.0;          // 0 means 50 R
    double search_limit = 0.0;           // 0 means 1000 R
    double lambda_tolerance = 1e-6;
    EigenOptions eigen{};
};

struct CriticalLength {
    double ell_star = 0.0;
    double lambda_at_ell_star = 0.0;
    double bracket_low = 0.0;
    double bracket_high = 0.0;
    int n = 0;
    int bisections = 0;
};

/// Length where lambda_p(L_(0,l) + a) crosses zero, found by bisection.
/// Throws Error(NoRoot) when a >= d1, Error(SearchRange) when no sign change is
/// found below the search limit.
CriticalLength critical_length(double d1, double a, const Kernel& k, double tol,
                               const CriticalLengthOptions& opts = {});

}  // namespace nlfb
