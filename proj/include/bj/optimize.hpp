#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace bj::optim {

/// Objective to minimise. Non-finite return values mark infeasible points.
using Objective = std::function<double(std::span<const double>)>;

struct Result {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    /// The line search found no acceptable step before the gradient test passed.
    bool stalled = false;
};

struct NelderMeadOptions {
    double value_spread_tolerance = 1e-10;
    int max_evaluations = 0;  // 0 means 500 * dimension
    double initial_step = 0.1;  // relative to max(1, |x_i|)
};

/// Derivative-free simplex search (reflection 1, expansion 2, contraction and
/// shrink 1/2).
Result nelder_mead(const Objective& f, std::vector<double> start,
                   const NelderMeadOptions& options = {});

struct BfgsOptions {
    double gradient_tolerance = 1e-6;  // infinity norm
    int max_iterations = 200;
    /// When the line search can make no further progress, the run still counts
    /// as converged if the gradient is below this.
    double stall_gradient_tolerance = 1e-3;
    /// Consecutive iterations whose relative decrease stays below
    /// `stall_value_tolerance` also count as a stalled line search.
    double stall_value_tolerance = 1e-12;
    int stall_iterations = 5;
};

/// Quasi-Newton minimisation with central-difference gradients and a
/// backtracking line search that also backs off infeasible points.
Result bfgs(const Objective& f, std::vector<double> start, const BfgsOptions& options = {});

std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x);
Eigen::MatrixXd numerical_hessian(const Objective& f, std::span<const double> x);

double infinity_norm(std::span<const double> v);

}  // namespace bj::optim
