#include "bj/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bj::optim {

namespace {

double safe_eval(const Objective& f, std::span<const double> x, int& evaluations) {
    ++evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

double gradient_step(double xi) { return 1e-5 * std::max(1.0, std::abs(xi)); }
double hessian_step(double xi) { return 1e-4 * std::max(1.0, std::abs(xi)); }

}  // namespace

double infinity_norm(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

Result nelder_mead(const Objective& f, std::vector<double> start,
                   const NelderMeadOptions& options) {
    const std::size_t dim = start.size();
    Result out;
    if (dim == 0) {
        out.x = std::move(start);
        out.value = safe_eval(f, out.x, out.evaluations);
        out.converged = std::isfinite(out.value);
        return out;
    }
    const int max_evals = options.max_evaluations > 0 ? options.max_evaluations
                                                      : 500 * static_cast<int>(dim);

    std::vector<std::vector<double>> simplex(dim + 1, start);
    std::vector<double> values(dim + 1);
    values[0] = safe_eval(f, simplex[0], out.evaluations);
    for (std::size_t i = 0; i < dim; ++i) {
        const double step = options.initial_step * std::max(1.0, std::abs(start[i]));
        simplex[i + 1][i] += step;
        values[i + 1] = safe_eval(f, simplex[i + 1], out.evaluations);
        if (!std::isfinite(values[i + 1])) {
            simplex[i + 1][i] = start[i] - step;
            values[i + 1] = safe_eval(f, simplex[i + 1], out.evaluations);
        }
    }

    std::vector<std::size_t> order(dim + 1);
    auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst,
                     double coef) {
        std::vector<double> p(dim);
        for (std::size_t j = 0; j < dim; ++j) p[j] = centroid[j] + coef * (worst[j] - centroid[j]);
        return p;
    };

    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
        const double spread = values[worst] - values[best];
        if (std::isfinite(values[worst]) && spread < options.value_spread_tolerance) {
            out.converged = true;
            break;
        }
        if (out.evaluations >= max_evals) break;
        ++out.iterations;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto reflected = point(centroid, simplex[worst], -1.0);
        const double fr = safe_eval(f, reflected, out.evaluations);
        if (fr < values[best]) {
            auto expanded = point(centroid, simplex[worst], -2.0);
            const double fe = safe_eval(f, expanded, out.evaluations);
            if (fe < fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
            continue;
        }
        // Contract towards the better of the worst vertex and its reflection.
        const bool outside = fr < values[worst];
        auto contracted = point(centroid, simplex[worst], outside ? -0.5 : 0.5);
        const double fc = safe_eval(f, contracted, out.evaluations);
        if (fc < std::min(fr, values[worst])) {
            simplex[worst] = std::move(contracted);
            values[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = safe_eval(f, simplex[i], out.evaluations);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const std::size_t best = static_cast<std::size_t>(best_it - values.begin());
    out.x = simplex[best];
    out.value = values[best];
    return out;
}

std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x) {
    std::vector<double> p(x.begin(), x.end());
    std::vector<double> g(x.size());
    int evals = 0;
    const double f0 = safe_eval(f, p, evals);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = gradient_step(x[i]);
        p[i] = x[i] + h;
        const double fp = safe_eval(f, p, evals);
        p[i] = x[i] - h;
        const double fm = safe_eval(f, p, evals);
        p[i] = x[i];
        if (std::isfinite(fp) && std::isfinite(fm)) {
            g[i] = (fp - fm) / (2.0 * h);
        } else if (std::isfinite(fp)) {
            g[i] = (fp - f0) / h;
        } else if (std::isfinite(fm)) {
            g[i] = (f0 - fm) / h;
        } else {
            g[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return g;
}

Eigen::MatrixXd numerical_hessian(const Objective& f, std::span<const double> x) {
    const std::size_t dim = x.size();
    Eigen::MatrixXd H(dim, dim);
    std::vector<double> p(x.begin(), x.end());
    int evals = 0;
    const double f0 = safe_eval(f, p, evals);
    std::vector<double> h(dim);
    for (std::size_t i = 0; i < dim; ++i) h[i] = hessian_step(x[i]);

    for (std::size_t i = 0; i < dim; ++i) {
        p[i] = x[i] + h[i];
        const double fp = safe_eval(f, p, evals);
        p[i] = x[i] - h[i];
        const double fm = safe_eval(f, p, evals);
        p[i] = x[i];
        H(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for (std::size_t j = 0; j < i; ++j) {
            auto at = [&](double si, double sj) {
                p[i] = x[i] + si * h[i];
                p[j] = x[j] + sj * h[j];
                const double v = safe_eval(f, p, evals);
                p[i] = x[i];
                p[j] = x[j];
                return v;
            };
            const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j]);
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return H;
}

Result bfgs(const Objective& f, std::vector<double> start, const BfgsOptions& options) {
    const std::size_t dim = start.size();
    Result out;
    out.x = std::move(start);
    out.value = safe_eval(f, out.x, out.evaluations);
    if (dim == 0 || !std::isfinite(out.value)) {
        out.converged = dim == 0 && std::isfinite(out.value);
        return out;
    }

    using Eigen::VectorXd;
    auto to_vec = [](const std::vector<double>& v) {
        return VectorXd(Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };

    std::vector<double> grad = numerical_gradient(f, out.x);
    out.evaluations += static_cast<int>(2 * dim + 1);
    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(dim, dim);
    bool scaled = false;
    int slow_steps = 0;
    bool restarted = false;  // inverse Hessian already reset during this slow stretch

    while (true) {
        const double gnorm = infinity_norm(grad);
        if (!std::isfinite(gnorm)) break;
        if (gnorm < options.gradient_tolerance) {
            out.converged = true;
            break;
        }
        if (out.iterations >= options.max_iterations) break;
        ++out.iterations;

        const VectorXd g = to_vec(grad);
        VectorXd direction = -Hinv * g;
        if (direction.dot(g) >= 0.0) {
            Hinv.setIdentity();
            direction = -g;
        }

        // Backtracking line search with the Armijo condition.
        double step = 1.0;
        std::vector<double> trial(dim);
        double trial_value = std::numeric_limits<double>::infinity();
        bool accepted = false;
        const double slope = direction.dot(g);
        for (int attempt = 0; attempt < 60; ++attempt) {
            for (std::size_t j = 0; j < dim; ++j) trial[j] = out.x[j] + step * direction(j);
            trial_value = safe_eval(f, trial, out.evaluations);
            if (trial_value <= out.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!Hinv.isIdentity()) {
                Hinv.setIdentity();
                scaled = false;
                continue;
            }
            out.converged = gnorm < options.stall_gradient_tolerance;
            out.stalled = true;
            break;
        }

        const double decrease = out.value - trial_value;
        if (decrease <= options.stall_value_tolerance * (std::fabs(out.value) + 1e-10)) {
            ++slow_steps;
        } else {
            slow_steps = 0;
            restarted = false;
        }
        if (slow_steps >= options.stall_iterations) {
            out.x = trial;
            out.value = trial_value;
            grad = numerical_gradient(f, out.x);
            out.evaluations += static_cast<int>(2 * dim + 1);
            if (!restarted) {
                // One fresh start from steepest descent before giving up.
                Hinv.setIdentity();
                scaled = false;
                slow_steps = 0;
                restarted = true;
                continue;
            }
            out.converged = infinity_norm(grad) < options.stall_gradient_tolerance;
            out.stalled = true;
            break;
        }

        std::vector<double> new_grad = numerical_gradient(f, trial);
        out.evaluations += static_cast<int>(2 * dim + 1);
        const VectorXd s = to_vec(trial) - to_vec(out.x);
        const VectorXd y = to_vec(new_grad) - g;
        out.x = trial;
        out.value = trial_value;
        grad = std::move(new_grad);

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                Hinv = Eigen::MatrixXd::Identity(dim, dim) * (sy / y.squaredNorm());
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
            Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) +
                   rho * s * s.transpose();
        }
    }
    return out;
}

}  // namespace bj::optim
