#pragma once

// Reference computations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

// Front speed of u_t = u_xx + lambda u (1 - u)(mu + u) on a long interval with
// zero flux ends, measured by semi-implicit finite differences (implicit
// diffusion, explicit reaction). The front connects 1 on the left to -mu on the
// right; positive speed means it moves to the right.
inline double front_speed_1d(double lambda, double mu, double h = 0.05, double dt = 0.002)
{
    const double len = 80;
    const int n = static_cast<int>(len / h) + 1;
    std::vector<double> u(n), rhs(n), c(n), d(n);
    for (int i = 0; i < n; ++i)
        u[i] = 0.5 * (1 + mu) * (1 - std::tanh(i * h - len / 4)) - mu;
    const double r = dt / (h * h);
    const double level = 0.5 * (1 - mu);

    auto position = [&] {
        for (int i = 1; i < n; ++i)
            if (u[i] < level)
                return (i - 1 + (u[i - 1] - level) / (u[i - 1] - u[i])) * h;
        return len;
    };
    // (1 + 2r) u_i - r u_{i-1} - r u_{i+1} = rhs_i, mirrored ghost nodes
    auto step = [&] {
        for (int i = 0; i < n; ++i)
            rhs[i] = u[i] + dt * lambda * u[i] * (1 - u[i]) * (mu + u[i]);
        const double b = 1 + 2 * r;
        c[0] = -2 * r / b;
        d[0] = rhs[0] / b;
        for (int i = 1; i < n; ++i) {
            const double lo = (i == n - 1) ? -2 * r : -r;
            const double up = -r;
            const double m = b - lo * c[i - 1];
            c[i] = up / m;
            d[i] = (rhs[i] - lo * d[i - 1]) / m;
        }
        u[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i)
            u[i] = d[i] - c[i] * u[i + 1];
    };

    const int settle = static_cast<int>(10 / dt), measure = static_cast<int>(40 / dt);
    for (int k = 0; k < settle; ++k)
        step();
    const double x1 = position();
    int k = 0;
    for (; k < measure && std::abs(position() - len / 2) < 0.35 * len; ++k)
        step();
    return (position() - x1) / (k * dt);
}

inline double front_speed_formula(double lambda, double mu)
{
    return std::sqrt(lambda / 2) * (1 - mu);
}

} // namespace oracle
