#include "ionsplit/perturbation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "ionsplit/errors.hpp"

namespace ionsplit {

double perturbation_coefficient(double coulomb, double d, int j, double mass) {
    if (j < 3) throw ConfigError("perturbative corrections start at j = 3");
    if (!(d > 0) || !(mass > 0)) throw DomainError("perturbation_coefficient: d, mass > 0");
    const double sign = (j % 2 == 0) ? -1.0 : 1.0;
    return sign * coulomb / std::pow(d, j + 1) * std::pow(2.0 / mass, 0.5 * j);
}

namespace {

double binomial(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct GaussHermite {
    std::vector<double> nodes, weights;
};

// Golub-Welsch nodes for the weight exp(-z^2); degree-47 exactness.
const GaussHermite& gh_rule() {
    static const GaussHermite rule = [] {
        constexpr int m = 24;
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i + 1 < m; ++i)
            J(i, i + 1) = J(i + 1, i) = std::sqrt(0.5 * (i + 1));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        GaussHermite r;
        r.nodes.resize(m);
        r.weights.resize(m);
        const double sqrt_pi = std::sqrt(M_PI);
        for (int i = 0; i < m; ++i) {
            r.nodes[i] = es.eigenvalues()(i);
            const double v0 = es.eigenvectors()(0, i);
            r.weights[i] = sqrt_pi * v0 * v0;
        }
        return r;
    }();
    return rule;
}

double hermite_value(int n, double z) {
    double hm = 1.0, h = 2.0 * z;
    if (n == 0) return hm;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * z * h - 2.0 * k * hm;
        hm = h;
        h = next;
    }
    return h;
}

// Central moment <w^k> of level n in the dimensionless coordinate w.
double central_moment(int n, int k) {
    if (k % 2 == 1) return 0.0;
    const auto& rule = gh_rule();
    const double norm = std::exp(n * std::log(2.0) + std::lgamma(n + 1.0)) * std::sqrt(M_PI);
    double sum = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double z = rule.nodes[i];
        const double h = hermite_value(n, z);
        sum += rule.weights[i] * std::pow(z, k) * h * h;
    }
    return sum / norm;
}

} // namespace

double displaced_moment_n0(int p, double sigma_sq, double x) {
    if (p < 0) throw ConfigError("moment order must be non-negative");
    double sum = 0;
    double dfact = 1; // (2k-1)!!
    for (int k = 0; 2 * k <= p; ++k) {
        if (k > 0) dfact *= 2 * k - 1;
        sum += binomial(p, 2 * k) * dfact * std::pow(sigma_sq, k) * std::pow(x, p - 2 * k);
    }
    return sum;
}

double displaced_moment(int n, int p, double rho, double omega0, double x) {
    if (n < 0 || p < 0) throw ConfigError("level and moment order must be non-negative");
    if (n > 20) throw ConfigError("moment rule covers levels up to n = 20");
    if (!(rho > 0) || !(omega0 > 0)) throw DomainError("displaced_moment: rho, omega0 > 0");
    const double scale = rho / std::sqrt(omega0);
    if (n == 0) return displaced_moment_n0(p, scale * scale * 0.5, x);
    double sum = 0;
    for (int k = 0; k <= p; ++k)
        sum += binomial(p, k) * std::pow(x, p - k) * std::pow(scale, k) * central_moment(n, k);
    return sum;
}

double delta_energy(double coulomb, double d, int j, int n, double rho, double omega0,
                    double x, double mass) {
    return perturbation_coefficient(coulomb, d, j, mass) *
           displaced_moment(n, j, rho, omega0, x);
}

} // namespace ionsplit
