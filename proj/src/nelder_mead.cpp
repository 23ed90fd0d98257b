#include "ionsplit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ionsplit {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (xs[i + 1][i] != 0.0)
            xs[i + 1][i] *= 1.05;
        else
            xs[i + 1][i] = 0.00025;
    }
    for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    std::vector<std::size_t> ord(n + 1);
    auto sort_simplex = [&] {
        std::iota(ord.begin(), ord.end(), 0u);
        std::stable_sort(ord.begin(), ord.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };

    NelderMeadResult res;
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    int it = 0;
    for (; it < opt.max_iters; ++it) {
        sort_simplex();
        const std::size_t best = ord[0], worst = ord[n], second = ord[n - 1];

        double fspread = 0, xspread = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (std::isfinite(fs[i])) fspread = std::max(fspread, std::abs(fs[i] - fs[best]));
            for (std::size_t j = 0; j < n; ++j)
                xspread = std::max(xspread, std::abs(xs[i][j] - xs[best][j]));
        }
        if (xspread <= opt.x_tol && fspread <= opt.f_tol) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += xs[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        for (std::size_t j = 0; j < n; ++j) xr[j] = 2.0 * centroid[j] - xs[worst][j];
        const double fr = f(xr);

        if (fr < fs[best]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (xr[j] - centroid[j]);
            const double fe = f(xe);
            if (fe < fr) { xs[worst] = xe; fs[worst] = fe; }
            else { xs[worst] = xr; fs[worst] = fr; }
        } else if (fr < fs[second]) {
            xs[worst] = xr; fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            const auto& base = outside ? xr : xs[worst];
            for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
            const double fc = f(xc);
            if (fc < (outside ? fr : fs[worst])) {
                xs[worst] = xc; fs[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        xs[i][j] = xs[best][j] + 0.5 * (xs[i][j] - xs[best][j]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    sort_simplex();
    res.x = xs[ord[0]];
    res.f = fs[ord[0]];
    res.iterations = it;
    return res;
}

} // namespace ionsplit
