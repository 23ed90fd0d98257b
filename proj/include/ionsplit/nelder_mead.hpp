#pragma once

#include <functional>
#include <vector>

namespace ionsplit {

struct NelderMeadOptions {
    int max_iters = 2000;
    double x_tol = 1e-10; // max coordinate spread of the simplex
    double f_tol = 1e-12; // max objective spread of the simplex
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0;
    int iterations = 0;
    bool converged = false;
};

// Downhill simplex with the standard reflection/expansion/contraction/shrink
// coefficients (1, 2, 0.5, 0.5) and fminsearch-style initial simplex.
// Objective may return +inf to mark infeasible points.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opt = {});

} // namespace ionsplit
