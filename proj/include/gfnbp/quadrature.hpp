#pragma once

#include <functional>
#include <vector>

namespace gfnbp::quad {

struct QuadOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-10;
    int max_panels = 20000;
};

// Adaptive bisection with nested 7/15-point Gauss-Legendre rules per panel
// (Gauss-Kronrod-style error control: |G15 - G7| drives refinement).
// `splits` seeds interior panel boundaries, e.g. at a known integrand mode.
// Throws QuadratureFail when the panel budget is exhausted above tolerance.
double adaptive(const std::function<double(double)>& f, double a, double b,
                QuadOptions opt = {}, const std::vector<double>& splits = {});

}  // namespace gfnbp::quad
