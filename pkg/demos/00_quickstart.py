"""Build a problem in code, solve it, and verify the solution quality.

The equation is (phi(u'))' = f(t, u, u') where phi maps the line onto a
bounded interval (-a, a), so every admissible slope is confined a priori.
Here: the curvature flux phi(s) = s/sqrt(1+s^2) and a forcing that pushes
the slope toward 1/4.
"""

import numpy as np

from tribvp import (BoundaryCondition, Grid, ProblemSpec, RightHandSide,
                    SolveOptions, as_callable, curvature, parse, solve)

# f written in the little expression language (variables t, u, v; v = u')
f_tree = parse("exp(4*v) - e")
rhs = RightHandSide(fn=as_callable(f_tree))

spec = ProblemSpec(
    grid=Grid(T=0.01, n=400),
    phi=curvature(),
    rhs=rhs,
    bc=BoundaryCondition.P1,     # u(0) = u'(0) = u'(T)
)

report = solve(spec, SolveOptions(tol=1e-10))
u = report.solution

print(f"backend         : {report.backend}")
print(f"iterations      : {report.iterations}")
print(f"final residual  : {report.residuals.c1:.3e}")
print(f"u(0), u(T)      : {u.values[0]:.8f}, {u.values[-1]:.8f}")
print(f"u'(0), u'(T)    : {u.derivs[0]:.8f}, {u.derivs[-1]:.8f}")

# this forcing vanishes exactly when u' = 1/4, so the solution is affine
exact = (1.0 + spec.grid.nodes) / 4.0
print(f"sup error vs (1+t)/4 : {np.abs(u.values - exact).max():.3e}")
