"""Expected nonzero components (up to symmetry) for the catalog metrics.

Indices are 1-based with coordinates (u, r, x, y); derivative slots come last.
Values are written in the expression syntax of the engine.
"""

PRM_RIEMANN = {
    (1, 3, 1, 3): "-w_xx*x/2",
    (1, 3, 1, 4): "-w_xy*x/2",
    (1, 4, 1, 4): "-w_yy*x/2",
}

PRM_RICCI = {(1, 1): "-(1/2)*p^2*(w_xx + w_yy)*x"}

PRM_CONFORMAL = {
    (1, 3, 1, 3): "-(1/4)*(w_xx - w_yy)*x",
    (1, 4, 1, 4): "(1/4)*(w_xx - w_yy)*x",
    (1, 3, 1, 4): "-w_xy*x/2",
}

PRM_PROJECTIVE = {
    (1, 2, 1, 1): "-(1/6)*p^2*(w_xx + w_yy)*x",
    (1, 3, 1, 1): "(1/3)*p^2*r*(w_xx + w_yy)",
    (1, 3, 1, 3): "-(1/6)*(2*w_xx - w_yy)*x",
    (1, 3, 1, 4): "-w_xy*x/2",
    (1, 3, 4, 1): "w_xy*x/2",
    (1, 4, 1, 3): "-w_xy*x/2",
    (1, 4, 3, 1): "w_xy*x/2",
    (1, 3, 3, 1): "w_xx*x/2",
    (1, 4, 1, 4): "(1/6)*(w_xx - 2*w_yy)*x",
    (1, 4, 4, 1): "w_yy*x/2",
}

PRM_NABLA_RIEMANN = {
    (1, 2, 1, 3, 1): "p^2*w_xx/2",
    (1, 2, 1, 4, 1): "p^2*w_xy/2",
    (1, 3, 1, 3, 1): "-(x^2*w_uxx + 2*p^2*r*w_xx)/(2*x)",
    (1, 4, 1, 4, 1): "(2*p^2*r*w_yy - x^2*w_uyy)/(2*x)",
    (1, 3, 1, 3, 3): "(1/2)*(w_xx - w_xxx*x)",
    (1, 3, 1, 3, 4): "-w_xxy*x/2",
    (1, 3, 1, 4, 1): "-w_uxy*x/2",
    (1, 4, 1, 4, 3): "(1/2)*(w_yy - w_xyy*x)",
    (1, 3, 1, 4, 3): "(1/2)*(w_xy - w_xxy*x)",
    (1, 3, 1, 4, 4): "-w_xyy*x/2",
    (1, 3, 3, 4, 1): "w_xy/2",
    (1, 4, 1, 4, 4): "-w_yyy*x/2",
    (1, 4, 3, 4, 1): "w_yy/2",
}

PRM_NABLA_RICCI = {
    (1, 1, 1): "p^2*(-x^2*w_uyy - x^2*w_uxx + 2*p^2*r*w_xx + 2*p^2*r*w_yy)/(2*x)",
    (1, 1, 3): "(1/2)*p^2*(-w_xxx*x - w_xyy*x + w_xx + w_yy)",
    (1, 1, 4): "-(1/2)*p^2*(w_xxy + w_yyy)*x",
    (1, 3, 1): "(1/2)*p^2*(w_xx + w_yy)",
}

PRM_NABLA_CONFORMAL = {
    (1, 2, 1, 3, 1): "(1/4)*p^2*(w_xx - w_yy)",
    (1, 2, 1, 4, 1): "p^2*w_xy/2",
    (1, 3, 1, 3, 1): "-(-x^2*w_uyy + x^2*w_uxx + 2*p^2*r*w_xx - 2*p^2*r*w_yy)/(4*x)",
    (1, 3, 1, 3, 3): "(1/4)*(-w_xxx*x + w_xyy*x + w_xx - w_yy)",
    (1, 4, 1, 4, 3): "-(1/4)*(-w_xxx*x + w_xyy*x + w_xx - w_yy)",
    (1, 3, 1, 3, 4): "-(1/4)*(w_xxy - w_yyy)*x",
    (1, 4, 1, 4, 4): "(1/4)*(w_xxy - w_yyy)*x",
    (1, 3, 1, 4, 1): "-w_uxy*x/2",
    (1, 3, 1, 4, 3): "(1/2)*(w_xy - w_xxy*x)",
    (1, 3, 1, 4, 4): "-w_xyy*x/2",
    (1, 3, 3, 4, 1): "w_xy/2",
    (1, 4, 1, 4, 1): "-(x^2*w_uyy - x^2*w_uxx + 2*p^2*r*w_xx - 2*p^2*r*w_yy)/(4*x)",
    (1, 4, 3, 4, 1): "-(1/4)*(w_xx - w_yy)",
}

PRM_STRESS = {(1, 1): "-c^4*(p^2*w_xx*x + p^2*w_yy*x)/(16*pi*G*x^2)"}

PRM_NABLA_STRESS = {
    (1, 1, 1): "c^4*p^2*(-x^2*w_uyy - x^2*w_uxx + 2*p^2*r*w_xx + 2*p^2*r*w_yy)/(16*pi*G*x)",
    (1, 3, 1): "c^4*p^2*(w_xx + w_yy)/(16*pi*G)",
    (1, 1, 3): "c^4*p^2*(-w_xxx*x - w_xyy*x + w_xx + w_yy)/(16*pi*G)",
    (1, 1, 4): "-c^4*p^2*(w_xxy + w_yyy)*x/(16*pi*G)",
}

# cyclic sums and Codazzi differences of nabla T: (a, b, c) -> value of
# T_{ab,c} + T_{bc,a} + T_{ca,b}, and (a, b, c) -> T_{ab,c} - T_{ac,b}
PRM_STRESS_CYCLIC = {
    (1, 1, 1): "3*c^4*p^2*(-x^2*w_uyy - x^2*w_uxx + 2*p^2*r*w_xx + 2*p^2*r*w_yy)/(16*pi*G*x)",
    (1, 1, 3): "c^4*p^2*(-w_xxx*x - w_xyy*x + 3*w_xx + 3*w_yy)/(16*pi*G)",
    (1, 1, 4): "-c^4*p^2*(w_xxy + w_yyy)*x/(16*pi*G)",
}
PRM_STRESS_CODAZZI = {
    (1, 3, 1): "c^4*p^2*(w_xxx + w_xyy)*x/(16*pi*G)",
    (1, 4, 1): "c^4*p^2*(w_xxy + w_yyy)*x/(16*pi*G)",
}

GPRM_RIEMANN = {
    (1, 2, 1, 2): "-(4*a*f - b^2)/(4*f*x^2)",
    (1, 2, 1, 3): "r*(8*a*f + b^3)/(4*f*x^3)",
    (1, 3, 3, 4): "-b^2*f_y*r/(4*f*x^2)",
    (1, 3, 1, 3): (
        "-(a*b^2*f*r^2 + 2*a*b*f_x*r^2*x + 2*a*f_x*r^2*x + 12*a*f*r^2 - b^4*r^2 + b^2*f*w*x^3"
        " + 2*b*f*w_x*x^4 + 2*b*f*w*x^3 - f_x*w_x*x^5 + f_y*w_y*x^5 + 2*f*w_xx*x^5"
        " - f_x*w*x^4 + 4*f*w_x*x^4)/(4*f*x^4)"
    ),
    (1, 3, 1, 4): (
        "-(2*a*b*f_y*r^2 + 2*a*f_y*r^2 + b*f*w_y*x^3 - f_y*w_x*x^4 - f_x*w_y*x^4"
        " + 2*f*w_xy*x^4 - f_y*w*x^3 + 2*f*w_y*x^3)/(4*f*x^3)"
    ),
    (1, 3, 2, 3): "-b*(b*f + f_x*x + 2*f)/(4*f*x^2)",
    (1, 3, 2, 4): "-b*f_y/(4*f*x)",
    (1, 4, 2, 3): "-b*f_y/(4*f*x)",
    (1, 4, 1, 4): (
        "-(-2*a*b*f_x*r^2 - 2*a*f_x*r^2 + f_x*w_x*x^4 - f_y*w_y*x^4 + 2*f*w_yy*x^4"
        " + f_x*w*x^3)/(4*f*x^3)"
    ),
    (1, 4, 2, 4): "b*f_x/(4*f*x)",
    (1, 4, 3, 4): "b^2*f_x*r/(4*f*x^2)",
    (3, 4, 3, 4): "-(-f_x^2 - f_y^2 + f*f_xx + f*f_yy)/(2*f)",
}

GPRM_RICCI = {
    (1, 1): (
        "(2*a^2*f*r^2 - 3*a*b^2*r^2 - 8*a*b*r^2 + 2*a*f*w*x^3 - 6*a*r^2"
        " - b*(b*w + w_x*x + w)*x^3 - (w_xx + w_yy)*x^5 - 2*w_x*x^4)/(-2*f*x^4)"
    ),
    (1, 2): "-(2*a*f - b^2 - b)/(2*f*x^2)",
    (4, 4): "-(b*f*f_x + f_x^2*x + f_y^2*x - f*f_xx*x - f*f_yy*x)/(2*f^2*x)",
    (3, 4): "b*f_y/(2*f*x)",
    (1, 3): "r*(4*a*f + b^3 + b^2)/(2*f*x^3)",
    (3, 3): "(b^2*f^2 + 2*b*f^2 + b*f_x*f*x + f_xx*f*x^2 + f_yy*f*x^2 - f_x^2*x^2 - f_y^2*x^2)/(2*f^2*x^2)",
}

GPRM_SCALAR = (
    "(-4*a*f^3 + b*(3*b + 4)*f^2 + 2*(f_xx + f_yy)*f*x^2 - 2*(f_x^2 + f_y^2)*x^2)/(2*f^3*x^2)"
)

GPRM_STRESS = {
    (1, 1): (
        "c^4/(32*pi*f^3*G*x^4)*(3*a*b^2*f^2*r^2 + 12*a*b*f^2*r^2 + 12*a*f^2*r^2"
        " + 2*a*f_x^2*r^2*x^2 + 2*a*f_y^2*r^2*x^2 - 2*a*f*f_xx*r^2*x^2 - 2*a*f*f_yy*r^2*x^2"
        " - b^2*f^2*w*x^3 + 2*b*f^2*w_x*x^4 - 2*b*f^2*w*x^3 + 2*f^2*w_xx*x^5 + 2*f^2*w_yy*x^5"
        " + 4*f^2*w_x*x^4 + 2*f_x^2*w*x^5 + 2*f_y^2*w*x^5 - 2*f*f_xx*w*x^5 - 2*f*f_yy*w*x^5)"
    ),
    (1, 2): (
        "-c^4*(b^2*f^2 + 2*b*f^2 + 2*f_xx*f*x^2 + 2*f_yy*f*x^2 - 2*f_x^2*x^2 - 2*f_y^2*x^2)"
        "/(32*pi*f^3*G*x^2)"
    ),
    (1, 3): (
        "c^4*r*(4*a*b*f^3 + 8*a*f^3 + b^3*(-f^2) - 2*b^2*f^2 + 2*b*f_x^2*x^2 + 2*b*f_y^2*x^2"
        " - 2*b*f*f_xx*x^2 - 2*b*f*f_yy*x^2)/(32*pi*f^3*G*x^3)"
    ),
    (3, 3): "c^4*(4*a*f^2 + b^2*(-f) + 2*b*f_x*x)/(32*pi*f*G*x^2)",
    (3, 4): "b*c^4*f_y/(16*pi*f*G*x)",
    (4, 4): "c^4*(4*a*f^2 - 3*b^2*f - 2*b*f_x*x - 4*b*f)/(32*pi*f*G*x^2)",
}

GPRM_QUASI_ALPHA = "(b + b^2 - 2*a*f)/(2*f*x^2)"

# S^4 = l0*g + l1*S + l2*S^2 + l3*S^3
GPRM_EIN4 = {
    "l0": (
        "(-2*a*f + b^2 + b)^2/(16*f^8*x^7)*(b*(b + 2)*f^3*((f_xx + f_yy)*x - b*f_x)"
        " + f^2*x*((f_xx + f_yy)^2*x^2 - 2*b*(b + 1)*(f_x^2 + f_y^2))"
        " - 2*(f_x^2 + f_y^2)*(f_xx + f_yy)*f*x^3 + (f_x^2 + f_y^2)^2*x^3)"
    ),
    "l1": (
        "-(-2*a*f + b^2 + b)/(8*f^7*x^6)*(f^4*(b^2*(b + 1)*(b + 2) - 4*a*(f_xx + f_yy)*x^2)"
        " + 2*f^3*x*(x*(2*a*f_y^2 + b*(2*b + 3)*(f_xx + f_yy)) + 2*a*f_x^2*x - (b + 2)*b^2*f_x)"
        " - 2*a*b*(b + 2)*f^5 + 2*f^2*x^2*((f_xx + f_yy)^2*x^2 - 3*b*(b + 1)*(f_x^2 + f_y^2))"
        " - 4*(f_x^2 + f_y^2)*(f_xx + f_yy)*f*x^4 + 2*(f_x^2 + f_y^2)^2*x^4)"
    ),
    "l2": (
        "1/(4*f^6*x^4)*(4*a^2*f^6 + f^4*(b^2*(b + 1)*(3*b + 5) - 8*a*(f_xx + f_yy)*x^2)"
        " + f^3*x*(x*(8*a*f_y^2 + b*(5*b + 6)*(f_xx + f_yy)) + 8*a*f_x^2*x - (b + 2)*b^2*f_x)"
        " - 4*a*b*(2*b + 3)*f^5 + f^2*x^2*((f_xx + f_yy)^2*x^2 - 6*b*(b + 1)*(f_x^2 + f_y^2))"
        " - 2*(f_x^2 + f_y^2)*(f_xx + f_yy)*f*x^4 + (f_x^2 + f_y^2)^2*x^4)"
    ),
    "l3": "1/(2*f^3*x^2)*(f^2*(4*a*f - b*(3*b + 4)) + 2*(f_x^2 + f_y^2 - f*(f_xx + f_yy))*x^2)",
}

# perfect fluid configuration: T = alpha*g + beta*e4⊗e4
PERFECT_FLUID_ALPHA = "-c^4*exp(-x^3/3)*(3*x^3 + 1)/(24*pi*G*x^(4/3))"
PERFECT_FLUID_BETA = "c^4*(3*x^3 - 2)/(12*pi*G*x^2)"
