"""Check the listed sufficient conditions for gprm to be 2-quasi-Einstein.

Each case imposes its conditions as substitutions (differential conditions are
solved for their highest f or w derivative) and reports the minimal rank of
S - alpha*g.  Cases stated with ``b - 2 = 0`` are run both as written and
with b = -2, the value the worked example uses.

    python3 scripts/quasi_einstein_cases.py
"""
from dataclasses import dataclass, field

from curvkit.catalog import builtin_document
from curvkit.classify import Classifier


@dataclass
class Case:
    label: str
    sets: list
    f_of_x: bool = False  # f_4 = 0: f depends on x alone
    extra_functions: dict = field(default_factory=dict)


# F(x) stands in for f when f_4 = 0
CASES = [
    Case("(i) b = 0, 2af^3 = (f_x^2 + f_y^2 - f(f_xx + f_yy))x^2",
         [("b", "0"), ("f_yy", "(f_x^2 + f_y^2 - 2*a*f^3/x^2)/f - f_xx")]),
    Case("(ii) f_y = 0, 2aF^3 + xF(xF_xx - bF_x) - b(b+1)F^2 - x^2F_x^2 = 0",
         [("F_xx", "(x^2*F_x^2 + b*(b + 1)*F^2 + x*b*F*F_x - 2*a*F^3)/(x^2*F)")], f_of_x=True),
    Case("(iii) a = b = 0, f(f_xx + f_yy) = f_x^2 - f_y^2",
         [("a", "0"), ("b", "0"), ("f_yy", "(f_x^2 - f_y^2)/f - f_xx")]),
    Case("(iv) f_y = a = 0, bF_x + bF/x + xF_xx - xF_x^2/F = 0",
         [("a", "0"), ("F_xx", "(x*F_x^2/F - b*F_x - b*F/x)/x")], f_of_x=True),
    Case("(v) as written: f_y = 0, b = 2, 2aF^2/x + xF_xx - 2F_x - xF_x^2/F - 2F/x = 0",
         [("b", "2"), ("F_xx", "(2*F_x + x*F_x^2/F + 2*F/x - 2*a*F^2/x)/x")], f_of_x=True),
    Case("(v) read with b = -2",
         [("b", "-2"), ("F_xx", "(2*F_x + x*F_x^2/F + 2*F/x - 2*a*F^2/x)/x")], f_of_x=True),
    Case("(vi) a = 0, (b+2)w_x + x(w_xx + w_yy) = 0",
         [("a", "0"), ("w_yy", "-(b + 2)*w_x/x - w_xx")]),
    Case("(vii) as written: b = 2, w_xx + w_yy = 0", [("b", "2"), ("w_yy", "-w_xx")]),
    Case("(vii) read with b = -2", [("b", "-2"), ("w_yy", "-w_xx")]),
]


def run_case(case: Case):
    doc = builtin_document("gprm")
    sets = list(case.sets)
    if case.f_of_x:
        doc.functions["F"] = ["x"]
        doc.nonzero_names.append("F")
        sets.insert(0, ("f", "F"))
    doc.assumptions += [("set", lhs, rhs) for lhs, rhs in sets]
    metric, assumptions = doc.build()
    return Classifier(metric, assumptions).quasi_einstein_level()


def main():
    baseline = Classifier(*builtin_document("gprm").build()).quasi_einstein_level()
    print(f"no conditions: rank(S - alpha g) = {baseline.witness['level']}")
    for case in CASES:
        v = run_case(case)
        level = v.witness["level"]
        verdict = "confirmed" if level <= 2 else "NOT confirmed"
        print(f"{case.label}: rank {level}, {verdict}")


if __name__ == "__main__":
    main()
