"""One commuting pair realizing all four joint Wold types at once.

The base has four nodes; the S-family loops on {a, b}, the T-family
loops on {a, c}.  Each node then lands in its own corner of the
four-fold decomposition:

    a: S-unitary and T-unitary      b: S-unitary, T-shift
    c: S-shift,   T-unitary         d: S-shift and T-shift

Run:  python3 demos/four_corner_pair.py
"""

from rowiso.pair import PairElem, PairPresentation, check_doubly_commute, check_theta_commute
from rowiso.slocinski import (check_hypotheses, s_membership, slocinski,
                              t_membership, verify_theorem_implications)
from rowiso.words import Theta

PAIR = PairPresentation(
    Theta.identity(1, 1),
    ("a", "b", "c", "d"),
    {("a", 1): "a", ("b", 1): "b"},
    {("a", 1): "a", ("c", 1): "c"},
)


def main():
    print("commuting:", check_theta_commute(PAIR).ok)
    print("doubly commuting:", check_doubly_commute(PAIR).ok)
    print()

    for node in PAIR.base:
        x = PairElem((), (), node)
        print(f"  e_{node}:  S says {s_membership(PAIR, x).value:8s}"
              f"  T says {t_membership(PAIR, x).value}")
    print()

    res = slocinski(PAIR)
    print("four-fold decomposition exists:", res.exists)
    for name in ("H_uu", "H_us", "H_su", "H_ss"):
        part = getattr(res, name)
        print(f"  {name}: seeds {[repr(s) for s in part.seeds]}")
    print()

    hyp = check_hypotheses(PAIR)
    print("hypothesis flags:", hyp)
    report = verify_theorem_implications(PAIR)
    print("implication report:", report)
    for row in report.rows:
        mark = "holds" if row.ok else "VIOLATED"
        print(f"  {row.name}: {mark}")


if __name__ == "__main__":
    main()
